//! Classical and equivariant Khovanov homology of periodic link diagrams.
//!
//! All arithmetic is exact. Integer data uses `dashu` big integers and
//! rationals; nothing here touches floating point.

pub mod action;
pub mod corpus;
pub mod diagram;
pub mod equivariant;
pub mod error;
pub mod homalg;
pub mod khovanov;
pub mod num;
pub mod oracles;
pub mod poly;
pub mod spectral;

pub use error::{Error, Result};
