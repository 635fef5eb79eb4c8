//! Exact linear algebra over `Z` and `Q`: sparse matrices, Smith normal form,
//! chain complexes with Gaussian elimination, and the group ring of `Z/n`.

pub mod abgroup;
pub mod complex;
pub mod group_ring;
pub mod matrix;
pub mod qpoly;
pub mod rref;
pub mod snf;

pub use abgroup::{AbGroup, GradedGroups};
pub use complex::{Complex, ReduceOpts, SignedPerm};
pub use group_ring::GroupRingElt;
pub use matrix::SparseMat;
pub use snf::{smith_normal_form, SmithForm};
