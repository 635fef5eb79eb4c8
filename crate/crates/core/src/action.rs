//! The cyclic action on the Khovanov complex and its module structure.

use crate::diagram::{KauffmanState, PeriodicDiagram};
use crate::error::{Error, Result};
use crate::khovanov::{build_complex, quantum_degree, rotation_sign, BuildOpts, KhComplex};
use crate::num::int;
use crate::poly::LaurentPoly;
use std::collections::BTreeMap;

/// Build the complex together with the rotation action.
pub fn action(d: &PeriodicDiagram) -> Result<KhComplex> {
    build_complex(d, BuildOpts { action: true, filtration: None })
}

/// `psi^n = id` and `psi d = d psi` in every quantum degree.
pub fn verify_module_structure(kc: &KhComplex) -> Result<()> {
    for (j, b) in &kc.blocks {
        if !b.action_has_order_dividing(kc.n) {
            return Err(Error::Invariant(format!("psi^{} is not the identity in q-degree {j}", kc.n)));
        }
        if !b.action_commutes() {
            return Err(Error::Invariant(format!("psi does not commute with d in q-degree {j}")));
        }
    }
    Ok(())
}

/// Exponent `s(n, r, d) = (n-1) n_-(D) / d + r (d-1) / d` of the sign by which
/// the generator of the stabilizer acts on a state of weight `r` fixed by the
/// subgroup of order `d`.
pub fn sign_exponent(n: usize, r: usize, d: usize, n_minus: usize) -> Result<usize> {
    if d == 0 || n % d != 0 || r % d != 0 {
        return Err(Error::Argument(format!("{d} does not divide gcd({n}, {r})")));
    }
    if ((n - 1) * n_minus) % d != 0 {
        return Err(Error::Argument(format!("(n-1) n_- = {} is not divisible by {d}", (n - 1) * n_minus)));
    }
    Ok((n - 1) * n_minus / d + r * (d - 1) / d)
}

/// Sign by which `psi^{n/d}` acts on the enhanced states over `s`, before the
/// permutation of circle labels. `s` must be fixed by the subgroup of order `d`.
pub fn fixed_state_sign(dg: &PeriodicDiagram, s: KauffmanState, d: usize) -> Result<i8> {
    let n = dg.n;
    let r = s.count_ones() as usize;
    if d == 0 || n % d != 0 || r % d != 0 {
        return Err(Error::Argument(format!("{d} does not divide gcd({n}, {r})")));
    }
    let mut t = s;
    let mut sign = 1i8;
    for _ in 0..n / d {
        sign *= rotation_sign(dg, t);
        t = dg.rotate_state(t);
    }
    if t != s {
        return Err(Error::Argument(format!("state {s:#b} is not fixed by the subgroup of order {d}")));
    }
    Ok(sign)
}

/// `Ind` of a module with trivial action twisted by `Z_-` when `twist`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleSummand {
    /// Order of the stabilizer of the generators.
    pub stabilizer: usize,
    pub twist: bool,
    pub qdim: LaurentPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateOrbit {
    pub rep: KauffmanState,
    pub isotropy: usize,
    /// Parity of `s(n, r, d)`.
    pub twist: bool,
    pub circles: usize,
}

#[derive(Clone, Debug)]
pub struct ChainModuleDecomposition {
    pub r: usize,
    pub state_orbits: Vec<StateOrbit>,
    pub summands: Vec<ModuleSummand>,
}

/// Decompose the chain group of states with `r` one-smoothings into induced
/// modules, one summand per (stabilizer, twist) with its graded rank.
pub fn chain_module_decomposition(dg: &PeriodicDiagram, r: usize) -> Result<ChainModuleDecomposition> {
    let n = dg.n;
    let base = dg.base_components();
    let mut state_orbits = Vec::new();
    let mut summands: BTreeMap<(usize, bool), LaurentPoly> = BTreeMap::new();
    for (s, iso, _) in dg.orbit_decomposition(r) {
        let e = sign_exponent(n, r, iso, dg.n_minus())?;
        let twist = e % 2 == 1;
        if n % 2 == 1 && twist {
            return Err(Error::Invariant("odd period produced a sign twist".into()));
        }
        let measured = fixed_state_sign(dg, s, iso)?;
        if (measured == -1) != twist {
            return Err(Error::Invariant(format!("state {s:#b}: sign formula disagrees with the action")));
        }
        let (c, circle) = dg.circles(s, &base);
        state_orbits.push(StateOrbit { rep: s, isotropy: iso, twist, circles: c });
        // psi^{n/iso} permutes the circles of s
        let step = n / iso;
        let mut t = s;
        for _ in 0..step {
            t = dg.rotate_state(t);
        }
        debug_assert_eq!(t, s);
        let mut perm = vec![0usize; c];
        let mut rep = vec![usize::MAX; c];
        for (a, &ci) in circle.iter().enumerate() {
            if rep[ci as usize] == usize::MAX {
                rep[ci as usize] = a;
            }
        }
        for ci in 0..c {
            let mut a = rep[ci];
            for _ in 0..step {
                a = dg.rotate_arc(a);
            }
            perm[ci] = circle[a] as usize;
        }
        // orbits of labels under the circle permutation
        let mut seen = vec![false; 1 << c];
        for l in 0..(1u64 << c) {
            if seen[l as usize] {
                continue;
            }
            let mut size = 0;
            let mut x = l;
            loop {
                seen[x as usize] = true;
                size += 1;
                let mut y = 0u64;
                for ci in 0..c {
                    if x >> ci & 1 == 1 {
                        y |= 1 << perm[ci];
                    }
                }
                x = y;
                if x == l {
                    break;
                }
            }
            // generator stabilizer inside Z/n has order iso / size
            let stab = iso / size;
            let gen_twist = twist && (size % 2 == 1);
            let j = quantum_degree(dg, s, c, l);
            summands.entry((stab, gen_twist)).or_default().add_term(j, int(1));
        }
    }
    Ok(ChainModuleDecomposition {
        r,
        state_orbits,
        summands: summands.into_iter().map(|((stabilizer, twist), qdim)| ModuleSummand { stabilizer, twist, qdim }).collect(),
    })
}

impl ChainModuleDecomposition {
    /// Total graded rank `sum (n / stabilizer) qdim`.
    pub fn total_qdim(&self, n: usize) -> LaurentPoly {
        self.summands
            .iter()
            .fold(LaurentPoly::zero(), |acc, m| acc.add(&m.qdim.scale(&int((n / m.stabilizer) as i64))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn sign_exponent_instances() {
        // n=2, d=2, r=2, n_- = 0
        assert_eq!(sign_exponent(2, 2, 2, 0).unwrap() % 2, 1);
        // n=2, d=2, r=0, n_-(D) = 2
        assert_eq!(sign_exponent(2, 0, 2, 2).unwrap() % 2, 1);
        assert!(sign_exponent(2, 1, 2, 0).is_err());
    }

    #[test]
    fn action_is_a_module_structure() {
        for d in [corpus::torus_2periodic(3), corpus::borromean(), corpus::kinked_unknot(), corpus::trivial_link(4, 1, 1)] {
            verify_module_structure(&action(&d).unwrap()).unwrap();
        }
    }

    #[test]
    fn trivial_link_t3_decomposition() {
        let d = corpus::trivial_link(3, 1, 0);
        let dec = chain_module_decomposition(&d, 0).unwrap();
        let get = |e: usize| dec.summands.iter().find(|m| m.stabilizer == e).unwrap().qdim.clone();
        assert_eq!(get(3), LaurentPoly::from_pairs(&[(1, 3), (1, -3)]));
        assert_eq!(get(1), LaurentPoly::from_pairs(&[(1, 1), (1, -1)]));
        assert_eq!(dec.total_qdim(3), LaurentPoly::unknot().pow(3));
    }

    #[test]
    fn hopf_top_degree_is_twisted() {
        let d = corpus::torus_2periodic(2);
        let dec = chain_module_decomposition(&d, 2).unwrap();
        assert_eq!(dec.state_orbits.len(), 1);
        assert!(dec.state_orbits[0].twist);
    }
}
