use crate::num::{gcd, int, lcm, AbsVal, Int};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// Finitely generated abelian group `Z^free + Z/t_1 + ... + Z/t_k` with
/// `1 < t_1 | t_2 | ... | t_k`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AbGroup {
    pub free: usize,
    pub torsion: Vec<Int>,
}

impl AbGroup {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(r: usize) -> Self {
        Self { free: r, torsion: vec![] }
    }

    /// From any list of cyclic orders (0 meaning `Z`); normalized to invariant factors.
    pub fn from_cyclic(free: usize, orders: impl IntoIterator<Item = Int>) -> Self {
        let mut free = free;
        let mut ts: Vec<Int> = Vec::new();
        for o in orders {
            let o = o.abs_val();
            if o.is_zero() {
                free += 1;
            } else if o != int(1) {
                ts.push(o);
            }
        }
        for i in 0..ts.len() {
            for j in i + 1..ts.len() {
                let (g, l) = (gcd(&ts[i], &ts[j]), lcm(&ts[i], &ts[j]));
                ts[i] = g;
                ts[j] = l;
            }
        }
        ts.retain(|t| *t != int(1));
        Self { free, torsion: ts }
    }

    pub fn is_zero(&self) -> bool {
        self.free == 0 && self.torsion.is_empty()
    }

    pub fn direct_sum(&self, o: &Self) -> Self {
        Self::from_cyclic(self.free + o.free, self.torsion.iter().chain(o.torsion.iter()).cloned())
    }

    pub fn power(&self, k: usize) -> Self {
        let mut r = Self::zero();
        for _ in 0..k {
            r = r.direct_sum(self);
        }
        r
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> Int {
        self.torsion.iter().fold(int(1), |a, t| a * t)
    }

    /// Exponent of the torsion subgroup (1 when torsion free).
    pub fn exponent(&self) -> Int {
        self.torsion.last().cloned().unwrap_or_else(|| int(1))
    }

    /// Drop the `p`-primary parts of the torsion for every `p` in `primes`.
    pub fn without_primes(&self, primes: &[u64]) -> Self {
        let ts = self.torsion.iter().map(|t| {
            let mut t = t.clone();
            for &p in primes {
                let p = int(p as i64);
                while (&t % &p).is_zero() {
                    t = &t / &p;
                }
            }
            t
        });
        Self::from_cyclic(self.free, ts.collect::<Vec<_>>())
    }

    /// Cyclic orders as machine integers, for display and JSON.
    pub fn torsion_u64(&self) -> Vec<u64> {
        self.torsion.iter().map(|t| u64::try_from(t.clone()).unwrap_or(u64::MAX)).collect()
    }
}

impl fmt::Display for AbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = vec![];
        match self.free {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Bigraded family of groups indexed by `(homological, quantum)` degree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedGroups {
    pub groups: BTreeMap<(i64, i64), AbGroup>,
}

#[derive(Serialize)]
pub struct GroupRecord {
    pub i: i64,
    pub j: i64,
    pub free: usize,
    pub torsion: Vec<u64>,
}

impl GradedGroups {
    pub fn insert(&mut self, i: i64, j: i64, g: AbGroup) {
        if !g.is_zero() {
            self.groups.insert((i, j), g);
        }
    }

    pub fn get(&self, i: i64, j: i64) -> AbGroup {
        self.groups.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((i64, i64), &AbGroup)> {
        self.groups.iter().map(|(k, v)| (*k, v))
    }

    /// Sum over `j` of the groups in homological degree `i`.
    pub fn degree(&self, i: i64) -> AbGroup {
        self.groups.iter().filter(|((a, _), _)| *a == i).fold(AbGroup::zero(), |acc, (_, g)| acc.direct_sum(g))
    }

    pub fn records(&self) -> Vec<GroupRecord> {
        self.iter()
            .map(|((i, j), g)| GroupRecord { i, j, free: g.free, torsion: g.torsion_u64() })
            .collect()
    }

    /// Poincare polynomial of the free parts.
    pub fn poincare(&self) -> crate::poly::BiPoly {
        let mut p = crate::poly::BiPoly::zero();
        for ((i, j), g) in self.iter() {
            p.add_term(i, j, int(g.free as i64));
        }
        p
    }

    pub fn restrict(&self, keep: impl Fn(i64, i64) -> bool) -> Self {
        Self { groups: self.groups.iter().filter(|((i, j), _)| keep(*i, *j)).map(|(k, v)| (*k, v.clone())).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_to_invariant_factors() {
        let g = AbGroup::from_cyclic(1, vec![int(2), int(3), int(4), int(1)]);
        assert_eq!(g.free, 1);
        assert_eq!(g.torsion, vec![int(2), int(12)]);
        assert_eq!(g.to_string(), "Z + Z/2 + Z/12");
        assert_eq!(g.without_primes(&[2]).torsion, vec![int(3)]);
        assert_eq!(g.exponent(), int(12));
    }
}
