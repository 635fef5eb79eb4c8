//! Cochain complexes with a sparse differential, an optional signed
//! permutation action, and an optional integer filtration tag per generator.
//!
//! `reduce` performs Gaussian elimination: it repeatedly cancels a pair of
//! generators joined by a unit entry, replacing the complex by a homotopy
//! equivalent smaller one. In equivariant mode whole orbits are cancelled at
//! once so the action survives; in filtered mode only pairs with equal tags
//! are cancelled so the filtration (and every spectral sequence page from
//! `E_1` on) survives.

use super::abgroup::AbGroup;
use super::matrix::SparseMat;
use super::snf::smith_normal_form;
use crate::num::{Coeff, Int, Rat};
use rustc_hash::{FxHashMap, FxHashSet};

/// Image index and sign of each generator under a signed permutation.
pub type SignedPerm = Vec<(u32, i8)>;

#[derive(Clone, Debug)]
pub struct Complex<R> {
    /// Homological degree of `dims[0]`.
    pub start: i64,
    pub dims: Vec<usize>,
    /// `d[k]` maps degree `start + k` to `start + k + 1`.
    pub d: Vec<SparseMat<R>>,
    pub action: Option<Vec<SignedPerm>>,
    pub tags: Option<Vec<Vec<u32>>>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ReduceOpts {
    pub equivariant: bool,
    pub filtered: bool,
}

impl<R: Coeff> Complex<R> {
    pub fn new(start: i64, dims: Vec<usize>, d: Vec<SparseMat<R>>) -> Self {
        assert_eq!(d.len() + 1, dims.len().max(1));
        for (k, m) in d.iter().enumerate() {
            assert_eq!((m.rows, m.cols), (dims[k + 1], dims[k]), "differential shape at {k}");
        }
        Self { start, dims, d, action: None, tags: None }
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.iter().all(|&n| n == 0)
    }

    pub fn total_rank(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.dims.len()).map(move |k| self.start + k as i64)
    }

    pub fn dim_at(&self, i: i64) -> usize {
        let k = i - self.start;
        if k < 0 || k as usize >= self.dims.len() {
            0
        } else {
            self.dims[k as usize]
        }
    }

    pub fn d_squared_is_zero(&self) -> bool {
        self.d.windows(2).all(|w| w[1].mul(&w[0]).is_zero())
    }

    /// Apply the action `m` times to generator `x` of degree index `k`.
    pub fn act_pow(&self, k: usize, x: u32, m: usize) -> (u32, i8) {
        let act = &self.action.as_ref().expect("complex has no action")[k];
        let (mut y, mut s) = (x, 1i8);
        for _ in 0..m {
            let (t, e) = act[y as usize];
            y = t;
            s *= e;
        }
        (y, s)
    }

    /// Matrix of `sum_m c[m] psi^m` on degree index `k`.
    pub fn eval_action(&self, k: usize, c: &[R]) -> SparseMat<R> {
        let n = self.dims[k];
        let mut ts = Vec::new();
        for x in 0..n as u32 {
            let (mut y, mut s) = (x, 1i8);
            let act = &self.action.as_ref().expect("complex has no action")[k];
            for cm in c {
                if !cm.is_zero() {
                    ts.push((y as usize, x as usize, if s > 0 { cm.clone() } else { cm.neg() }));
                }
                let (t, e) = act[y as usize];
                y = t;
                s *= e;
            }
        }
        SparseMat::from_triplets(n, n, ts)
    }

    /// `psi d = d psi` on every degree.
    pub fn action_commutes(&self) -> bool {
        if self.action.is_none() {
            return true;
        }
        (0..self.d.len()).all(|k| {
            let a0 = self.eval_action(k, &[R::zero(), R::one()]);
            let a1 = self.eval_action(k + 1, &[R::zero(), R::one()]);
            a1.mul(&self.d[k]) == self.d[k].mul(&a0)
        })
    }

    /// `psi^n = id` on every degree.
    pub fn action_has_order_dividing(&self, n: usize) -> bool {
        (0..self.dims.len()).all(|k| (0..self.dims[k] as u32).all(|x| self.act_pow(k, x, n) == (x, 1)))
    }

    pub fn map_coeffs<S: Coeff>(&self, f: impl Fn(&R) -> S + Copy) -> Complex<S> {
        Complex {
            start: self.start,
            dims: self.dims.clone(),
            d: self.d.iter().map(|m| m.map(f)).collect(),
            action: self.action.clone(),
            tags: self.tags.clone(),
        }
    }

    /// Orbit id and orbit size for every generator.
    fn orbits(&self) -> Vec<(Vec<u32>, Vec<u32>)> {
        let act = self.action.as_ref().expect("equivariant reduction needs an action");
        act.iter()
            .map(|a| {
                let mut id = vec![u32::MAX; a.len()];
                let mut size = vec![0u32; a.len()];
                for x in 0..a.len() {
                    if id[x] != u32::MAX {
                        continue;
                    }
                    let mut members = vec![x as u32];
                    let mut y = a[x].0;
                    while y as usize != x {
                        members.push(y);
                        y = a[y as usize].0;
                    }
                    for &m in &members {
                        id[m as usize] = x as u32;
                        size[m as usize] = members.len() as u32;
                    }
                }
                (id, size)
            })
            .collect()
    }

    /// Gaussian elimination down to a complex with no unit entries left
    /// (subject to the constraints in `opts`).
    pub fn reduce(&self, opts: ReduceOpts) -> Complex<R> {
        let nd = self.dims.len();
        let mut st = Elim::<R> {
            out: self.dims.iter().map(|&n| vec![FxHashMap::default(); n]).collect(),
            inn: self.dims.iter().map(|&n| vec![FxHashSet::default(); n]).collect(),
            alive: self.dims.iter().map(|&n| vec![true; n]).collect(),
        };
        for (k, m) in self.d.iter().enumerate() {
            for (r, c, v) in m.triplets() {
                st.out[k][c].insert(r as u32, v.clone());
                st.inn[k + 1][r].insert(c as u32);
            }
        }
        let orbits = if opts.equivariant { Some(self.orbits()) } else { None };
        loop {
            let mut changed = false;
            for k in 0..nd.saturating_sub(1) {
                for x in 0..self.dims[k] as u32 {
                    if !st.alive[k][x as usize] {
                        continue;
                    }
                    let xo = &st.out[k][x as usize];
                    let mut best: Option<(u64, u64, u32)> = None;
                    for (y, v) in xo {
                        if v.unit_inverse().is_none() {
                            continue;
                        }
                        if opts.filtered {
                            let t = self.tags.as_ref().expect("filtered reduction needs tags");
                            if t[k][x as usize] != t[k + 1][*y as usize] {
                                continue;
                            }
                        }
                        if let Some(orb) = &orbits {
                            let (ids1, sizes1) = &orb[k + 1];
                            if orb[k].1[x as usize] != sizes1[*y as usize] {
                                continue;
                            }
                            let oy = ids1[*y as usize];
                            if xo.keys().filter(|t| ids1[**t as usize] == oy).count() != 1 {
                                continue;
                            }
                        }
                        let cost = ((st.inn[k + 1][*y as usize].len() - 1) * (xo.len() - 1)) as u64;
                        let key = (cost, v.weight(), *y);
                        if best.map_or(true, |b| key < b) {
                            best = Some(key);
                        }
                    }
                    let Some((_, _, y)) = best else { continue };
                    if orbits.is_some() {
                        let size = orbits.as_ref().unwrap()[k].1[x as usize] as usize;
                        for a in 0..size {
                            let (xa, _) = self.act_pow(k, x, a);
                            let (ya, _) = self.act_pow(k + 1, y, a);
                            st.cancel(k, xa, ya);
                        }
                    } else {
                        st.cancel(k, x, y);
                    }
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        st.compact(self, opts.equivariant)
    }
}

struct Elim<R> {
    out: Vec<Vec<FxHashMap<u32, R>>>,
    inn: Vec<Vec<FxHashSet<u32>>>,
    alive: Vec<Vec<bool>>,
}

impl<R: Coeff> Elim<R> {
    fn cancel(&mut self, k: usize, x: u32, y: u32) {
        let (xu, yu) = (x as usize, y as usize);
        let u = self.out[k][xu].get(&y).expect("cancelled pair lost its entry").clone();
        let uinv = u.unit_inverse().expect("cancelled pair is not a unit");
        let targets: Vec<(u32, R)> =
            self.out[k][xu].iter().filter(|(t, _)| **t != y).map(|(t, v)| (*t, v.clone())).collect();
        let sources: Vec<u32> = self.inn[k + 1][yu].iter().copied().filter(|s| *s != x).collect();
        for s in sources {
            let b = self.out[k][s as usize].remove(&y).unwrap();
            let f = b.mul(&uinv);
            for (t, a) in &targets {
                let row = &mut self.out[k][s as usize];
                let cur = row.get(t).cloned().unwrap_or_else(R::zero);
                let new = cur.sub(&f.mul(a));
                if new.is_zero() {
                    row.remove(t);
                    self.inn[k + 1][*t as usize].remove(&s);
                } else {
                    row.insert(*t, new);
                    self.inn[k + 1][*t as usize].insert(s);
                }
            }
        }
        for (t, _) in std::mem::take(&mut self.out[k][xu]) {
            self.inn[k + 1][t as usize].remove(&x);
        }
        if k > 0 {
            for z in std::mem::take(&mut self.inn[k][xu]) {
                self.out[k - 1][z as usize].remove(&x);
            }
        }
        self.alive[k][xu] = false;
        self.inn[k + 1][yu].clear();
        for (w, _) in std::mem::take(&mut self.out[k + 1][yu]) {
            self.inn[k + 2][w as usize].remove(&y);
        }
        self.alive[k + 1][yu] = false;
    }

    fn compact(self, src: &Complex<R>, keep_action: bool) -> Complex<R> {
        let nd = src.dims.len();
        let mut index: Vec<Vec<u32>> = Vec::with_capacity(nd);
        let mut dims = Vec::with_capacity(nd);
        for k in 0..nd {
            let mut idx = vec![u32::MAX; src.dims[k]];
            let mut c = 0u32;
            for x in 0..src.dims[k] {
                if self.alive[k][x] {
                    idx[x] = c;
                    c += 1;
                }
            }
            index.push(idx);
            dims.push(c as usize);
        }
        let mut d = Vec::with_capacity(nd.saturating_sub(1));
        for k in 0..nd.saturating_sub(1) {
            let mut ts = Vec::new();
            for x in 0..src.dims[k] {
                if !self.alive[k][x] {
                    continue;
                }
                for (t, v) in &self.out[k][x] {
                    ts.push((index[k + 1][*t as usize] as usize, index[k][x] as usize, v.clone()));
                }
            }
            d.push(SparseMat::from_triplets(dims[k + 1], dims[k], ts));
        }
        let action = match (&src.action, keep_action) {
            (Some(act), true) => Some(
                (0..nd)
                    .map(|k| {
                        (0..src.dims[k])
                            .filter(|&x| self.alive[k][x])
                            .map(|x| {
                                let (t, s) = act[k][x];
                                let nt = index[k][t as usize];
                                assert!(nt != u32::MAX, "action leaves the reduced basis");
                                (nt, s)
                            })
                            .collect()
                    })
                    .collect(),
            ),
            _ => None,
        };
        let tags = src.tags.as_ref().map(|tags| {
            (0..nd)
                .map(|k| (0..src.dims[k]).filter(|&x| self.alive[k][x]).map(|x| tags[k][x]).collect())
                .collect()
        });
        Complex { start: src.start, dims, d, action, tags }
    }
}

impl Complex<Int> {
    /// Integral homology in every degree, indexed like `dims`.
    pub fn homology(&self) -> Vec<AbGroup> {
        let mut bare = self.clone();
        bare.action = None;
        bare.tags = None;
        let r = bare.reduce(ReduceOpts::default());
        let snfs: Vec<_> = r.d.iter().map(|m| smith_normal_form(m, false)).collect();
        (0..r.dims.len())
            .map(|k| {
                let out_rank = if k < snfs.len() { snfs[k].rank() } else { 0 };
                let (in_rank, tors) = if k > 0 { (snfs[k - 1].rank(), snfs[k - 1].torsion()) } else { (0, vec![]) };
                AbGroup::from_cyclic(r.dims[k] - out_rank - in_rank, tors)
            })
            .collect()
    }

    pub fn to_rat(&self) -> Complex<Rat> {
        self.map_coeffs(|v| Rat::from(v.clone()))
    }
}

impl Complex<Rat> {
    /// Rational Betti numbers, indexed like `dims`.
    pub fn betti(&self) -> Vec<usize> {
        let mut bare = self.clone();
        bare.action = None;
        bare.tags = None;
        let r = bare.reduce(ReduceOpts::default());
        debug_assert!(r.d.iter().all(|m| m.is_zero()));
        r.dims
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::int;

    fn m(rows: usize, cols: usize, ts: &[(usize, usize, i64)]) -> SparseMat<Int> {
        SparseMat::from_triplets(rows, cols, ts.iter().map(|&(r, c, v)| (r, c, int(v))))
    }

    #[test]
    fn rp2_like_torsion() {
        // Z --2--> Z has H^1 = Z/2
        let c = Complex::new(0, vec![1, 1], vec![m(1, 1, &[(0, 0, 2)])]);
        let h = c.homology();
        assert_eq!(h[0], AbGroup::zero());
        assert_eq!(h[1], AbGroup::from_cyclic(0, vec![int(2)]));
    }

    #[test]
    fn elimination_preserves_homology() {
        // Z^2 -> Z^3 -> Z with d1 d0 = 0
        let d0 = m(3, 2, &[(0, 0, 1), (1, 0, 1), (1, 1, 2), (2, 1, 2)]);
        let d1 = m(1, 3, &[(0, 0, 1), (0, 1, -1), (0, 2, 1)]);
        let c = Complex::new(0, vec![2, 3, 1], vec![d0, d1]);
        assert!(c.d_squared_is_zero());
        let h = c.homology();
        assert_eq!(h[0], AbGroup::zero());
        // ker d1 = <e0+e1, e1+e2>, im d0 = <e0+e1, 2e1+2e2>
        assert_eq!(h[1], AbGroup::from_cyclic(0, vec![int(2)]));
        assert_eq!(h[2], AbGroup::zero());
        let q = c.to_rat().betti();
        assert_eq!(q, vec![0, 0, 0]);
    }

    #[test]
    fn equivariant_reduction_keeps_action() {
        // two copies of Z --1--> Z swapped by the action
        let d0 = m(2, 2, &[(0, 0, 1), (1, 1, 1)]);
        let mut c = Complex::new(0, vec![2, 2], vec![d0]);
        c.action = Some(vec![vec![(1, 1), (0, 1)], vec![(1, 1), (0, 1)]]);
        assert!(c.action_commutes());
        let r = c.reduce(ReduceOpts { equivariant: true, filtered: false });
        assert_eq!(r.dims, vec![0, 0]);
    }
}
