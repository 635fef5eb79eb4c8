//! Smith normal form over `Z` on a sparse working copy.

use super::matrix::SparseMat;
use crate::num::{int, xgcd, AbsVal, Int};
use rustc_hash::{FxHashMap, FxHashSet};

/// Invariant factors `d_1 | d_2 | ... | d_rank` (all positive) and, when
/// requested, unimodular `u`, `v` with `u * a * v = diag(d)`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diag: Vec<Int>,
    pub u: Option<Vec<Vec<Int>>>,
    pub v: Option<Vec<Vec<Int>>>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    /// Invariant factors larger than one.
    pub fn torsion(&self) -> Vec<Int> {
        self.diag.iter().filter(|d| **d != int(1)).cloned().collect()
    }
}

struct Work {
    rows: Vec<FxHashMap<usize, Int>>,
    cols: Vec<FxHashSet<usize>>,
    u: Option<Vec<Vec<Int>>>,
    v: Option<Vec<Vec<Int>>>,
}

fn identity(n: usize) -> Vec<Vec<Int>> {
    (0..n).map(|i| (0..n).map(|j| int((i == j) as i64)).collect()).collect()
}

impl Work {
    fn set(&mut self, r: usize, c: usize, val: Int) {
        if val.is_zero() {
            self.rows[r].remove(&c);
            self.cols[c].remove(&r);
        } else {
            self.rows[r].insert(c, val);
            self.cols[c].insert(r);
        }
    }

    fn get(&self, r: usize, c: usize) -> Int {
        self.rows[r].get(&c).cloned().unwrap_or_else(|| int(0))
    }

    /// rows (i, j) <- (a*ri + b*rj, c*ri + d*rj)
    fn row_op(&mut self, i: usize, j: usize, a: &Int, b: &Int, c: &Int, d: &Int) {
        let cols: FxHashSet<usize> = self.rows[i].keys().chain(self.rows[j].keys()).copied().collect();
        for col in cols {
            let x = self.get(i, col);
            let y = self.get(j, col);
            self.set(i, col, a * &x + b * &y);
            self.set(j, col, c * &x + d * &y);
        }
        if let Some(u) = &mut self.u {
            let (ri, rj) = (u[i].clone(), u[j].clone());
            for k in 0..ri.len() {
                u[i][k] = a * &ri[k] + b * &rj[k];
                u[j][k] = c * &ri[k] + d * &rj[k];
            }
        }
    }

    /// columns (i, j) <- (a*ci + b*cj, c*ci + d*cj)
    fn col_op(&mut self, i: usize, j: usize, a: &Int, b: &Int, c: &Int, d: &Int) {
        let rows: FxHashSet<usize> = self.cols[i].iter().chain(self.cols[j].iter()).copied().collect();
        for r in rows {
            let x = self.get(r, i);
            let y = self.get(r, j);
            self.set(r, i, a * &x + b * &y);
            self.set(r, j, c * &x + d * &y);
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                let (x, y) = (row[i].clone(), row[j].clone());
                row[i] = a * &x + b * &y;
                row[j] = c * &x + d * &y;
            }
        }
    }

    fn pick_pivot(&self) -> Option<(usize, usize)> {
        let mut best: Option<(Int, usize, usize, usize)> = None;
        for (r, row) in self.rows.iter().enumerate() {
            for (c, val) in row {
                let a = val.abs_val();
                let cost = (row.len() - 1) * (self.cols[*c].len() - 1);
                let better = match &best {
                    None => true,
                    Some((ba, bc, br, bcol)) => (&a, cost, r, *c) < (ba, *bc, *br, *bcol),
                };
                if better {
                    best = Some((a, cost, r, *c));
                }
            }
        }
        best.map(|(_, _, r, c)| (r, c))
    }

    /// Clear row `r` and column `c` around the pivot; returns the final pivot.
    fn clear(&mut self, r: usize, c: usize) -> Int {
        loop {
            let mut dirty = false;
            let others: Vec<usize> = self.cols[c].iter().copied().filter(|&i| i != r).collect();
            for i in others {
                let p = self.get(r, c);
                let x = self.get(i, c);
                if x.is_zero() {
                    continue;
                }
                if (&x % &p).is_zero() {
                    let q = &x / &p;
                    self.row_op(r, i, &int(1), &int(0), &-q, &int(1));
                } else {
                    let (g, s, t) = xgcd(&p, &x);
                    let (pg, xg) = (&p / &g, &x / &g);
                    self.row_op(r, i, &s, &t, &-xg, &pg);
                }
            }
            let others: Vec<usize> = self.rows[r].keys().copied().filter(|&j| j != c).collect();
            for j in others {
                let p = self.get(r, c);
                let x = self.get(r, j);
                if x.is_zero() {
                    continue;
                }
                if (&x % &p).is_zero() {
                    let q = &x / &p;
                    self.col_op(c, j, &int(1), &int(0), &-q, &int(1));
                } else {
                    let (g, s, t) = xgcd(&p, &x);
                    let (pg, xg) = (&p / &g, &x / &g);
                    self.col_op(c, j, &s, &t, &-xg, &pg);
                    dirty = true;
                }
            }
            if !dirty && self.cols[c].len() == 1 {
                return self.get(r, c);
            }
        }
    }
}

pub fn smith_normal_form(a: &SparseMat<Int>, transforms: bool) -> SmithForm {
    let (m, n) = (a.rows, a.cols);
    let mut w = Work {
        rows: vec![FxHashMap::default(); m],
        cols: vec![FxHashSet::default(); n],
        u: transforms.then(|| identity(m)),
        v: transforms.then(|| identity(n)),
    };
    for (r, c, val) in a.triplets() {
        w.set(r, c, val.clone());
    }
    let mut pivots: Vec<(usize, usize, Int)> = Vec::new();
    while let Some((r, c)) = w.pick_pivot() {
        let p = w.clear(r, c);
        w.set(r, c, int(0));
        pivots.push((r, c, p));
    }
    // Sign fixes, then move pivot k to position (k, k).
    let mut diag = Vec::with_capacity(pivots.len());
    let mut u = w.u.take();
    let mut v = w.v.take();
    if let Some(u) = &mut u {
        for (r, _, p) in &pivots {
            if *p < int(0) {
                for x in u[*r].iter_mut() {
                    *x = -&*x;
                }
            }
        }
    }
    for (_, _, p) in &pivots {
        diag.push(p.abs_val());
    }
    if transforms {
        let row_order = complete_order(pivots.iter().map(|p| p.0).collect(), m);
        let col_order = complete_order(pivots.iter().map(|p| p.1).collect(), n);
        let u0 = u.take().unwrap();
        u = Some(row_order.iter().map(|&i| u0[i].clone()).collect());
        let v0 = v.take().unwrap();
        v = Some(v0.iter().map(|row| col_order.iter().map(|&j| row[j].clone()).collect()).collect());
    }
    // Turn the diagonal into a divisibility chain with 2x2 gcd/lcm moves.
    let k = diag.len();
    for i in 0..k {
        for j in i + 1..k {
            let (a, b) = (diag[i].clone(), diag[j].clone());
            if (&b % &a).is_zero() {
                continue;
            }
            let (g, s, t) = xgcd(&a, &b);
            let (ag, bg) = (&a / &g, &b / &g);
            diag[i] = g.clone();
            diag[j] = &a * &bg;
            if let Some(u) = &mut u {
                let (ri, rj) = (u[i].clone(), u[j].clone());
                for c in 0..ri.len() {
                    u[i][c] = &s * &ri[c] + &t * &rj[c];
                    u[j][c] = -(&bg * &ri[c]) + &ag * &rj[c];
                }
            }
            if let Some(v) = &mut v {
                for row in v.iter_mut() {
                    let (x, y) = (row[i].clone(), row[j].clone());
                    row[i] = &x + &y;
                    row[j] = -(&t * &bg * &x) + &s * &ag * &y;
                }
            }
        }
    }
    SmithForm { diag, u, v }
}

fn complete_order(mut first: Vec<usize>, n: usize) -> Vec<usize> {
    let used: FxHashSet<usize> = first.iter().copied().collect();
    first.extend((0..n).filter(|i| !used.contains(i)));
    first
}

/// Invariant factors only.
pub fn invariant_factors(a: &SparseMat<Int>) -> Vec<Int> {
    smith_normal_form(a, false).diag
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &[Vec<i64>]) -> SmithForm {
        let a = SparseMat::from_dense(&m.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect::<Vec<_>>());
        let s = smith_normal_form(&a, true);
        let u = SparseMat::from_dense(s.u.as_ref().unwrap());
        let v = SparseMat::from_dense(s.v.as_ref().unwrap());
        let d = u.mul(&a).mul(&v);
        for (r, c, x) in d.triplets() {
            assert_eq!(r, c, "off-diagonal entry");
            assert_eq!(*x, s.diag[r]);
        }
        for w in s.diag.windows(2) {
            assert!((&w[1] % &w[0]).is_zero());
        }
        s
    }

    #[test]
    fn classic_example() {
        let s = check(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        assert_eq!(s.diag, vec![int(2), int(6), int(12)]);
    }

    #[test]
    fn coprime_diagonal_gets_merged() {
        let s = check(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(s.diag, vec![int(1), int(6)]);
    }

    #[test]
    fn rank_deficient() {
        let s = check(&[vec![1, 2, 3], vec![2, 4, 6], vec![0, 0, 0]]);
        assert_eq!(s.diag, vec![int(1)]);
    }
}
