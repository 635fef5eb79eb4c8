use crate::num::{Coeff, Int};

/// Column-major sparse matrix. Each column holds `(row, value)` pairs sorted
/// by row with no explicit zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMat<R> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<(usize, R)>>,
}

impl<R: Coeff> SparseMat<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Vec::new(); cols] }
    }

    /// Build from `(row, col, value)` triples; repeated positions are summed.
    pub fn from_triplets(rows: usize, cols: usize, ts: impl IntoIterator<Item = (usize, usize, R)>) -> Self {
        let mut data: Vec<Vec<(usize, R)>> = vec![Vec::new(); cols];
        for (r, c, v) in ts {
            assert!(r < rows && c < cols, "entry ({r},{c}) outside {rows}x{cols}");
            data[c].push((r, v));
        }
        for col in &mut data {
            col.sort_by_key(|e| e.0);
            let mut merged: Vec<(usize, R)> = Vec::with_capacity(col.len());
            for (r, v) in col.drain(..) {
                match merged.last_mut() {
                    Some(last) if last.0 == r => last.1 = last.1.add(&v),
                    _ => merged.push((r, v)),
                }
            }
            merged.retain(|e| !e.1.is_zero());
            *col = merged;
        }
        Self { rows, cols, data }
    }

    pub fn from_dense(m: &[Vec<R>]) -> Self {
        let rows = m.len();
        let cols = m.first().map_or(0, |r| r.len());
        let ts = (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j))).map(|(i, j)| (i, j, m[i][j].clone()));
        Self::from_triplets(rows, cols, ts)
    }

    pub fn get(&self, r: usize, c: usize) -> R {
        match self.data[c].binary_search_by_key(&r, |e| e.0) {
            Ok(k) => self.data[c][k].1.clone(),
            Err(_) => R::zero(),
        }
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|c| c.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_empty())
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &R)> {
        self.data.iter().enumerate().flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(self.cols, self.rows, self.triplets().map(|(r, c, v)| (c, r, v.clone())))
    }

    /// `self * other`
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut ts = Vec::new();
        for (c, col) in other.data.iter().enumerate() {
            let mut acc: std::collections::BTreeMap<usize, R> = Default::default();
            for (k, b) in col {
                for (r, a) in &self.data[*k] {
                    let e = acc.entry(*r).or_insert_with(R::zero);
                    *e = e.add(&a.mul(b));
                }
            }
            ts.extend(acc.into_iter().map(|(r, v)| (r, c, v)));
        }
        Self::from_triplets(self.rows, other.cols, ts)
    }

    pub fn apply(&self, v: &[R]) -> Vec<R> {
        let mut out = vec![R::zero(); self.rows];
        for (c, col) in self.data.iter().enumerate() {
            if v[c].is_zero() {
                continue;
            }
            for (r, a) in col {
                out[*r] = out[*r].add(&a.mul(&v[c]));
            }
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<R>> {
        let mut m = vec![vec![R::zero(); self.cols]; self.rows];
        for (r, c, v) in self.triplets() {
            m[r][c] = v.clone();
        }
        m
    }

    pub fn map<S: Coeff>(&self, f: impl Fn(&R) -> S) -> SparseMat<S> {
        SparseMat::from_triplets(self.rows, self.cols, self.triplets().map(|(r, c, v)| (r, c, f(v))))
    }
}

impl SparseMat<Int> {
    pub fn to_rat(&self) -> SparseMat<crate::num::Rat> {
        self.map(|v| crate::num::Rat::from(v.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::int;

    #[test]
    fn product_and_transpose() {
        let a = SparseMat::from_dense(&[vec![int(1), int(2)], vec![int(0), int(3)]]);
        let b = SparseMat::from_dense(&[vec![int(4)], vec![int(5)]]);
        let ab = a.mul(&b);
        assert_eq!(ab.to_dense(), vec![vec![int(14)], vec![int(15)]]);
        assert_eq!(a.transpose().get(1, 0), int(2));
        assert_eq!(a.nnz(), 3);
    }
}
