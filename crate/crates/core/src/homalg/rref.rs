//! Small dense rational row reduction.

use crate::num::Rat;

/// Reduce `m` in place to reduced row echelon form, dropping zero rows.
/// Returns the pivot column of each remaining row.
pub fn rref(m: &mut Vec<Vec<Rat>>) -> Vec<usize> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..cols {
        let Some(p) = (row..m.len()).find(|&r| m[r][c] != Rat::ZERO) else { continue };
        m.swap(row, p);
        let inv = Rat::ONE / &m[row][c];
        for x in m[row].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..m.len() {
            if r != row && m[r][c] != Rat::ZERO {
                let f = m[r][c].clone();
                for k in 0..cols {
                    let v = &f * &m[row][k];
                    m[r][k] -= v;
                }
            }
        }
        pivots.push(c);
        row += 1;
    }
    m.truncate(row);
    pivots
}

pub fn rank(m: &[Vec<Rat>]) -> usize {
    let mut w = m.to_vec();
    rref(&mut w).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;

    #[test]
    fn rank_of_singular_matrix() {
        let m = vec![vec![rat(1, 1), rat(2, 1)], vec![rat(2, 1), rat(4, 1)]];
        assert_eq!(rank(&m), 1);
        let mut w = m.clone();
        assert_eq!(rref(&mut w), vec![0]);
        assert_eq!(w[0], vec![rat(1, 1), rat(2, 1)]);
    }
}
