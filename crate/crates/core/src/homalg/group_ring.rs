//! The integral group ring `Z[Z/n] = Z[t]/(t^n - 1)`, cyclotomic
//! polynomials, their cofactors, and the rational idempotents `e_d`.

use super::matrix::SparseMat;
use super::qpoly::Poly;
use crate::error::{Error, Result};
use crate::num::{int, Int, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRingElt {
    pub n: usize,
    /// Coefficient of `t^k` for `k < n`.
    pub coeffs: Vec<Int>,
}

impl GroupRingElt {
    pub fn zero(n: usize) -> Self {
        Self { n, coeffs: vec![int(0); n] }
    }

    pub fn t_pow(n: usize, k: usize) -> Self {
        let mut e = Self::zero(n);
        e.coeffs[k % n] = int(1);
        e
    }

    pub fn one(n: usize) -> Self {
        Self::t_pow(n, 0)
    }

    pub fn from_poly(n: usize, p: &Poly<Int>) -> Self {
        Self { n, coeffs: p.reduce_cyclic(n) }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        Self { n: self.n, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        Self { n: self.n, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        let mut c = vec![int(0); self.n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[(i + j) % self.n] += a * b;
            }
        }
        Self { n: self.n, coeffs: c }
    }

    /// Augmentation: sum of coefficients (evaluation at `t = 1`).
    pub fn augmentation(&self) -> Int {
        self.coeffs.iter().fold(int(0), |a, c| a + c)
    }

    /// Matrix of multiplication by `self` on the basis `1, t, ..., t^{n-1}`.
    pub fn mult_matrix(&self) -> SparseMat<Int> {
        let n = self.n;
        let ts = (0..n).flat_map(|col| {
            self.coeffs.iter().enumerate().map(move |(k, a)| ((k + col) % n, col, a.clone()))
        });
        SparseMat::from_triplets(n, n, ts)
    }
}

/// The `d`-th cyclotomic polynomial, computed by exact division.
pub fn cyclotomic(d: usize) -> Poly<Int> {
    assert!(d >= 1);
    let mut p = Poly::<Int>::t_pow_minus_one(d);
    for e in 1..d {
        if d % e == 0 {
            let (q, r) = p.divrem(&cyclotomic(e)).unwrap();
            assert!(r.is_zero());
            p = q;
        }
    }
    p
}

/// `(t^n - 1) / Phi_d`; requires `d | n`.
pub fn cofactor(d: usize, n: usize) -> Result<Poly<Int>> {
    if d == 0 || n % d != 0 {
        return Err(Error::NotDivisor { d: d as u64, n: n as u64 });
    }
    let (q, r) = Poly::<Int>::t_pow_minus_one(n).divrem(&cyclotomic(d)).unwrap();
    debug_assert!(r.is_zero());
    Ok(q)
}

/// The primitive idempotent `e_d` of `Q[Z/n]`, as `n` rational coefficients:
/// `e_d = 1 mod Phi_d` and `e_d = 0 mod (t^n - 1)/Phi_d`.
pub fn idempotent(d: usize, n: usize) -> Result<Vec<Rat>> {
    let g = cofactor(d, n)?.to_rat();
    let phi = cyclotomic(d).to_rat();
    let (h, s, _) = Poly::xgcd(&g, &phi);
    assert_eq!(h, Poly::one(), "cofactor and cyclotomic polynomial are coprime");
    Ok(s.mul(&g).reduce_cyclic(n))
}

/// Product in `Q[t]/(t^n - 1)` of coefficient vectors.
pub fn cyclic_mul_q(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let n = a.len();
    let mut c = vec![Rat::ZERO; n];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[(i + j) % n] += x * y;
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::divisors;

    #[test]
    fn cyclotomic_values() {
        assert_eq!(cyclotomic(1), Poly::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic(4), Poly::from_i64(&[1, 0, 1]));
        assert_eq!(cyclotomic(6), Poly::from_i64(&[1, -1, 1]));
        assert_eq!(cyclotomic(9), Poly::from_i64(&[1, 0, 0, 1, 0, 0, 1]));
        assert_eq!(cofactor(2, 4).unwrap(), Poly::from_i64(&[-1, 1, -1, 1]));
        assert!(cofactor(3, 4).is_err());
    }

    #[test]
    fn idempotents_are_complete_and_orthogonal() {
        for n in 1..=12usize {
            let ds = divisors(n as u64);
            let es: Vec<_> = ds.iter().map(|&d| idempotent(d as usize, n).unwrap()).collect();
            let mut sum = vec![Rat::ZERO; n];
            for e in &es {
                for k in 0..n {
                    sum[k] += &e[k];
                }
            }
            let mut one = vec![Rat::ZERO; n];
            one[0] = Rat::ONE;
            assert_eq!(sum, one);
            for (a, ea) in es.iter().enumerate() {
                for (b, eb) in es.iter().enumerate() {
                    let p = cyclic_mul_q(ea, eb);
                    if a == b {
                        assert_eq!(&p, ea);
                    } else {
                        assert!(p.iter().all(|x| x == &Rat::ZERO));
                    }
                }
                let phi = cyclotomic(ds[a] as usize).to_rat().reduce_cyclic(n);
                assert!(cyclic_mul_q(ea, &phi).iter().all(|x| x == &Rat::ZERO));
            }
        }
    }

    #[test]
    fn phi_times_cofactor_is_zero_in_group_ring() {
        for n in 1..=9usize {
            for d in divisors(n as u64) {
                let a = GroupRingElt::from_poly(n, &cyclotomic(d as usize));
                let b = GroupRingElt::from_poly(n, &cofactor(d as usize, n).unwrap());
                assert!(a.mul(&b).is_zero());
            }
        }
    }
}
