//! Dense univariate polynomials over a coefficient ring, lowest degree first.

use crate::num::{Coeff, Int, Rat};

#[derive(Clone, Debug, PartialEq)]
pub struct Poly<R> {
    pub c: Vec<R>,
}

impl<R: Coeff> Poly<R> {
    pub fn new(mut c: Vec<R>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Self { c }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| R::from_i64(x)).collect())
    }

    pub fn zero() -> Self {
        Self { c: vec![] }
    }

    pub fn one() -> Self {
        Self::new(vec![R::one()])
    }

    /// `t^n - 1`
    pub fn t_pow_minus_one(n: usize) -> Self {
        let mut c = vec![R::zero(); n + 1];
        c[0] = R::from_i64(-1);
        c[n] = R::one();
        Self::new(c)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> R {
        self.c.get(k).cloned().unwrap_or_else(R::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new((0..n).map(|k| self.coeff(k).add(&o.coeff(k))).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new((0..n).map(|k| self.coeff(k).sub(&o.coeff(k))).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut c = vec![R::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = c[i + j].add(&a.mul(b));
            }
        }
        Self::new(c)
    }

    pub fn scale(&self, k: &R) -> Self {
        Self::new(self.c.iter().map(|x| x.mul(k)).collect())
    }

    /// Division with remainder; the divisor's leading coefficient must be a unit.
    pub fn divrem(&self, b: &Self) -> Option<(Self, Self)> {
        let db = b.degree()?;
        let inv = b.c[db].unit_inverse()?;
        let mut r = self.c.clone();
        let mut q = vec![R::zero(); self.c.len().saturating_sub(db).max(1)];
        while r.len() > db && !r.is_empty() {
            let k = r.len() - 1;
            let f = r[k].mul(&inv);
            if !f.is_zero() {
                q[k - db] = f.clone();
                for (i, bc) in b.c.iter().enumerate() {
                    r[k - db + i] = r[k - db + i].sub(&f.mul(bc));
                }
            }
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        Some((Self::new(q), Self::new(r)))
    }

    /// Reduce modulo `t^n - 1`, returning exactly `n` coefficients.
    pub fn reduce_cyclic(&self, n: usize) -> Vec<R> {
        let mut out = vec![R::zero(); n];
        for (k, x) in self.c.iter().enumerate() {
            out[k % n] = out[k % n].add(x);
        }
        out
    }
}

impl Poly<Int> {
    pub fn to_rat(&self) -> Poly<Rat> {
        Poly::new(self.c.iter().map(|x| Rat::from(x.clone())).collect())
    }
}

impl Poly<Rat> {
    /// `(g, s, t)` with `s*a + t*b = g`, `g` monic.
    pub fn xgcd(a: &Self, b: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
            let s2 = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s2);
            let t2 = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t2);
        }
        match r0.degree() {
            Some(d) => {
                let inv = r0.c[d].unit_inverse().unwrap();
                (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
            }
            None => (r0, s0, t0),
        }
    }
}
