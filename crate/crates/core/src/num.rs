//! Coefficient rings. `Int` is an arbitrary precision integer, `Rat` an
//! arbitrary precision rational; both stay allocation free for small values.

use dashu_int::ops::{BitTest, ExtendedGcd, Gcd, UnsignedAbs};
use dashu_int::IBig;
use dashu_ratio::RBig;
use std::fmt::Debug;

pub type Int = IBig;
pub type Rat = RBig;

/// Which ring a computation runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Ring {
    Z,
    Q,
}

/// The operations the linear algebra needs from a coefficient ring.
pub trait Coeff: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Inverse if the element is a unit of the ring.
    fn unit_inverse(&self) -> Option<Self>;
    /// Rough size used for pivot choice; smaller is preferred.
    fn weight(&self) -> u64;
}

impl Coeff for Int {
    fn zero() -> Self {
        IBig::ZERO
    }
    fn one() -> Self {
        IBig::ONE
    }
    fn from_i64(v: i64) -> Self {
        IBig::from(v)
    }
    fn is_zero(&self) -> bool {
        IBig::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn unit_inverse(&self) -> Option<Self> {
        if self.is_one() || *self == IBig::NEG_ONE {
            Some(self.clone())
        } else {
            None
        }
    }
    fn weight(&self) -> u64 {
        self.unsigned_abs().bit_len() as u64
    }
}

impl Coeff for Rat {
    fn zero() -> Self {
        RBig::ZERO
    }
    fn one() -> Self {
        RBig::ONE
    }
    fn from_i64(v: i64) -> Self {
        RBig::from(v)
    }
    fn is_zero(&self) -> bool {
        RBig::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn unit_inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(RBig::ONE / self)
        }
    }
    fn weight(&self) -> u64 {
        (self.numerator().unsigned_abs().bit_len() + self.denominator().bit_len()) as u64
    }
}

pub fn int(v: i64) -> Int {
    IBig::from(v)
}

pub fn rat(n: i64, d: i64) -> Rat {
    RBig::from_parts_signed(IBig::from(n), IBig::from(d))
}

pub fn gcd(a: &Int, b: &Int) -> Int {
    if a.is_zero() && b.is_zero() {
        return IBig::ZERO;
    }
    IBig::from(a.gcd(b))
}

/// `(g, s, t)` with `s*a + t*b = g = gcd(a, b) >= 0`.
pub fn xgcd(a: &Int, b: &Int) -> (Int, Int, Int) {
    if a.is_zero() && b.is_zero() {
        return (IBig::ZERO, IBig::ONE, IBig::ZERO);
    }
    let (g, s, t) = a.clone().gcd_ext(b.clone());
    (IBig::from(g), s, t)
}

pub fn lcm(a: &Int, b: &Int) -> Int {
    if a.is_zero() || b.is_zero() {
        return IBig::ZERO;
    }
    let g = gcd(a, b);
    (a * b / g).abs_val()
}

pub trait AbsVal {
    fn abs_val(&self) -> Self;
}

impl AbsVal for Int {
    fn abs_val(&self) -> Self {
        IBig::from(self.unsigned_abs())
    }
}

pub fn to_i64(x: &Int) -> Option<i64> {
    i64::try_from(x.clone()).ok()
}

pub fn binomial(n: u64, k: u64) -> Int {
    if k > n {
        return IBig::ZERO;
    }
    let k = k.min(n - k);
    let mut r = IBig::ONE;
    for i in 0..k {
        r = r * IBig::from(n - i) / IBig::from(i + 1);
    }
    r
}

pub fn pow_u64(b: u64, e: u32) -> u64 {
    b.checked_pow(e).expect("power overflow")
}

pub fn euler_phi(mut n: u64) -> u64 {
    let mut r = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            r -= r / p;
        }
        p += 1;
    }
    if n > 1 {
        r -= r / n;
    }
    r
}

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|p| p * p <= n).all(|p| n % p != 0)
}

/// Write `n = p^m` if possible.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|p| n % p == 0)?;
    let mut m = 0;
    let mut x = n;
    while x % p == 0 {
        x /= p;
        m += 1;
    }
    (x == 1).then_some((p, m))
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = vec![];
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xgcd_identity() {
        for a in -20i64..20 {
            for b in -20i64..20 {
                let (g, s, t) = xgcd(&int(a), &int(b));
                assert_eq!(&s * int(a) + &t * int(b), g);
                assert_eq!(g, gcd(&int(a), &int(b)));
            }
        }
    }

    #[test]
    fn small_number_theory() {
        assert_eq!(euler_phi(9), 6);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(12), None);
        assert_eq!(binomial(8, 4), int(70));
        assert_eq!(prime_factors(12), vec![2, 3]);
    }
}
