//! Laurent polynomials in `q` and in `(t, q)` with integer coefficients.

use crate::num::{int, Int};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Int>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(c: Int, e: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    pub fn one() -> Self {
        Self::monomial(int(1), 0)
    }

    /// `q + q^-1`
    pub fn unknot() -> Self {
        Self::from_pairs(&[(1, 1), (1, -1)])
    }

    pub fn from_pairs(pairs: &[(i64, i64)]) -> Self {
        let mut p = Self::zero();
        for &(c, e) in pairs {
            p.add_term(e, int(c));
        }
        p
    }

    pub fn add_term(&mut self, e: i64, c: Int) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(|| int(0));
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn coeff(&self, e: i64) -> Int {
        self.terms.get(&e).cloned().unwrap_or_else(|| int(0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Int)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in o.terms() {
            r.add_term(e, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&int(-1)))
    }

    pub fn scale(&self, k: &Int) -> Self {
        let mut r = Self::zero();
        for (e, c) in self.terms() {
            r.add_term(e, c * k);
        }
        r
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in o.terms() {
                r.add_term(e1 + e2, c1 * c2);
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = Self::one();
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    pub fn shift(&self, s: i64) -> Self {
        Self { terms: self.terms.iter().map(|(e, c)| (e + s, c.clone())).collect() }
    }

    /// Substitute `q -> q^k`.
    pub fn compose_power(&self, k: i64) -> Self {
        Self { terms: self.terms.iter().map(|(e, c)| (e * k, c.clone())).collect() }
    }

    /// Exact division by an integer; `None` if some coefficient is not divisible.
    pub fn div_exact(&self, k: &Int) -> Option<Self> {
        let mut r = Self::zero();
        for (e, c) in self.terms() {
            if !(c % k).is_zero() {
                return None;
            }
            r.add_term(e, c / k);
        }
        Some(r)
    }

    pub fn eval_at_one(&self) -> Int {
        self.terms.values().fold(int(0), |a, c| a + c)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<_> = self.terms().map(|(e, c)| (c.clone(), vec![("q", e)])).collect();
        write_terms(f, &items)
    }
}

/// Laurent polynomial in two variables, `t` (homological) and `q` (quantum).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BiPoly {
    terms: BTreeMap<(i64, i64), Int>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(c: Int, i: i64, j: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(i, j, c);
        p
    }

    /// From `(coefficient, t-exponent, q-exponent)` triples.
    pub fn from_triples(ts: &[(i64, i64, i64)]) -> Self {
        let mut p = Self::zero();
        for &(c, i, j) in ts {
            p.add_term(i, j, int(c));
        }
        p
    }

    pub fn add_term(&mut self, i: i64, j: i64, c: Int) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((i, j)).or_insert_with(|| int(0));
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn coeff(&self, i: i64, j: i64) -> Int {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(|| int(0))
    }

    pub fn terms(&self) -> impl Iterator<Item = ((i64, i64), &Int)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for ((i, j), c) in o.terms() {
            r.add_term(i, j, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for ((i, j), c) in o.terms() {
            r.add_term(i, j, -c);
        }
        r
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero();
        for ((i1, j1), c1) in self.terms() {
            for ((i2, j2), c2) in o.terms() {
                r.add_term(i1 + i2, j1 + j2, c1 * c2);
            }
        }
        r
    }

    /// Set `t = -1`, giving a polynomial in `q`.
    pub fn at_t_minus_one(&self) -> LaurentPoly {
        let mut r = LaurentPoly::zero();
        for ((i, j), c) in self.terms() {
            r.add_term(j, if i.rem_euclid(2) == 0 { c.clone() } else { -c });
        }
        r
    }

    /// Keep the terms whose `t`-exponent satisfies `keep`.
    pub fn filter_t(&self, keep: impl Fn(i64) -> bool) -> Self {
        Self { terms: self.terms.iter().filter(|((i, _), _)| keep(*i)).map(|(k, c)| (*k, c.clone())).collect() }
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<_> = self.terms().map(|((i, j), c)| (c.clone(), vec![("t", i), ("q", j)])).collect();
        write_terms(f, &items)
    }
}

fn write_terms(f: &mut fmt::Formatter<'_>, items: &[(Int, Vec<(&str, i64)>)]) -> fmt::Result {
    if items.is_empty() {
        return write!(f, "0");
    }
    for (k, (c, vars)) in items.iter().enumerate() {
        let neg = c < &int(0);
        let a = if neg { -c } else { c.clone() };
        if k == 0 {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, "{}", if neg { " - " } else { " + " })?;
        }
        let mono: Vec<String> = vars
            .iter()
            .filter(|(_, e)| *e != 0)
            .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
            .collect();
        match (a == int(1), mono.is_empty()) {
            (_, true) => write!(f, "{a}")?,
            (true, false) => write!(f, "{}", mono.join("*"))?,
            (false, false) => write!(f, "{a}*{}", mono.join("*"))?,
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_matches_cli_format() {
        assert_eq!(BiPoly::from_triples(&[(1, 4, 12)]).to_string(), "t^4*q^12");
        assert_eq!(BiPoly::from_triples(&[(1, 0, 0), (1, 0, 2), (1, 2, 4)]).to_string(), "1 + q^2 + t^2*q^4");
        assert_eq!(LaurentPoly::from_pairs(&[(-2, -1), (3, 1)]).to_string(), "-2*q^-1 + 3*q");
        assert_eq!(BiPoly::zero().to_string(), "0");
    }

    #[test]
    fn unknot_powers() {
        let p = LaurentPoly::unknot().pow(4);
        assert_eq!(p.coeff(0), int(6));
        assert_eq!(p.coeff(-4), int(1));
        assert_eq!(p.eval_at_one(), int(16));
    }
}
