//! Closed-form answers used as independent checks of the engine. Nothing
//! here touches the chain-level machinery: only integer and polynomial
//! arithmetic.

use crate::error::{Error, Result};
use crate::homalg::{AbGroup, GradedGroups};
use crate::num::{binomial, euler_phi, int, is_prime};
use crate::poly::{BiPoly, LaurentPoly};
use std::collections::BTreeMap;

fn check_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::Argument(format!("{p} is not prime")));
    }
    Ok(())
}

/// Graded count of aperiodic labelings of `p^n` circles arranged in a cycle,
/// divided by the orbit size `p^n`.
pub fn poly_p(p: u64, n: u32) -> Result<LaurentPoly> {
    check_prime(p)?;
    if n == 0 {
        return Ok(LaurentPoly::unknot());
    }
    let pn = p.pow(n);
    let prev = p.pow(n - 1);
    let mut out = LaurentPoly::zero();
    for k in 1..pn {
        let mut c = binomial(pn, k);
        if k % p == 0 {
            c -= binomial(prev, k / p);
        }
        let e = 2 * k as i64 - pn as i64;
        let pi = int(pn as i64);
        if !(&c % &pi).is_zero() {
            return Err(Error::Invariant(format!("P_{n} for p = {p} has a non-integral coefficient at q^{e}")));
        }
        out.add_term(e, c / pi);
    }
    Ok(out)
}

/// `W_j = p^j P_j(q^{p^{n-j}})`, the graded count of labelings of one orbit
/// of `p^n` circles with stabilizer of order `p^{n-j}`.
fn w_poly(p: u64, n: u32, j: u32) -> Result<LaurentPoly> {
    Ok(poly_p(p, j)?.compose_power(p.pow(n - j) as i64).scale(&int(p.pow(j) as i64)))
}

/// `qdim M_s^k` times `(q + q^{-1})^f`: generators of `CKh(T_{k p^n + f})`
/// in orbits of size `p^s`, one per orbit.
pub fn qdim_m(p: u64, n: u32, s: u32, k: u32, f: u32) -> Result<LaurentPoly> {
    check_prime(p)?;
    if s > n {
        return Err(Error::Argument(format!("s = {s} exceeds n = {n}")));
    }
    let base = if k == 0 {
        if s == 0 { LaurentPoly::one() } else { LaurentPoly::zero() }
    } else {
        // labelings whose orbit size is exactly p^s: every orbit of circles
        // has stabilizer containing Z/p^{n-s}, not all containing Z/p^{n-s+1}
        let mut upto = LaurentPoly::zero();
        for j in 0..s {
            upto = upto.add(&w_poly(p, n, j)?);
        }
        let with = upto.add(&w_poly(p, n, s)?);
        let diff = with.pow(k).sub(&upto.pow(k));
        diff.div_exact(&int(p.pow(s) as i64))
            .ok_or_else(|| Error::Invariant(format!("qdim M_{s}^{k} is not divisible by p^{s}")))?
    };
    Ok(base.mul(&LaurentPoly::unknot().pow(f)))
}

/// Recursion in `k`: adding one orbit of circles to orbits of type `s'`
/// yields type `max(s, s')`, with `p^{min}` ways to align them.
pub fn qdim_m_recursive(p: u64, n: u32, k: u32) -> Result<Vec<LaurentPoly>> {
    check_prime(p)?;
    let one: Vec<LaurentPoly> = (0..=n).map(|s| poly_p(p, s).map(|x| x.compose_power(p.pow(n - s) as i64))).collect::<Result<_>>()?;
    let mut cur: Vec<LaurentPoly> = (0..=n).map(|s| if s == 0 { LaurentPoly::one() } else { LaurentPoly::zero() }).collect();
    for _ in 0..k {
        let mut next = vec![LaurentPoly::zero(); n as usize + 1];
        for (a, ma) in cur.iter().enumerate() {
            for (b, mb) in one.iter().enumerate() {
                let s = a.max(b);
                let ways = p.pow(a.min(b) as u32) as i64;
                next[s] = next[s].add(&ma.mul(mb).scale(&int(ways)));
            }
        }
        cur = next;
    }
    Ok(cur)
}

/// Brute force: rotate every labeling of `k` orbits of `p^n` circles and
/// count orbits by size exponent and q-degree.
pub fn orbit_census(p: u64, n: u32, k: u32) -> Result<Vec<LaurentPoly>> {
    check_prime(p)?;
    let pn = p.pow(n) as usize;
    let total = pn * k as usize;
    if total > 20 {
        return Err(Error::Argument(format!("{total} circles is too many to enumerate")));
    }
    let rotate = |x: u32| -> u32 {
        // circle (orbit o, position i) sits at bit o * pn + i
        let mut y = 0u32;
        for o in 0..k as usize {
            let block = (x >> (o * pn)) & ((1u32 << pn) - 1);
            let r = ((block << 1) | (block >> (pn - 1))) & ((1u32 << pn) - 1);
            y |= r << (o * pn);
        }
        y
    };
    let mut out = vec![LaurentPoly::zero(); n as usize + 1];
    let mut seen = vec![false; 1usize << total];
    for x in 0..(1u32 << total) {
        if seen[x as usize] {
            continue;
        }
        let mut size = 0u64;
        let mut y = x;
        loop {
            seen[y as usize] = true;
            size += 1;
            y = rotate(y);
            if y == x {
                break;
            }
        }
        let s = (0..=n).find(|&s| p.pow(s) == size).expect("orbit size is a power of p");
        let ones = x.count_ones() as i64;
        out[s as usize].add_term(2 * ones - total as i64, int(1));
    }
    Ok(out)
}

/// `Ext^i_{Z[Z/p^m]}(Z[xi_{p^s}], Z[xi_{p^s}])`.
///
/// In positive even degrees this is `Z[xi]/(p^{m-s}(xi_p - 1))`, a quotient
/// of the totally ramified ring `Z[xi]` by `pi^e` with `pi = 1 - xi`,
/// `e = (m - s) phi(p^s) + p^{s-1}`; as a group it is
/// `sum_{k < phi} Z/p^{ceil((e - k) / phi)}`, of exponent `p^{m-s+1}`.
pub fn cyclic_group_cohomology(p: u64, m: u32, s: u32, i: u64) -> Result<AbGroup> {
    check_prime(p)?;
    if s > m {
        return Err(Error::Argument(format!("s = {s} exceeds m = {m}")));
    }
    let phi = euler_phi(p.pow(s));
    if i == 0 {
        return Ok(AbGroup::free(phi as usize));
    }
    if i % 2 == 1 {
        return Ok(AbGroup::zero());
    }
    if s == 0 {
        return Ok(AbGroup::from_cyclic(0, [int(p.pow(m) as i64)]));
    }
    let e = (m - s) as u64 * phi + p.pow(s - 1);
    let orders = (0..phi).map(|k| int(p.pow(e.saturating_sub(k).div_ceil(phi) as u32) as i64));
    Ok(AbGroup::from_cyclic(0, orders))
}

/// Exponent of the positive even-degree groups above.
pub fn cyclic_group_cohomology_exponent(p: u64, m: u32, s: u32) -> u64 {
    if s == 0 { p.pow(m) } else { p.pow(m - s + 1) }
}

/// Restriction of `Z[xi_{p^{n-s}}]` from `Z/p^n` to its subgroup `Z/p^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Restricted {
    /// Trivial module `Z^rank`.
    Trivial { rank: u64 },
    /// `Z[xi_order]^copies`.
    Cyclotomic { order: u64, copies: u64 },
}

pub fn restrict_cyclotomic(p: u64, n: u32, s: u32, m: u32) -> Result<Restricted> {
    check_prime(p)?;
    if s > n || m > n {
        return Err(Error::Argument(format!("need s, m <= n, got s = {s}, m = {m}, n = {n}")));
    }
    Ok(if m <= s {
        Restricted::Trivial { rank: euler_phi(p.pow(n - s)) }
    } else {
        Restricted::Cyclotomic { order: p.pow(m - s), copies: p.pow(n - m) }
    })
}

/// `Ext^i_{Z[H]}(N, Z)` for `H = Z/p^h` acting trivially on `Z` and `N` the
/// restriction of a cyclotomic module, one copy.
fn ext_piece(p: u64, h: u32, nontrivial: bool, i: i64) -> AbGroup {
    if nontrivial {
        // Phi(1) = p, cofactor(1) = 0
        if i % 2 == 1 { AbGroup::from_cyclic(0, [int(p as i64)]) } else { AbGroup::zero() }
    } else if i == 0 {
        AbGroup::free(1)
    } else if i % 2 == 0 && h > 0 {
        AbGroup::from_cyclic(0, [int(p.pow(h) as i64)])
    } else {
        AbGroup::zero()
    }
}

/// Equivariant Khovanov homology of the crossingless `p^n`-periodic trivial
/// link with `k` free orbits and `f` circles around the axis, for
/// `d = p^{n-u}`, homological degrees `0..=window`.
pub fn trivial_link_ekh(p: u64, n: u32, k: u32, f: u32, u: u32, window: i64) -> Result<GradedGroups> {
    check_prime(p)?;
    if u > n {
        return Err(Error::Argument(format!("u = {u} exceeds n = {n}")));
    }
    let a = n - u;
    let mut out = GradedGroups::default();
    for s in 0..=n {
        let qd = qdim_m(p, n, s, k, f)?;
        // summand Ind_{Z/p^{n-s}} M_s; Shapiro reduces to the stabilizer
        let (nontrivial, copies) = if a <= s { (false, euler_phi(p.pow(a))) } else { (true, p.pow(s)) };
        for (j, c) in qd.terms() {
            let mult = crate::num::to_i64(c).expect("small coefficient") as usize * copies as usize;
            for i in 0..=window {
                let g = ext_piece(p, n - s, nontrivial, i).power(mult);
                let cur = out.get(i, j);
                out.insert(i, j, cur.direct_sum(&g));
            }
        }
    }
    Ok(out)
}

/// `KhP(T(m, 2))`.
pub fn torus_khp(m: u64) -> Result<BiPoly> {
    if m < 2 {
        return Err(Error::Argument(format!("T({m}, 2) needs m >= 2")));
    }
    let k = (m / 2) as i64;
    let mut out = BiPoly::zero();
    let geom = |start_q: i64, terms: i64, out: &mut BiPoly| {
        // t^2 q^start (1 + t q^4) sum_j t^{2j} q^{4j}
        for j in 0..terms {
            out.add_term(2 + 2 * j, start_q + 4 * j, int(1));
            out.add_term(3 + 2 * j, start_q + 4 + 4 * j, int(1));
        }
    };
    if m % 2 == 0 {
        out.add_term(0, 2 * k - 2, int(1));
        out.add_term(0, 2 * k, int(1));
        geom(2 * k + 2, k - 1, &mut out);
        out.add_term(2 * k, 6 * k - 2, int(1));
        out.add_term(2 * k, 6 * k, int(1));
    } else {
        out.add_term(0, 2 * k - 1, int(1));
        out.add_term(0, 2 * k + 1, int(1));
        geom(2 * k + 3, k, &mut out);
    }
    Ok(out)
}

/// `(KhP_{2,1}, KhP_{2,2})` of the 2-periodic `T(m, 2)`.
pub fn torus_ekh2(m: u64) -> Result<(BiPoly, BiPoly)> {
    let kh = torus_khp(m)?;
    if m % 2 == 1 {
        return Ok((kh, BiPoly::zero()));
    }
    let k = (m / 2) as i64;
    let top = BiPoly::monomial(int(1), 2 * k, 6 * k);
    Ok((kh.sub(&top), top))
}

/// Unnormalized Jones polynomial of `T(m, 2)` for `m >= 0` from the
/// skein relation `q^{-2} J(L_+) - q^2 J(L_-) = (q^{-1} - q) J(L_0)`.
pub fn torus_jones_skein(m: u64) -> LaurentPoly {
    let mut prev2 = LaurentPoly::unknot().pow(2);
    let mut prev1 = LaurentPoly::unknot();
    if m == 0 {
        return prev2;
    }
    let step = LaurentPoly::from_pairs(&[(1, -1), (-1, 1)]);
    for _ in 2..=m {
        // J_+ = q^2 ((q^{-1} - q) J_0 + q^2 J_-)
        let next = step.mul(&prev1).add(&prev2.shift(2)).shift(2);
        prev2 = prev1;
        prev1 = next;
    }
    prev1
}

/// Hopf link values for the 2-periodic diagram.
pub fn hopf_polynomials() -> BTreeMap<usize, BiPoly> {
    BTreeMap::from([
        (1, BiPoly::from_triples(&[(1, 0, 0), (1, 0, 2), (1, 2, 4)])),
        (2, BiPoly::from_triples(&[(1, 2, 6)])),
    ])
}
