//! Equivariant Khovanov homology: `Ext_{Z[Z/n]}(Z[xi_d], CKh)` through a
//! periodic projective resolution, `Hom` cohomology, and the rational
//! splitting by idempotents.

use crate::action::action;
use crate::diagram::PeriodicDiagram;
use crate::error::{Error, Result};
use crate::homalg::group_ring::{cofactor, cyclotomic, idempotent, GroupRingElt};
use crate::homalg::rref::rref;
use crate::homalg::{smith_normal_form, AbGroup, Complex, GradedGroups, ReduceOpts, SparseMat};
use crate::khovanov::{complex_homology, KhComplex};
use crate::num::{euler_phi, int, prime_factors, prime_power, Int, Rat, Ring};
use crate::poly::BiPoly;
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use std::collections::BTreeMap;

/// `... -> R -> R -> R -> Z[xi_d] -> 0` over `R = Z[Z/n]`; the map
/// `P_{k+1} -> P_k` is multiplication by `maps[k]`.
#[derive(Clone, Debug)]
pub struct PeriodicResolution {
    pub n: usize,
    pub d: usize,
    pub maps: Vec<GroupRingElt>,
}

/// Build the resolution and check exactness on the underlying lattices.
pub fn build_resolution(n: usize, d: usize, length: usize) -> Result<PeriodicResolution> {
    let g = GroupRingElt::from_poly(n, &cofactor(d, n)?);
    let phi = GroupRingElt::from_poly(n, &cyclotomic(d));
    // ker(.g) = im(.phi) and ker(.phi) = im(.g) as lattices
    for (a, b) in [(&phi, &g), (&g, &phi)] {
        let (ma, mb) = (a.mult_matrix(), b.mult_matrix());
        let sa = smith_normal_form(&ma, false);
        let sb = smith_normal_form(&mb, false);
        let ok = mb.mul(&ma).is_zero() && sa.rank() + sb.rank() == n && sa.diag.iter().all(|x| *x == int(1));
        if !ok {
            return Err(Error::Invariant(format!("resolution of Z[xi_{d}] over Z[Z/{n}] is not exact")));
        }
    }
    let maps = (0..length).map(|k| if k % 2 == 0 { phi.clone() } else { g.clone() }).collect();
    Ok(PeriodicResolution { n, d, maps })
}

/// The action complex after equivariant Gaussian elimination, one block per
/// quantum degree. Elimination cancels whole orbits of pairs, so the result
/// is equivariantly homotopy equivalent to the original complex.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub n: usize,
    pub n_minus: usize,
    pub n_plus: usize,
    pub crossings: usize,
    pub full: KhComplex,
    pub reduced: BTreeMap<i64, Complex<Int>>,
}

pub fn prepare(d: &PeriodicDiagram) -> Result<Prepared> {
    let full = action(d)?;
    prepare_complex(full)
}

pub fn prepare_complex(full: KhComplex) -> Result<Prepared> {
    let n = full.n;
    let reduced: Vec<(i64, Complex<Int>)> = full
        .blocks
        .par_iter()
        .map(|(&j, c)| (j, c.reduce(ReduceOpts { equivariant: true, filtered: false })))
        .collect();
    log::debug!(
        "equivariant reduction: {} -> {} generators",
        full.total_rank(),
        reduced.iter().map(|(_, c)| c.total_rank()).sum::<usize>()
    );
    for (j, c) in &reduced {
        if !c.d_squared_is_zero() || !c.action_commutes() || !c.action_has_order_dividing(n) {
            return Err(Error::Invariant(format!("equivariant reduction broke the module structure at q = {j}")));
        }
    }
    Ok(Prepared {
        n,
        n_minus: full.n_minus,
        n_plus: full.n_plus,
        crossings: full.crossings,
        reduced: reduced.into_iter().collect(),
        full,
    })
}

impl Prepared {
    pub fn default_window(&self) -> i64 {
        2 * self.crossings as i64 + 6
    }
}

/// Groups `Kh^{i,j,d}` for one `d` and a window of homological degrees.
#[derive(Clone, Debug)]
pub struct EquivariantGroups {
    pub n: usize,
    pub d: usize,
    pub window: i64,
    pub groups: GradedGroups,
}

/// `Ext^i_{Z[Z/n]}(Z[xi_d], CKh^{*,j})` for `i <= window`.
pub fn ext_groups(p: &Prepared, d: usize, window: i64) -> Result<EquivariantGroups> {
    let n = p.n;
    if d == 0 || n % d != 0 {
        return Err(Error::NotDivisor { d: d as u64, n: n as u64 });
    }
    let bottom = -(p.n_minus as i64);
    let cols = (window + 1 - bottom).max(0) as usize + 1;
    let res = build_resolution(n, d, cols)?;
    let f: [Vec<Int>; 2] = [res.maps[0].coeffs.clone(), res.maps.get(1).map_or(vec![], |g| g.coeffs.clone())];
    let results: Vec<(i64, Vec<(i64, AbGroup)>)> = p
        .reduced
        .par_iter()
        .map(|(&j, c)| (j, ext_block(c, &f, cols, window)))
        .collect();
    log::debug!("ext groups for d = {d}: {} columns over {} quantum degrees", cols, p.reduced.len());
    let mut groups = GradedGroups::default();
    for (j, hs) in results {
        for (i, g) in hs {
            groups.insert(i, j, g);
        }
    }
    Ok(EquivariantGroups { n, d, window, groups })
}

/// Total complex of `Hom(P_p, C^q)` for `p < cols`, total degree `<= window + 1`.
fn ext_block(c: &Complex<Int>, f: &[Vec<Int>; 2], cols: usize, window: i64) -> Vec<(i64, AbGroup)> {
    if c.total_rank() == 0 {
        return vec![];
    }
    let nq = c.dims.len();
    let hmaps: Vec<[SparseMat<Int>; 2]> = (0..nq)
        .map(|k| {
            let g = if f[1].is_empty() { SparseMat::zeros(c.dims[k], c.dims[k]) } else { c.eval_action(k, &f[1]) };
            [c.eval_action(k, &f[0]), g]
        })
        .collect();
    let top = window + 1;
    let bottom = c.start;
    if top < bottom {
        return vec![];
    }
    let ntot = (top - bottom + 1) as usize;
    // offsets of (p, k) inside total degree m = bottom + p + k
    let mut offs: FxHashMap<(usize, usize), usize> = FxHashMap::default();
    let mut dims = vec![0usize; ntot];
    for m in 0..ntot {
        for k in 0..nq.min(m + 1) {
            let pcol = m - k;
            if pcol < cols {
                offs.insert((pcol, k), dims[m]);
                dims[m] += c.dims[k];
            }
        }
    }
    let mut trips: Vec<Vec<(usize, usize, Int)>> = vec![vec![]; ntot.saturating_sub(1)];
    for m in 0..ntot.saturating_sub(1) {
        for k in 0..nq.min(m + 1) {
            let pcol = m - k;
            let Some(&src) = offs.get(&(pcol, k)) else { continue };
            // horizontal: f_p(psi) into (p + 1, k)
            if let Some(&dst) = offs.get(&(pcol + 1, k)) {
                for (r, col, v) in hmaps[k][pcol % 2].triplets() {
                    trips[m].push((dst + r, src + col, v.clone()));
                }
            }
            // vertical: (-1)^p d into (p, k + 1)
            if k + 1 < nq {
                if let Some(&dst) = offs.get(&(pcol, k + 1)) {
                    for (r, col, v) in c.d[k].triplets() {
                        let v = if pcol % 2 == 0 { v.clone() } else { -v };
                        trips[m].push((dst + r, src + col, v));
                    }
                }
            }
        }
    }
    let dmats: Vec<SparseMat<Int>> = trips
        .into_iter()
        .enumerate()
        .map(|(m, t)| SparseMat::from_triplets(dims[m + 1], dims[m], t))
        .collect();
    let tot = Complex::new(bottom, dims, dmats);
    debug_assert!(tot.d_squared_is_zero());
    tot.homology()
        .into_iter()
        .enumerate()
        .map(|(m, g)| (bottom + m as i64, g))
        .filter(|(i, _)| *i <= window)
        .collect()
}

/// Invariant subcomplex `{x : psi x = eps x}` in one block, on orbit sums.
pub fn invariant_subcomplex(c: &Complex<Int>, eps: i8) -> Complex<Int> {
    let nq = c.dims.len();
    let mut reps: Vec<Vec<(u32, Vec<(u32, i8)>)>> = Vec::with_capacity(nq);
    let mut coord: Vec<FxHashMap<u32, usize>> = Vec::with_capacity(nq);
    for k in 0..nq {
        let act = &c.action.as_ref().expect("complex has an action")[k];
        let mut seen = vec![false; c.dims[k]];
        let mut list = Vec::new();
        let mut cmap = FxHashMap::default();
        for x in 0..c.dims[k] {
            if seen[x] {
                continue;
            }
            // walk the orbit accumulating eps^a * sign
            let mut members = vec![(x as u32, 1i8)];
            seen[x] = true;
            let (mut y, mut s) = act[x];
            let mut e = eps;
            while y as usize != x {
                seen[y as usize] = true;
                members.push((y, s * e));
                let (t, sg) = act[y as usize];
                y = t;
                s *= sg;
                e *= eps;
            }
            // psi^size x = s x must equal eps^size x
            if s == e {
                cmap.insert(x as u32, list.len());
                list.push((x as u32, members));
            }
        }
        reps.push(list);
        coord.push(cmap);
    }
    let mut ds = Vec::with_capacity(nq.saturating_sub(1));
    for k in 0..nq.saturating_sub(1) {
        let dk = &c.d[k];
        let mut ts = Vec::new();
        for (col, (_, members)) in reps[k].iter().enumerate() {
            let mut acc: FxHashMap<u32, Int> = FxHashMap::default();
            for &(g, s) in members {
                for (r, v) in &dk.data[g as usize] {
                    let e = acc.entry(*r as u32).or_insert_with(|| int(0));
                    *e += if s > 0 { v.clone() } else { -v };
                }
            }
            for (r, v) in acc {
                if let Some(&row) = coord[k + 1].get(&r) {
                    ts.push((row, col, v));
                }
            }
        }
        ds.push(SparseMat::from_triplets(reps[k + 1].len(), reps[k].len(), ts));
    }
    Complex::new(c.start, reps.iter().map(|r| r.len()).collect(), ds)
}

/// `H^*(Hom_{Z[Z/n]}(Z_eps, CKh(D)))` where `psi` acts on `Z_eps` by `eps`.
pub fn hom_cohomology(p: &Prepared, eps: i8) -> GradedGroups {
    let mut g = GradedGroups::default();
    let res: Vec<(i64, Complex<Int>)> =
        p.full.blocks.iter().map(|(&j, c)| (j, invariant_subcomplex(c, eps))).collect();
    for (j, c) in res {
        for (k, h) in c.homology().into_iter().enumerate() {
            g.insert(c.start + k as i64, j, h);
        }
    }
    g
}

/// The image of `e_d(psi)` in one block, as a rational complex on an
/// explicit basis of the image (filtration tags carried along).
pub fn project_sector(c: &Complex<Int>, e: &[Rat]) -> Complex<Rat> {
    let n = e.len();
    let nq = c.dims.len();
    struct OrbitBasis {
        members: Vec<(u32, i8)>,
        vecs: Vec<Vec<Rat>>,
        pivots: Vec<usize>,
    }
    let mut bases: Vec<Vec<OrbitBasis>> = Vec::with_capacity(nq);
    let mut where_: Vec<FxHashMap<u32, (usize, usize)>> = Vec::with_capacity(nq);
    for k in 0..nq {
        let act = &c.action.as_ref().expect("complex has an action")[k];
        let mut seen = vec![false; c.dims[k]];
        let mut list = Vec::new();
        let mut pos = FxHashMap::default();
        for x in 0..c.dims[k] {
            if seen[x] {
                continue;
            }
            let mut members = vec![(x as u32, 1i8)];
            seen[x] = true;
            let (mut y, mut s) = act[x];
            while y as usize != x {
                seen[y as usize] = true;
                members.push((y, s));
                let (t, sg) = act[y as usize];
                y = t;
                s *= sg;
            }
            let delta = s;
            let size = members.len();
            // e(psi) b_a in the basis b_a = psi^a x
            let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(size);
            for a in 0..size {
                let mut v = vec![Rat::ZERO; size];
                for (m, cm) in e.iter().enumerate().take(n) {
                    if cm.is_zero() {
                        continue;
                    }
                    let t = a + m;
                    let wraps = t / size;
                    let sign = if delta < 0 && wraps % 2 == 1 { -cm.clone() } else { cm.clone() };
                    v[t % size] += sign;
                }
                rows.push(v);
            }
            let pivots = rref(&mut rows);
            for (a, &(g, _)) in members.iter().enumerate() {
                pos.insert(g, (list.len(), a));
            }
            list.push(OrbitBasis { members, vecs: rows, pivots });
        }
        bases.push(list);
        where_.push(pos);
    }
    // global index of each basis vector
    let mut index: Vec<Vec<usize>> = Vec::with_capacity(nq);
    let mut dims = Vec::with_capacity(nq);
    for list in &bases {
        let mut off = 0;
        let mut idx = Vec::with_capacity(list.len());
        for ob in list {
            idx.push(off);
            off += ob.vecs.len();
        }
        index.push(idx);
        dims.push(off);
    }
    let mut ds = Vec::with_capacity(nq.saturating_sub(1));
    for k in 0..nq.saturating_sub(1) {
        let dk = &c.d[k];
        let mut ts = Vec::new();
        for (oi, ob) in bases[k].iter().enumerate() {
            for (vi, v) in ob.vecs.iter().enumerate() {
                // image in generator coordinates
                let mut acc: FxHashMap<u32, Rat> = FxHashMap::default();
                for (a, coef) in v.iter().enumerate() {
                    if coef.is_zero() {
                        continue;
                    }
                    let (g, s) = ob.members[a];
                    let coef = if s > 0 { coef.clone() } else { -coef.clone() };
                    for (r, val) in &dk.data[g as usize] {
                        let e = acc.entry(*r as u32).or_insert(Rat::ZERO);
                        *e += &coef * Rat::from(val.clone());
                    }
                }
                // read coordinates at pivot positions of the target orbits
                let col = index[k][oi] + vi;
                for (r, val) in acc {
                    if val.is_zero() {
                        continue;
                    }
                    let (toi, a) = where_[k + 1][&r];
                    let tob = &bases[k + 1][toi];
                    if let Some(pi) = tob.pivots.iter().position(|&p| p == a) {
                        let s = tob.members[a].1;
                        let coordv = if s > 0 { val } else { -val };
                        ts.push((index[k + 1][toi] + pi, col, coordv));
                    }
                }
            }
        }
        ds.push(SparseMat::from_triplets(dims[k + 1], dims[k], ts));
    }
    let mut out = Complex::new(c.start, dims, ds);
    // tags are constant on orbits
    if let Some(tags) = &c.tags {
        out.tags = Some(
            bases
                .iter()
                .enumerate()
                .map(|(k, list)| {
                    list.iter()
                        .flat_map(|ob| std::iter::repeat(tags[k][ob.members[0].0 as usize]).take(ob.vecs.len()))
                        .collect()
                })
                .collect(),
        );
    }
    out
}

/// Rational dimensions of `Kh^{i,j,d}` (over `Q`, before dividing by `phi(d)`).
pub fn rational_equivariant(p: &Prepared, d: usize) -> Result<GradedGroups> {
    let n = p.n;
    let e = idempotent(d, n)?;
    let res: Vec<(i64, i64, Vec<usize>)> = p
        .reduced
        .par_iter()
        .map(|(&j, c)| {
            let pc = project_sector(c, &e);
            (j, pc.start, pc.betti())
        })
        .collect();
    let mut g = GradedGroups::default();
    for (j, start, b) in res {
        for (k, r) in b.into_iter().enumerate() {
            g.insert(start + k as i64, j, AbGroup::free(r));
        }
    }
    Ok(g)
}

/// `KhP_{n,d}`: Poincare polynomial with dimensions over `Q(xi_d)`.
pub fn equivariant_polynomial(p: &Prepared, d: usize) -> Result<BiPoly> {
    let g = rational_equivariant(p, d)?;
    let phi = euler_phi(d as u64) as usize;
    let mut out = BiPoly::zero();
    for ((i, j), a) in g.iter() {
        if a.free % phi != 0 {
            return Err(Error::Invariant(format!("dim_Q Kh^{{{i},{j},{d}}} = {} is not divisible by phi(d) = {phi}", a.free)));
        }
        out.add_term(i, j, int((a.free / phi) as i64));
    }
    Ok(out)
}

/// All `KhP_{n,d}` for `d | n`.
pub fn equivariant_polynomials(p: &Prepared) -> Result<BTreeMap<usize, BiPoly>> {
    crate::num::divisors(p.n as u64).into_iter().map(|d| Ok((d as usize, equivariant_polynomial(p, d as usize)?))).collect()
}

#[derive(Clone, Debug, Default)]
pub struct ComparisonReport {
    pub checked: usize,
    pub mismatches: Vec<String>,
}

impl ComparisonReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Localization: summed over `d | n`, free ranks agree with `Kh`, and torsion
/// agrees after discarding primes dividing `n`.
pub fn total_comparison(p: &Prepared, window: i64) -> Result<ComparisonReport> {
    let n = p.n;
    let kh = complex_homology(&p.full, Ring::Z);
    let primes = prime_factors(n as u64);
    let mut sum = GradedGroups::default();
    for d in crate::num::divisors(n as u64) {
        let e = ext_groups(p, d as usize, window)?;
        for ((i, j), g) in e.groups.iter() {
            let cur = sum.get(i, j);
            sum.insert(i, j, cur.direct_sum(g));
        }
    }
    let mut rep = ComparisonReport::default();
    let keys: std::collections::BTreeSet<(i64, i64)> =
        kh.iter().map(|(k, _)| k).chain(sum.iter().map(|(k, _)| k)).filter(|(i, _)| *i <= window).collect();
    for (i, j) in keys {
        rep.checked += 1;
        let (a, b) = (kh.get(i, j), sum.get(i, j));
        if a.free != b.free || a.without_primes(&primes) != b.without_primes(&primes) {
            rep.mismatches.push(format!("({i},{j}): Kh = {a}, sum of equivariant = {b}"));
        }
    }
    Ok(rep)
}

#[derive(Clone, Debug, Default)]
pub struct TailReport {
    /// Highest homological degree with nonzero classical homology.
    pub m_top: i64,
    pub exponent_bound: u64,
    pub periodic_from: Option<i64>,
    pub failures: Vec<String>,
}

/// For `n = p^m` and `d = p^s`: above the classical top degree the groups are
/// 2-periodic and killed by `p^m` (`s = 0`) or `p^{m-s+1}` (`s > 0`).
pub fn tail_checks(p: &Prepared, d: usize, window: i64) -> Result<TailReport> {
    let (pr, m) = prime_power(p.n as u64).ok_or_else(|| Error::Argument(format!("{} is not a prime power", p.n)))?;
    let s = if d == 1 {
        0
    } else {
        match prime_power(d as u64) {
            Some((q, s)) if q == pr => s,
            _ => return Err(Error::NotDivisor { d: d as u64, n: p.n as u64 }),
        }
    };
    let kh = complex_homology(&p.full, Ring::Z);
    let m_top = kh.iter().map(|((i, _), _)| i).max().unwrap_or(0);
    if window < m_top + 4 {
        return Err(Error::Argument(format!("window {window} must reach at least m_top + 4 = {}", m_top + 4)));
    }
    let bound = if s == 0 { pr.pow(m) } else { pr.pow(m - s + 1) };
    let e = ext_groups(p, d, window)?;
    let mut rep = TailReport { m_top, exponent_bound: bound, periodic_from: Some(m_top + 1), failures: vec![] };
    let js: std::collections::BTreeSet<i64> = e.groups.iter().map(|((_, j), _)| j).collect();
    for i in m_top + 1..=window {
        for &j in &js {
            let g = e.groups.get(i, j);
            if g.free != 0 {
                rep.failures.push(format!("free part above the top degree at ({i},{j})"));
            }
            if !(int(bound as i64) % g.exponent()).is_zero() {
                rep.failures.push(format!("({i},{j}) = {g} is not killed by {bound}"));
            }
            if i + 2 <= window && g != e.groups.get(i + 2, j) {
                rep.failures.push(format!("({i},{j}) = {g} differs from ({},{j}) = {}", i + 2, e.groups.get(i + 2, j)));
            }
        }
    }
    if !rep.failures.is_empty() {
        rep.periodic_from = None;
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn tor(ts: &[i64]) -> AbGroup {
        AbGroup::from_cyclic(0, ts.iter().map(|&t| int(t)))
    }

    #[test]
    fn unknot_ext() {
        let p = prepare(&corpus::unknot(2)).unwrap();
        let e1 = ext_groups(&p, 1, 6).unwrap().groups;
        for j in [-1, 1] {
            assert_eq!(e1.get(0, j), AbGroup::free(1));
            assert_eq!(e1.get(1, j), AbGroup::zero());
            assert_eq!(e1.get(2, j), tor(&[2]));
            assert_eq!(e1.get(4, j), tor(&[2]));
        }
        let e2 = ext_groups(&p, 2, 6).unwrap().groups;
        for j in [-1, 1] {
            assert_eq!(e2.get(0, j), AbGroup::zero());
            assert_eq!(e2.get(1, j), tor(&[2]));
            assert_eq!(e2.get(2, j), AbGroup::zero());
            assert_eq!(e2.get(5, j), tor(&[2]));
        }
    }

    #[test]
    fn kinked_unknot_hom_minus() {
        let p = prepare(&corpus::kinked_unknot()).unwrap();
        let h = hom_cohomology(&p, -1);
        assert_eq!(h.get(2, 5), tor(&[2]));
        assert_eq!(h.get(2, 3), tor(&[2]));
    }

    #[test]
    fn hopf_sectors() {
        let p = prepare(&corpus::torus_2periodic(2)).unwrap();
        assert_eq!(equivariant_polynomial(&p, 1).unwrap(), BiPoly::from_triples(&[(1, 0, 0), (1, 0, 2), (1, 2, 4)]));
        assert_eq!(equivariant_polynomial(&p, 2).unwrap(), BiPoly::from_triples(&[(1, 2, 6)]));
    }

    #[test]
    fn resolution_is_exact() {
        for n in 1..=8 {
            for d in crate::num::divisors(n as u64) {
                build_resolution(n, d as usize, 4).unwrap();
            }
        }
    }
}
