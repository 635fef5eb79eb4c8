//! The orbit-resolution spectral sequence over `Q`.
//!
//! For a set `X` of crossings, tag every generator of `CKh(D)` with the
//! number of 1-smoothings it has on `X`; `F_p` is spanned by tags `>= p`.
//! After filtered elimination the differential strictly raises the tag, so
//! the remaining generators form a basis of `E_1`, and a persistence
//! pairing of that basis gives every later page: a pair whose tags differ
//! by `g` is cancelled by `d_g`.

use crate::diagram::PeriodicDiagram;
use crate::equivariant::project_sector;
use crate::error::{Error, Result};
use crate::homalg::group_ring::idempotent;
use crate::homalg::{Complex, GradedGroups, ReduceOpts};
use crate::khovanov::{build_complex, khovanov_homology, BuildOpts, KhComplex};
use crate::num::{Rat, Ring};
use rayon::prelude::*;
use std::collections::BTreeMap;

/// Entries of one page: `(p, j, q) -> dim_Q`, total degree `p + j`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SsPage {
    pub r: usize,
    pub entries: BTreeMap<(i64, i64, i64), usize>,
}

impl SsPage {
    pub fn nonzero(&self) -> impl Iterator<Item = ((i64, i64, i64), usize)> + '_ {
        self.entries.iter().filter(|(_, v)| **v > 0).map(|(k, v)| (*k, *v))
    }

    /// Dimensions summed over the filtration, keyed by `(total degree, q)`.
    pub fn totals(&self) -> BTreeMap<(i64, i64), usize> {
        let mut t = BTreeMap::new();
        for ((p, j, q), v) in self.nonzero() {
            *t.entry((p + j, q)).or_insert(0) += v;
        }
        t
    }

    fn add(&mut self, key: (i64, i64, i64), v: usize) {
        if v > 0 {
            *self.entries.entry(key).or_insert(0) += v;
        }
    }
}

/// Where each surviving `E_1` generator ends up.
#[derive(Clone, Copy, Debug)]
struct Fate {
    p: i64,
    h: i64,
    q: i64,
    /// Tag difference of its pair, `None` if it survives to `E_inf`.
    gap: Option<u32>,
}

#[derive(Clone, Debug)]
pub struct SpectralSequence {
    /// Crossings of `X` in the global order.
    pub x: Vec<usize>,
    /// `E_1, E_2, ...` up to the first page equal to `E_inf`.
    pub pages: Vec<SsPage>,
}

impl SpectralSequence {
    fn from_fates(x: Vec<usize>, fates: &[Fate]) -> Self {
        let last = fates.iter().filter_map(|f| f.gap).max().unwrap_or(0) as usize;
        let pages = (1..=last.max(1) + if last == 0 { 0 } else { 1 })
            .map(|r| {
                let mut pg = SsPage { r, entries: BTreeMap::new() };
                for f in fates {
                    if f.gap.map_or(true, |g| g as usize >= r) {
                        pg.add((f.p, f.h - f.p, f.q), 1);
                    }
                }
                pg
            })
            .collect();
        SpectralSequence { x, pages }
    }

    pub fn page(&self, r: usize) -> &SsPage {
        let i = r.max(1).min(self.pages.len()) - 1;
        &self.pages[i]
    }

    pub fn e_infinity(&self) -> &SsPage {
        self.pages.last().expect("at least one page")
    }
}

/// Global indices of the crossings in the orbit of tangle crossing `k`.
pub fn orbit_crossings(d: &PeriodicDiagram, k: usize) -> Result<Vec<usize>> {
    if k >= d.m() {
        return Err(Error::Argument(format!("crossing {k} is not in the quotient tangle ({} crossings)", d.m())));
    }
    Ok((0..d.n).map(|i| i * d.m() + k).collect())
}

fn mask_of(d: &PeriodicDiagram, x: &[usize]) -> Result<u64> {
    let mut m = 0u64;
    for &g in x {
        if g >= d.num_crossings() {
            return Err(Error::Argument(format!("crossing {g} does not exist")));
        }
        m |= 1 << g;
    }
    Ok(m)
}

/// `F_p` is a subcomplex for every `p`, and is closed under the action when
/// the complex has one.
pub fn check_filtration(kc: &KhComplex) -> Result<()> {
    for (j, c) in &kc.blocks {
        let tags = c.tags.as_ref().ok_or_else(|| Error::Argument("complex has no filtration".into()))?;
        for (k, m) in c.d.iter().enumerate() {
            for (r, col, _) in m.triplets() {
                if tags[k + 1][r] < tags[k][col] {
                    return Err(Error::Invariant(format!("d lowers the filtration at q = {j}")));
                }
            }
        }
        if let Some(act) = &c.action {
            for (k, a) in act.iter().enumerate() {
                if a.iter().enumerate().any(|(x, (y, _))| tags[k][*y as usize] != tags[k][x]) {
                    return Err(Error::Invariant(format!("psi does not preserve the filtration at q = {j}")));
                }
            }
        }
    }
    Ok(())
}

/// Persistence pairing of a filtered rational complex with tags.
fn fates(c: &Complex<Rat>, q: i64) -> Result<Vec<Fate>> {
    let c = c.reduce(ReduceOpts { equivariant: false, filtered: true });
    let tags = c.tags.as_ref().expect("tagged complex");
    // generators in filtration order: higher tags first
    let mut order: Vec<(usize, usize)> = (0..c.dims.len()).flat_map(|k| (0..c.dims[k]).map(move |x| (k, x))).collect();
    order.sort_by_key(|&(k, x)| (std::cmp::Reverse(tags[k][x]), k, x));
    let mut time: Vec<Vec<usize>> = c.dims.iter().map(|&n| vec![0; n]).collect();
    for (t, &(k, x)) in order.iter().enumerate() {
        time[k][x] = t;
    }
    let mut pivot_of: BTreeMap<usize, BTreeMap<usize, Rat>> = BTreeMap::new();
    let mut partner: Vec<Option<usize>> = vec![None; order.len()];
    for (t, &(k, x)) in order.iter().enumerate() {
        if k + 1 >= c.dims.len() {
            continue;
        }
        let mut col: BTreeMap<usize, Rat> = c.d[k].data[x].iter().map(|(r, v)| (time[k + 1][*r], v.clone())).collect();
        while let Some((&low, lv)) = col.iter().next_back() {
            let Some(other) = pivot_of.get(&low) else { break };
            let f = lv.clone() / other[&low].clone();
            for (r, v) in other {
                let e = col.entry(*r).or_insert(Rat::ZERO);
                *e -= &f * v;
                if e.is_zero() {
                    col.remove(r);
                }
            }
        }
        if let Some((&low, _)) = col.iter().next_back() {
            partner[t] = Some(low);
            partner[low] = Some(t);
            pivot_of.insert(low, col);
        }
    }
    let mut out = Vec::with_capacity(order.len());
    for (t, &(k, x)) in order.iter().enumerate() {
        let tag = tags[k][x];
        let gap = match partner[t] {
            None => None,
            Some(o) => {
                let (ko, xo) = order[o];
                let g = (tags[ko][xo] as i64 - tag as i64).unsigned_abs() as u32;
                if g == 0 {
                    return Err(Error::Invariant(format!("E_0 differential survived filtered elimination at q = {q}")));
                }
                Some(g)
            }
        };
        out.push(Fate { p: tag as i64, h: c.start + k as i64, q, gap });
    }
    Ok(out)
}

/// All pages of the spectral sequence of the filtration by `X`.
pub fn run_pages(d: &PeriodicDiagram, x: &[usize]) -> Result<SpectralSequence> {
    let mask = mask_of(d, x)?;
    let kc = build_complex(d, BuildOpts { action: false, filtration: Some(mask) })?;
    check_filtration(&kc)?;
    let all: Vec<Vec<Fate>> = kc
        .blocks
        .par_iter()
        .map(|(&q, c)| fates(&c.to_rat(), q))
        .collect::<Result<_>>()?;
    Ok(SpectralSequence::from_fates(x.to_vec(), &all.concat()))
}

pub fn e1_page(d: &PeriodicDiagram, x: &[usize]) -> Result<SsPage> {
    Ok(run_pages(d, x)?.page(1).clone())
}

/// Filtration by a crossing orbit of a 2-periodic diagram, restricted to the
/// sector `d` of the action (`d = 1` invariant part, `d = 2` anti-invariant).
pub fn run_sector_pages(dg: &PeriodicDiagram, orbit: usize, sector: usize) -> Result<SpectralSequence> {
    if dg.n != 2 {
        return Err(Error::Argument(format!("equivariant pages need period 2, got {}", dg.n)));
    }
    if sector != 1 && sector != 2 {
        return Err(Error::NotDivisor { d: sector as u64, n: 2 });
    }
    let x = orbit_crossings(dg, orbit)?;
    let mask = mask_of(dg, &x)?;
    let kc = build_complex(dg, BuildOpts { action: true, filtration: Some(mask) })?;
    check_filtration(&kc)?;
    let e = idempotent(sector, 2)?;
    let all: Vec<Vec<Fate>> = kc
        .blocks
        .par_iter()
        .map(|(&q, c)| {
            let red = c.reduce(ReduceOpts { equivariant: true, filtered: true });
            fates(&project_sector(&red, &e), q)
        })
        .collect::<Result<_>>()?;
    Ok(SpectralSequence::from_fates(x, &all.concat()))
}

/// One resolution `D_beta` of `D` at the crossings of `X`.
#[derive(Clone, Debug)]
pub struct ResolutionTerm {
    /// Bit `i` is the smoothing of the `i`-th crossing of `X`.
    pub beta: u64,
    pub diagram: PeriodicDiagram,
    /// `n_-(D_beta) - n_-(D)` for the canonical orientation of `D_beta`.
    pub c: i64,
}

impl ResolutionTerm {
    pub fn column(&self) -> i64 {
        self.beta.count_ones() as i64
    }

    /// `(homological, quantum)` shift placing `Kh(D_beta)` in `E_1`.
    pub fn shift(&self, x_len: usize) -> (i64, i64) {
        (self.c, self.column() + 3 * self.c + x_len as i64)
    }
}

pub fn resolutions(d: &PeriodicDiagram, x: &[usize]) -> Result<Vec<ResolutionTerm>> {
    mask_of(d, x)?;
    (0..1u64 << x.len())
        .map(|beta| {
            let choice: Vec<(usize, u8)> = x.iter().enumerate().map(|(i, &g)| (g, (beta >> i & 1) as u8)).collect();
            let diagram = d.smooth_flat(&choice)?;
            let c = diagram.n_minus() as i64 - d.n_minus() as i64;
            Ok(ResolutionTerm { beta, diagram, c })
        })
        .collect()
}

fn place(page: &mut SsPage, g: &GradedGroups, p: i64, (hs, qs): (i64, i64)) {
    for ((i, j), a) in g.iter() {
        page.add((p, i + hs, j + qs), a.free);
    }
}

/// `E_1` predicted from the Khovanov homology of every resolution.
pub fn e1_descriptor(d: &PeriodicDiagram, x: &[usize]) -> Result<SsPage> {
    let mut page = SsPage { r: 1, entries: BTreeMap::new() };
    for t in resolutions(d, x)? {
        let kh = khovanov_homology(&t.diagram, Ring::Q)?;
        place(&mut page, &kh, t.column(), t.shift(x.len()));
    }
    Ok(page)
}

/// Twist parities `(tw_00, tw_11)`: the sector of `D_alpha` feeding sector
/// `s` is swapped when the twist is odd.
pub fn sector_twists(c00: i64, c11: i64) -> (bool, bool) {
    (c00.rem_euclid(4) == 2, c11.rem_euclid(4) == 0)
}

/// Equivariant `E_1` for a 2-periodic diagram filtered by a crossing orbit:
/// column 0 and 2 are equivariant homologies of the periodic resolutions
/// `D_00`, `D_11`, column 1 is `Kh(D_01)` in each sector.
pub fn equivariant_e1_2periodic(dg: &PeriodicDiagram, orbit: usize, sector: usize) -> Result<SsPage> {
    use crate::equivariant::{prepare, rational_equivariant};
    if dg.n != 2 {
        return Err(Error::Argument(format!("equivariant pages need period 2, got {}", dg.n)));
    }
    if sector != 1 && sector != 2 {
        return Err(Error::NotDivisor { d: sector as u64, n: 2 });
    }
    let x = orbit_crossings(dg, orbit)?;
    let nm = dg.n_minus() as i64;
    let d00 = dg.smooth_periodic(&[(orbit, 0)])?;
    let d11 = dg.smooth_periodic(&[(orbit, 1)])?;
    let d01 = dg.smooth_flat(&[(x[0], 0), (x[1], 1)])?;
    let (c00, c01, c11) = (d00.n_minus() as i64 - nm, d01.n_minus() as i64 - nm, d11.n_minus() as i64 - nm);
    let (tw00, tw11) = sector_twists(c00, c11);
    let other = |tw: bool| if tw { 3 - sector } else { sector };
    let mut page = SsPage { r: 1, entries: BTreeMap::new() };
    place(&mut page, &rational_equivariant(&prepare(&d00)?, other(tw00))?, 0, (c00, 3 * c00 + 2));
    place(&mut page, &khovanov_homology(&d01, Ring::Q)?, 1, (c01, 1 + 3 * c01 + 2));
    place(&mut page, &rational_equivariant(&prepare(&d11)?, other(tw11))?, 2, (c11, 2 + 3 * c11 + 2));
    Ok(page)
}

/// Sum of `E_1` bookkeeping: `sum_beta CKh(D_beta)` shifted has the graded
/// ranks of `CKh(D)`.
pub fn check_total_complex(d: &PeriodicDiagram, x: &[usize]) -> Result<()> {
    let dims = |kc: &KhComplex, hs: i64, qs: i64| {
        let mut m: BTreeMap<(i64, i64), usize> = BTreeMap::new();
        for (q, c) in &kc.blocks {
            for (k, &n) in c.dims.iter().enumerate() {
                if n > 0 {
                    *m.entry((c.start + k as i64 + hs, q + qs)).or_insert(0) += n;
                }
            }
        }
        m
    };
    let whole = dims(&build_complex(d, BuildOpts::default())?, 0, 0);
    let mut sum: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    for t in resolutions(d, x)? {
        let (hs, qs) = t.shift(x.len());
        for (k, v) in dims(&build_complex(&t.diagram, BuildOpts::default())?, hs + t.column(), qs) {
            *sum.entry(k).or_insert(0) += v;
        }
    }
    if whole != sum {
        return Err(Error::Invariant("resolution bicomplex does not have the ranks of CKh(D)".into()));
    }
    Ok(())
}

/// `E_inf` summed over the filtration equals `dim_Q Kh(D; Q)`.
pub fn check_abutment(ss: &SpectralSequence, kh: &GradedGroups) -> Result<()> {
    let mut want = BTreeMap::new();
    for ((i, j), a) in kh.iter() {
        if a.free > 0 {
            want.insert((i, j), a.free);
        }
    }
    if ss.e_infinity().totals() != want {
        return Err(Error::Invariant("E_inf does not add up to the rational homology".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::equivariant::{prepare, rational_equivariant};

    fn hopf() -> PeriodicDiagram {
        corpus::torus_2periodic(2)
    }

    #[test]
    fn hopf_full_filtration() {
        let d = hopf();
        let ss = run_pages(&d, &[0, 1]).unwrap();
        let e1 = ss.page(1);
        assert_eq!(*e1, e1_descriptor(&d, &[0, 1]).unwrap());
        check_abutment(&ss, &khovanov_homology(&d, Ring::Q).unwrap()).unwrap();
        let t: Vec<_> = ss.e_infinity().totals().into_keys().collect();
        assert_eq!(t, vec![(0, 0), (0, 2), (2, 4), (2, 6)]);
        check_total_complex(&d, &[0, 1]).unwrap();
    }

    #[test]
    fn empty_filtration_is_degenerate() {
        let d = corpus::torus_cyclic(3);
        let ss = run_pages(&d, &[]).unwrap();
        assert_eq!(ss.pages.len(), 1);
        check_abutment(&ss, &khovanov_homology(&d, Ring::Q).unwrap()).unwrap();
    }

    #[test]
    fn single_crossing_is_a_cone() {
        let d = corpus::torus_2periodic(3);
        let ss = run_pages(&d, &[1]).unwrap();
        assert_eq!(*ss.page(1), e1_descriptor(&d, &[1]).unwrap());
        assert!(ss.pages.len() <= 2);
        check_abutment(&ss, &khovanov_homology(&d, Ring::Q).unwrap()).unwrap();
    }

    #[test]
    fn sectors_split_the_pages() {
        for m in [2, 3, 4] {
            let d = corpus::torus_2periodic(m);
            let k = m - 2;
            let x = orbit_crossings(&d, k).unwrap();
            let whole = run_pages(&d, &x).unwrap();
            let p = prepare(&d).unwrap();
            let mut sum = SsPage { r: 1, entries: BTreeMap::new() };
            for s in [1, 2] {
                let ss = run_sector_pages(&d, k, s).unwrap();
                assert_eq!(*ss.page(1), equivariant_e1_2periodic(&d, k, s).unwrap(), "m = {m}, sector {s}");
                check_abutment(&ss, &rational_equivariant(&p, s).unwrap()).unwrap();
                for (key, v) in ss.page(1).nonzero() {
                    sum.add(key, v);
                }
            }
            assert_eq!(sum, *whole.page(1));
        }
    }
}
