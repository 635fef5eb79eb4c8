//! The Khovanov cochain complex of a periodic diagram.
//!
//! Generators are enhanced states `(s, L)` where bit `c` of `L` marks circle
//! `c` of the smoothing as labelled `X` (clear means `1`). Homological degree
//! is `r - n_-`, quantum degree `(#1 - #X) + r + n_+ - 2 n_-`. The edge
//! changing crossing `c` from 0 to 1 carries the sign `(-1)^k` with `k` the
//! number of 1-smoothed crossings after `c` in the global order.
//!
//! The rotation `psi` sends the content of copy `k + 1` to copy `k`, times
//! `(-1)^((n-1) n_-(T) + r_0 (r - r_0))` where `r_0` is the weight of copy 0.

use crate::diagram::{KauffmanState, PeriodicDiagram};
use crate::error::{Error, Result};
use crate::homalg::{AbGroup, Complex, GradedGroups, SignedPerm, SparseMat};
use crate::num::{int, Int, Ring};
use crate::poly::BiPoly;
use rayon::prelude::*;
use std::collections::BTreeMap;

/// The full complex split by quantum degree.
#[derive(Clone, Debug)]
pub struct KhComplex {
    pub n: usize,
    pub n_plus: usize,
    pub n_minus: usize,
    pub crossings: usize,
    /// One block per quantum degree; every block spans degrees `-n_-..=n_+`.
    pub blocks: BTreeMap<i64, Complex<Int>>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct BuildOpts {
    /// Attach the rotation action.
    pub action: bool,
    /// Tag each generator with the number of 1-smoothings inside this crossing mask.
    pub filtration: Option<u64>,
}

struct StateData {
    count: usize,
    circle_of_arc: Vec<u16>,
    /// Smallest arc of each circle.
    rep: Vec<usize>,
}

fn state_data(d: &PeriodicDiagram, s: KauffmanState, base: &crate::diagram::UnionFind) -> StateData {
    let (count, circle_of_arc) = d.circles(s, base);
    let mut rep = vec![usize::MAX; count];
    for (a, &c) in circle_of_arc.iter().enumerate() {
        if rep[c as usize] == usize::MAX {
            rep[c as usize] = a;
        }
    }
    StateData { count, circle_of_arc, rep }
}

pub fn homological_degree(d: &PeriodicDiagram, s: KauffmanState) -> i64 {
    s.count_ones() as i64 - d.n_minus() as i64
}

pub fn quantum_degree(d: &PeriodicDiagram, s: KauffmanState, circles: usize, label: u64) -> i64 {
    let x = label.count_ones() as i64;
    (circles as i64 - 2 * x) + s.count_ones() as i64 + d.n_plus() as i64 - 2 * d.n_minus() as i64
}

/// Sign of the edge that changes crossing `c` of state `s` from 0 to 1.
pub fn edge_sign(s: KauffmanState, c: usize) -> i8 {
    if (s >> (c + 1)).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Sign of the rotation on the enhanced states over `s`.
pub fn rotation_sign(d: &PeriodicDiagram, s: KauffmanState) -> i8 {
    let m = d.m();
    let r = s.count_ones() as usize;
    let r0 = if m == 0 { 0 } else { (s & ((1u64 << m) - 1)).count_ones() as usize };
    let e = (d.n - 1) * d.tangle.n_minus + r0 * (r - r0);
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Build the complex. Fails if some crossing change neither merges nor splits.
pub fn build_complex(d: &PeriodicDiagram, opts: BuildOpts) -> Result<KhComplex> {
    let nc = d.num_crossings();
    let nstates = 1usize << nc;
    let base = d.base_components();
    let data: Vec<StateData> = (0..nstates as u64).into_par_iter().map(|s| state_data(d, s, &base)).collect();
    let i0 = -(d.n_minus() as i64);
    let ndeg = nc + 1;
    // position of each generator inside its (j, i) group
    let mut offset = Vec::with_capacity(nstates + 1);
    let mut total = 0usize;
    for sd in &data {
        offset.push(total);
        total += 1usize << sd.count;
    }
    offset.push(total);
    let mut counts: BTreeMap<(i64, usize), u32> = BTreeMap::new();
    let mut pos = vec![0u32; total];
    for s in 0..nstates {
        let k = s.count_ones() as usize;
        for l in 0..(1u64 << data[s].count) {
            let j = quantum_degree(d, s as u64, data[s].count, l);
            let c = counts.entry((j, k)).or_insert(0);
            pos[offset[s] + l as usize] = *c;
            *c += 1;
        }
    }
    let js: Vec<i64> = counts.keys().map(|(j, _)| *j).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
    let dim = |j: i64, k: usize| counts.get(&(j, k)).copied().unwrap_or(0) as usize;
    // differential triplets per (j, k)
    let mut trip: BTreeMap<(i64, usize), Vec<(usize, usize, Int)>> = BTreeMap::new();
    for s in 0..nstates as u64 {
        let sd = &data[s as usize];
        let k = s.count_ones() as usize;
        for g in 0..nc {
            if s >> g & 1 == 1 {
                continue;
            }
            let t = s | 1 << g;
            let td = &data[t as usize];
            let sign = edge_sign(s, g) as i64;
            let phi: Vec<u16> = sd.rep.iter().map(|&a| td.circle_of_arc[a]).collect();
            let a = sd.circle_of_arc[d.slot_arc(g as usize, 0)] as usize;
            let b = sd.circle_of_arc[d.slot_arc(g as usize, 2)] as usize;
            let mut images: Vec<(u64, u64)> = Vec::new();
            if td.count + 1 == sd.count {
                if a == b {
                    return Err(Error::InvalidDiagram("merge edge with a single circle".into()));
                }
                let m = td.circle_of_arc[d.slot_arc(g as usize, 0)] as usize;
                for l in 0..(1u64 << sd.count) {
                    let (xa, xb) = (l >> a & 1, l >> b & 1);
                    if xa == 1 && xb == 1 {
                        continue;
                    }
                    let mut tl = 0u64;
                    for c in 0..sd.count {
                        if c != a && c != b && l >> c & 1 == 1 {
                            tl |= 1 << phi[c];
                        }
                    }
                    if xa == 1 || xb == 1 {
                        tl |= 1 << m;
                    }
                    images.push((l, tl));
                }
            } else if td.count == sd.count + 1 {
                if a != b {
                    return Err(Error::InvalidDiagram("split edge with two circles".into()));
                }
                let m1 = td.circle_of_arc[d.slot_arc(g as usize, 0)] as usize;
                let m2 = td.circle_of_arc[d.slot_arc(g as usize, 1)] as usize;
                for l in 0..(1u64 << sd.count) {
                    let mut tl = 0u64;
                    for c in 0..sd.count {
                        if c != a && l >> c & 1 == 1 {
                            tl |= 1 << phi[c];
                        }
                    }
                    if l >> a & 1 == 1 {
                        images.push((l, tl | 1 << m1 | 1 << m2));
                    } else {
                        images.push((l, tl | 1 << m1));
                        images.push((l, tl | 1 << m2));
                    }
                }
            } else {
                return Err(Error::InvalidDiagram(format!(
                    "crossing change at {g} keeps {} circles; the diagram is not planar",
                    sd.count
                )));
            }
            for (l, tl) in images {
                let j = quantum_degree(d, s, sd.count, l);
                let src = pos[offset[s as usize] + l as usize] as usize;
                let dst = pos[offset[t as usize] + tl as usize] as usize;
                trip.entry((j, k)).or_default().push((dst, src, int(sign)));
            }
        }
    }
    let mut actions: BTreeMap<(i64, usize), SignedPerm> = BTreeMap::new();
    let mut tags: BTreeMap<(i64, usize), Vec<u32>> = BTreeMap::new();
    for &(j, k) in counts.keys() {
        if opts.action {
            actions.insert((j, k), vec![(0, 0); dim(j, k)]);
        }
        if opts.filtration.is_some() {
            tags.insert((j, k), vec![0; dim(j, k)]);
        }
    }
    if opts.action || opts.filtration.is_some() {
        for s in 0..nstates as u64 {
            let sd = &data[s as usize];
            let k = s.count_ones() as usize;
            let (t, sign, psi): (u64, i8, Vec<u16>) = if opts.action {
                let t = d.rotate_state(s);
                let td = &data[t as usize];
                (t, rotation_sign(d, s), sd.rep.iter().map(|&a| td.circle_of_arc[d.rotate_arc(a)]).collect())
            } else {
                (s, 1, vec![])
            };
            for l in 0..(1u64 << sd.count) {
                let j = quantum_degree(d, s, sd.count, l);
                let src = pos[offset[s as usize] + l as usize] as usize;
                if opts.action {
                    let mut tl = 0u64;
                    for c in 0..sd.count {
                        if l >> c & 1 == 1 {
                            tl |= 1 << psi[c];
                        }
                    }
                    let dst = pos[offset[t as usize] + tl as usize];
                    actions.get_mut(&(j, k)).unwrap()[src] = (dst, sign);
                }
                if let Some(mask) = opts.filtration {
                    tags.get_mut(&(j, k)).unwrap()[src] = (s & mask).count_ones();
                }
            }
        }
    }
    let mut blocks = BTreeMap::new();
    for &j in &js {
        let dims: Vec<usize> = (0..ndeg).map(|k| dim(j, k)).collect();
        let dmats: Vec<SparseMat<Int>> = (0..ndeg - 1)
            .map(|k| SparseMat::from_triplets(dims[k + 1], dims[k], trip.remove(&(j, k)).unwrap_or_default()))
            .collect();
        let mut c = Complex::new(i0, dims, dmats);
        if opts.action {
            c.action = Some((0..ndeg).map(|k| actions.remove(&(j, k)).unwrap_or_default()).collect());
        }
        if opts.filtration.is_some() {
            c.tags = Some((0..ndeg).map(|k| tags.remove(&(j, k)).unwrap_or_default()).collect());
        }
        blocks.insert(j, c);
    }
    Ok(KhComplex { n: d.n, n_plus: d.n_plus(), n_minus: d.n_minus(), crossings: nc, blocks })
}

impl KhComplex {
    pub fn total_rank(&self) -> usize {
        self.blocks.values().map(|b| b.total_rank()).sum()
    }

    pub fn d_squared_is_zero(&self) -> bool {
        self.blocks.values().all(|b| b.d_squared_is_zero())
    }
}

/// Khovanov homology over `Z` (full groups) or `Q` (free ranks only).
pub fn khovanov_homology(d: &PeriodicDiagram, ring: Ring) -> Result<GradedGroups> {
    let kc = build_complex(d, BuildOpts::default())?;
    Ok(complex_homology(&kc, ring))
}

pub fn complex_homology(kc: &KhComplex, ring: Ring) -> GradedGroups {
    let per_block: Vec<(i64, i64, Vec<AbGroup>)> = kc
        .blocks
        .par_iter()
        .map(|(&j, c)| {
            let hs = match ring {
                Ring::Z => c.homology(),
                Ring::Q => c.to_rat().betti().into_iter().map(AbGroup::free).collect(),
            };
            (j, c.start, hs)
        })
        .collect();
    let mut g = GradedGroups::default();
    for (j, start, hs) in per_block {
        for (k, h) in hs.into_iter().enumerate() {
            g.insert(start + k as i64, j, h);
        }
    }
    g
}

/// Poincare polynomial of rational Khovanov homology.
pub fn khovanov_polynomial(d: &PeriodicDiagram) -> Result<BiPoly> {
    Ok(khovanov_homology(d, Ring::Q)?.poincare())
}

/// Graded Euler characteristic `sum (-1)^i q^j rank C^{i,j}`.
pub fn euler_characteristic(kc: &KhComplex) -> crate::poly::LaurentPoly {
    let mut p = crate::poly::LaurentPoly::zero();
    for (&j, c) in &kc.blocks {
        for (k, &n) in c.dims.iter().enumerate() {
            let i = c.start + k as i64;
            p.add_term(j, int(if i.rem_euclid(2) == 0 { n as i64 } else { -(n as i64) }));
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn unknot_homology() {
        for n in [1, 2, 3] {
            let h = khovanov_homology(&corpus::unknot(n), Ring::Z).unwrap();
            let mut want = GradedGroups::default();
            want.insert(0, 1, AbGroup::free(1));
            want.insert(0, -1, AbGroup::free(1));
            assert_eq!(h, want);
        }
    }

    #[test]
    fn hopf_homology() {
        let h = khovanov_homology(&corpus::torus_2periodic(2), Ring::Z).unwrap();
        let p = h.poincare();
        assert_eq!(p, BiPoly::from_triples(&[(1, 0, 0), (1, 0, 2), (1, 2, 4), (1, 2, 6)]));
        assert!(h.iter().all(|(_, g)| g.torsion.is_empty()));
    }

    #[test]
    fn trefoil_has_two_torsion() {
        let h = khovanov_homology(&corpus::torus_cyclic(3), Ring::Z).unwrap();
        assert_eq!(h.get(3, 7), AbGroup::from_cyclic(0, vec![int(2)]));
        assert_eq!(h.poincare(), BiPoly::from_triples(&[(1, 0, 1), (1, 0, 3), (1, 2, 5), (1, 3, 9)]));
    }

    #[test]
    fn differential_squares_to_zero() {
        for d in [corpus::torus_2periodic(4), corpus::borromean(), corpus::kinked_unknot()] {
            assert!(build_complex(&d, BuildOpts::default()).unwrap().d_squared_is_zero());
        }
    }
}
