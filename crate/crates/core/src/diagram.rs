//! Periodic link diagrams given by a quotient tangle.
//!
//! A diagram with period `n` is `n` copies of a tangle `T` placed around an
//! axis, seam_out `k` of copy `i` glued to seam_in `k` of copy `i + 1 mod n`.
//! Crossing slots are listed counterclockwise starting at the incoming
//! under-strand; a crossing is positive when the over-strand enters at slot 3.
//! An arc `[x, x]` whose label is used nowhere else is a crossingless circle
//! inside the tangle.

use crate::error::{Error, Result};
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct CrossingSpec {
    pub id: i64,
    pub slots: [String; 4],
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct TangleSpec {
    pub crossings: Vec<CrossingSpec>,
    pub arcs: Vec<[String; 2]>,
    pub seam_in: Vec<String>,
    pub seam_out: Vec<String>,
    pub orient: Vec<[String; 2]>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct DiagramSpec {
    pub n: usize,
    pub tangle: TangleSpec,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum End {
    Slot(usize, u8),
    SeamIn(usize),
    SeamOut(usize),
    Loop,
}

/// An oriented arc of the quotient tangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Arc {
    pub from: End,
    pub to: End,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub id: i64,
    /// Tangle arc attached at each slot.
    pub slot_arcs: [usize; 4],
    pub positive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientTangle {
    pub crossings: Vec<Crossing>,
    pub arcs: Vec<Arc>,
    /// Tangle arc attached at seam_in `k` / seam_out `k`.
    pub seam_in: Vec<usize>,
    pub seam_out: Vec<usize>,
    pub n_plus: usize,
    pub n_minus: usize,
}

/// Bitmask over the crossings in global (copy-major) order; bit set = 1-smoothing.
pub type KauffmanState = u64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicDiagram {
    pub n: usize,
    pub tangle: QuotientTangle,
    pub spec: DiagramSpec,
}

fn perr(field: impl Into<String>, msg: impl Into<String>) -> Error {
    Error::Parse { field: field.into(), msg: msg.into() }
}

/// Parse and validate a diagram from JSON text.
pub fn parse_diagram(text: &str) -> Result<PeriodicDiagram> {
    let spec: DiagramSpec = serde_json::from_str(text)
        .map_err(|e| perr(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
    PeriodicDiagram::from_spec(spec)
}

pub fn load_diagram(path: impl AsRef<std::path::Path>) -> Result<PeriodicDiagram> {
    parse_diagram(&std::fs::read_to_string(path)?)
}

impl QuotientTangle {
    pub fn from_spec(t: &TangleSpec) -> Result<Self> {
        let mut label_kind: FxHashMap<String, End> = FxHashMap::default();
        let mut claim = |l: &str, e: End, field: String| -> Result<()> {
            if label_kind.insert(l.to_string(), e).is_some() {
                return Err(perr(field, format!("label {l:?} used twice")));
            }
            Ok(())
        };
        let mut ids = BTreeSet::new();
        for (ci, c) in t.crossings.iter().enumerate() {
            if !ids.insert(c.id) {
                return Err(perr(format!("tangle.crossings[{ci}].id"), format!("duplicate id {}", c.id)));
            }
            for (s, l) in c.slots.iter().enumerate() {
                claim(l, End::Slot(ci, s as u8), format!("tangle.crossings[{ci}].slots[{s}]"))?;
            }
        }
        if t.seam_in.len() != t.seam_out.len() {
            return Err(perr("tangle.seam_out", "seam_in and seam_out differ in length"));
        }
        for (k, l) in t.seam_in.iter().enumerate() {
            claim(l, End::SeamIn(k), format!("tangle.seam_in[{k}]"))?;
        }
        for (k, l) in t.seam_out.iter().enumerate() {
            claim(l, End::SeamOut(k), format!("tangle.seam_out[{k}]"))?;
        }
        // orientation lookup by unordered pair
        let key = |a: &str, b: &str| if a <= b { (a.to_string(), b.to_string()) } else { (b.to_string(), a.to_string()) };
        let mut orient: FxHashMap<(String, String), Vec<(String, String)>> = FxHashMap::default();
        for [a, b] in &t.orient {
            orient.entry(key(a, b)).or_default().push((a.clone(), b.clone()));
        }
        let mut used: FxHashMap<String, usize> = FxHashMap::default();
        let mut arcs = Vec::with_capacity(t.arcs.len());
        let mut attach: FxHashMap<End, usize> = FxHashMap::default();
        for (ai, [a, b]) in t.arcs.iter().enumerate() {
            let field = format!("tangle.arcs[{ai}]");
            let (from_l, to_l) = match orient.get_mut(&key(a, b)).and_then(|v| v.pop()) {
                Some(p) => p,
                None => return Err(perr(field, "arc has no orientation entry")),
            };
            if a == b {
                if label_kind.contains_key(a.as_str()) {
                    return Err(perr(field, format!("{a:?} is a slot or seam label and cannot close a loop")));
                }
                if used.insert(a.clone(), ai).is_some() {
                    return Err(perr(field, format!("loop label {a:?} reused")));
                }
                arcs.push(Arc { from: End::Loop, to: End::Loop });
                continue;
            }
            let mut ends = [End::Loop; 2];
            for (k, l) in [&from_l, &to_l].into_iter().enumerate() {
                let Some(e) = label_kind.get(l.as_str()) else {
                    return Err(perr(field.clone(), format!("unknown endpoint {l:?}")));
                };
                if let Some(prev) = used.insert(l.clone(), ai) {
                    return Err(perr(field.clone(), format!("endpoint {l:?} already used by arc {prev}")));
                }
                ends[k] = *e;
                attach.insert(*e, ai);
            }
            arcs.push(Arc { from: ends[0], to: ends[1] });
        }
        if let Some((k, _)) = orient.iter().find(|(_, v)| !v.is_empty()) {
            return Err(perr("tangle.orient", format!("orientation for nonexistent arc {k:?}")));
        }
        for (l, e) in &label_kind {
            if !attach.contains_key(e) {
                return Err(perr("tangle.arcs", format!("endpoint {l:?} is not attached to any arc")));
            }
        }
        let into = |e: End| arcs[attach[&e]].to == e;
        let mut crossings = Vec::new();
        let (mut n_plus, mut n_minus) = (0, 0);
        for (ci, c) in t.crossings.iter().enumerate() {
            let s = |k: u8| End::Slot(ci, k);
            if !into(s(0)) || into(s(2)) {
                return Err(Error::Orientation(format!(
                    "crossing {}: slot 0 must be the incoming under-strand and slot 2 outgoing",
                    c.id
                )));
            }
            if into(s(1)) == into(s(3)) {
                return Err(Error::Orientation(format!("crossing {}: over-strand is not coherently oriented", c.id)));
            }
            let positive = into(s(3));
            if positive {
                n_plus += 1;
            } else {
                n_minus += 1;
            }
            crossings.push(Crossing { id: c.id, slot_arcs: [0, 1, 2, 3].map(|k| attach[&s(k)]), positive });
        }
        for k in 0..t.seam_in.len() {
            let (o, i) = (End::SeamOut(k), End::SeamIn(k));
            if into(o) == into(i) {
                return Err(Error::Orientation(format!(
                    "seam {k}: orientations of seam_out {:?} and seam_in {:?} do not match across the gluing",
                    t.seam_out[k], t.seam_in[k]
                )));
            }
        }
        Ok(Self {
            seam_in: (0..t.seam_in.len()).map(|k| attach[&End::SeamIn(k)]).collect(),
            seam_out: (0..t.seam_out.len()).map(|k| attach[&End::SeamOut(k)]).collect(),
            crossings,
            arcs,
            n_plus,
            n_minus,
        })
    }
}

impl PeriodicDiagram {
    pub fn from_spec(spec: DiagramSpec) -> Result<Self> {
        if spec.n == 0 {
            return Err(perr("n", "period must be at least 1"));
        }
        if spec.n > 1 && spec.tangle.seam_in.is_empty() && spec.tangle.crossings.is_empty() && spec.tangle.arcs.is_empty() {
            return Err(perr("tangle", "empty tangle"));
        }
        let tangle = QuotientTangle::from_spec(&spec.tangle)?;
        let total = spec.n * tangle.crossings.len();
        if total > 63 {
            return Err(Error::InvalidDiagram(format!("{total} crossings exceed the supported 63")));
        }
        Ok(Self { n: spec.n, tangle, spec })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.spec).expect("diagram spec serializes")
    }

    /// Crossings per copy.
    pub fn m(&self) -> usize {
        self.tangle.crossings.len()
    }

    pub fn num_crossings(&self) -> usize {
        self.n * self.m()
    }

    pub fn n_plus(&self) -> usize {
        self.n * self.tangle.n_plus
    }

    pub fn n_minus(&self) -> usize {
        self.n * self.tangle.n_minus
    }

    pub fn arcs_per_copy(&self) -> usize {
        self.tangle.arcs.len()
    }

    pub fn num_global_arcs(&self) -> usize {
        self.n * self.arcs_per_copy()
    }

    /// Global arc attached to `slot` of global crossing `g`.
    pub fn slot_arc(&self, g: usize, slot: usize) -> usize {
        let (copy, c) = (g / self.m(), g % self.m());
        copy * self.arcs_per_copy() + self.tangle.crossings[c].slot_arcs[slot]
    }

    /// Global arc index after moving one copy down (copy `c` to `c - 1`).
    pub fn rotate_arc(&self, a: usize) -> usize {
        let ap = self.arcs_per_copy();
        let (copy, t) = (a / ap, a % ap);
        ((copy + self.n - 1) % self.n) * ap + t
    }

    pub fn positive(&self, g: usize) -> bool {
        self.tangle.crossings[g % self.m()].positive
    }

    /// Rotate a state: the content of copy `k + 1` moves to copy `k`.
    pub fn rotate_state(&self, s: KauffmanState) -> KauffmanState {
        let m = self.m();
        if m == 0 || self.n == 1 {
            return s;
        }
        let mask = (1u64 << m) - 1;
        (s >> m) | ((s & mask) << (m * (self.n - 1)))
    }

    /// Order of the subgroup fixing the state.
    pub fn isotropy(&self, s: KauffmanState) -> usize {
        let mut t = s;
        for k in 1..=self.n {
            t = self.rotate_state(t);
            if t == s && self.n % k == 0 {
                return self.n / k;
            }
        }
        1
    }

    /// Union-find over global arcs joined by the seam gluings.
    pub fn base_components(&self) -> UnionFind {
        let ap = self.arcs_per_copy();
        let mut uf = UnionFind::new(self.num_global_arcs());
        for i in 0..self.n {
            let j = (i + 1) % self.n;
            for k in 0..self.tangle.seam_in.len() {
                uf.union(i * ap + self.tangle.seam_out[k], j * ap + self.tangle.seam_in[k]);
            }
        }
        uf
    }

    /// Circles of the smoothing: number of circles and the circle of every
    /// global arc. Circles are numbered by their smallest arc.
    pub fn circles(&self, s: KauffmanState, base: &UnionFind) -> (usize, Vec<u16>) {
        let mut uf = base.clone();
        for g in 0..self.num_crossings() {
            let pairs = if s >> g & 1 == 0 { [(0, 1), (2, 3)] } else { [(0, 3), (1, 2)] };
            for (a, b) in pairs {
                uf.union(self.slot_arc(g, a), self.slot_arc(g, b));
            }
        }
        let na = self.num_global_arcs();
        let mut label = vec![u16::MAX; na];
        let mut root_label: FxHashMap<usize, u16> = FxHashMap::default();
        let mut count = 0u16;
        for a in 0..na {
            let r = uf.find(a);
            let l = *root_label.entry(r).or_insert_with(|| {
                count += 1;
                count - 1
            });
            label[a] = l;
        }
        (count as usize, label)
    }

    /// Components of the link (circles of the diagram ignoring crossings).
    pub fn num_components(&self) -> usize {
        let mut uf = self.base_components();
        for g in 0..self.num_crossings() {
            uf.union(self.slot_arc(g, 0), self.slot_arc(g, 2));
            uf.union(self.slot_arc(g, 1), self.slot_arc(g, 3));
        }
        (0..self.num_global_arcs()).filter(|&a| uf.find(a) == a).count()
    }

    /// States of weight `r` grouped into orbits: `(smallest member, isotropy d, orbit size n/d)`.
    pub fn orbit_decomposition(&self, r: usize) -> Vec<(KauffmanState, usize, usize)> {
        let nc = self.num_crossings();
        let mut out = Vec::new();
        for s in states_of_weight(nc, r) {
            let mut t = s;
            let mut minimal = true;
            for _ in 1..self.n {
                t = self.rotate_state(t);
                if t < s {
                    minimal = false;
                    break;
                }
            }
            if minimal {
                let d = self.isotropy(s);
                out.push((s, d, self.n / d));
            }
        }
        out
    }

    /// The same link as a diagram with period one.
    pub fn flatten(&self) -> Result<PeriodicDiagram> {
        if self.n == 1 {
            return Ok(self.clone());
        }
        let t = &self.spec.tangle;
        let lab = |i: usize, l: &str| format!("{i}:{l}");
        let mut g = Graph::default();
        let mut crossings = Vec::new();
        for i in 0..self.n {
            for (ci, c) in t.crossings.iter().enumerate() {
                let slots = c.slots.clone().map(|l| lab(i, &l));
                for s in &slots {
                    g.terminal.insert(s.clone());
                }
                crossings.push(RawCrossing { id: (i * t.crossings.len() + ci) as i64, slots });
            }
            for [a, b] in &t.orient {
                g.arc(lab(i, a), lab(i, b));
            }
            let j = (i + 1) % self.n;
            for k in 0..t.seam_in.len() {
                g.join(lab(i, &t.seam_out[k]), lab(j, &t.seam_in[k]));
            }
        }
        let arcs = g.walk();
        let spec = TangleSpec {
            crossings: crossings.into_iter().map(|c| CrossingSpec { id: c.id, slots: c.slots }).collect(),
            arcs: arcs.clone(),
            seam_in: vec![],
            seam_out: vec![],
            orient: arcs,
        };
        PeriodicDiagram::from_spec(DiagramSpec { n: 1, tangle: spec })
    }

    /// Resolve the crossings in `choice` (tangle crossing index -> 0/1) in
    /// every copy, keeping the period, then orient canonically.
    pub fn smooth_periodic(&self, choice: &[(usize, u8)]) -> Result<PeriodicDiagram> {
        smooth_tangle(self.n, &self.spec.tangle, choice)
    }

    /// Resolve global crossings in `choice` on the flattened diagram.
    pub fn smooth_flat(&self, choice: &[(usize, u8)]) -> Result<PeriodicDiagram> {
        let flat = self.flatten()?;
        smooth_tangle(1, &flat.spec.tangle, choice)
    }
}

pub fn states_of_weight(nc: usize, r: usize) -> Vec<KauffmanState> {
    let mut out = Vec::new();
    if r > nc {
        return out;
    }
    if nc == 0 {
        return vec![0];
    }
    // Gosper's hack over all r-subsets
    if r == 0 {
        return vec![0];
    }
    let mut s: u64 = (1u64 << r) - 1;
    let limit: u64 = 1u64 << nc;
    while s < limit {
        out.push(s);
        let c = s & s.wrapping_neg();
        let rr = s + c;
        s = (((rr ^ s) >> 2) / c) | rr;
    }
    out
}

#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Union keeping the smaller index as the root.
    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

struct RawCrossing {
    id: i64,
    slots: [String; 4],
}

/// Endpoint graph used to rebuild arcs after smoothing or flattening.
/// Terminal labels survive; other labels are joined through in pairs.
#[derive(Default)]
struct Graph {
    terminal: BTreeSet<String>,
    arc_of: FxHashMap<String, (String, bool)>,
    join_of: FxHashMap<String, String>,
    loops: Vec<String>,
    labels: BTreeSet<String>,
}

impl Graph {
    /// Oriented arc `a -> b`.
    fn arc(&mut self, a: String, b: String) {
        if a == b {
            self.loops.push(a);
            return;
        }
        self.arc_of.insert(a.clone(), (b.clone(), true));
        self.arc_of.insert(b.clone(), (a.clone(), false));
        self.labels.insert(a);
        self.labels.insert(b);
    }

    fn join(&mut self, a: String, b: String) {
        self.join_of.insert(a.clone(), b.clone());
        self.join_of.insert(b, a);
    }

    /// Follow paths between terminals; leftover cycles become loops.
    /// Returned arcs are oriented along the original arcs where possible.
    fn walk(&self) -> Vec<[String; 2]> {
        let mut seen: BTreeSet<String> = BTreeSet::new();
        let mut out = Vec::new();
        for t in &self.terminal {
            if seen.contains(t) {
                continue;
            }
            let mut cur = t.clone();
            seen.insert(cur.clone());
            let mut forward = None;
            loop {
                let (other, fwd) = self.arc_of[&cur].clone();
                forward.get_or_insert(fwd);
                seen.insert(other.clone());
                if self.terminal.contains(&other) {
                    let pair = if forward == Some(true) { [t.clone(), other] } else { [other, t.clone()] };
                    out.push(pair);
                    break;
                }
                let next = self.join_of[&other].clone();
                seen.insert(next.clone());
                cur = next;
            }
        }
        for l in &self.labels {
            if seen.contains(l) {
                continue;
            }
            let mut cur = l.clone();
            loop {
                seen.insert(cur.clone());
                let (other, _) = self.arc_of[&cur].clone();
                seen.insert(other.clone());
                cur = self.join_of[&other].clone();
                if seen.contains(&cur) {
                    break;
                }
            }
            out.push([l.clone(), l.clone()]);
        }
        for l in &self.loops {
            out.push([l.clone(), l.clone()]);
        }
        out
    }
}

fn smooth_tangle(n: usize, t: &TangleSpec, choice: &[(usize, u8)]) -> Result<PeriodicDiagram> {
    let chosen: FxHashMap<usize, u8> = choice.iter().copied().collect();
    for &c in chosen.keys() {
        if c >= t.crossings.len() {
            return Err(Error::Argument(format!("crossing index {c} out of range")));
        }
    }
    let mut g = Graph::default();
    let mut kept = Vec::new();
    for (ci, c) in t.crossings.iter().enumerate() {
        match chosen.get(&ci) {
            None => {
                for s in &c.slots {
                    g.terminal.insert(s.clone());
                }
                kept.push(RawCrossing { id: c.id, slots: c.slots.clone() });
            }
            Some(&v) => {
                let s = &c.slots;
                let pairs = if v == 0 { [(0, 1), (2, 3)] } else { [(0, 3), (1, 2)] };
                for (a, b) in pairs {
                    g.join(s[a].clone(), s[b].clone());
                }
            }
        }
    }
    for l in t.seam_in.iter().chain(&t.seam_out) {
        g.terminal.insert(l.clone());
    }
    for [a, b] in &t.arcs {
        g.arc(a.clone(), b.clone());
    }
    let arcs = g.walk();
    let spec = orient_canonically(kept, arcs, t.seam_in.clone(), t.seam_out.clone())?;
    PeriodicDiagram::from_spec(DiagramSpec { n, tangle: spec })
}

/// Choose an equivariant orientation minimizing the number of negative
/// crossings per copy; ties go to the lexicographically first choice with
/// components ordered by their lowest arc. Slots are rotated so slot 0 is
/// the incoming under-strand.
fn orient_canonically(
    crossings: Vec<RawCrossing>,
    arcs: Vec<[String; 2]>,
    seam_in: Vec<String>,
    seam_out: Vec<String>,
) -> Result<TangleSpec> {
    let mut end_arc: FxHashMap<&str, usize> = FxHashMap::default();
    for (ai, [a, b]) in arcs.iter().enumerate() {
        if a != b {
            end_arc.insert(a, ai);
            end_arc.insert(b, ai);
        }
    }
    // pass-through partner of each slot label
    let mut through: FxHashMap<&str, &str> = FxHashMap::default();
    for c in &crossings {
        for k in 0..4 {
            through.insert(&c.slots[k], &c.slots[(k + 2) % 4]);
        }
    }
    let seam: BTreeSet<&str> = seam_in.iter().chain(&seam_out).map(|s| s.as_str()).collect();
    // Canonical traversal direction per arc: dir[ai] = (from, to), and strand id.
    let mut dir: Vec<Option<(String, String)>> = vec![None; arcs.len()];
    let mut strand = vec![usize::MAX; arcs.len()];
    let mut nstrands = 0;
    let mut traverse = |start_arc: usize, from: &str, dir: &mut Vec<Option<(String, String)>>, strand: &mut Vec<usize>| {
        let (mut ai, mut from) = (start_arc, from.to_string());
        loop {
            if strand[ai] != usize::MAX {
                break;
            }
            let [a, b] = &arcs[ai];
            let to = if *a == from { b.clone() } else { a.clone() };
            dir[ai] = Some((from.clone(), to.clone()));
            strand[ai] = nstrands;
            if seam.contains(to.as_str()) {
                break;
            }
            let next = through[to.as_str()];
            ai = end_arc[next];
            from = next.to_string();
        }
        nstrands += 1;
    };
    // open strands start at a seam end that begins them
    for l in seam_in.iter().chain(&seam_out) {
        let ai = end_arc[l.as_str()];
        if strand[ai] == usize::MAX {
            traverse(ai, l, &mut dir, &mut strand);
        }
    }
    for ai in 0..arcs.len() {
        // crossingless loops need no orientation
        if strand[ai] == usize::MAX && arcs[ai][0] != arcs[ai][1] {
            let a = arcs[ai][0].clone();
            traverse(ai, &a, &mut dir, &mut strand);
        }
    }
    let arrives = |l: &str| -> (usize, bool) {
        let ai = end_arc[l];
        (strand[ai], dir[ai].as_ref().unwrap().1 == l)
    };
    // parity constraints from the gluings: flip[s_out] ^ flip[s_in] = 1 ^ arr_out ^ arr_in
    let mut adj: Vec<Vec<(usize, bool)>> = vec![vec![]; nstrands];
    for k in 0..seam_in.len() {
        let (so, ao) = arrives(&seam_out[k]);
        let (si, ai) = arrives(&seam_in[k]);
        let parity = !(ao ^ ai);
        adj[so].push((si, parity));
        adj[si].push((so, parity));
    }
    let mut rel = vec![None::<(usize, bool)>; nstrands];
    let mut groups: Vec<usize> = Vec::new();
    for s0 in 0..nstrands {
        if rel[s0].is_some() {
            continue;
        }
        let gi = groups.len();
        groups.push(s0);
        rel[s0] = Some((gi, false));
        let mut stack = vec![s0];
        while let Some(s) = stack.pop() {
            let (_, fs) = rel[s].unwrap();
            for &(t, p) in &adj[s] {
                let want = fs ^ p;
                match rel[t] {
                    None => {
                        rel[t] = Some((gi, want));
                        stack.push(t);
                    }
                    Some((_, ft)) if ft != want => {
                        return Err(Error::Orientation("strands cannot be oriented compatibly across the seam".into()))
                    }
                    _ => {}
                }
            }
        }
    }
    let ng = groups.len();
    let enters = |l: &str, flips: &[bool]| -> bool {
        let ai = end_arc[l];
        let s = strand[ai];
        let (g, f) = rel[s].unwrap();
        let canon_into = dir[ai].as_ref().unwrap().1 == l;
        canon_into ^ f ^ flips[g]
    };
    let count_neg = |flips: &[bool]| -> usize {
        crossings
            .iter()
            .filter(|c| {
                let under_in0 = enters(&c.slots[0], flips);
                let over_in3 = enters(&c.slots[3], flips);
                // after rotating so the under-strand enters at slot 0
                let over_in_last = if under_in0 { over_in3 } else { enters(&c.slots[1], flips) };
                !over_in_last
            })
            .count()
    };
    let mut best: Option<(usize, Vec<bool>)> = None;
    if ng <= 16 {
        for mask in 0u32..(1u32 << ng) {
            let flips: Vec<bool> = (0..ng).map(|g| mask >> (ng - 1 - g) & 1 == 1).collect();
            let neg = count_neg(&flips);
            if best.as_ref().map_or(true, |(b, _)| neg < *b) {
                best = Some((neg, flips));
            }
        }
    } else {
        let mut flips = vec![false; ng];
        loop {
            let cur = count_neg(&flips);
            let improved = (0..ng).find(|&g| {
                flips[g] = !flips[g];
                let better = count_neg(&flips) < cur;
                if !better {
                    flips[g] = !flips[g];
                }
                better
            });
            if improved.is_none() {
                break;
            }
        }
        best = Some((count_neg(&flips), flips));
    }
    let flips = best.map(|b| b.1).unwrap_or_default();
    let mut oriented = Vec::with_capacity(arcs.len());
    for (ai, pair) in arcs.iter().enumerate() {
        if pair[0] == pair[1] {
            oriented.push(pair.clone());
            continue;
        }
        let (f, t) = dir[ai].clone().unwrap();
        let (g, fl) = rel[strand[ai]].unwrap();
        oriented.push(if fl ^ flips[g] { [t, f] } else { [f, t] });
    }
    let out_crossings = crossings
        .into_iter()
        .map(|c| {
            let slots = if enters(&c.slots[0], &flips) {
                c.slots
            } else {
                let [a, b, cc, d] = c.slots;
                [cc, d, a, b]
            };
            CrossingSpec { id: c.id, slots }
        })
        .collect();
    Ok(TangleSpec { crossings: out_crossings, arcs: oriented.clone(), seam_in, seam_out, orient: oriented })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hopf_json() -> &'static str {
        r#"{"n":2,"tangle":{"crossings":[{"id":0,"slots":["a","b","c","d"]}],
            "arcs":[["i2","a"],["c","o1"],["i1","d"],["b","o2"]],
            "seam_in":["i1","i2"],"seam_out":["o1","o2"],
            "orient":[["i2","a"],["c","o1"],["i1","d"],["b","o2"]]}}"#
    }

    #[test]
    fn parses_and_counts() {
        let d = parse_diagram(hopf_json()).unwrap();
        assert_eq!(d.num_crossings(), 2);
        assert_eq!(d.n_plus(), 2);
        assert_eq!(d.num_components(), 2);
    }

    #[test]
    fn rejects_bad_orientation() {
        let bad = hopf_json().replace(r#""orient":[["i2","a"]"#, r#""orient":[["a","i2"]"#);
        assert!(matches!(parse_diagram(&bad), Err(Error::Orientation(_))));
    }

    #[test]
    fn rejects_unknown_endpoint() {
        let bad = hopf_json().replace(r#"["b","o2"]"#, r#"["b","zz"]"#);
        assert!(matches!(parse_diagram(&bad), Err(Error::Parse { .. })));
    }

    #[test]
    fn state_rotation_and_isotropy() {
        let d = parse_diagram(hopf_json()).unwrap();
        assert_eq!(d.rotate_state(0b01), 0b10);
        assert_eq!(d.isotropy(0b00), 2);
        assert_eq!(d.isotropy(0b01), 1);
        assert_eq!(d.isotropy(0b11), 2);
        assert_eq!(d.orbit_decomposition(1), vec![(0b01, 1, 2)]);
    }

    #[test]
    fn gosper_enumeration() {
        assert_eq!(states_of_weight(4, 2).len(), 6);
        assert_eq!(states_of_weight(3, 0), vec![0]);
    }
}
