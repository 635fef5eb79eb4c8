//! Builders for the standard periodic diagrams.

use crate::diagram::{CrossingSpec, DiagramSpec, PeriodicDiagram, TangleSpec};

fn pair(a: &str, b: &str) -> [String; 2] {
    [a.to_string(), b.to_string()]
}

fn build(n: usize, crossings: Vec<CrossingSpec>, arcs: Vec<[String; 2]>, seam_in: Vec<String>, seam_out: Vec<String>) -> PeriodicDiagram {
    let spec = DiagramSpec {
        n,
        tangle: TangleSpec { crossings, orient: arcs.clone(), arcs, seam_in, seam_out },
    };
    PeriodicDiagram::from_spec(spec).expect("corpus diagram is valid")
}

/// Closure of a positive braid word (generators `1..strands-1`) as the
/// quotient tangle of an `n`-periodic diagram: `n` stacked copies of the word.
pub fn braid_closure(strands: usize, word: &[usize], n: usize) -> PeriodicDiagram {
    let mut cur: Vec<String> = (0..strands).map(|k| format!("i{k}")).collect();
    let mut crossings = Vec::new();
    let mut arcs = Vec::new();
    for (c, &g) in word.iter().enumerate() {
        assert!(g >= 1 && g < strands, "braid generator out of range");
        let p = g - 1;
        // slots counterclockwise from the incoming under-strand: SE, NE, NW, SW
        let s = ["a", "b", "c", "d"].map(|x| format!("x{c}{x}"));
        arcs.push([cur[p].clone(), s[3].clone()]);
        arcs.push([cur[p + 1].clone(), s[0].clone()]);
        cur[p] = s[2].clone();
        cur[p + 1] = s[1].clone();
        crossings.push(CrossingSpec { id: c as i64, slots: s });
    }
    for (k, l) in cur.iter().enumerate() {
        arcs.push([l.clone(), format!("o{k}")]);
    }
    build(
        n,
        crossings,
        arcs,
        (0..strands).map(|k| format!("i{k}")).collect(),
        (0..strands).map(|k| format!("o{k}")).collect(),
    )
}

/// 2-periodic diagram of `T(m, 2)`: closure of `(s_1 ... s_{m-1})^2` on `m` strands.
pub fn torus_2periodic(m: usize) -> PeriodicDiagram {
    assert!(m >= 2);
    braid_closure(m, &(1..m).collect::<Vec<_>>(), 2)
}

/// `m`-periodic diagram of `T(m, 2)`: closure of `s_1^m` on two strands.
pub fn torus_cyclic(m: usize) -> PeriodicDiagram {
    braid_closure(2, &[1], m)
}

/// Crossingless trivial link with `k` free circles per copy and `f` circles
/// around the axis.
pub fn trivial_link(n: usize, k: usize, f: usize) -> PeriodicDiagram {
    let mut arcs: Vec<[String; 2]> = (0..k).map(|j| pair(&format!("u{j}"), &format!("u{j}"))).collect();
    arcs.extend((0..f).map(|j| pair(&format!("i{j}"), &format!("o{j}"))));
    build(n, vec![], arcs, (0..f).map(|j| format!("i{j}")).collect(), (0..f).map(|j| format!("o{j}")).collect())
}

/// Crossingless unknot; for `n > 1` the circle goes around the axis.
pub fn unknot(n: usize) -> PeriodicDiagram {
    if n == 1 {
        trivial_link(1, 1, 0)
    } else {
        trivial_link(n, 0, 1)
    }
}

/// 2-periodic unknot with one positive kink in each copy.
pub fn kinked_unknot() -> PeriodicDiagram {
    let s = ["a", "b", "c", "d"].map(String::from);
    build(
        2,
        vec![CrossingSpec { id: 0, slots: s }],
        vec![pair("i", "a"), pair("c", "d"), pair("b", "o")],
        vec!["i".into()],
        vec!["o".into()],
    )
}

/// 3-periodic Borromean rings: three round circles, each passing over the
/// next, drawn symmetrically about the axis. One copy holds an outer and an
/// inner crossing of the same pair of circles.
pub fn borromean() -> PeriodicDiagram {
    // O: outer crossing, negative; I: inner crossing, positive.
    // Strand "A" passes over strand "B" at both.
    let o = ["OBin", "OAin", "OBout", "OAout"].map(String::from);
    let i = ["IBin", "IAout", "IBout", "IAin"].map(String::from);
    let arcs = vec![
        pair("OBout", "ob"),
        pair("ib", "OAin"),
        pair("IBout", "od"),
        pair("id", "IAin"),
        pair("OAout", "ia"),
        pair("oa", "IBin"),
        pair("IAout", "ic"),
        pair("oc", "OBin"),
    ];
    build(
        3,
        vec![CrossingSpec { id: 0, slots: o }, CrossingSpec { id: 1, slots: i }],
        arcs,
        ["ia", "ib", "ic", "id"].map(String::from).to_vec(),
        ["oa", "ob", "oc", "od"].map(String::from).to_vec(),
    )
}

/// Every diagram shipped as a JSON file, with its file stem.
pub fn standard_corpus() -> Vec<(String, PeriodicDiagram)> {
    let mut out = vec![
        ("unknot".to_string(), unknot(1)),
        ("unknot_n2".to_string(), unknot(2)),
        ("unknot_n3".to_string(), unknot(3)),
        ("unknot_kinked_n2".to_string(), kinked_unknot()),
        ("hopf".to_string(), torus_2periodic(2)),
        ("trefoil".to_string(), torus_cyclic(3)),
        ("borromean_n3".to_string(), borromean()),
    ];
    for m in 2..=8 {
        out.push((format!("t{m}_2"), torus_2periodic(m)));
    }
    for (n, k, f) in trivial_link_cases() {
        out.push((format!("trivial_n{n}_k{k}_f{f}"), trivial_link(n, k, f)));
    }
    out
}

/// `(p^n, k, f)` with `p^n` in {2, 3, 4}, `k p^n + f <= 6` and at least one circle.
pub fn trivial_link_cases() -> Vec<(usize, usize, usize)> {
    let mut v = Vec::new();
    for n in [2usize, 3, 4] {
        for k in 0..=6 / n {
            for f in 0..=6 - k * n {
                if k + f > 0 {
                    v.push((n, k, f));
                }
            }
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossing_counts_and_components() {
        let t = torus_2periodic(8);
        assert_eq!(t.num_crossings(), 14);
        assert_eq!(t.n_minus(), 0);
        assert_eq!(torus_2periodic(4).num_components(), 2);
        assert_eq!(torus_2periodic(5).num_components(), 1);
        let b = borromean();
        assert_eq!(b.num_components(), 3);
        assert_eq!((b.n_plus(), b.n_minus()), (3, 3));
        assert_eq!(kinked_unknot().num_components(), 1);
        assert_eq!(trivial_link(4, 1, 2).num_components(), 6);
        assert_eq!(torus_cyclic(3).num_components(), 1);
    }

    #[test]
    fn kinked_unknot_circle_counts() {
        let d = kinked_unknot();
        let base = d.base_components();
        let counts: Vec<usize> = (0..4).map(|s| d.circles(s, &base).0).collect();
        assert_eq!(counts, vec![3, 2, 2, 1]);
    }

    #[test]
    fn hopf_circle_counts() {
        let d = torus_2periodic(2);
        let base = d.base_components();
        let counts: Vec<usize> = (0..4).map(|s| d.circles(s, &base).0).collect();
        assert_eq!(counts, vec![2, 1, 1, 2]);
    }
}
