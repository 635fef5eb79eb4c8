//! Acceptance suite: one line per criterion, exact equality throughout.
//! Runtime bounds are part of each criterion.

use pkh_core::action::{action, verify_module_structure};
use pkh_core::corpus::{standard_corpus, trivial_link_cases};
use pkh_core::diagram::{load_diagram, PeriodicDiagram};
use pkh_core::equivariant::{self as eq, Prepared};
use pkh_core::homalg::group_ring::{cyclic_mul_q, cyclotomic, idempotent};
use pkh_core::homalg::{smith_normal_form, AbGroup, GradedGroups, SparseMat};
use pkh_core::khovanov::{complex_homology, khovanov_homology, khovanov_polynomial};
use pkh_core::num::{divisors, int, is_prime, prime_power, Rat, Ring};
use pkh_core::poly::{BiPoly, LaurentPoly};
use pkh_core::{oracles, spectral};
use std::path::PathBuf;
use std::time::{Duration, Instant};

type Check = Result<(), String>;

fn corpus(name: &str) -> PeriodicDiagram {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(format!("{name}.json"));
    load_diagram(&path).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn corpus_all() -> Vec<(String, PeriodicDiagram)> {
    standard_corpus().into_iter().map(|(name, _)| (name.clone(), corpus(&name))).collect()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn prep(d: &PeriodicDiagram) -> Result<Prepared, String> {
    eq::prepare(d).map_err(|e| e.to_string())
}

fn z2() -> AbGroup {
    AbGroup::from_cyclic(0, [int(2)])
}

fn same_groups(a: &GradedGroups, b: &GradedGroups, what: &str) -> Check {
    for ((i, j), g) in a.iter().chain(b.iter()) {
        let (x, y) = (a.get(i, j), b.get(i, j));
        ensure(x == y, || format!("{what}: ({i},{j}) {x} vs {y}; first difference {g}"))?;
    }
    Ok(())
}

fn c1_hopf() -> Check {
    let p = prep(&corpus("hopf"))?;
    let want = oracles::hopf_polynomials();
    for d in [1, 2] {
        let got = eq::equivariant_polynomial(&p, d).map_err(|e| e.to_string())?;
        ensure(got == want[&d], || format!("KhP_{{2,{d}}} = {got}, expected {}", want[&d]))?;
    }
    Ok(())
}

fn c2_hom_discrepancy() -> Check {
    let kinked = eq::hom_cohomology(&prep(&corpus("unknot_kinked_n2"))?, -1);
    let h2: Vec<((i64, i64), AbGroup)> = kinked.iter().filter(|((i, _), _)| *i == 2).map(|(k, g)| (k, g.clone())).collect();
    let want = vec![((2, 3), z2()), ((2, 5), z2())];
    ensure(h2 == want, || format!("kinked unknot H^2 Hom(Z_-, CKh) = {h2:?}"))?;
    let plain = eq::hom_cohomology(&prep(&corpus("unknot_n2"))?, -1);
    ensure(plain.degree(2).is_zero(), || format!("crossingless unknot H^2 = {}", plain.degree(2)))
}

fn c3_reidemeister() -> Check {
    let kinked = prep(&corpus("unknot_kinked_n2"))?;
    let plain = prep(&corpus("unknot_n2"))?;
    for d in [1, 2] {
        let a = eq::ext_groups(&kinked, d, 8).map_err(|e| e.to_string())?.groups;
        let b = eq::ext_groups(&plain, d, 8).map_err(|e| e.to_string())?.groups;
        same_groups(&a, &b, &format!("d = {d}"))?;
    }
    Ok(())
}

fn c4_trivial_links() -> Check {
    for (n, k, f) in trivial_link_cases() {
        let (p, m) = prime_power(n as u64).expect("prime power period");
        let pr = prep(&corpus(&format!("trivial_n{n}_k{k}_f{f}")))?;
        for u in 0..=m {
            let d = p.pow(m - u) as usize;
            let got = eq::ext_groups(&pr, d, 6).map_err(|e| e.to_string())?.groups;
            let want = oracles::trivial_link_ekh(p, m, k as u32, f as u32, u, 6).map_err(|e| e.to_string())?;
            same_groups(&got, &want, &format!("T_{{{k}*{n}+{f}}}, d = {d}"))?;
        }
    }
    Ok(())
}

fn c5_torus_classical() -> Check {
    for m in 2..=8u64 {
        let got = khovanov_polynomial(&corpus(&format!("t{m}_2"))).map_err(|e| e.to_string())?;
        let want = oracles::torus_khp(m).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("KhP(T({m},2)) = {got}, expected {want}"))?;
    }
    Ok(())
}

fn c6_torus_equivariant() -> Check {
    for m in 2..=8u64 {
        let d = corpus(&format!("t{m}_2"));
        let p = prep(&d)?;
        let kh = complex_homology(&p.full, Ring::Q).poincare();
        let p1 = eq::equivariant_polynomial(&p, 1).map_err(|e| e.to_string())?;
        let p2 = eq::equivariant_polynomial(&p, 2).map_err(|e| e.to_string())?;
        let (_, w2) = oracles::torus_ekh2(m).map_err(|e| e.to_string())?;
        let closed = if m % 2 == 0 { BiPoly::monomial(int(1), m as i64, 3 * m as i64) } else { BiPoly::zero() };
        ensure(w2 == closed, || format!("oracle KhP_{{2,2}}(T({m},2)) = {w2}"))?;
        ensure(p2 == w2, || format!("KhP_{{2,2}}(T({m},2)) = {p2}, expected {w2}"))?;
        ensure(p1 == kh.sub(&p2), || format!("KhP_{{2,1}}(T({m},2)) = {p1} is not KhP - KhP_{{2,2}}"))?;
    }
    Ok(())
}

fn c7_spectral() -> Check {
    for k in [2i64, 3] {
        let m = 2 * k as usize;
        let d = corpus(&format!("t{m}_2"));
        let ss = spectral::run_sector_pages(&d, 0, 2).map_err(|e| e.to_string())?;
        let e2: Vec<_> = ss.page(2).nonzero().collect();
        ensure(e2 == vec![((1, 2 * k - 1, 6 * k), 1)], || format!("T({m},2) sector 2 E_2 = {e2:?}"))?;
    }
    Ok(())
}

fn c8_localization() -> Check {
    for (name, d) in corpus_all() {
        if d.n != 2 && d.n != 3 {
            continue;
        }
        let p = prep(&d)?;
        let rep = eq::total_comparison(&p, d.num_crossings() as i64 + 4).map_err(|e| e.to_string())?;
        ensure(rep.ok(), || format!("{name}: {}", rep.mismatches.join("; ")))?;
    }
    Ok(())
}

fn c9_tails() -> Check {
    for (name, d) in corpus_all() {
        if d.n != 2 && d.n != 3 {
            continue;
        }
        let p = prep(&d)?;
        let m_top = complex_homology(&p.full, Ring::Z).iter().map(|((i, _), _)| i).max().unwrap_or(0);
        for dd in divisors(d.n as u64) {
            let rep = eq::tail_checks(&p, dd as usize, m_top + 6).map_err(|e| e.to_string())?;
            ensure(rep.failures.is_empty(), || format!("{name}, d = {dd}: {}", rep.failures.join("; ")))?;
        }
    }
    Ok(())
}

fn c10_orbit_identity() -> Check {
    let mut cases = 0;
    for p in (2u64..=16).filter(|&p| is_prime(p)) {
        for n in 1u32.. {
            let pn = p.pow(n);
            if pn > 16 {
                break;
            }
            for k in 1..=(16 / pn) as u32 {
                let census = oracles::orbit_census(p, n, k).map_err(|e| e.to_string())?;
                let mut total = LaurentPoly::zero();
                for s in 0..=n {
                    let q = oracles::qdim_m(p, n, s, k, 0).map_err(|e| e.to_string())?;
                    ensure(q == census[s as usize], || format!("p={p} n={n} k={k} s={s}: {q} vs census {}", census[s as usize]))?;
                    total = total.add(&q.scale(&int(p.pow(s) as i64)));
                }
                let want = LaurentPoly::unknot().pow(k * pn as u32);
                ensure(total == want, || format!("p={p} n={n} k={k}: sum is {total}"))?;
                cases += 1;
            }
        }
    }
    ensure(cases > 20, || format!("only {cases} cases"))
}

fn snf_self_check(m: &SparseMat<pkh_core::num::Int>) -> Check {
    let s = smith_normal_form(m, true);
    let u = SparseMat::from_dense(s.u.as_ref().expect("transforms"));
    let v = SparseMat::from_dense(s.v.as_ref().expect("transforms"));
    let d = u.mul(m).mul(&v);
    let mut want = Vec::new();
    for (k, x) in s.diag.iter().enumerate() {
        want.push((k, k, x.clone()));
    }
    ensure(d == SparseMat::from_triplets(m.rows, m.cols, want), || "U A V is not the Smith form".into())?;
    ensure(s.diag.windows(2).all(|w| (&w[1] % &w[0]) == int(0)), || "invariant factors do not divide".into())
}

fn idempotent_check(n: usize) -> Check {
    let ds: Vec<usize> = divisors(n as u64).into_iter().map(|d| d as usize).collect();
    let es: Vec<Vec<Rat>> = ds.iter().map(|&d| idempotent(d, n)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    let mut sum = vec![Rat::ZERO; n];
    for (a, ea) in es.iter().enumerate() {
        for (x, y) in sum.iter_mut().zip(ea) {
            *x += y;
        }
        for (b, eb) in es.iter().enumerate() {
            let prod = cyclic_mul_q(ea, eb);
            let want = if a == b { ea.clone() } else { vec![Rat::ZERO; n] };
            ensure(prod == want, || format!("e_{} e_{} wrong for n = {n}", ds[a], ds[b]))?;
        }
        let phi: Vec<Rat> = {
            let mut v = vec![Rat::ZERO; n];
            for (k, c) in cyclotomic(ds[a]).c.iter().enumerate() {
                v[k % n] += Rat::from(c.clone());
            }
            v
        };
        ensure(cyclic_mul_q(&phi, ea).iter().all(|x| *x == Rat::ZERO), || format!("Phi_{} e != 0", ds[a]))?;
    }
    let mut one = vec![Rat::ZERO; n];
    one[0] = Rat::ONE;
    ensure(sum == one, || format!("idempotents for n = {n} do not sum to 1"))
}

fn c11_core_invariants() -> Check {
    for (name, d) in corpus_all() {
        let kc = action(&d).map_err(|e| e.to_string())?;
        ensure(kc.d_squared_is_zero(), || format!("{name}: d^2 != 0"))?;
        verify_module_structure(&kc).map_err(|e| format!("{name}: {e}"))?;
        idempotent_check(d.n)?;
        if kc.total_rank() <= 600 {
            for c in kc.blocks.values() {
                for m in &c.d {
                    snf_self_check(m).map_err(|e| format!("{name}: {e}"))?;
                }
            }
        }
        if d.num_crossings() == 0 {
            continue;
        }
        let kh = khovanov_homology(&d, Ring::Q).map_err(|e| e.to_string())?;
        let x = spectral::orbit_crossings(&d, 0).map_err(|e| e.to_string())?;
        let ss = spectral::run_pages(&d, &x).map_err(|e| e.to_string())?;
        spectral::check_abutment(&ss, &kh).map_err(|e| format!("{name}: {e}"))?;
        spectral::check_total_complex(&d, &x).map_err(|e| format!("{name}: {e}"))?;
        if d.n == 2 {
            let p = prep(&d)?;
            for s in [1, 2] {
                let ss = spectral::run_sector_pages(&d, 0, s).map_err(|e| e.to_string())?;
                let rat = eq::rational_equivariant(&p, s).map_err(|e| e.to_string())?;
                spectral::check_abutment(&ss, &rat).map_err(|e| format!("{name}, sector {s}: {e}"))?;
            }
        }
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Check); 11] = [
        ("1 Hopf link equivariant polynomials", Duration::from_secs(1), c1_hopf),
        ("2 plain Hom discrepancy on the kinked unknot", Duration::from_secs(1), c2_hom_discrepancy),
        ("3 equivariant Reidemeister invariance, window 8", Duration::from_secs(5), c3_reidemeister),
        ("4 trivial links against closed forms, window 6", Duration::from_secs(120), c4_trivial_links),
        ("5 classical T(n,2), n = 2..8", Duration::from_secs(60), c5_torus_classical),
        ("6 equivariant T(n,2), n = 2..8", Duration::from_secs(300), c6_torus_equivariant),
        ("7 sector-2 E_2 of T(4,2) and T(6,2)", Duration::from_secs(120), c7_spectral),
        ("8 localization for periods 2 and 3", Duration::from_secs(300), c8_localization),
        ("9 periodic torsion tails", Duration::from_secs(300), c9_tails),
        ("10 orbit identity for k p^n <= 16", Duration::from_secs(30), c10_orbit_identity),
        ("11 core invariants on the corpus", Duration::from_secs(600), c11_core_invariants),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, limit, f) in criteria {
        if !filter.is_empty() && !filter.iter().any(|x| name.contains(x.as_str())) {
            continue;
        }
        let t = Instant::now();
        let res = f();
        let el = t.elapsed();
        let res = res.and_then(|_| ensure(el <= limit, || format!("took {el:.2?}, limit {limit:?}")));
        match res {
            Ok(()) => println!("PASS  criterion {name} ({el:.2?})"),
            Err(e) => {
                failed += 1;
                println!("FAIL  criterion {name} ({el:.2?}): {e}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
