use clap::{Parser, Subcommand, ValueEnum};
use pkh_core::action::{action, verify_module_structure};
use pkh_core::diagram::{load_diagram, PeriodicDiagram};
use pkh_core::equivariant::{self as eq, Prepared};
use pkh_core::homalg::GradedGroups;
use pkh_core::khovanov::{complex_homology, khovanov_homology, khovanov_polynomial};
use pkh_core::num::{divisors, euler_phi, Ring};
use pkh_core::spectral::{self, SpectralSequence};
use pkh_core::{oracles, Error};
use serde_json::{json, Value};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "pkh", version, about = "Classical and equivariant Khovanov homology of periodic links")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Coeffs {
    Z,
    Q,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq)]
enum Format {
    Json,
    Table,
}

#[derive(clap::Args, Debug)]
struct Common {
    /// Diagram file (JSON)
    file: String,
    /// Divisor d of the period selecting Z[xi_d]
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, value_enum, default_value = "z")]
    coeffs: Coeffs,
    /// Largest homological degree of Ext groups
    #[arg(long)]
    window: Option<i64>,
    /// Quotient tangle crossing whose orbit filters the complex
    #[arg(long, default_value_t = 0)]
    orbit: usize,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OracleKind {
    /// KhP(T(n,2))
    Torus,
    /// (KhP_{2,1}, KhP_{2,2}) of T(n,2)
    TorusEquivariant,
    /// P_n for the prime p
    PPoly,
    /// qdim M_s^{k,f}
    Qdim,
    /// Ext^i(Z[xi_{p^s}], Z[xi_{p^s}]) over Z[Z/p^m]
    Cohomology,
    /// restriction of Z[xi_{p^{n-s}}] to Z/p^m
    Restrict,
    /// equivariant homology of a trivial link, d = p^{n-u}
    TrivialLink,
}

#[derive(clap::Args, Debug)]
struct OracleArgs {
    kind: OracleKind,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    s: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long, default_value_t = 0)]
    f: u32,
    #[arg(long)]
    u: Option<u32>,
    #[arg(long)]
    i: Option<u64>,
    #[arg(long, default_value_t = 6)]
    window: i64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Khovanov homology
    Kh(Common),
    /// Equivariant Khovanov homology Ext(Z[xi_d], CKh)
    Ekh(Common),
    /// Orbit-resolution spectral sequence
    Ss(Common),
    /// Khovanov polynomial, or KhP_{n,d} with --d
    Poly(Common),
    /// Closed-form reference values
    Oracle(OracleArgs),
    /// Chain-level invariant checks
    Verify(Common),
}

enum Failure {
    Usage(String),
    Invariant(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotDivisor { .. } | Error::Argument(_) => Failure::Usage(e.to_string()),
            Error::Invariant(_) => Failure::Invariant(e.to_string()),
            Error::Parse { .. } | Error::InvalidDiagram(_) | Error::Orientation(_) | Error::Io(_) => {
                Failure::Io(e.to_string())
            }
        }
    }
}

type Out = Result<String, Failure>;

fn main() -> ExitCode {
    env_logger::init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let res = match cli.command {
        Command::Kh(a) => cmd_kh(&a),
        Command::Ekh(a) => cmd_ekh(&a),
        Command::Ss(a) => cmd_ss(&a),
        Command::Poly(a) => cmd_poly(&a),
        Command::Oracle(a) => cmd_oracle(&a),
        Command::Verify(a) => cmd_verify(&a),
    };
    match res {
        Ok(s) => {
            println!("{s}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Invariant(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}

fn load(a: &Common) -> Result<PeriodicDiagram, Failure> {
    load_diagram(&a.file).map_err(|e| match e {
        Error::Io(e) => Failure::Io(format!("{}: {e}", a.file)),
        e => e.into(),
    })
}

fn check_d(dg: &PeriodicDiagram, d: usize) -> Result<(), Failure> {
    if d == 0 || dg.n % d != 0 {
        return Err(Error::NotDivisor { d: d as u64, n: dg.n as u64 }.into());
    }
    Ok(())
}

fn groups_json(g: &GradedGroups) -> Value {
    json!(g.records())
}

fn groups_table(g: &GradedGroups) -> String {
    let mut s = String::from("i\tj\tgroup");
    for ((i, j), a) in g.iter() {
        s.push_str(&format!("\n{i}\t{j}\t{a}"));
    }
    s
}

fn render(v: Value, table: impl FnOnce() -> String, f: Format) -> String {
    match f {
        Format::Json => serde_json::to_string_pretty(&v).expect("serializable"),
        Format::Table => table(),
    }
}

fn cmd_kh(a: &Common) -> Out {
    let dg = load(a)?;
    let ring = match a.coeffs {
        Coeffs::Z => Ring::Z,
        Coeffs::Q => Ring::Q,
    };
    let g = khovanov_homology(&dg, ring)?;
    Ok(render(json!({ "groups": groups_json(&g) }), || groups_table(&g), a.format))
}

fn top_degree(p: &Prepared) -> i64 {
    complex_homology(&p.full, Ring::Z).iter().map(|((i, _), _)| i).max().unwrap_or(0)
}

/// First degree above the classical top from which the window is 2-periodic.
fn periodic_tail(g: &GradedGroups, m_top: i64, window: i64) -> Option<i64> {
    let js: std::collections::BTreeSet<i64> = g.iter().map(|((_, j), _)| j).collect();
    let ok = (m_top + 1..=window - 2).all(|i| js.iter().all(|&j| g.get(i, j) == g.get(i + 2, j)));
    (ok && window - 2 > m_top).then_some(m_top + 1)
}

fn cmd_ekh(a: &Common) -> Out {
    let dg = load(a)?;
    let ds: Vec<usize> = match a.d {
        Some(d) => {
            check_d(&dg, d)?;
            vec![d]
        }
        None => divisors(dg.n as u64).into_iter().map(|d| d as usize).collect(),
    };
    let p = eq::prepare(&dg)?;
    let mut out = Vec::new();
    let mut table = String::new();
    match a.coeffs {
        Coeffs::Q => {
            for d in ds {
                let g = eq::rational_equivariant(&p, d)?;
                let phi = euler_phi(d as u64) as usize;
                let mut scaled = GradedGroups::default();
                for ((i, j), x) in g.iter() {
                    scaled.insert(i, j, pkh_core::homalg::AbGroup::free(x.free / phi));
                }
                table.push_str(&format!("d = {d} (dimensions over Q(xi_{d}))\n{}\n", groups_table(&scaled)));
                out.push(json!({ "d": d, "coeffs": "q", "groups": groups_json(&scaled) }));
            }
        }
        Coeffs::Z => {
            let window = a.window.unwrap_or_else(|| p.default_window());
            if window < 0 {
                return Err(Failure::Usage("window must be non-negative".into()));
            }
            let m_top = top_degree(&p);
            for d in ds {
                let e = eq::ext_groups(&p, d, window)?;
                let tail = periodic_tail(&e.groups, m_top, window);
                table.push_str(&format!("d = {d}, window {window}, {}\n{}\n", tail.map_or("no periodic tail in window".to_string(), |t| format!("periodic from degree {t}")), groups_table(&e.groups)));
                out.push(json!({
                    "d": d,
                    "coeffs": "z",
                    "window": window,
                    "classical_top_degree": m_top,
                    "periodic_tail_from": tail,
                    "groups": groups_json(&e.groups),
                }));
            }
        }
    }
    Ok(render(json!({ "n": dg.n, "results": out }), || table.trim_end().to_string(), a.format))
}

fn pages_json(ss: &SpectralSequence) -> Value {
    let pages: Vec<Value> = ss
        .pages
        .iter()
        .map(|pg| {
            let entries: Vec<Value> =
                pg.nonzero().map(|((p, j, q), v)| json!({ "p": p, "j": j, "q": q, "dim": v })).collect();
            json!({ "r": pg.r, "entries": entries })
        })
        .collect();
    json!({ "crossings": ss.x, "pages": pages })
}

fn pages_table(ss: &SpectralSequence) -> String {
    let mut s = format!("filtration by crossings {:?}", ss.x);
    for pg in &ss.pages {
        s.push_str(&format!("\nE_{}\np\tj\tq\tdim", pg.r));
        for ((p, j, q), v) in pg.nonzero() {
            s.push_str(&format!("\n{p}\t{j}\t{q}\t{v}"));
        }
    }
    s
}

fn cmd_ss(a: &Common) -> Out {
    let dg = load(a)?;
    let ss = match a.d {
        Some(d) => {
            check_d(&dg, d)?;
            spectral::run_sector_pages(&dg, a.orbit, d)?
        }
        None => spectral::run_pages(&dg, &spectral::orbit_crossings(&dg, a.orbit)?)?,
    };
    Ok(render(json!({ "sector": a.d, "spectral_sequence": pages_json(&ss) }), || pages_table(&ss), a.format))
}

fn cmd_poly(a: &Common) -> Out {
    let dg = load(a)?;
    let poly = match a.d {
        Some(d) => {
            check_d(&dg, d)?;
            eq::equivariant_polynomial(&eq::prepare(&dg)?, d)?
        }
        None => khovanov_polynomial(&dg)?,
    };
    let s = poly.to_string();
    Ok(render(json!(s), || s.clone(), a.format))
}

fn need<T: Copy>(v: Option<T>, name: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("this oracle needs --{name}")))
}

fn cmd_oracle(a: &OracleArgs) -> Out {
    let v: Value = match a.kind {
        OracleKind::Torus => json!(oracles::torus_khp(need(a.n, "n")?)?.to_string()),
        OracleKind::TorusEquivariant => {
            let (p1, p2) = oracles::torus_ekh2(need(a.n, "n")?)?;
            json!({ "1": p1.to_string(), "2": p2.to_string() })
        }
        OracleKind::PPoly => json!(oracles::poly_p(need(a.p, "p")?, need(a.n, "n")? as u32)?.to_string()),
        OracleKind::Qdim => {
            let (p, n) = (need(a.p, "p")?, need(a.n, "n")? as u32);
            json!(oracles::qdim_m(p, n, need(a.s, "s")?, need(a.k, "k")?, a.f)?.to_string())
        }
        OracleKind::Cohomology => {
            let (p, m, s) = (need(a.p, "p")?, need(a.m, "m")?, need(a.s, "s")?);
            let g = oracles::cyclic_group_cohomology(p, m, s, need(a.i, "i")?)?;
            json!({ "group": g.to_string(), "free": g.free, "torsion": g.torsion_u64() })
        }
        OracleKind::Restrict => {
            let (p, n) = (need(a.p, "p")?, need(a.n, "n")? as u32);
            match oracles::restrict_cyclotomic(p, n, need(a.s, "s")?, need(a.m, "m")?)? {
                oracles::Restricted::Trivial { rank } => json!({ "trivial_rank": rank }),
                oracles::Restricted::Cyclotomic { order, copies } => json!({ "cyclotomic": order, "copies": copies }),
            }
        }
        OracleKind::TrivialLink => {
            let (p, n) = (need(a.p, "p")?, need(a.n, "n")? as u32);
            let g = oracles::trivial_link_ekh(p, n, need(a.k, "k")?, a.f, need(a.u, "u")?, a.window)?;
            json!({ "groups": groups_json(&g) })
        }
    };
    Ok(render(v.clone(), || match &v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }, a.format))
}

fn cmd_verify(a: &Common) -> Out {
    let dg = load(a)?;
    let mut checks: Vec<(String, Result<(), String>)> = Vec::new();
    let kc = action(&dg)?;
    checks.push(("d^2 = 0".into(), kc.d_squared_is_zero().then_some(()).ok_or_else(|| "d^2 != 0".into())));
    checks.push(("psi^n = id, psi d = d psi".into(), verify_module_structure(&kc).map_err(|e| e.to_string())));
    let round = pkh_core::diagram::parse_diagram(&dg.to_json()).map(|d| d.to_json() == dg.to_json());
    checks.push(("canonical JSON round-trip".into(), match round {
        Ok(true) => Ok(()),
        Ok(false) => Err("serialization is not stable".into()),
        Err(e) => Err(e.to_string()),
    }));
    match eq::prepare_complex(kc) {
        Ok(p) => {
            checks.push(("equivariant reduction".into(), Ok(())));
            let w = dg.num_crossings() as i64 + 2;
            checks.push(("localization".into(), match eq::total_comparison(&p, w) {
                Ok(r) if r.ok() => Ok(()),
                Ok(r) => Err(r.mismatches.join("; ")),
                Err(e) => Err(e.to_string()),
            }));
        }
        Err(e) => checks.push(("equivariant reduction".into(), Err(e.to_string()))),
    }
    let failed: Vec<&String> = checks.iter().filter(|(_, r)| r.is_err()).map(|(n, _)| n).collect();
    let v = json!({
        "checks": checks.iter().map(|(n, r)| json!({ "name": n, "ok": r.is_ok(), "detail": r.as_ref().err() })).collect::<Vec<_>>(),
    });
    let table = || {
        checks
            .iter()
            .map(|(n, r)| format!("{}\t{n}", if r.is_ok() { "ok" } else { "FAIL" }))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let s = render(v, table, a.format);
    if failed.is_empty() {
        Ok(s)
    } else {
        println!("{s}");
        Err(Failure::Invariant(format!("failed checks: {failed:?}")))
    }
}
