use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(format!("{name}.json")).display().to_string()
}

fn pkh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pkh")).args(args).output().expect("spawn pkh")
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn poly_of_the_hopf_link() {
    let hopf = corpus("hopf");
    let v = json(&pkh(&["poly", &hopf]));
    assert_eq!(v, serde_json::json!("1 + q^2 + t^2*q^4 + t^2*q^6"));
}

#[test]
fn equivariant_polynomials_of_the_hopf_link() {
    let hopf = corpus("hopf");
    assert_eq!(json(&pkh(&["poly", &hopf, "--d", "2"])), serde_json::json!("t^2*q^6"));
    assert_eq!(json(&pkh(&["poly", &hopf, "--d", "1"])), serde_json::json!("1 + q^2 + t^2*q^4"));
}

#[test]
fn output_is_deterministic() {
    let t = corpus("t4_2");
    for args in [vec!["kh", &t], vec!["ekh", &t, "--d", "2"], vec!["ss", &t, "--d", "2"]] {
        let a = pkh(&args);
        let b = pkh(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn verify_passes_on_the_corpus_sample() {
    for name in ["hopf", "unknot_kinked_n2", "t3_2", "trivial_n3_k1_f1"] {
        let out = pkh(&["verify", &corpus(name)]);
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stdout));
    }
}

#[test]
fn exit_codes() {
    let hopf = corpus("hopf");
    assert_eq!(pkh(&["ekh", &hopf, "--d", "3"]).status.code(), Some(1));
    assert_eq!(pkh(&["kh", "--bogus", &hopf]).status.code(), Some(1));
    assert_eq!(pkh(&["kh", "/nonexistent/diagram.json"]).status.code(), Some(3));
    let dir = std::env::temp_dir().join(format!("pkh-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\"n\": 2}").unwrap();
    assert_eq!(pkh(&["kh", bad.to_str().unwrap()]).status.code(), Some(3));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn oracle_values() {
    let v = json(&pkh(&["oracle", "p-poly", "--p", "2", "--n", "1"]));
    assert!(v.is_string() || v.is_object(), "{v}");
    let t = json(&pkh(&["oracle", "torus", "--n", "2"]));
    assert_eq!(t, serde_json::json!("1 + q^2 + t^2*q^4 + t^2*q^6"));
}
