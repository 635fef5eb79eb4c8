//! The shipped JSON corpus matches the builders and serializes canonically.
//! Regenerate with `PKH_WRITE_CORPUS=1 cargo test -p pkh --test corpus`.

use pkh_core::corpus::standard_corpus;
use pkh_core::diagram::{load_diagram, parse_diagram};
use std::path::PathBuf;

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

#[test]
fn corpus_files_match_builders() {
    let write = std::env::var_os("PKH_WRITE_CORPUS").is_some();
    for (name, d) in standard_corpus() {
        let path = corpus_dir().join(format!("{name}.json"));
        let json = d.to_json();
        if write {
            std::fs::write(&path, format!("{json}\n")).unwrap();
        }
        let loaded = load_diagram(&path).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(loaded.to_json(), json, "{name} differs from its builder");
        let again = parse_diagram(&loaded.to_json()).unwrap();
        assert_eq!(again.to_json(), json, "{name} does not round-trip");
    }
}

#[test]
fn every_file_is_in_the_corpus() {
    let names: Vec<String> = standard_corpus().into_iter().map(|(n, _)| format!("{n}.json")).collect();
    for entry in std::fs::read_dir(corpus_dir()).unwrap() {
        let f = entry.unwrap().file_name().into_string().unwrap();
        assert!(names.contains(&f), "stray corpus file {f}");
    }
}
