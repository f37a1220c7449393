//! The shipped proof files under corpus/ are the public contract; this
//! keeps them in sync with the built-in proofs.

use rskp::kpcalc::{check_fin, corpus, parse_proof, write_proof};
use std::path::PathBuf;

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

#[test]
fn files_match_the_builtin_proofs() {
    for (name, p) in corpus() {
        let path = corpus_dir().join(format!("{name}.kp"));
        let text = std::fs::read_to_string(&path)
            .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(text, write_proof(&p), "{name}");
    }
}

#[test]
fn files_parse_and_check() {
    for (name, p) in corpus() {
        let path = corpus_dir().join(format!("{name}.kp"));
        let text = std::fs::read_to_string(&path).unwrap();
        let parsed = parse_proof(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(parsed.sequent, p.sequent, "{name}");
        assert!(check_fin(&parsed).is_empty(), "{name}");
    }
}

#[test]
#[ignore = "rewrites the shipped files from the built-in proofs"]
fn regenerate() {
    let dir = corpus_dir();
    std::fs::create_dir_all(&dir).unwrap();
    for (name, p) in corpus() {
        std::fs::write(dir.join(format!("{name}.kp")), write_proof(&p)).unwrap();
    }
}
