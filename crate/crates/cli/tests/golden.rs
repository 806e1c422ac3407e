//! Catalog verification reports compared byte for byte with `tests/golden/v1`.
//! Set `GALOIS_LOCUS_UPDATE_GOLDEN=1` to rewrite them.

use std::fs;
use std::path::PathBuf;
use std::process::Command;

const IDS: [&str; 14] = [
    "I-0",
    "I-1",
    "I-2",
    "I-3",
    "I-4i",
    "I-4ii",
    "II",
    "T2-1",
    "T2-2",
    "EX-EVEN-i",
    "EX-EVEN-ii",
    "EX1",
    "EX2",
    "CONE-I0",
];

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/v1")
}

#[test]
fn catalog_reports_match_the_corpus() {
    let update = std::env::var_os("GALOIS_LOCUS_UPDATE_GOLDEN").is_some();
    let dir = golden_dir();
    if update {
        fs::create_dir_all(&dir).unwrap();
    }
    let mut changed = Vec::new();
    for id in IDS {
        let out = Command::new(env!("CARGO_BIN_EXE_galois-locus"))
            .args(["catalog", "verify", "--id", id, "--jobs", "2"])
            .output()
            .unwrap();
        assert_eq!(
            out.status.code(),
            Some(0),
            "{id}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let path = dir.join(format!("{id}.json"));
        if update {
            fs::write(&path, &out.stdout).unwrap();
        } else if fs::read(&path).unwrap() != out.stdout {
            changed.push(id);
        }
    }
    assert!(
        changed.is_empty(),
        "reports differ from the corpus: {changed:?}"
    );
}
