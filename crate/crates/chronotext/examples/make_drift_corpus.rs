//! Regenerates the bundled example corpus at `data/drift_corpus.jsonl`.
//!
//! ```sh
//! cargo run -p chronotext --example make_drift_corpus
//! ```
//!
//! The file is a deterministic function of the fixed seed, so running
//! this reproduces the bundled bytes exactly.

use std::path::Path;

fn main() {
    let drift = chronotext::synthetic::drift_corpus(42);
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/drift_corpus.jsonl");
    let mut out = Vec::new();
    chronotext::export::corpus_to_json_lines(&mut out, &drift.corpus).expect("serialize corpus");
    std::fs::create_dir_all(path.parent().unwrap()).expect("create data directory");
    std::fs::write(&path, out).expect("write corpus file");
    println!(
        "wrote {} documents (pioneer {}) to {}",
        drift.corpus.len(),
        drift.pioneer_id,
        path.display()
    );
}
