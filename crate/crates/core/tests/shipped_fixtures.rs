//! The corpora under `fixtures/` must match what the generator produces.

use std::fs;
use std::path::Path;

use swarm_debugging::fixtures;

#[test]
fn shipped_corpora_match_the_generator() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    for f in fixtures::all() {
        let dir = root.join(f.name);
        let log = fs::read_to_string(dir.join(fixtures::LOG_FILE)).unwrap();
        assert!(log == f.log_text(), "{}: session log drifted; run `swarm fixtures generate --out fixtures`", f.name);
        for (path, text) in &f.files {
            let shipped = fs::read_to_string(dir.join(fixtures::SOURCE_DIR).join(path)).unwrap();
            assert!(&shipped == text, "{}: {path} drifted", f.name);
        }
    }
}
