//! Imports a session log into an on-disk store, reopens it and compacts it.

use swarm_debugging::{fixtures, Store};

fn main() -> swarm_debugging::Result<()> {
    let dir = std::env::temp_dir().join(format!("swarm-example-{}", std::process::id()));
    let corpus = fixtures::study1();
    {
        let store = Store::open(&dir)?;
        let summary = store.import_session_log(corpus.log_text().as_bytes())?;
        println!("imported {} sessions, {} breakpoints, {} rejected", summary.sessions_opened, summary.breakpoints, summary.rejected);
    }
    let store = Store::open(&dir)?;
    let snap = store.snapshot();
    println!("reopened with {} rows and {} sessions", snap.row_count(), snap.sessions().count());
    store.compact()?;
    let again = Store::open(&dir)?.snapshot();
    println!("after compaction: {} rows, audit problems: {}", again.row_count(), again.audit().len());
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
