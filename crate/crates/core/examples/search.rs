//! Finds breakpoints by type or method name in the three search modes.

use swarm_debugging::search::*;
use swarm_debugging::fixtures;

fn main() -> swarm_debugging::Result<()> {
    let store = fixtures::study1().load()?;
    let snap = store.snapshot();
    for (text, mode) in [("parser", SearchMode::Match), ("parsr", SearchMode::Fuzzy), ("bib*parser", SearchMode::Wildcard)] {
        let hits = search_breakpoints(&snap, &SearchQuery::new(text, mode))?;
        println!("{mode:?} {text:?}: {} hits", hits.len());
        for hit in hits.iter().take(3) {
            let ty = snap.type_entity(&hit.breakpoint.type_id).unwrap();
            println!("  {:.2} {:?} {}:{}", hit.score, hit.matched_field, ty.simple_name, hit.breakpoint.line_number);
        }
    }
    println!("tokens of HTMLParser.parse2(String): {:?}", tokenize("HTMLParser.parse2(String)"));
    Ok(())
}
