//! Where developers put breakpoints: colocated lines, hot methods and
//! recommendations for a new session.

use swarm_debugging::metrics::*;
use swarm_debugging::{fixtures, QueryFilter};

fn main() -> swarm_debugging::Result<()> {
    let store = fixtures::across_tasks().load()?;
    let snap = store.snapshot();
    let all = QueryFilter::all();
    let across = colocated_breakpoints(&snap, &all, ColocationMode::AcrossTasks);
    println!("{} lines share breakpoints across tasks", across.len());
    colocated_csv(&across, std::io::stdout())?;

    println!("methods with at least 2 breakpoints:");
    hotspots_csv(&method_hotspots(&snap, &all, 2), std::io::stdout())?;

    let product = snap.product_named(fixtures::ACROSS_PRODUCT).unwrap().id.clone();
    for spot in recommend_breakpoints(&snap, &product, None, 3) {
        println!("try {} ({} breakpoints, {} developers)", spot.label(), spot.breakpoint_count, spot.distinct_developers);
    }
    Ok(())
}
