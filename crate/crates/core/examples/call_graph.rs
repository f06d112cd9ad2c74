//! Builds the type-level call graph of two tasks, finds starting and ending
//! types, lays it out and exports it as DOT.

use swarm_debugging::graph::*;
use swarm_debugging::{fixtures, QueryFilter};

fn main() -> swarm_debugging::Result<()> {
    let store = fixtures::two_task_gv().load()?;
    let snap = store.snapshot();
    let product = snap.product_named(fixtures::GV_PRODUCT).unwrap().id.clone();
    for key in ["318", "667"] {
        let task = snap.task_by_key(&product, key).unwrap().id.clone();
        let graph = build_call_graph(&snap, &QueryFilter::product(product.clone()).with_tasks([task]), Granularity::TypeLevel);
        println!("task {key}: {} nodes, {} edges, weight {}", graph.nodes.len(), graph.edges.len(), graph.total_weight());
    }

    let graph = build_call_graph(&snap, &QueryFilter::product(product), Granularity::TypeLevel);
    let ends = starting_and_ending_methods(&graph);
    let names = |ids: &std::collections::BTreeSet<NodeId>| ids.iter().map(|n| graph.label(n).to_owned()).collect::<Vec<_>>();
    println!("starting: {:?}", names(&ends.starting));
    println!("ending: {:?}", names(&ends.ending));
    let layers = layered_layout(&graph);
    let depth = layers.values().max().map_or(0, |d| d + 1);
    println!("{depth} layers");

    let session = snap.sessions().next().unwrap().id.clone();
    for row in sequence_stack_rows(&snap, &session)?.iter().take(3) {
        println!("stack row of {} methods", row.methods.len());
    }
    print!("{}", String::from_utf8(export_graph(&graph, GraphFormat::Dot)).unwrap());
    Ok(())
}
