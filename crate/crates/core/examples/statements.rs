//! Classifies breakpoint lines by statement kind and tabulates them.

use swarm_debugging::metrics::*;
use swarm_debugging::{fixtures, QueryFilter};

fn main() -> swarm_debugging::Result<()> {
    for line in ["if (entry == null) {", "return parser.parse(reader);", "count += 1;", "panel.markBaseChanged();"] {
        println!("{:?} -> {:?}", line, classify_statement(line));
    }
    let corpus = fixtures::study1();
    let store = corpus.load()?;
    let rows = statement_type_distribution(&store.snapshot(), &QueryFilter::all(), &corpus.source_resolver())?;
    distribution_csv(&rows, std::io::stdout())
}
