//! Quantitative analyses over stored sessions: statement classes, session
//! timing, power-law fit, co-location tables, hot-spots and recommendations.

mod csv_out;
mod hotspots;
mod statement;
mod timing;

pub use csv_out::*;
pub use hotspots::*;
pub use statement::*;
pub use timing::*;

use std::collections::BTreeSet;

use crate::error::Result;
use crate::store::{QueryFilter, StoreSnapshot};

/// Group comparison for every task in scope that has sessions under both
/// labels, keyed by issue key.
pub fn compare_groups_by_task(
    snapshot: &StoreSnapshot,
    filter: &QueryFilter,
    control_label: &str,
    experiment_label: &str,
) -> Result<Vec<(String, GroupComparison)>> {
    let metrics = all_session_metrics(snapshot, filter);
    let tasks: BTreeSet<&str> = metrics.iter().map(|m| m.task.as_str()).collect();
    let mut out = Vec::new();
    for task in tasks {
        let pick = |label: &str| -> Vec<&SessionMetrics> {
            metrics.iter().filter(|m| m.task == task && m.label == label).collect()
        };
        let (c, e) = (pick(control_label), pick(experiment_label));
        if c.is_empty() && e.is_empty() {
            continue;
        }
        out.push((task.to_owned(), group_comparison(&c, &e)?));
    }
    Ok(out)
}
