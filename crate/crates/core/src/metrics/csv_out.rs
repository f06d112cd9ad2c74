//! CSV forms of the analysis results. Column headers are fixed:
//!
//! | table | columns |
//! |---|---|
//! | distribution | `statement_class,count,percent` |
//! | elapsed by task | `task,sessions,mean_elapsed_min,sd_elapsed_min` |
//! | first breakpoint | `n,mean_mfb,sd_mfb` |
//! | fit | `alpha,beta,rho,pearson_log,n` |
//! | colocated | `type,line,tasks,count,developers` |
//! | class/task matrix | `type,<one column per task>,breakpoints,developers` |
//! | hot-spots | `location,breakpoints,developers,tasks` |
//! | group comparison | `task,metric,control_s,experiment_s,delta_s,ratio_pct` |
//!
//! Task sets are joined with `;`; absent values are empty cells.

use std::io::Write;

use serde::Serialize;

use super::*;
use crate::error::Result;
use crate::store::write_csv;

pub fn distribution_csv(rows: &[DistributionRow], out: impl Write) -> Result<()> {
    write_csv(rows, out)
}

#[derive(Serialize)]
struct ElapsedRow<'a> {
    task: &'a str,
    sessions: usize,
    mean_elapsed_min: f64,
    sd_elapsed_min: f64,
}

pub fn elapsed_by_task_csv(stats: &FirstBreakpointStats, out: impl Write) -> Result<()> {
    let rows: Vec<ElapsedRow> = stats
        .per_task
        .iter()
        .map(|t| ElapsedRow {
            task: &t.task,
            sessions: t.sessions,
            mean_elapsed_min: t.mean_et_ms / 60_000.0,
            sd_elapsed_min: t.sd_et_ms / 60_000.0,
        })
        .collect();
    write_csv(&rows, out)
}

#[derive(Serialize)]
struct MfbRow {
    n: usize,
    mean_mfb: f64,
    sd_mfb: f64,
}

pub fn first_breakpoint_csv(stats: &FirstBreakpointStats, out: impl Write) -> Result<()> {
    write_csv(&[MfbRow { n: stats.n, mean_mfb: stats.mean_mfb, sd_mfb: stats.sd_mfb }], out)
}

pub fn fit_csv(fit: &PowerLawFit, out: impl Write) -> Result<()> {
    write_csv(std::slice::from_ref(fit), out)
}

#[derive(Serialize)]
struct ColocatedCsv<'a> {
    #[serde(rename = "type")]
    type_name: &'a str,
    line: u32,
    tasks: String,
    count: usize,
    developers: usize,
}

pub fn colocated_csv(rows: &[ColocatedRow], out: impl Write) -> Result<()> {
    let rows: Vec<ColocatedCsv> = rows
        .iter()
        .map(|r| ColocatedCsv {
            type_name: &r.type_name,
            line: r.location.line_number,
            tasks: r.tasks.join(";"),
            count: r.count,
            developers: r.developers,
        })
        .collect();
    write_csv(&rows, out)
}

pub fn class_task_csv(rows: &[ClassTaskRow], out: impl Write) -> Result<()> {
    let tasks: std::collections::BTreeSet<&str> = rows.iter().flat_map(|r| r.tasks.iter().map(String::as_str)).collect();
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["type"];
    header.extend(tasks.iter().copied());
    header.extend(["breakpoints", "developers"]);
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![r.type_name.clone()];
        rec.extend(tasks.iter().map(|t| if r.tasks.iter().any(|x| x == t) { "x".to_owned() } else { String::new() }));
        rec.push(r.breakpoints.to_string());
        rec.push(r.developers.to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct HotSpotCsv {
    location: String,
    breakpoints: usize,
    developers: usize,
    tasks: usize,
}

pub fn hotspots_csv(rows: &[HotSpot], out: impl Write) -> Result<()> {
    let rows: Vec<HotSpotCsv> = rows
        .iter()
        .map(|h| HotSpotCsv {
            location: h.label(),
            breakpoints: h.breakpoint_count,
            developers: h.distinct_developers,
            tasks: h.distinct_tasks,
        })
        .collect();
    write_csv(&rows, out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub task: String,
    pub metric: &'static str,
    pub control_s: Option<f64>,
    pub experiment_s: Option<f64>,
    pub delta_s: Option<f64>,
    pub ratio_pct: Option<u32>,
}

/// Three rows per task: first breakpoint, time to start, elapsed time.
pub fn comparison_rows(per_task: &[(String, GroupComparison)]) -> Vec<ComparisonRow> {
    let mut out = Vec::new();
    for (task, c) in per_task {
        let row = |metric, control_s, experiment_s, delta_s, ratio_pct| ComparisonRow {
            task: task.clone(),
            metric,
            control_s,
            experiment_s,
            delta_s,
            ratio_pct,
        };
        out.push(row(
            "first_breakpoint",
            c.control.first_breakpoint_s,
            c.experiment.first_breakpoint_s,
            c.delta.first_breakpoint_s,
            c.ratio.first_breakpoint_pct,
        ));
        out.push(row(
            "time_to_start",
            c.control.time_to_start_s,
            c.experiment.time_to_start_s,
            c.delta.time_to_start_s,
            c.ratio.time_to_start_pct,
        ));
        out.push(row(
            "elapsed",
            Some(c.control.elapsed_s),
            Some(c.experiment.elapsed_s),
            Some(c.delta.elapsed_s),
            c.ratio.elapsed_pct,
        ));
    }
    out
}

pub fn comparison_csv(per_task: &[(String, GroupComparison)], out: impl Write) -> Result<()> {
    write_csv(&comparison_rows(per_task), out)
}
