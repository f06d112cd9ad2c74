use std::collections::BTreeMap;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::model::*;
use crate::store::{require_session, QueryFilter, StoreSnapshot};

/// Exact non-negative ratio of two millisecond durations, kept in lowest
/// terms. Serializes as its floating-point value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fraction {
    num: i64,
    den: i64,
}

impl Fraction {
    pub fn new(num: i64, den: i64) -> Option<Self> {
        if den <= 0 || num < 0 {
            return None;
        }
        let g = gcd(num, den).max(1);
        Some(Fraction { num: num / g, den: den / g })
    }

    pub fn numer(&self) -> i64 {
        self.num
    }

    pub fn denom(&self) -> i64 {
        self.den
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `self * x`, exact when the result is integral.
    pub fn times(&self, x: i64) -> Option<i64> {
        let p = (self.num as i128) * (x as i128);
        (p % self.den as i128 == 0).then(|| (p / self.den as i128) as i64)
    }
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

impl Serialize for Fraction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.value())
    }
}

/// Timing of one closed session, all values in epoch or duration ms.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SessionMetrics {
    pub session_id: SessionId,
    /// Task issue key.
    pub task: String,
    pub developer_id: DeveloperId,
    pub label: String,
    pub st: i64,
    pub fb: Option<i64>,
    pub t: i64,
    pub et: i64,
    pub ef: Option<i64>,
    pub mfb: Option<Fraction>,
    /// First `Resume` after the session start, relative to it.
    pub time_to_start: Option<i64>,
}

/// Derives the timing of a closed session from its stored rows.
pub fn session_metrics(snapshot: &StoreSnapshot, session_id: &SessionId) -> Result<SessionMetrics> {
    let session = require_session(snapshot, session_id)?;
    let Some(end) = session.finished_at else {
        return Err(Error::SessionOpen(session_id.to_string()));
    };
    let st = session.started_at.0;
    let t = end.0;
    let fb = snapshot.session_breakpoints(session_id).iter().map(|b| b.created_at.0).min();
    let resume = snapshot
        .session_events(session_id)
        .iter()
        .filter(|e| e.kind == DebugEventKind::Resume && e.occurred_at.0 >= st)
        .map(|e| e.occurred_at.0)
        .min();
    let et = t - st;
    let ef = fb.map(|fb| fb - st);
    let task = snapshot.task(&session.task_id).map(|t| t.issue_key.clone()).unwrap_or_default();
    Ok(SessionMetrics {
        session_id: session.id.clone(),
        task,
        developer_id: session.developer_id.clone(),
        label: session.label.clone(),
        st,
        fb,
        t,
        et,
        ef,
        mfb: ef.and_then(|ef| Fraction::new(ef, et)),
        time_to_start: resume.map(|r| r - st),
    })
}

/// Metrics of every closed session matching the filter, by start time.
pub fn all_session_metrics(snapshot: &StoreSnapshot, filter: &QueryFilter) -> Vec<SessionMetrics> {
    snapshot
        .query_sessions(filter)
        .iter()
        .filter(|s| !s.is_open())
        .filter_map(|s| session_metrics(snapshot, &s.id).ok())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaskElapsed {
    pub task: String,
    pub sessions: usize,
    pub mean_et_ms: f64,
    pub sd_et_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FirstBreakpointStats {
    /// Sessions with a defined MFB.
    pub n: usize,
    pub mean_mfb: f64,
    pub sd_mfb: f64,
    pub per_task: Vec<TaskElapsed>,
}

/// Mean and population standard deviation.
pub fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

pub fn first_breakpoint_stats(metrics: &[SessionMetrics]) -> Result<FirstBreakpointStats> {
    let mfbs: Vec<f64> = metrics.iter().filter_map(|m| m.mfb.map(|f| f.value())).collect();
    if mfbs.is_empty() {
        return Err(Error::NoDefinedMfb);
    }
    let (mean_mfb, sd_mfb) = mean_sd(&mfbs);
    let mut by_task: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for m in metrics {
        by_task.entry(&m.task).or_default().push(m.et as f64);
    }
    let per_task = by_task
        .into_iter()
        .map(|(task, ets)| {
            let (mean, sd) = mean_sd(&ets);
            TaskElapsed { task: task.to_owned(), sessions: ets.len(), mean_et_ms: mean, sd_et_ms: sd }
        })
        .collect();
    Ok(FirstBreakpointStats { n: mfbs.len(), mean_mfb, sd_mfb, per_task })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub alpha: f64,
    pub beta: f64,
    /// Spearman rank correlation of (x, y).
    pub rho: f64,
    /// Pearson correlation of (ln x, ln y), for reference.
    pub pearson_log: f64,
    pub n: usize,
}

/// Least squares fit of `y = alpha / x^beta` on log-log axes.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<PowerLawFit> {
    if points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(Error::NonPositive);
    }
    if points.len() < 2 || points.iter().all(|p| p.0 == points[0].0) {
        return Err(Error::DegenerateInput("need at least two distinct x values".into()));
    }
    let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let n = points.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1).collect();
    Ok(PowerLawFit {
        alpha: (my - slope * mx).exp(),
        beta: -slope,
        rho: spearman(&xs, &ys),
        pearson_log: pearson(&lx, &ly),
        n: points.len(),
    })
}

/// 1-based ranks, ties sharing their average rank.
pub fn average_ranks(xs: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut ranks = vec![0.0; xs.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && xs[idx[j + 1]] == xs[idx[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            ranks[k] = r;
        }
        i = j + 1;
    }
    ranks
}

/// Pearson correlation; 0 when either side has no variance.
pub fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 || syy == 0.0 {
        return 0.0;
    }
    sxy / (sxx * syy).sqrt()
}

pub fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    pearson(&average_ranks(xs), &average_ranks(ys))
}

/// (EF, ET) in minutes for sessions whose first breakpoint came after the start.
pub fn fit_points(metrics: &[SessionMetrics]) -> Vec<(f64, f64)> {
    metrics
        .iter()
        .filter_map(|m| Some((m.ef?, m.et)))
        .filter(|&(ef, et)| ef > 0 && et > 0)
        .map(|(ef, et)| (ef as f64 / 60_000.0, et as f64 / 60_000.0))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupMeans {
    pub sessions: usize,
    /// Seconds from session start to the first breakpoint.
    pub first_breakpoint_s: Option<f64>,
    pub time_to_start_s: Option<f64>,
    pub elapsed_s: f64,
}

/// Control minus experiment, in seconds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupDelta {
    pub first_breakpoint_s: Option<f64>,
    pub time_to_start_s: Option<f64>,
    pub elapsed_s: f64,
}

/// Experiment over control, whole percent rounded half up.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupRatio {
    pub first_breakpoint_pct: Option<u32>,
    pub time_to_start_pct: Option<u32>,
    pub elapsed_pct: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupComparison {
    pub control: GroupMeans,
    pub experiment: GroupMeans,
    pub delta: GroupDelta,
    pub ratio: GroupRatio,
}

fn mean_ms(xs: impl Iterator<Item = i64>) -> Option<(i64, usize)> {
    let v: Vec<i64> = xs.collect();
    (!v.is_empty()).then(|| (v.iter().sum(), v.len()))
}

fn group_means(metrics: &[&SessionMetrics]) -> (GroupMeans, [Option<(i64, usize)>; 3]) {
    let fb = mean_ms(metrics.iter().filter_map(|m| m.ef));
    let ts = mean_ms(metrics.iter().filter_map(|m| m.time_to_start));
    let el = mean_ms(metrics.iter().map(|m| m.et));
    let secs = |x: Option<(i64, usize)>| x.map(|(sum, n)| sum as f64 / n as f64 / 1000.0);
    let means = GroupMeans {
        sessions: metrics.len(),
        first_breakpoint_s: secs(fb),
        time_to_start_s: secs(ts),
        elapsed_s: secs(el).unwrap_or(0.0),
    };
    (means, [fb, ts, el])
}

/// exp_mean / ctl_mean as a half-up whole percent, computed exactly.
fn ratio_pct(ctl: Option<(i64, usize)>, exp: Option<(i64, usize)>) -> Option<u32> {
    let ((cs, cn), (es, en)) = (ctl?, exp?);
    if cs <= 0 || es < 0 {
        return None;
    }
    // (es/en) / (cs/cn) = es*cn / (cs*en)
    let num = es as i128 * cn as i128;
    let den = cs as i128 * en as i128;
    Some(((200 * num + den) / (2 * den)) as u32)
}

pub fn group_comparison(control: &[&SessionMetrics], experiment: &[&SessionMetrics]) -> Result<GroupComparison> {
    if control.is_empty() {
        return Err(Error::EmptyGroup("control".into()));
    }
    if experiment.is_empty() {
        return Err(Error::EmptyGroup("experiment".into()));
    }
    let (c, [cfb, cts, cel]) = group_means(control);
    let (e, [efb, ets, eel]) = group_means(experiment);
    let diff = |a: Option<f64>, b: Option<f64>| Some(a? - b?);
    Ok(GroupComparison {
        delta: GroupDelta {
            first_breakpoint_s: diff(c.first_breakpoint_s, e.first_breakpoint_s),
            time_to_start_s: diff(c.time_to_start_s, e.time_to_start_s),
            elapsed_s: c.elapsed_s - e.elapsed_s,
        },
        ratio: GroupRatio {
            first_breakpoint_pct: ratio_pct(cfb, efb),
            time_to_start_pct: ratio_pct(cts, ets),
            elapsed_pct: ratio_pct(cel, eel),
        },
        control: c,
        experiment: e,
    })
}

/// Splits closed sessions of one task by label and compares them.
pub fn compare_labeled_groups(
    snapshot: &StoreSnapshot,
    filter: &QueryFilter,
    control_label: &str,
    experiment_label: &str,
) -> Result<GroupComparison> {
    let metrics = all_session_metrics(snapshot, filter);
    let pick = |label: &str| metrics.iter().filter(|m| m.label == label).collect::<Vec<_>>();
    group_comparison(&pick(control_label), &pick(experiment_label))
}
