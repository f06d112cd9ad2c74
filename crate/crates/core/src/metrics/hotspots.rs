use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::model::*;
use crate::store::{QueryFilter, StoreSnapshot};

/// A breakpoint with the rows it hangs off.
struct Located<'a> {
    bp: Breakpoint,
    ty: &'a TypeEntity,
    task: &'a str,
    developer: &'a DeveloperId,
}

fn located<'a>(snapshot: &'a StoreSnapshot, filter: &QueryFilter) -> Vec<Located<'a>> {
    snapshot
        .query_breakpoints(filter)
        .into_iter()
        .filter_map(|bp| {
            let session = snapshot.session(&bp.session_id)?;
            let ty = snapshot.type_entity(&bp.type_id)?;
            let task = snapshot.task(&session.task_id)?;
            Some(Located { ty, task: &task.issue_key, developer: &session.developer_id, bp })
        })
        .collect()
}

#[derive(Default)]
struct Tally<'a> {
    count: usize,
    developers: BTreeSet<&'a DeveloperId>,
    tasks: BTreeSet<&'a str>,
}

impl<'a> Tally<'a> {
    fn add(&mut self, l: &Located<'a>) {
        self.count += 1;
        self.developers.insert(l.developer);
        self.tasks.insert(l.task);
    }

    fn task_keys(&self) -> Vec<String> {
        self.tasks.iter().map(|t| t.to_string()).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColocationMode {
    /// Same line within one task.
    SameTask,
    /// Same line regardless of task.
    AcrossTasks,
}

impl std::str::FromStr for ColocationMode {
    type Err = crate::Error;
    fn from_str(s: &str) -> crate::Result<Self> {
        crate::model::parse_snake_enum(s, "colocation mode")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColocatedRow {
    pub type_name: String,
    pub location: SourceLocation,
    /// Issue keys, ascending.
    pub tasks: Vec<String>,
    pub count: usize,
    pub developers: usize,
}

/// Lines holding at least two breakpoints from at least two developers.
pub fn colocated_breakpoints(snapshot: &StoreSnapshot, filter: &QueryFilter, mode: ColocationMode) -> Vec<ColocatedRow> {
    let rows = located(snapshot, filter);
    let mut groups: BTreeMap<(&TypeId, u32, &str), (&TypeEntity, Tally)> = BTreeMap::new();
    for l in &rows {
        let task = match mode {
            ColocationMode::SameTask => l.task,
            ColocationMode::AcrossTasks => "",
        };
        groups.entry((&l.ty.id, l.bp.line_number, task)).or_insert_with(|| (l.ty, Tally::default())).1.add(l);
    }
    let mut out: Vec<ColocatedRow> = groups
        .into_iter()
        .filter(|(_, (_, t))| t.count >= 2 && t.developers.len() >= 2)
        .map(|((_, line, _), (ty, t))| ColocatedRow {
            type_name: ty.simple_name.clone(),
            location: SourceLocation { type_full_name: ty.full_name.clone(), line_number: line },
            tasks: t.task_keys(),
            count: t.count,
            developers: t.developers.len(),
        })
        .collect();
    out.sort_by(|a, b| {
        (&a.type_name, a.location.line_number, &a.location.type_full_name, &a.tasks)
            .cmp(&(&b.type_name, b.location.line_number, &b.location.type_full_name, &b.tasks))
    });
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassTaskRow {
    pub type_name: String,
    pub type_full_name: String,
    /// Issue keys with at least one breakpoint in the class, ascending.
    pub tasks: Vec<String>,
    pub breakpoints: usize,
    pub developers: usize,
}

/// Classes that received breakpoints in two or more tasks.
pub fn class_task_matrix(snapshot: &StoreSnapshot, filter: &QueryFilter) -> Vec<ClassTaskRow> {
    let rows = located(snapshot, filter);
    let mut groups: BTreeMap<&TypeId, (&TypeEntity, Tally)> = BTreeMap::new();
    for l in &rows {
        groups.entry(&l.ty.id).or_insert_with(|| (l.ty, Tally::default())).1.add(l);
    }
    let mut out: Vec<ClassTaskRow> = groups
        .into_values()
        .filter(|(_, t)| t.tasks.len() >= 2)
        .map(|(ty, t)| ClassTaskRow {
            type_name: ty.simple_name.clone(),
            type_full_name: ty.full_name.clone(),
            tasks: t.task_keys(),
            breakpoints: t.count,
            developers: t.developers.len(),
        })
        .collect();
    out.sort_by(|a, b| (&a.type_name, &a.type_full_name).cmp(&(&b.type_name, &b.type_full_name)));
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HotSpotScope {
    Line,
    Method,
    Class,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HotSpot {
    pub scope: HotSpotScope,
    pub type_name: String,
    pub type_full_name: String,
    /// Method signature, for method scope.
    pub method: Option<String>,
    /// Line number, for line scope.
    pub line: Option<u32>,
    pub breakpoint_count: usize,
    pub distinct_developers: usize,
    pub distinct_tasks: usize,
}

impl HotSpot {
    /// `Type.method()`, `Type:line` or `Type`.
    pub fn label(&self) -> String {
        match (&self.method, self.line) {
            (Some(m), _) => format!("{}.{}", self.type_name, m),
            (None, Some(l)) => format!("{}:{}", self.type_name, l),
            (None, None) => self.type_name.clone(),
        }
    }
}

/// Methods with at least `min_count` breakpoints, most first, then by name.
pub fn method_hotspots(snapshot: &StoreSnapshot, filter: &QueryFilter, min_count: usize) -> Vec<HotSpot> {
    let rows = located(snapshot, filter);
    let mut groups: BTreeMap<&MethodId, (&TypeEntity, Tally)> = BTreeMap::new();
    for l in &rows {
        if let Some(m) = &l.bp.method_id {
            // borrow the id from the snapshot so it outlives `rows`
            let Some(method) = snapshot.method(m) else { continue };
            groups.entry(&method.id).or_insert_with(|| (l.ty, Tally::default())).1.add(l);
        }
    }
    let mut out: Vec<HotSpot> = groups
        .into_iter()
        .filter(|(_, (_, t))| t.count >= min_count.max(1))
        .filter_map(|(m, (ty, t))| {
            Some(HotSpot {
                scope: HotSpotScope::Method,
                type_name: ty.simple_name.clone(),
                type_full_name: ty.full_name.clone(),
                method: Some(snapshot.method(m)?.signature.clone()),
                line: None,
                breakpoint_count: t.count,
                distinct_developers: t.developers.len(),
                distinct_tasks: t.tasks.len(),
            })
        })
        .collect();
    out.sort_by(|a, b| b.breakpoint_count.cmp(&a.breakpoint_count).then_with(|| a.label().cmp(&b.label())));
    out
}

/// Every breakpointed line as a hot-spot, unsorted.
pub fn line_hotspots(snapshot: &StoreSnapshot, filter: &QueryFilter) -> Vec<HotSpot> {
    let rows = located(snapshot, filter);
    let mut groups: BTreeMap<(&TypeId, u32), (&TypeEntity, Tally)> = BTreeMap::new();
    for l in &rows {
        groups.entry((&l.ty.id, l.bp.line_number)).or_insert_with(|| (l.ty, Tally::default())).1.add(l);
    }
    groups
        .into_iter()
        .map(|((_, line), (ty, t))| HotSpot {
            scope: HotSpotScope::Line,
            type_name: ty.simple_name.clone(),
            type_full_name: ty.full_name.clone(),
            method: None,
            line: Some(line),
            breakpoint_count: t.count,
            distinct_developers: t.developers.len(),
            distinct_tasks: t.tasks.len(),
        })
        .collect()
}

/// Recommendation order: count, developers, tasks (all descending), then
/// type name and line ascending.
pub fn recommendation_order(a: &HotSpot, b: &HotSpot) -> Ordering {
    b.breakpoint_count
        .cmp(&a.breakpoint_count)
        .then(b.distinct_developers.cmp(&a.distinct_developers))
        .then(b.distinct_tasks.cmp(&a.distinct_tasks))
        .then_with(|| a.type_name.cmp(&b.type_name))
        .then_with(|| a.type_full_name.cmp(&b.type_full_name))
        .then(a.line.cmp(&b.line))
}

/// Top-`k` breakpoint locations of a product. With a context session, lines
/// that session already has breakpoints on are left out.
pub fn recommend_breakpoints(
    snapshot: &StoreSnapshot,
    product: &ProductId,
    context: Option<&SessionId>,
    k: usize,
) -> Vec<HotSpot> {
    let taken: BTreeSet<(TypeId, u32)> = context
        .map(|s| snapshot.session_breakpoints(s).iter().map(|b| (b.type_id.clone(), b.line_number)).collect())
        .unwrap_or_default();
    let taken_names: BTreeSet<(String, u32)> = taken
        .iter()
        .filter_map(|(t, l)| Some((snapshot.type_entity(t)?.full_name.clone(), *l)))
        .collect();
    let mut spots: Vec<HotSpot> = line_hotspots(snapshot, &QueryFilter::product(product.clone()))
        .into_iter()
        .filter(|h| !taken_names.contains(&(h.type_full_name.clone(), h.line.unwrap_or(0))))
        .collect();
    spots.sort_by(recommendation_order);
    spots.truncate(k);
    spots
}
