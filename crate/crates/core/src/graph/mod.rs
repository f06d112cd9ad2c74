//! Call graphs aggregated from foraged invocations.

mod export;
mod sequence;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

pub use export::{export_graph, to_dot, to_gvjson, GraphFormat, GvEdge, GvJson, GvNode};
pub use sequence::{covered_edges, rows_from_pairs, sequence_stack_rows, SequenceRow};

use crate::model::*;
use crate::store::{QueryFilter, StoreSnapshot};

/// Type or method id, depending on the graph's granularity.
pub type NodeId = String;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Granularity {
    TypeLevel,
    MethodLevel,
}

impl std::str::FromStr for Granularity {
    type Err = crate::Error;
    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "type" | "type_level" => Ok(Granularity::TypeLevel),
            "method" | "method_level" => Ok(Granularity::MethodLevel),
            _ => Err(crate::Error::Invalid(format!("unknown granularity {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CallGraphEdge {
    pub source: NodeId,
    pub target: NodeId,
    pub task_id: TaskId,
    /// Number of invocation rows aggregated into this edge.
    pub weight: u64,
}

/// Display attributes of a task appearing on edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskTag {
    pub issue_key: String,
    pub color: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CallGraph {
    pub granularity: Granularity,
    pub nodes: BTreeSet<NodeId>,
    /// Sorted by (source, target, task_id).
    pub edges: Vec<CallGraphEdge>,
    pub invoking_set: BTreeSet<NodeId>,
    pub invoked_set: BTreeSet<NodeId>,
    pub labels: BTreeMap<NodeId, String>,
    pub tasks: BTreeMap<TaskId, TaskTag>,
}

impl CallGraph {
    pub fn empty(granularity: Granularity) -> Self {
        CallGraph {
            granularity,
            nodes: BTreeSet::new(),
            edges: Vec::new(),
            invoking_set: BTreeSet::new(),
            invoked_set: BTreeSet::new(),
            labels: BTreeMap::new(),
            tasks: BTreeMap::new(),
        }
    }

    /// Graph over bare (source, target, task) triples, one count per triple
    /// occurrence. Labels default to the node ids.
    pub fn from_triples<'a>(
        granularity: Granularity,
        triples: impl IntoIterator<Item = (&'a str, &'a str, &'a str)>,
    ) -> Self {
        let mut weights: BTreeMap<(NodeId, NodeId, TaskId), u64> = BTreeMap::new();
        for (s, t, task) in triples {
            *weights.entry((s.to_owned(), t.to_owned(), TaskId::from(task))).or_default() += 1;
        }
        let mut g = Self::from_weights(granularity, weights);
        g.labels = g.nodes.iter().map(|n| (n.clone(), n.clone())).collect();
        g
    }

    fn from_weights(granularity: Granularity, weights: BTreeMap<(NodeId, NodeId, TaskId), u64>) -> Self {
        let mut g = CallGraph::empty(granularity);
        for ((source, target, task_id), weight) in weights {
            g.nodes.insert(source.clone());
            g.nodes.insert(target.clone());
            g.invoking_set.insert(source.clone());
            g.invoked_set.insert(target.clone());
            g.edges.push(CallGraphEdge { source, target, task_id, weight });
        }
        g
    }

    pub fn total_weight(&self) -> u64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    pub fn label<'a>(&'a self, node: &'a str) -> &'a str {
        self.labels.get(node).map(String::as_str).unwrap_or(node)
    }

    /// Distinct successors per node, in node-id order.
    pub fn adjacency(&self) -> BTreeMap<&str, BTreeSet<&str>> {
        let mut adj: BTreeMap<&str, BTreeSet<&str>> = self.nodes.iter().map(|n| (n.as_str(), BTreeSet::new())).collect();
        for e in &self.edges {
            adj.entry(&e.source).or_default().insert(&e.target);
        }
        adj
    }
}

/// Aggregates the invocations selected by `filter` into a task-tagged graph.
/// Rows touching a type without project source are left out.
pub fn build_call_graph(snapshot: &StoreSnapshot, filter: &QueryFilter, granularity: Granularity) -> CallGraph {
    let mut weights: BTreeMap<(NodeId, NodeId, TaskId), u64> = BTreeMap::new();
    let mut labels = BTreeMap::new();
    let mut tasks = BTreeMap::new();
    for row in snapshot.query_invocations(filter) {
        let Some(session) = snapshot.session(&row.session_id) else { continue };
        let (Some((src, src_label)), Some((dst, dst_label))) = (
            node_of(snapshot, &row.invoking_method_id, granularity),
            node_of(snapshot, &row.invoked_method_id, granularity),
        ) else {
            continue;
        };
        if let Some(task) = snapshot.task(&session.task_id) {
            tasks.entry(task.id.clone()).or_insert_with(|| TaskTag {
                issue_key: task.issue_key.clone(),
                color: task.display_color.clone(),
            });
        }
        labels.insert(src.clone(), src_label);
        labels.insert(dst.clone(), dst_label);
        *weights.entry((src, dst, session.task_id.clone())).or_default() += 1;
    }
    let mut g = CallGraph::from_weights(granularity, weights);
    g.labels = labels;
    g.tasks = tasks;
    g
}

fn node_of(snapshot: &StoreSnapshot, method: &MethodId, granularity: Granularity) -> Option<(NodeId, String)> {
    let m = snapshot.method(method)?;
    let ty = snapshot.type_entity(&m.type_id)?;
    if !ty.has_source {
        return None;
    }
    Some(match granularity {
        Granularity::TypeLevel => (ty.id.to_string(), ty.simple_name.clone()),
        Granularity::MethodLevel => (m.id.to_string(), format!("{}.{}", ty.simple_name, m.signature)),
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StartingEndingResult {
    /// Nodes that invoke but are never invoked.
    pub starting: BTreeSet<NodeId>,
    /// Nodes that are invoked but never invoke.
    pub ending: BTreeSet<NodeId>,
}

pub fn starting_and_ending_methods(graph: &CallGraph) -> StartingEndingResult {
    StartingEndingResult {
        starting: graph.invoking_set.difference(&graph.invoked_set).cloned().collect(),
        ending: graph.invoked_set.difference(&graph.invoking_set).cloned().collect(),
    }
}

/// Node id to 0-based layer.
pub type LayerAssignment = BTreeMap<NodeId, usize>;

/// Breadth-first layering from the starting nodes. Components without any
/// starting node are placed wholly on layer 0; remaining nodes that no
/// starting node reaches go one layer below everything assigned.
pub fn layered_layout(graph: &CallGraph) -> LayerAssignment {
    let adj = graph.adjacency();
    let mut undirected: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for (u, vs) in &adj {
        undirected.entry(u).or_default();
        for v in vs {
            undirected.entry(u).or_default().insert(v);
            undirected.entry(v).or_default().insert(u);
        }
    }
    let starting = starting_and_ending_methods(graph).starting;

    let mut layer: BTreeMap<&str, usize> = BTreeMap::new();
    let mut queue: VecDeque<&str> = VecDeque::new();
    for s in &starting {
        layer.insert(s, 0);
        queue.push_back(s);
    }
    while let Some(u) = queue.pop_front() {
        let next = layer[u] + 1;
        for v in &adj[u] {
            if !layer.contains_key(v) {
                layer.insert(v, next);
                queue.push_back(v);
            }
        }
    }

    // components with no entry point at all
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    for &n in undirected.keys() {
        if seen.contains(n) {
            continue;
        }
        let mut comp = vec![n];
        seen.insert(n);
        let mut i = 0;
        while i < comp.len() {
            for &v in &undirected[comp[i]] {
                if seen.insert(v) {
                    comp.push(v);
                }
            }
            i += 1;
        }
        if !comp.iter().any(|c| starting.contains(*c)) {
            for c in comp {
                layer.insert(c, 0);
            }
        }
    }

    let below = layer.values().max().map_or(0, |m| m + 1);
    graph
        .nodes
        .iter()
        .map(|n| (n.clone(), layer.get(n.as_str()).copied().unwrap_or(below)))
        .collect()
}
