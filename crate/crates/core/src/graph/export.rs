use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{layered_layout, CallGraph, Granularity};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphFormat {
    Gvjson,
    Dot,
}

impl std::str::FromStr for GraphFormat {
    type Err = crate::Error;
    fn from_str(s: &str) -> crate::Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gvjson" | "json" => Ok(GraphFormat::Gvjson),
            "dot" => Ok(GraphFormat::Dot),
            _ => Err(crate::Error::Invalid(format!("unknown graph format {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GvNode {
    pub id: String,
    pub label: String,
    pub granularity: Granularity,
    pub layer: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GvEdge {
    pub source: String,
    pub target: String,
    /// Issue key of the task.
    pub task: String,
    pub color: String,
    pub weight: u64,
}

/// Wire form of a call graph for the Global View client.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GvJson {
    pub nodes: Vec<GvNode>,
    pub edges: Vec<GvEdge>,
}

/// Nodes by (layer, label, id); edges by (source label, target label, task).
pub fn to_gvjson(graph: &CallGraph) -> GvJson {
    let layers = layered_layout(graph);
    let mut nodes: Vec<GvNode> = graph
        .nodes
        .iter()
        .map(|n| GvNode { id: n.clone(), label: graph.label(n).to_owned(), granularity: graph.granularity, layer: layers[n] })
        .collect();
    nodes.sort_by(|a, b| (a.layer, &a.label, &a.id).cmp(&(b.layer, &b.label, &b.id)));
    let mut edges: Vec<GvEdge> = graph
        .edges
        .iter()
        .map(|e| {
            let tag = graph.tasks.get(&e.task_id);
            GvEdge {
                source: e.source.clone(),
                target: e.target.clone(),
                task: tag.map_or_else(|| e.task_id.to_string(), |t| t.issue_key.clone()),
                color: tag.map_or_else(|| crate::model::TASK_PALETTE[0].to_owned(), |t| t.color.clone()),
                weight: e.weight,
            }
        })
        .collect();
    edges.sort_by(|a, b| {
        (graph.label(&a.source), graph.label(&a.target), &a.task, &a.source, &a.target)
            .cmp(&(graph.label(&b.source), graph.label(&b.target), &b.task, &b.source, &b.target))
    });
    GvJson { nodes, edges }
}

/// Graphviz digraph, one rank group per layer.
pub fn to_dot(graph: &CallGraph) -> String {
    let gv = to_gvjson(graph);
    let mut out = String::from("digraph callgraph {\n  rankdir=TB;\n  node [shape=box];\n");
    let mut by_layer: BTreeMap<usize, Vec<&str>> = BTreeMap::new();
    for n in &gv.nodes {
        let _ = writeln!(out, "  \"{}\" [label=\"{}\"];", escape(&n.id), escape(&n.label));
        by_layer.entry(n.layer).or_default().push(&n.id);
    }
    for ids in by_layer.values() {
        let members: Vec<String> = ids.iter().map(|id| format!("\"{}\"", escape(id))).collect();
        let _ = writeln!(out, "  {{ rank=same; {}; }}", members.join("; "));
    }
    for e in &gv.edges {
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\" [color=\"{}\", penwidth={}, label=\"{}\"];",
            escape(&e.source),
            escape(&e.target),
            e.color,
            penwidth(e.weight),
            escape(&e.task)
        );
    }
    out.push_str("}\n");
    out
}

/// `1 + ln(weight)`, three decimals.
pub(crate) fn penwidth(weight: u64) -> String {
    let w = 1.0 + (weight.max(1) as f64).ln();
    format!("{:?}", (w * 1000.0).round() / 1000.0)
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn export_graph(graph: &CallGraph, format: GraphFormat) -> Vec<u8> {
    match format {
        GraphFormat::Gvjson => serde_json::to_vec(&to_gvjson(graph)).expect("graph json always serializes"),
        GraphFormat::Dot => to_dot(graph).into_bytes(),
    }
}
