//! JSON formats for graphs and conflict instances.
//!
//! Instances list each edge once, oriented `u -> v`, with 1-based ports and the
//! conflict pairs `(color at u, color at v)`; the reverse direction is derived.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::color::Color;
use crate::graph::{GraphError, PortGraph};
use crate::instance::{ConflictInstance, InstanceError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error("edge {u}-{v} carries conflict color {color} outside the lists (inert pair)")]
    InertPair { u: u64, v: u64, color: Color },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub nodes: Vec<u64>,
    pub edges: Vec<(u64, u64)>,
}

impl GraphJson {
    pub fn from_graph(g: &PortGraph) -> Self {
        GraphJson {
            nodes: g.ids().to_vec(),
            edges: g.edges().map(|(u, _, v, _)| (g.identity(u), g.identity(v))).collect(),
        }
    }

    pub fn to_graph(&self) -> Result<PortGraph, GraphError> {
        PortGraph::from_edges(self.nodes.clone(), &self.edges)?.require_connected()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeJson {
    pub id: u64,
    pub list: Vec<Color>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub u: u64,
    pub v: u64,
    pub pu: usize,
    pub pv: usize,
    #[serde(default)]
    pub conflicts: Vec<(Color, Color)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceJson {
    pub nodes: Vec<NodeJson>,
    pub edges: Vec<EdgeJson>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LoadOptions {
    /// Drop conflict pairs that mention a color outside the relevant list
    /// instead of rejecting them. Such pairs can never be violated.
    pub prune_inert: bool,
    /// Reject graphs that are not connected.
    pub require_connected: bool,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions { prune_inert: true, require_connected: true }
    }
}

impl InstanceJson {
    pub fn from_instance(inst: &ConflictInstance) -> Self {
        let g = inst.graph();
        let nodes = (0..g.n()).map(|v| NodeJson { id: g.identity(v), list: inst.list(v).to_vec() }).collect();
        let edges = g
            .edges()
            .map(|(u, p, v, q)| EdgeJson {
                u: g.identity(u),
                v: g.identity(v),
                pu: p + 1,
                pv: q + 1,
                conflicts: inst.conflicts(u, p).to_vec(),
            })
            .collect();
        InstanceJson { nodes, edges }
    }

    pub fn to_instance(&self, opts: LoadOptions) -> Result<ConflictInstance, FormatError> {
        let ids: Vec<u64> = self.nodes.iter().map(|n| n.id).collect();
        let ported: Vec<(u64, u64, usize, usize)> = self.edges.iter().map(|e| (e.u, e.v, e.pu, e.pv)).collect();
        let mut graph = PortGraph::from_ported_edges(ids, &ported)?;
        if opts.require_connected {
            graph = graph.require_connected()?;
        }
        let mut lists: Vec<Vec<Color>> = self.nodes.iter().map(|n| n.list.clone()).collect();
        for l in lists.iter_mut() {
            l.sort();
            l.dedup();
        }
        let mut conflicts: Vec<Vec<Vec<(Color, Color)>>> =
            (0..graph.n()).map(|v| vec![Vec::new(); graph.degree(v)]).collect();
        for e in &self.edges {
            let u = graph.index_of(e.u).ok_or(GraphError::UnknownNode(e.u))?;
            let v = graph.index_of(e.v).ok_or(GraphError::UnknownNode(e.v))?;
            for (a, b) in &e.conflicts {
                let a_in = lists[u].binary_search(a).is_ok();
                let b_in = lists[v].binary_search(b).is_ok();
                if !(a_in && b_in) {
                    if opts.prune_inert {
                        continue;
                    }
                    let color = if a_in { b.clone() } else { a.clone() };
                    return Err(FormatError::InertPair { u: e.u, v: e.v, color });
                }
                conflicts[u][e.pu - 1].push((a.clone(), b.clone()));
                conflicts[v][e.pv - 1].push((b.clone(), a.clone()));
            }
        }
        Ok(ConflictInstance::new(graph, lists, conflicts)?)
    }
}

pub fn load_instance(text: &str, opts: LoadOptions) -> Result<ConflictInstance, FormatError> {
    let raw: InstanceJson = serde_json::from_str(text)?;
    raw.to_instance(opts)
}

pub fn save_instance(inst: &ConflictInstance) -> String {
    serde_json::to_string_pretty(&InstanceJson::from_instance(inst)).expect("serializable")
}

pub fn load_graph(text: &str) -> Result<PortGraph, FormatError> {
    let raw: GraphJson = serde_json::from_str(text)?;
    Ok(raw.to_graph()?)
}

pub fn save_graph(g: &PortGraph) -> String {
    serde_json::to_string(&GraphJson::from_graph(g)).expect("serializable")
}
