//! Encoders from named graph tasks to conflict instances, and decoders back.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::color::{Color, ColorAssignment};
use crate::graph::PortGraph;
use crate::instance::{ConflictInstance, ConflictList};

fn interval(lo: i64, hi: i64) -> Vec<Color> {
    (lo..=hi).map(Color::Int).collect()
}

fn diagonal_common(a: &[Color], b: &[Color]) -> ConflictList {
    a.iter()
        .filter(|c| b.binary_search(c).is_ok())
        .map(|c| (c.clone(), c.clone()))
        .collect()
}

/// `(Δ+1)`-coloring: lists `{1..Δ+1}`, diagonal conflicts on every edge.
pub fn encode_plus_one_coloring(graph: &PortGraph) -> ConflictInstance {
    encode_plus_one_with_delta(graph, graph.max_degree())
}

/// Same as [`encode_plus_one_coloring`] with an externally known `Δ`, as
/// needed when encoding a fragment of a larger graph.
pub fn encode_plus_one_with_delta(graph: &PortGraph, delta: usize) -> ConflictInstance {
    let list = interval(1, delta as i64 + 1);
    encode_list_coloring(graph, vec![list; graph.n()])
}

/// List coloring: the given lists, conflicts `(c, c)` on every shared color.
pub fn encode_list_coloring(graph: &PortGraph, mut lists: Vec<Vec<Color>>) -> ConflictInstance {
    for l in lists.iter_mut() {
        l.sort();
        l.dedup();
    }
    let pairs = |u: usize, v: usize| diagonal_common(&lists[u], &lists[v]);
    let conflicts = (0..graph.n())
        .map(|v| graph.ports(v).iter().map(|&(u, _)| pairs(v, u)).collect())
        .collect();
    ConflictInstance::new(graph.clone(), lists.clone(), conflicts).expect("diagonal conflicts are reciprocal")
}

/// Edge coloring as vertex coloring of the line graph with lists
/// `{1..2Δ-1}`. Line-graph node `i` (identity `i + 1`) stands for
/// `edge_map[i]`, an edge of the original graph given by identities.
#[derive(Clone, Debug)]
pub struct EdgeColoringEncoding {
    pub line_graph: PortGraph,
    pub instance: ConflictInstance,
    pub edge_map: Vec<(u64, u64)>,
}

pub fn encode_edge_coloring(graph: &PortGraph) -> EdgeColoringEncoding {
    let edge_map: Vec<(u64, u64)> = graph
        .edges()
        .map(|(u, _, v, _)| (graph.identity(u), graph.identity(v)))
        .collect();
    let mut line_edges = Vec::new();
    for a in 0..edge_map.len() {
        for b in (a + 1)..edge_map.len() {
            let (x, y) = edge_map[a];
            let (z, w) = edge_map[b];
            if x == z || x == w || y == z || y == w {
                line_edges.push((a as u64 + 1, b as u64 + 1));
            }
        }
    }
    let ids = (1..=edge_map.len() as u64).collect();
    let line_graph = PortGraph::from_edges(ids, &line_edges).expect("line graph is simple");
    let top = (2 * graph.max_degree()).saturating_sub(1).max(1) as i64;
    let instance = encode_list_coloring(&line_graph, vec![interval(1, top); line_graph.n()]);
    EdgeColoringEncoding { line_graph, instance, edge_map }
}

/// Edge colors keyed by the original edge, and whether no two incident edges
/// share a color.
pub fn decode_edge_coloring(enc: &EdgeColoringEncoding, assignment: &ColorAssignment) -> (Vec<((u64, u64), Option<Color>)>, bool) {
    let colored: Vec<_> = enc
        .edge_map
        .iter()
        .enumerate()
        .map(|(i, &e)| (e, assignment.get(i).cloned()))
        .collect();
    let mut proper = colored.iter().all(|(_, c)| c.is_some());
    for a in 0..colored.len() {
        for b in (a + 1)..colored.len() {
            let ((x, y), ca) = &colored[a];
            let ((z, w), cb) = &colored[b];
            let incident = x == z || x == w || y == z || y == w;
            if incident && ca.is_some() && ca == cb {
                proper = false;
            }
        }
    }
    (colored, proper)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MisMode {
    /// `(0,0)` and every `(i, j)` with `i, j > 0`.
    Literal,
    /// Literal pairs plus the pointer pairs: color `i` at `u`, where port `i`
    /// leads to `v`, is incompatible with any nonzero color at `v`.
    Strict,
}

/// MIS: lists `{0..deg(u)}`; color 0 means "in the set", color `i > 0` means
/// "the neighbor behind port `i` is in the set".
pub fn encode_mis(graph: &PortGraph, mode: MisMode) -> ConflictInstance {
    let lists: Vec<Vec<Color>> = (0..graph.n()).map(|v| interval(0, graph.degree(v) as i64)).collect();
    ConflictInstance::from_edge_conflicts(graph.clone(), lists, |u, p, v, q| {
        let mut pairs = BTreeSet::new();
        pairs.insert((0i64, 0i64));
        for a in 1..=graph.degree(u) as i64 {
            for b in 1..=graph.degree(v) as i64 {
                pairs.insert((a, b));
            }
        }
        if mode == MisMode::Strict {
            let (pu, pv) = (p as i64 + 1, q as i64 + 1);
            for b in 1..=graph.degree(v) as i64 {
                pairs.insert((pu, b));
            }
            for a in 1..=graph.degree(u) as i64 {
                pairs.insert((a, pv));
            }
        }
        pairs.into_iter().map(|(a, b)| (Color::Int(a), Color::Int(b))).collect()
    })
    .expect("MIS conflicts are emitted symmetrically")
}

/// Nodes colored 0, and whether they form a maximal independent set.
pub fn decode_mis(graph: &PortGraph, assignment: &ColorAssignment) -> (Vec<u64>, bool) {
    let inside: Vec<bool> = (0..graph.n()).map(|v| assignment.get(v) == Some(&Color::Int(0))).collect();
    let set = (0..graph.n()).filter(|&v| inside[v]).map(|v| graph.identity(v)).collect();
    (set, is_mis(graph, &inside))
}

pub fn is_mis(graph: &PortGraph, inside: &[bool]) -> bool {
    let independent = graph.edges().all(|(u, _, v, _)| !(inside[u] && inside[v]));
    let maximal = (0..graph.n()).all(|v| inside[v] || graph.neighbors(v).any(|u| inside[u]));
    independent && maximal
}
