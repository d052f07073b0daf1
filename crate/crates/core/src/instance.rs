//! The conflict-coloring problem model.
//!
//! Every node carries a list of colors, and every (node, port) pair carries the
//! list of color pairs that are forbidden across that edge. Reciprocity is
//! enforced at construction: `(c, c')` at `u` through port `p` implies `(c', c)`
//! at the far end.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::color::{Color, ColorAssignment};
use crate::graph::{GraphError, PortGraph, Subgraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("instance shape mismatch: {0}")]
    Shape(String),
    #[error("node {node} port {port}: conflict color {color} is not in the node's list")]
    ForeignColor { node: u64, port: usize, color: Color },
    #[error(
        "reciprocity violated: ({c}, {c2}) forbidden at node {node} port {port} \
         but ({c2}, {c}) missing at node {neighbor}"
    )]
    Reciprocity { node: u64, port: usize, neighbor: u64, c: Color, c2: Color },
    #[error("lists are not uniform (sizes range over {min}..={max})")]
    NonUniformLists { min: usize, max: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub type ConflictList = Vec<(Color, Color)>;

/// Per-node color lists plus per-port conflict pair lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConflictInstance {
    graph: PortGraph,
    lists: Vec<Vec<Color>>,
    conflicts: Vec<Vec<ConflictList>>,
}

impl ConflictInstance {
    /// Builds and checks an instance. Lists and conflict lists are sorted and
    /// deduplicated; ports are 0-based.
    pub fn new(
        graph: PortGraph,
        mut lists: Vec<Vec<Color>>,
        mut conflicts: Vec<Vec<ConflictList>>,
    ) -> Result<Self, InstanceError> {
        if lists.len() != graph.n() || conflicts.len() != graph.n() {
            return Err(InstanceError::Shape(format!(
                "{} nodes, {} lists, {} conflict rows",
                graph.n(),
                lists.len(),
                conflicts.len()
            )));
        }
        for v in 0..graph.n() {
            if conflicts[v].len() != graph.degree(v) {
                return Err(InstanceError::Shape(format!(
                    "node {} has degree {} but {} conflict lists",
                    graph.identity(v),
                    graph.degree(v),
                    conflicts[v].len()
                )));
            }
            lists[v].sort();
            lists[v].dedup();
            for port in conflicts[v].iter_mut() {
                port.sort();
                port.dedup();
            }
        }
        let inst = ConflictInstance { graph, lists, conflicts };
        inst.check_well_formed()?;
        Ok(inst)
    }

    /// Builds an instance from one conflict list per edge, oriented from the
    /// lower node index to the higher; the reciprocal lists are derived.
    pub fn from_edge_conflicts(
        graph: PortGraph,
        lists: Vec<Vec<Color>>,
        mut edge_pairs: impl FnMut(usize, usize, usize, usize) -> ConflictList,
    ) -> Result<Self, InstanceError> {
        let mut conflicts: Vec<Vec<ConflictList>> =
            (0..graph.n()).map(|v| vec![Vec::new(); graph.degree(v)]).collect();
        let edges: Vec<_> = graph.edges().collect();
        for (u, p, v, q) in edges {
            let pairs = edge_pairs(u, p, v, q);
            conflicts[v][q].extend(pairs.iter().map(|(a, b)| (b.clone(), a.clone())));
            conflicts[u][p].extend(pairs);
        }
        Self::new(graph, lists, conflicts)
    }

    pub fn graph(&self) -> &PortGraph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn list(&self, v: usize) -> &[Color] {
        &self.lists[v]
    }

    pub fn lists(&self) -> &[Vec<Color>] {
        &self.lists
    }

    pub fn conflicts(&self, v: usize, port: usize) -> &[(Color, Color)] {
        &self.conflicts[v][port]
    }

    pub fn in_list(&self, v: usize, c: &Color) -> bool {
        self.lists[v].binary_search(c).is_ok()
    }

    /// Whether `(mine, theirs)` is forbidden at `v` across `port`.
    pub fn is_conflict(&self, v: usize, port: usize, mine: &Color, theirs: &Color) -> bool {
        self.conflicts[v][port]
            .binary_search_by(|(a, b)| (a, b).cmp(&(mine, theirs)))
            .is_ok()
    }

    /// Colors of `v` that conflict with the neighbor behind `port` holding `theirs`.
    pub fn forbidden_by<'a>(
        &'a self,
        v: usize,
        port: usize,
        theirs: &'a Color,
    ) -> impl Iterator<Item = &'a Color> + 'a {
        self.conflicts[v][port].iter().filter(move |(_, b)| b == theirs).map(|(a, _)| a)
    }

    /// Checks the first-component and reciprocity invariants, naming the first
    /// violation in node/port order.
    pub fn check_well_formed(&self) -> Result<(), InstanceError> {
        let g = &self.graph;
        for v in 0..g.n() {
            for (p, pairs) in self.conflicts[v].iter().enumerate() {
                let (u, q) = g.neighbor(v, p);
                for (c, c2) in pairs {
                    if !self.in_list(v, c) {
                        return Err(InstanceError::ForeignColor {
                            node: g.identity(v),
                            port: p + 1,
                            color: c.clone(),
                        });
                    }
                    if !self.is_conflict(u, q, c2, c) {
                        return Err(InstanceError::Reciprocity {
                            node: g.identity(v),
                            port: p + 1,
                            neighbor: g.identity(u),
                            c: c.clone(),
                            c2: c2.clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn min_list_size(&self) -> usize {
        self.lists.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_list_size(&self) -> usize {
        self.lists.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Per-edge conflict degree: the largest number of colors any single color
    /// conflicts with across a single edge.
    pub fn conflict_degree(&self) -> usize {
        self.conflicts
            .iter()
            .flatten()
            .map(|pairs| longest_run(pairs))
            .max()
            .unwrap_or(0)
    }

    /// `(l, d)`: minimum list size and conflict degree.
    pub fn params(&self) -> (usize, usize) {
        (self.min_list_size(), self.conflict_degree())
    }

    /// Lists of equal length `l` equal to `{1..l}` at every node.
    pub fn interval_len(&self) -> Option<usize> {
        let l = self.lists.first().map(Vec::len).unwrap_or(0);
        let expected: Vec<Color> = (1..=l as i64).map(Color::Int).collect();
        self.lists.iter().all(|list| *list == expected).then_some(l)
    }

    /// Node input in interval form, or `None` if the instance is not in it.
    pub fn local_input(&self, v: usize) -> Option<LocalInput> {
        let l = self.lists[v].len();
        let as_idx = |c: &Color| c.as_int().filter(|&x| x >= 1 && x as usize <= l).map(|x| x as u32);
        if self.lists[v].iter().enumerate().any(|(i, c)| as_idx(c) != Some(i as u32 + 1)) {
            return None;
        }
        let mut ports = Vec::with_capacity(self.conflicts[v].len());
        for pairs in &self.conflicts[v] {
            let mut row = Vec::with_capacity(pairs.len());
            for (a, b) in pairs {
                row.push((as_idx(a)?, b.as_int()? as u32));
            }
            ports.push(row);
        }
        Some(LocalInput { list_len: l as u32, ports })
    }

    /// Replaces lists, dropping every conflict pair that lost a component.
    pub fn with_lists(&self, lists: Vec<Vec<Color>>) -> Result<Self, InstanceError> {
        let mut lists = lists;
        for l in lists.iter_mut() {
            l.sort();
            l.dedup();
        }
        let g = &self.graph;
        let conflicts = (0..g.n())
            .map(|v| {
                self.conflicts[v]
                    .iter()
                    .enumerate()
                    .map(|(p, pairs)| {
                        let (u, _) = g.neighbor(v, p);
                        pairs
                            .iter()
                            .filter(|(a, b)| {
                                lists[v].binary_search(a).is_ok()
                                    && lists[u].binary_search(b).is_ok()
                            })
                            .cloned()
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Self::new(g.clone(), lists, conflicts)
    }

    /// Instance on the subgraph induced by `nodes`, with optional replacement
    /// lists (indexed like `nodes`).
    pub fn induced(
        &self,
        nodes: &[usize],
        lists: Option<Vec<Vec<Color>>>,
    ) -> Result<(ConflictInstance, Subgraph), InstanceError> {
        let sub = self.graph.induced(nodes);
        let lists = lists.unwrap_or_else(|| nodes.iter().map(|&v| self.lists[v].clone()).collect());
        let conflicts = nodes
            .iter()
            .zip(&sub.port_to_parent)
            .map(|(&v, ports)| ports.iter().map(|&p| self.conflicts[v][p].clone()).collect())
            .collect();
        let full = ConflictInstance {
            graph: sub.graph.clone(),
            lists: nodes.iter().map(|&v| self.lists[v].clone()).collect(),
            conflicts,
        };
        Ok((full.with_lists(lists)?, sub))
    }

    /// Same instance on a graph with relabeled identities.
    pub fn relabel(&self, map: impl Fn(u64) -> u64) -> Result<Self, InstanceError> {
        Ok(ConflictInstance {
            graph: self.graph.relabel(map)?,
            lists: self.lists.clone(),
            conflicts: self.conflicts.clone(),
        })
    }
}

fn longest_run(pairs: &[(Color, Color)]) -> usize {
    let mut best = 0;
    let mut i = 0;
    while i < pairs.len() {
        let mut j = i;
        while j < pairs.len() && pairs[j].0 == pairs[i].0 {
            j += 1;
        }
        best = best.max(j - i);
        i = j;
    }
    best
}

/// A node's input in standard interval form: list `{1..list_len}` and, per
/// port, the forbidden `(own, neighbor)` pairs. Used as a promise-set element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LocalInput {
    pub list_len: u32,
    pub ports: Vec<Vec<(u32, u32)>>,
}

impl LocalInput {
    /// Own colors forbidden when the neighbor behind `port` takes `theirs`.
    pub fn forbidden_by(&self, port: usize, theirs: u32) -> impl Iterator<Item = u32> + '_ {
        self.ports[port].iter().filter(move |&&(_, b)| b == theirs).map(|&(a, _)| a)
    }
}

/// The conflict graph F of an instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConflictGraphView {
    /// `(node index, color)` for every color of every list.
    pub vertices: Vec<(usize, Color)>,
    /// Conflict edges as pairs of vertex indices, each listed once.
    pub edges: Vec<(usize, usize)>,
    /// Per-edge conflict degree `d`.
    pub max_degree: usize,
    /// Plain vertex degree in F, summed over all incident graph edges.
    pub max_total_degree: usize,
    /// `l`, the minimum list size.
    pub min_list_size: usize,
}

impl ConflictGraphView {
    /// Sorted degree sequence of F, an isomorphism invariant.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.vertices.len()];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg.sort_unstable();
        deg
    }

    /// Sorted multiset of `(deg a, deg b)` over edges, another invariant.
    pub fn edge_degree_multiset(&self) -> Vec<(usize, usize)> {
        let mut deg = vec![0usize; self.vertices.len()];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        let mut out: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(a, b)| (deg[a].min(deg[b]), deg[a].max(deg[b])))
            .collect();
        out.sort_unstable();
        out
    }
}

pub fn build_conflict_graph(instance: &ConflictInstance) -> Result<ConflictGraphView, InstanceError> {
    instance.check_well_formed()?;
    let g = instance.graph();
    let mut offset = Vec::with_capacity(g.n());
    let mut vertices = Vec::new();
    for v in 0..g.n() {
        offset.push(vertices.len());
        vertices.extend(instance.list(v).iter().map(|c| (v, c.clone())));
    }
    let vid = |v: usize, c: &Color| offset[v] + instance.list(v).binary_search(c).expect("in list");
    let mut edges = Vec::new();
    let mut total = vec![0usize; vertices.len()];
    for (u, p, v, _) in g.edges() {
        for (a, b) in instance.conflicts(u, p) {
            let (x, y) = (vid(u, a), vid(v, b));
            edges.push((x, y));
            total[x] += 1;
            total[y] += 1;
        }
    }
    Ok(ConflictGraphView {
        vertices,
        edges,
        max_degree: instance.conflict_degree(),
        max_total_degree: total.into_iter().max().unwrap_or(0),
        min_list_size: instance.min_list_size(),
    })
}

pub fn instance_params(instance: &ConflictInstance) -> (usize, usize) {
    instance.params()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    ColorNotInList,
    ConflictPair,
    MissingAssignment,
}

/// One problem found by [`validate_coloring`]. Ports are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub node: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub neighbor: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ports: Option<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<(Color, Color)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub color: Option<Color>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }
}

pub fn validate_coloring(instance: &ConflictInstance, assignment: &ColorAssignment) -> ValidationReport {
    let g = instance.graph();
    let mut violations = Vec::new();
    for v in 0..g.n() {
        match assignment.get(v) {
            None => violations.push(Violation {
                kind: ViolationKind::MissingAssignment,
                node: g.identity(v),
                neighbor: None,
                ports: None,
                pair: None,
                color: None,
            }),
            Some(c) if !instance.in_list(v, c) => violations.push(Violation {
                kind: ViolationKind::ColorNotInList,
                node: g.identity(v),
                neighbor: None,
                ports: None,
                pair: None,
                color: Some(c.clone()),
            }),
            Some(_) => {}
        }
    }
    for (u, p, v, q) in g.edges() {
        let (Some(a), Some(b)) = (assignment.get(u), assignment.get(v)) else { continue };
        if instance.is_conflict(u, p, a, b) || instance.is_conflict(v, q, b, a) {
            violations.push(Violation {
                kind: ViolationKind::ConflictPair,
                node: g.identity(u),
                neighbor: Some(g.identity(v)),
                ports: Some((p + 1, q + 1)),
                pair: Some((a.clone(), b.clone())),
                color: None,
            });
        }
    }
    ValidationReport { valid: violations.is_empty(), violations }
}

/// Per-node relabeling produced by [`normalize_interval_form`]:
/// `maps[v][i]` is the original color behind interval color `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorMaps {
    pub maps: Vec<Vec<Color>>,
}

impl ColorMaps {
    pub fn original(&self, v: usize, interval_color: &Color) -> Option<Color> {
        let i = interval_color.as_int()?;
        if i < 1 {
            return None;
        }
        self.maps[v].get(i as usize - 1).cloned()
    }

    /// Maps an assignment of the interval instance back to original colors.
    pub fn restore(&self, assignment: &ColorAssignment) -> ColorAssignment {
        let mut out = ColorAssignment::empty(assignment.len());
        for (v, c) in assignment.iter() {
            if let Some(orig) = c.and_then(|c| self.original(v, c)) {
                out.set(v, orig);
            }
        }
        out
    }
}

/// Relabels every list to `{1..l}` in list order. Requires uniform list length.
pub fn normalize_interval_form(
    instance: &ConflictInstance,
) -> Result<(ConflictInstance, ColorMaps), InstanceError> {
    let (min, max) = (instance.min_list_size(), instance.max_list_size());
    if min != max {
        return Err(InstanceError::NonUniformLists { min, max });
    }
    let g = instance.graph();
    let rank: Vec<HashMap<&Color, i64>> = (0..g.n())
        .map(|v| instance.list(v).iter().enumerate().map(|(i, c)| (c, i as i64 + 1)).collect())
        .collect();
    let lists = (0..g.n()).map(|_| (1..=min as i64).map(Color::Int).collect()).collect();
    let conflicts = (0..g.n())
        .map(|v| {
            (0..g.degree(v))
                .map(|p| {
                    let (u, _) = g.neighbor(v, p);
                    instance
                        .conflicts(v, p)
                        .iter()
                        .map(|(a, b)| (Color::Int(rank[v][a]), Color::Int(rank[u][b])))
                        .collect()
                })
                .collect()
        })
        .collect();
    let normalized = ConflictInstance::new(g.clone(), lists, conflicts)?;
    let maps = ColorMaps { maps: instance.lists().to_vec() };
    Ok((normalized, maps))
}

/// Colors used in conflicts but absent from the relevant list.
pub fn foreign_colors(instance: &ConflictInstance) -> BTreeSet<Color> {
    let mut out = BTreeSet::new();
    for v in 0..instance.n() {
        for p in 0..instance.graph().degree(v) {
            for (a, _) in instance.conflicts(v, p) {
                if !instance.in_list(v, a) {
                    out.insert(a.clone());
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(xs: &[i64]) -> Vec<Color> {
        xs.iter().map(|&x| Color::Int(x)).collect()
    }

    fn diag(xs: &[i64]) -> ConflictList {
        xs.iter().map(|&x| (Color::Int(x), Color::Int(x))).collect()
    }

    fn single_edge(lu: &[i64], lv: &[i64], pairs: ConflictList) -> ConflictInstance {
        let g = PortGraph::from_edges(vec![1, 2], &[(1, 2)]).unwrap();
        ConflictInstance::from_edge_conflicts(g, vec![ints(lu), ints(lv)], |_, _, _, _| pairs.clone())
            .unwrap()
    }

    #[test]
    fn diagonal_edge_conflict_graph() {
        let inst = single_edge(&[1, 2], &[1, 2], diag(&[1, 2]));
        let f = build_conflict_graph(&inst).unwrap();
        assert_eq!(f.vertices.len(), 4);
        assert_eq!(f.edges.len(), 2);
        assert_eq!((f.min_list_size, f.max_degree), (2, 1));
    }

    #[test]
    fn empty_conflicts_have_degree_zero() {
        let inst = single_edge(&[1, 2], &[1, 2], vec![]);
        let f = build_conflict_graph(&inst).unwrap();
        assert_eq!((f.vertices.len(), f.edges.len(), f.max_degree), (4, 0, 0));
        assert_eq!(instance_params(&inst), (2, 0));
    }

    #[test]
    fn broken_reciprocity_is_named() {
        let g = PortGraph::from_edges(vec![1, 2], &[(1, 2)]).unwrap();
        let err = ConflictInstance::new(
            g,
            vec![ints(&[1]), ints(&[1])],
            vec![vec![diag(&[1])], vec![vec![]]],
        )
        .unwrap_err();
        assert!(matches!(err, InstanceError::Reciprocity { node: 1, port: 1, neighbor: 2, .. }));
    }

    #[test]
    fn foreign_first_component_rejected() {
        let g = PortGraph::from_edges(vec![1, 2], &[(1, 2)]).unwrap();
        let err = ConflictInstance::new(
            g,
            vec![ints(&[1]), ints(&[1, 3])],
            vec![vec![vec![(Color::Int(3), Color::Int(3))]], vec![diag(&[3])]],
        )
        .unwrap_err();
        assert!(matches!(err, InstanceError::ForeignColor { node: 1, .. }));
    }

    #[test]
    fn validation_cases() {
        let inst = single_edge(&[1, 2], &[1, 2], diag(&[1, 2]));
        assert!(validate_coloring(&inst, &ColorAssignment::from_ints(&[1, 2])).valid);
        let bad = validate_coloring(&inst, &ColorAssignment::from_ints(&[1, 1]));
        assert!(!bad.valid);
        assert_eq!(bad.violations.len(), 1);
        assert_eq!(bad.count(ViolationKind::ConflictPair), 1);
        let off = validate_coloring(&inst, &ColorAssignment::from_ints(&[3, 2]));
        assert_eq!(off.count(ViolationKind::ColorNotInList), 1);
        let missing = validate_coloring(&inst, &ColorAssignment::empty(2));
        assert_eq!(missing.count(ViolationKind::MissingAssignment), 2);
    }

    #[test]
    fn single_node_graph_reduces_to_membership() {
        let g = PortGraph::from_edges(vec![4], &[]).unwrap();
        let inst = ConflictInstance::new(g, vec![ints(&[7])], vec![vec![]]).unwrap();
        assert!(validate_coloring(&inst, &ColorAssignment::from_ints(&[7])).valid);
        assert!(!validate_coloring(&inst, &ColorAssignment::from_ints(&[8])).valid);
    }

    #[test]
    fn normalize_relabels_and_preserves_structure() {
        let g = PortGraph::from_edges(vec![1, 2], &[(1, 2)]).unwrap();
        let inst = ConflictInstance::from_edge_conflicts(
            g,
            vec![ints(&[5, 9]), ints(&[9, 5])],
            |_, _, _, _| diag(&[5, 9]),
        )
        .unwrap();
        let (norm, maps) = normalize_interval_form(&inst).unwrap();
        assert_eq!(norm.interval_len(), Some(2));
        let f0 = build_conflict_graph(&inst).unwrap();
        let f1 = build_conflict_graph(&norm).unwrap();
        assert_eq!(f0.degree_sequence(), f1.degree_sequence());
        assert_eq!(f0.edges.len(), f1.edges.len());
        assert_eq!(instance_params(&norm), instance_params(&inst));
        let sol = ColorAssignment::from_ints(&[1, 2]);
        assert!(validate_coloring(&norm, &sol).valid);
        assert!(validate_coloring(&inst, &maps.restore(&sol)).valid);
    }

    #[test]
    fn normalize_identity_on_interval_instance() {
        let inst = single_edge(&[1, 2, 3], &[1, 2, 3], diag(&[1, 2, 3]));
        let (norm, maps) = normalize_interval_form(&inst).unwrap();
        assert_eq!(norm, inst);
        for v in 0..2 {
            assert_eq!(maps.maps[v], ints(&[1, 2, 3]));
        }
    }

    #[test]
    fn normalize_rejects_ragged_lists() {
        let inst = single_edge(&[1, 2], &[1], diag(&[1]));
        assert_eq!(
            normalize_interval_form(&inst),
            Err(InstanceError::NonUniformLists { min: 1, max: 2 })
        );
    }

    #[test]
    fn local_input_needs_interval_form() {
        let inst = single_edge(&[1, 2], &[1, 2], diag(&[1, 2]));
        let li = inst.local_input(0).unwrap();
        assert_eq!(li.list_len, 2);
        assert_eq!(li.ports, vec![vec![(1, 1), (2, 2)]]);
        assert_eq!(li.forbidden_by(0, 2).collect::<Vec<_>>(), vec![2]);
        let odd = single_edge(&[3, 4], &[3, 4], diag(&[3]));
        assert!(odd.local_input(0).is_none());
    }

    #[test]
    fn induced_restricts_conflicts() {
        let g = PortGraph::from_edges(vec![1, 2, 3], &[(1, 2), (2, 3)]).unwrap();
        let inst = ConflictInstance::from_edge_conflicts(
            g,
            vec![ints(&[1, 2]); 3],
            |_, _, _, _| diag(&[1, 2]),
        )
        .unwrap();
        let (sub, map) = inst.induced(&[1, 2], Some(vec![ints(&[2]), ints(&[1, 2])])).unwrap();
        assert_eq!(map.to_parent, vec![1, 2]);
        assert_eq!(sub.graph().degree(0), 1);
        assert_eq!(sub.conflicts(0, 0), &[(Color::Int(2), Color::Int(2))]);
    }
}
