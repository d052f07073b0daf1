//! Edge orientations with outdegree accounting.

use crate::graph::PortGraph;

/// A direction for every edge, stored per (node, port): `out[v][p]` is true
/// when the edge behind port `p` points away from `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    out: Vec<Vec<bool>>,
}

impl Orientation {
    /// Orients `{u, v}` from `u` to `v` whenever `toward(u, v)` holds; `toward`
    /// must be antisymmetric on edges.
    pub fn from_fn(graph: &PortGraph, toward: impl Fn(usize, usize) -> bool) -> Self {
        let out = (0..graph.n())
            .map(|v| graph.ports(v).iter().map(|&(u, _)| toward(v, u)).collect())
            .collect();
        let o = Orientation { out };
        debug_assert!(o.is_consistent(graph));
        o
    }

    /// Directs every edge toward the endpoint with the smaller `rank`, so the
    /// orientation is acyclic. Ranks must be distinct on adjacent nodes.
    pub fn toward_smaller(graph: &PortGraph, rank: &[u64]) -> Self {
        Self::from_fn(graph, |v, u| rank[u] < rank[v])
    }

    /// Directs every edge toward the smaller identity.
    pub fn by_identity(graph: &PortGraph) -> Self {
        Self::toward_smaller(graph, graph.ids())
    }

    /// Every edge directed exactly once.
    pub fn is_consistent(&self, graph: &PortGraph) -> bool {
        self.out.len() == graph.n()
            && (0..graph.n()).all(|v| {
                self.out[v].len() == graph.degree(v)
                    && graph
                        .ports(v)
                        .iter()
                        .enumerate()
                        .all(|(p, &(u, q))| self.out[v][p] != self.out[u][q])
            })
    }

    pub fn is_out(&self, v: usize, port: usize) -> bool {
        self.out[v][port]
    }

    pub fn out_ports(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.out[v].iter().enumerate().filter(|(_, &o)| o).map(|(p, _)| p)
    }

    pub fn out_neighbors<'a>(&'a self, graph: &'a PortGraph, v: usize) -> impl Iterator<Item = usize> + 'a {
        self.out_ports(v).map(move |p| graph.neighbor(v, p).0)
    }

    pub fn outdegree(&self, v: usize) -> usize {
        self.out[v].iter().filter(|&&o| o).count()
    }

    pub fn max_outdegree(&self) -> usize {
        (0..self.out.len()).map(|v| self.outdegree(v)).max().unwrap_or(0)
    }

    /// Restriction to a subgraph given its port map into this graph.
    pub fn restrict(&self, to_parent: &[usize], port_to_parent: &[Vec<usize>]) -> Orientation {
        let out = to_parent
            .iter()
            .zip(port_to_parent)
            .map(|(&v, ports)| ports.iter().map(|&p| self.out[v][p]).collect())
            .collect();
        Orientation { out }
    }

    /// Per-port flags, as carried in node inputs.
    pub fn flags(&self, v: usize) -> &[bool] {
        &self.out[v]
    }
}
