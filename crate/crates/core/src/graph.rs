//! Port-numbered simple graphs with node identities.
//!
//! Nodes are addressed internally by a dense index `0..n`. Ports are 0-based
//! internally (`0..degree`); the JSON formats use the 1-based numbering of the
//! LOCAL model and convert at the boundary.

use std::collections::{BTreeSet, HashMap, VecDeque};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("node identities must be positive integers")]
    ZeroIdentity,
    #[error("duplicate node identity {0}")]
    DuplicateIdentity(u64),
    #[error("edge references unknown node identity {0}")]
    UnknownNode(u64),
    #[error("self-loop at node {0}")]
    SelfLoop(u64),
    #[error("parallel edge between {0} and {1}")]
    ParallelEdge(u64, u64),
    #[error("node {node}: ports do not form a bijection onto 1..{degree}")]
    BadPorts { node: u64, degree: usize },
    #[error("graph is not connected")]
    Disconnected,
}

/// Read-only view of a port-numbered topology, as seen by the round executor.
///
/// `link` may return `None` for a port whose edge was cut away (ball boundary);
/// messages sent there are dropped.
pub trait Topology {
    fn node_count(&self) -> usize;
    fn identity(&self, v: usize) -> u64;
    fn degree(&self, v: usize) -> usize;
    fn link(&self, v: usize, port: usize) -> Option<(usize, usize)>;
}

/// Simple undirected graph with per-node port numbering and identities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PortGraph {
    ids: Vec<u64>,
    /// `adj[v][p] = (u, q)`: port `p` of `v` leads to `u`, arriving on `u`'s port `q`.
    adj: Vec<Vec<(usize, usize)>>,
    index: HashMap<u64, usize>,
}

/// An induced subgraph together with the maps back into its parent.
#[derive(Clone, Debug)]
pub struct Subgraph {
    pub graph: PortGraph,
    /// New node index -> parent node index.
    pub to_parent: Vec<usize>,
    /// `port_to_parent[v][p]` is the parent port of new port `p` at new node `v`.
    pub port_to_parent: Vec<Vec<usize>>,
}

impl PortGraph {
    /// Builds a graph with canonical ports: at each node, ports follow
    /// ascending neighbor identity.
    pub fn from_edges(ids: Vec<u64>, edges: &[(u64, u64)]) -> Result<Self, GraphError> {
        let index = Self::index_ids(&ids)?;
        let n = ids.len();
        let mut nbrs: Vec<BTreeSet<(u64, usize)>> = vec![BTreeSet::new(); n];
        for &(a, b) in edges {
            let ia = *index.get(&a).ok_or(GraphError::UnknownNode(a))?;
            let ib = *index.get(&b).ok_or(GraphError::UnknownNode(b))?;
            if ia == ib {
                return Err(GraphError::SelfLoop(a));
            }
            if !nbrs[ia].insert((b, ib)) {
                return Err(GraphError::ParallelEdge(a.min(b), a.max(b)));
            }
            nbrs[ib].insert((a, ia));
        }
        let order: Vec<Vec<usize>> = nbrs
            .iter()
            .map(|s| s.iter().map(|&(_, i)| i).collect())
            .collect();
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for v in 0..n {
            for &u in &order[v] {
                let q = order[u].iter().position(|&w| w == v).expect("symmetric");
                adj[v].push((u, q));
            }
        }
        Ok(PortGraph { ids, adj, index })
    }

    /// Builds a graph with explicit 1-based port numbers per edge endpoint.
    pub fn from_ported_edges(
        ids: Vec<u64>,
        edges: &[(u64, u64, usize, usize)],
    ) -> Result<Self, GraphError> {
        let index = Self::index_ids(&ids)?;
        let n = ids.len();
        let mut slots: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); n];
        let mut seen = BTreeSet::new();
        for &(a, b, pa, pb) in edges {
            let ia = *index.get(&a).ok_or(GraphError::UnknownNode(a))?;
            let ib = *index.get(&b).ok_or(GraphError::UnknownNode(b))?;
            if ia == ib {
                return Err(GraphError::SelfLoop(a));
            }
            if !seen.insert((ia.min(ib), ia.max(ib))) {
                return Err(GraphError::ParallelEdge(a.min(b), a.max(b)));
            }
            slots[ia].push((pa, ib, pb));
            slots[ib].push((pb, ia, pa));
        }
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for v in 0..n {
            let deg = slots[v].len();
            let mut row = vec![None; deg];
            for &(p, u, q) in &slots[v] {
                if p == 0 || p > deg || q == 0 || row[p - 1].is_some() {
                    return Err(GraphError::BadPorts { node: ids[v], degree: deg });
                }
                row[p - 1] = Some((u, q - 1));
            }
            adj[v] = row.into_iter().map(|x| x.expect("filled")).collect();
        }
        // far-end port numbers must also be in range at the far node
        for v in 0..n {
            for &(u, q) in &adj[v] {
                if q >= adj[u].len() || adj[u][q].0 != v {
                    return Err(GraphError::BadPorts { node: ids[u], degree: adj[u].len() });
                }
            }
        }
        Ok(PortGraph { ids, adj, index })
    }

    fn index_ids(ids: &[u64]) -> Result<HashMap<u64, usize>, GraphError> {
        let mut index = HashMap::with_capacity(ids.len());
        for (i, &id) in ids.iter().enumerate() {
            if id == 0 {
                return Err(GraphError::ZeroIdentity);
            }
            if index.insert(id, i).is_some() {
                return Err(GraphError::DuplicateIdentity(id));
            }
        }
        Ok(index)
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn ids(&self) -> &[u64] {
        &self.ids
    }

    pub fn identity(&self, v: usize) -> u64 {
        self.ids[v]
    }

    pub fn index_of(&self, id: u64) -> Option<usize> {
        self.index.get(&id).copied()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// `(neighbor, port at neighbor)` behind port `p` of `v`.
    pub fn neighbor(&self, v: usize, p: usize) -> (usize, usize) {
        self.adj[v][p]
    }

    pub fn ports(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().map(|&(u, _)| u)
    }

    /// Port of `v` leading to `u`, if adjacent.
    pub fn port_to(&self, v: usize, u: usize) -> Option<usize> {
        self.adj[v].iter().position(|&(w, _)| w == u)
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Each edge once as `(u, port at u, v, port at v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, row)| {
            row.iter()
                .enumerate()
                .filter(move |&(_, &(v, _))| u < v)
                .map(move |(p, &(v, q))| (u, p, v, q))
        })
    }

    /// Breadth-first distances from `src`; `usize::MAX` marks unreachable nodes.
    pub fn distances(&self, src: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n()];
        let mut queue = VecDeque::new();
        dist[src] = 0;
        queue.push_back(src);
        while let Some(v) = queue.pop_front() {
            for u in self.neighbors(v) {
                if dist[u] == usize::MAX {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.n() == 0 || self.distances(0).iter().all(|&d| d != usize::MAX)
    }

    pub fn require_connected(self) -> Result<Self, GraphError> {
        if self.is_connected() {
            Ok(self)
        } else {
            Err(GraphError::Disconnected)
        }
    }

    /// Same topology and ports, identities replaced through `map`.
    pub fn relabel(&self, map: impl Fn(u64) -> u64) -> Result<Self, GraphError> {
        let ids: Vec<u64> = self.ids.iter().map(|&id| map(id)).collect();
        let index = Self::index_ids(&ids)?;
        Ok(PortGraph { ids, adj: self.adj.clone(), index })
    }

    /// Subgraph induced by `nodes` (parent indices, any order; the new
    /// indexing follows the given order). Ports keep their relative order.
    pub fn induced(&self, nodes: &[usize]) -> Subgraph {
        self.induced_filtered(nodes, |_, _| true)
    }

    /// Like [`induced`](Self::induced), keeping only edges `{u, v}` (parent
    /// indices) for which `keep(u, v)` holds. `keep` must be symmetric.
    pub fn induced_filtered(&self, nodes: &[usize], keep: impl Fn(usize, usize) -> bool) -> Subgraph {
        let mut new_index = vec![usize::MAX; self.n()];
        for (i, &v) in nodes.iter().enumerate() {
            new_index[v] = i;
        }
        let mut port_to_parent = Vec::with_capacity(nodes.len());
        let mut new_port: HashMap<(usize, usize), usize> = HashMap::new();
        for &v in nodes {
            let kept: Vec<usize> = (0..self.degree(v))
                .filter(|&p| {
                    let u = self.adj[v][p].0;
                    new_index[u] != usize::MAX && keep(v, u)
                })
                .collect();
            for (np, &p) in kept.iter().enumerate() {
                new_port.insert((v, p), np);
            }
            port_to_parent.push(kept);
        }
        let adj = nodes
            .iter()
            .zip(&port_to_parent)
            .map(|(&v, kept)| {
                kept.iter()
                    .map(|&p| {
                        let (u, q) = self.adj[v][p];
                        (new_index[u], new_port[&(u, q)])
                    })
                    .collect()
            })
            .collect();
        let ids: Vec<u64> = nodes.iter().map(|&v| self.ids[v]).collect();
        let index = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
        Subgraph {
            graph: PortGraph { ids, adj, index },
            to_parent: nodes.to_vec(),
            port_to_parent,
        }
    }
}

impl Topology for PortGraph {
    fn node_count(&self) -> usize {
        self.n()
    }
    fn identity(&self, v: usize) -> u64 {
        self.ids[v]
    }
    fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }
    fn link(&self, v: usize, port: usize) -> Option<(usize, usize)> {
        self.adj[v].get(port).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> PortGraph {
        PortGraph::from_edges(vec![5, 2, 9], &[(5, 2), (2, 9)]).unwrap()
    }

    #[test]
    fn canonical_ports_follow_neighbor_identity() {
        let g = PortGraph::from_edges(vec![1, 7, 3, 5], &[(1, 7), (1, 3), (1, 5)]).unwrap();
        let hub = g.index_of(1).unwrap();
        let order: Vec<u64> = g.neighbors(hub).map(|u| g.identity(u)).collect();
        assert_eq!(order, vec![3, 5, 7]);
        for (p, &(u, q)) in g.ports(hub).iter().enumerate() {
            assert_eq!(g.neighbor(u, q), (hub, p));
        }
    }

    #[test]
    fn rejects_malformed_input() {
        assert_eq!(PortGraph::from_edges(vec![0], &[]), Err(GraphError::ZeroIdentity));
        assert_eq!(
            PortGraph::from_edges(vec![1, 1], &[]),
            Err(GraphError::DuplicateIdentity(1))
        );
        assert_eq!(PortGraph::from_edges(vec![1], &[(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(
            PortGraph::from_edges(vec![1, 2], &[(1, 2), (2, 1)]),
            Err(GraphError::ParallelEdge(1, 2))
        );
        assert!(matches!(
            PortGraph::from_ported_edges(vec![1, 2, 3], &[(1, 2, 1, 1), (1, 3, 1, 1)]),
            Err(GraphError::BadPorts { .. })
        ));
        assert_eq!(
            PortGraph::from_edges(vec![1, 2], &[]).unwrap().require_connected(),
            Err(GraphError::Disconnected)
        );
    }

    #[test]
    fn explicit_ports_are_respected() {
        let g = PortGraph::from_ported_edges(vec![1, 2, 3], &[(1, 2, 2, 1), (1, 3, 1, 1)]).unwrap();
        let a = g.index_of(1).unwrap();
        assert_eq!(g.identity(g.neighbor(a, 1).0), 2);
        assert_eq!(g.identity(g.neighbor(a, 0).0), 3);
    }

    #[test]
    fn induced_subgraph_keeps_port_order() {
        let g = PortGraph::from_edges(vec![1, 2, 3, 4], &[(1, 2), (1, 3), (1, 4), (3, 4)]).unwrap();
        let sub = g.induced(&[0, 2, 3]);
        assert_eq!(sub.graph.n(), 3);
        assert_eq!(sub.graph.edge_count(), 3);
        assert_eq!(sub.port_to_parent[0], vec![1, 2]);
        for v in 0..3 {
            for (p, &(u, q)) in sub.graph.ports(v).iter().enumerate() {
                assert_eq!(sub.graph.neighbor(u, q), (v, p));
            }
        }
    }

    #[test]
    fn distances_and_edges() {
        let g = path3();
        assert_eq!(g.distances(0), vec![0, 1, 2]);
        assert_eq!(g.edges().count(), 2);
        assert!(g.is_connected());
        assert_eq!(g.max_degree(), 2);
    }
}
