//! Arbdefective coloring: a partition into `k` classes plus an orientation
//! under which every node has few out-neighbors in its own class.
//!
//! Base-color classes decide one after another. A node joins the class that
//! currently holds the fewest of its already decided neighbors (ties go to
//! the smaller class), and edges point from the later decider to the earlier
//! one. Pigeonhole gives at most `⌊Δ/k⌋` same-class out-neighbors.

use serde::Serialize;

use crate::graph::PortGraph;
use crate::orientation::Orientation;
use crate::runtime::{run_sync, NodeContext, NodeProgram, Outbox, Step};

/// Stage-count and defect constants of the substitute.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ArbdefectiveConstants {
    /// `k = ⌈c_k·sqrt(Δ·log₂³(Δ+2))⌉`.
    pub c_k: f64,
    /// Audited defect bound `⌈c_a·(Δ/k)·log₂(Δ+2)⌉`.
    pub c_a: f64,
}

impl Default for ArbdefectiveConstants {
    fn default() -> Self {
        ArbdefectiveConstants { c_k: 1.0, c_a: 1.0 }
    }
}

pub fn class_count(delta: usize, c_k: f64) -> usize {
    let lg = ((delta + 2) as f64).log2();
    ((c_k * (delta as f64 * lg.powi(3)).sqrt()).ceil() as usize).max(1)
}

/// `⌈c_a·(Δ/k)·log₂(Δ+2)⌉`.
pub fn beta_audit_bound(delta: usize, k: usize, c_a: f64) -> usize {
    (c_a * delta as f64 / k as f64 * ((delta + 2) as f64).log2()).ceil() as usize
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArbdefectivePartition {
    pub k: usize,
    /// Class of every node, in `0..k`.
    pub class_of: Vec<usize>,
    /// Orientation of all edges; restricted to a class it is the class
    /// orientation.
    #[serde(skip)]
    pub orientation: Orientation,
    /// Measured maximum number of same-class out-neighbors.
    pub beta: usize,
    /// `⌊Δ/k⌋`, known to every node in advance.
    pub beta_bound: usize,
    /// Rounds of the simulated sequential procedure (one per base color).
    pub rounds: usize,
}

impl ArbdefectivePartition {
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (v, &c) in self.class_of.iter().enumerate() {
            out[c].push(v);
        }
        out
    }

    /// Recomputes the within-class outdegrees.
    pub fn measured_beta(&self, graph: &PortGraph) -> usize {
        (0..graph.n())
            .map(|v| {
                self.orientation
                    .out_neighbors(graph, v)
                    .filter(|&u| self.class_of[u] == self.class_of[v])
                    .count()
            })
            .max()
            .unwrap_or(0)
    }
}

#[derive(Clone, Debug)]
struct SplitInput {
    base: u64,
    k: usize,
}

struct SplitState {
    input: SplitInput,
    decided: Vec<Option<usize>>,
}

struct Split;

impl NodeProgram for Split {
    type Input = SplitInput;
    type State = SplitState;
    type Msg = usize;
    type Output = usize;

    fn init(&self, ctx: &NodeContext, input: &SplitInput) -> SplitState {
        SplitState { input: input.clone(), decided: vec![None; ctx.degree] }
    }

    fn step(&self, _: &NodeContext, round: usize, st: &mut SplitState, inbox: &[Option<usize>]) -> Step<usize, usize> {
        for (slot, m) in st.decided.iter_mut().zip(inbox) {
            if m.is_some() {
                *slot = *m;
            }
        }
        if (round as u64) < st.input.base {
            return Step::wait();
        }
        let mut load = vec![0usize; st.input.k];
        for c in st.decided.iter().flatten() {
            load[*c] += 1;
        }
        let class = (0..st.input.k).min_by_key(|&c| (load[c], c)).expect("k >= 1");
        Step { outbox: Outbox::Broadcast(class), output: Some(class) }
    }
}

/// Partitions `graph` into `k` classes from a proper coloring `base` with
/// colors in `0..palette`.
pub fn arbdefective_coloring(graph: &PortGraph, base: &[u64], palette: u64, k: usize, delta: usize) -> ArbdefectivePartition {
    assert!(k >= 1, "k must be positive");
    assert!(graph.edges().all(|(u, _, v, _)| base[u] != base[v]), "base coloring must be proper");
    assert!(graph.max_degree() <= delta);
    let (class_of, rounds) = if k as u64 >= palette {
        // the base coloring itself is 0-arbdefective
        (base.iter().map(|&b| b as usize).collect(), 0)
    } else {
        let inputs: Vec<SplitInput> = base.iter().map(|&b| SplitInput { base: b, k }).collect();
        let trace = run_sync(graph, &Split, &inputs, graph.n() as u64, palette.max(1) as usize)
            .expect("every base class decides by its round");
        (trace.outputs, trace.rounds_used)
    };
    let orientation = Orientation::from_fn(graph, |v, u| base[u] < base[v]);
    let mut part = ArbdefectivePartition {
        k,
        class_of,
        orientation,
        beta: 0,
        beta_bound: delta / k,
        rounds,
    };
    part.beta = part.measured_beta(graph);
    debug_assert!(part.beta <= part.beta_bound);
    part
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: u64) -> PortGraph {
        let edges: Vec<_> = (1..=n).map(|i| (i, i % n + 1)).collect();
        PortGraph::from_edges((1..=n).collect(), &edges).unwrap()
    }

    #[test]
    fn many_classes_give_a_proper_coloring() {
        let g = cycle(6);
        let base: Vec<u64> = (0..6).collect();
        let p = arbdefective_coloring(&g, &base, 6, 6, 2);
        assert_eq!(p.beta, 0);
        assert_eq!(p.class_of, vec![0, 1, 2, 3, 4, 5]);
        let p = arbdefective_coloring(&g, &base, 6, 3, 2);
        assert_eq!(p.beta, 0);
        assert!(g.edges().all(|(u, _, v, _)| p.class_of[u] != p.class_of[v]));
    }

    #[test]
    fn single_class_is_acyclic_orientation() {
        let g = cycle(5);
        let base = vec![0, 1, 0, 1, 2];
        let p = arbdefective_coloring(&g, &base, 3, 1, 2);
        assert!(p.class_of.iter().all(|&c| c == 0));
        assert!(p.beta <= 2);
        assert_eq!(p.beta, p.orientation.max_outdegree());
    }

    #[test]
    fn c4_two_classes() {
        let g = cycle(4);
        let base = vec![0, 1, 0, 1];
        let p = arbdefective_coloring(&g, &base, 2, 2, 2);
        assert!(p.beta <= 1);
        assert_eq!(p.measured_beta(&g), p.beta);
    }

    #[test]
    fn constants() {
        assert_eq!(class_count(8, 1.0), 18);
        assert_eq!(beta_audit_bound(8, 18, 1.0), 2);
    }
}
