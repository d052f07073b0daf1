//! Synchronous-round LOCAL executor, balls, and an ID-obliviousness harness.
//!
//! Round `r` of a program is the computation a node performs after having
//! received the messages sent in round `r - 1`; round 0 sees an empty inbox.
//! A node that outputs in round `r` has used `r` communication rounds, and the
//! run's `rounds_used` is the largest such `r`.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Debug;
use std::marker::PhantomData;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{GraphError, PortGraph, Subgraph, Topology};

/// What a node knows about itself before any communication.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NodeContext {
    pub identity: u64,
    pub degree: usize,
    pub n_upper_bound: u64,
}

#[derive(Clone, Debug)]
pub enum Outbox<M> {
    Silent,
    Broadcast(M),
    /// One optional message per port.
    PerPort(Vec<Option<M>>),
}

#[derive(Clone, Debug)]
pub struct Step<M, O> {
    pub outbox: Outbox<M>,
    pub output: Option<O>,
}

impl<M, O> Step<M, O> {
    pub fn send(msg: M) -> Self {
        Step { outbox: Outbox::Broadcast(msg), output: None }
    }

    pub fn wait() -> Self {
        Step { outbox: Outbox::Silent, output: None }
    }

    pub fn done(output: O) -> Self {
        Step { outbox: Outbox::Silent, output: Some(output) }
    }
}

/// A deterministic per-node behavior. Once a node outputs it is no longer
/// stepped; messages emitted in its output step are still delivered.
pub trait NodeProgram {
    type Input;
    type State;
    type Msg: Clone;
    type Output: Clone;

    fn init(&self, ctx: &NodeContext, input: &Self::Input) -> Self::State;

    fn step(
        &self,
        ctx: &NodeContext,
        round: usize,
        state: &mut Self::State,
        inbox: &[Option<Self::Msg>],
    ) -> Step<Self::Msg, Self::Output>;
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimTrace<O> {
    pub rounds_used: usize,
    /// Messages delivered in rounds `1..=rounds_used`.
    pub per_round_message_count: Vec<usize>,
    pub outputs: Vec<O>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("round budget of {max_rounds} exhausted with {missing} node(s) still silent")]
pub struct RoundBudgetExceeded<O: Debug> {
    pub max_rounds: usize,
    pub missing: usize,
    pub per_round_message_count: Vec<usize>,
    pub partial_outputs: Vec<Option<O>>,
}

/// Runs `program` in lockstep rounds until every node has output.
pub fn run_sync<T, P>(
    topology: &T,
    program: &P,
    inputs: &[P::Input],
    n_upper_bound: u64,
    max_rounds: usize,
) -> Result<SimTrace<P::Output>, RoundBudgetExceeded<P::Output>>
where
    T: Topology + ?Sized,
    P: NodeProgram,
    P::Output: Debug,
{
    let n = topology.node_count();
    assert_eq!(inputs.len(), n, "one input per node");
    let ctx: Vec<NodeContext> = (0..n)
        .map(|v| NodeContext {
            identity: topology.identity(v),
            degree: topology.degree(v),
            n_upper_bound,
        })
        .collect();
    let mut states: Vec<P::State> =
        (0..n).map(|v| program.init(&ctx[v], &inputs[v])).collect();
    let mut outputs: Vec<Option<P::Output>> = vec![None; n];
    let mut inboxes: Vec<Vec<Option<P::Msg>>> = ctx.iter().map(|c| vec![None; c.degree]).collect();
    let mut counts = Vec::new();
    let mut missing = n;
    for round in 0..=max_rounds {
        let mut next: Vec<Vec<Option<P::Msg>>> =
            ctx.iter().map(|c| vec![None; c.degree]).collect();
        let mut sent = 0usize;
        for v in 0..n {
            if outputs[v].is_some() {
                continue;
            }
            let step = program.step(&ctx[v], round, &mut states[v], &inboxes[v]);
            let mut deliver = |port: usize, msg: P::Msg| {
                if let Some((u, q)) = topology.link(v, port) {
                    next[u][q] = Some(msg);
                    sent += 1;
                }
            };
            match step.outbox {
                Outbox::Silent => {}
                Outbox::Broadcast(m) => {
                    for p in 0..ctx[v].degree {
                        deliver(p, m.clone());
                    }
                }
                Outbox::PerPort(msgs) => {
                    for (p, m) in msgs.into_iter().enumerate() {
                        if let Some(m) = m {
                            deliver(p, m);
                        }
                    }
                }
            }
            if let Some(o) = step.output {
                outputs[v] = Some(o);
                missing -= 1;
            }
        }
        if missing == 0 {
            return Ok(SimTrace {
                rounds_used: round,
                per_round_message_count: counts,
                outputs: outputs.into_iter().map(|o| o.expect("all output")).collect(),
            });
        }
        counts.push(sent);
        inboxes = next;
    }
    counts.truncate(max_rounds);
    Err(RoundBudgetExceeded {
        max_rounds,
        missing,
        per_round_message_count: counts,
        partial_outputs: outputs,
    })
}

/// `B(v, t)`: nodes within distance `t` of the center, without the edges that
/// join two nodes at distance exactly `t`. Nodes keep their original degree;
/// ports leading out of the ball are cut.
#[derive(Clone, Debug)]
pub struct Ball {
    pub center: usize,
    pub radius: usize,
    /// Local index 0 is the center; the rest follow breadth-first order.
    pub to_parent: Vec<usize>,
    pub dist: Vec<usize>,
    ids: Vec<u64>,
    links: Vec<Vec<Option<(usize, usize)>>>,
}

impl Ball {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Whether the node sits on the boundary (distance exactly `radius`).
    pub fn on_boundary(&self, local: usize) -> bool {
        self.dist[local] == self.radius
    }

    pub fn edge_count(&self) -> usize {
        self.links.iter().flatten().filter(|l| l.is_some()).count() / 2
    }

    /// The ball as a standalone port graph (ports renumbered, cut ports removed).
    pub fn to_subgraph(&self, parent: &PortGraph) -> Subgraph {
        let t = self.radius;
        let dist = parent.distances(self.center);
        parent.induced_filtered(&self.to_parent, |u, v| dist[u] < t || dist[v] < t)
    }
}

impl Topology for Ball {
    fn node_count(&self) -> usize {
        self.ids.len()
    }
    fn identity(&self, v: usize) -> u64 {
        self.ids[v]
    }
    fn degree(&self, v: usize) -> usize {
        self.links[v].len()
    }
    fn link(&self, v: usize, port: usize) -> Option<(usize, usize)> {
        self.links[v][port]
    }
}

pub fn ball(graph: &PortGraph, v: usize, t: usize) -> Ball {
    let mut local = BTreeMap::new();
    let mut order = vec![v];
    let mut dist = vec![0];
    local.insert(v, 0usize);
    let mut queue = VecDeque::from([v]);
    while let Some(x) = queue.pop_front() {
        let dx = dist[local[&x]];
        if dx == t {
            continue;
        }
        for u in graph.neighbors(x) {
            if !local.contains_key(&u) {
                local.insert(u, order.len());
                order.push(u);
                dist.push(dx + 1);
                queue.push_back(u);
            }
        }
    }
    let links = order
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            graph
                .ports(x)
                .iter()
                .map(|&(u, q)| {
                    let j = *local.get(&u)?;
                    (dist[i] < t || dist[j] < t).then_some((j, q))
                })
                .collect()
        })
        .collect();
    Ball {
        center: v,
        radius: t,
        ids: order.iter().map(|&x| graph.identity(x)).collect(),
        to_parent: order,
        dist,
        links,
    }
}

/// Runs `program` once per identity bijection and reports whether every node
/// produced the same output in all runs. Identities missing from a map are
/// kept. Runs that exhaust `max_rounds` count as a mismatch.
pub fn check_id_oblivious<P>(
    program: &P,
    graph: &PortGraph,
    inputs: &[P::Input],
    permutations: &[BTreeMap<u64, u64>],
    n_upper_bound: u64,
    max_rounds: usize,
) -> Result<bool, GraphError>
where
    P: NodeProgram,
    P::Output: PartialEq + Debug,
{
    let Ok(base) = run_sync(graph, program, inputs, n_upper_bound, max_rounds) else {
        return Ok(false);
    };
    for perm in permutations {
        let relabeled = graph.relabel(|id| perm.get(&id).copied().unwrap_or(id))?;
        match run_sync(&relabeled, program, inputs, n_upper_bound, max_rounds) {
            Ok(trace) if trace.outputs == base.outputs => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// A program that exchanges exactly one message with its neighbors and then
/// outputs. Used to run one-round transformations (simplify, lift, class
/// steps) under the executor so their round cost is measured, not assumed.
pub struct OneRound<I, M, O, A, F> {
    announce: A,
    finish: F,
    _types: PhantomData<fn(&I) -> (M, O)>,
}

impl<I, M, O, A, F> OneRound<I, M, O, A, F>
where
    A: Fn(&NodeContext, &I) -> Outbox<M>,
    F: Fn(&NodeContext, &I, &[Option<M>]) -> O,
{
    pub fn new(announce: A, finish: F) -> Self {
        OneRound { announce, finish, _types: PhantomData }
    }
}

impl<I, M, O, A, F> NodeProgram for OneRound<I, M, O, A, F>
where
    I: Clone,
    M: Clone,
    O: Clone,
    A: Fn(&NodeContext, &I) -> Outbox<M>,
    F: Fn(&NodeContext, &I, &[Option<M>]) -> O,
{
    type Input = I;
    type State = I;
    type Msg = M;
    type Output = O;

    fn init(&self, _ctx: &NodeContext, input: &I) -> I {
        input.clone()
    }

    fn step(&self, ctx: &NodeContext, round: usize, state: &mut I, inbox: &[Option<M>]) -> Step<M, O> {
        if round == 0 {
            Step { outbox: (self.announce)(ctx, state), output: None }
        } else {
            Step::done((self.finish)(ctx, state, inbox))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct OwnId;
    impl NodeProgram for OwnId {
        type Input = ();
        type State = ();
        type Msg = ();
        type Output = u64;
        fn init(&self, _: &NodeContext, _: &()) {}
        fn step(&self, ctx: &NodeContext, _: usize, _: &mut (), _: &[Option<()>]) -> Step<(), u64> {
            Step::done(ctx.identity)
        }
    }

    struct Constant;
    impl NodeProgram for Constant {
        type Input = ();
        type State = ();
        type Msg = ();
        type Output = u8;
        fn init(&self, _: &NodeContext, _: &()) {}
        fn step(&self, _: &NodeContext, _: usize, _: &mut (), _: &[Option<()>]) -> Step<(), u8> {
            Step::done(7)
        }
    }

    pub(crate) struct FloodMax(pub usize);
    impl NodeProgram for FloodMax {
        type Input = ();
        type State = u64;
        type Msg = u64;
        type Output = u64;
        fn init(&self, ctx: &NodeContext, _: &()) -> u64 {
            ctx.identity
        }
        fn step(&self, _: &NodeContext, round: usize, best: &mut u64, inbox: &[Option<u64>]) -> Step<u64, u64> {
            *best = inbox.iter().flatten().fold(*best, |a, &b| a.max(b));
            if round == self.0 {
                Step::done(*best)
            } else {
                Step::send(*best)
            }
        }
    }

    fn ring(n: u64) -> PortGraph {
        let edges: Vec<_> = (1..=n).map(|i| (i, i % n + 1)).collect();
        PortGraph::from_edges((1..=n).collect(), &edges).unwrap()
    }

    #[test]
    fn zero_round_program() {
        let g = ring(6);
        let trace = run_sync(&g, &OwnId, &[(); 6], 6, 3).unwrap();
        assert_eq!(trace.rounds_used, 0);
        assert!(trace.per_round_message_count.is_empty());
        assert_eq!(trace.outputs, g.ids().to_vec());
    }

    #[test]
    fn flooding_reaches_diameter() {
        let ids = vec![3, 1, 4, 15, 9];
        let g = PortGraph::from_edges(ids, &[(3, 1), (1, 4), (4, 15), (15, 9)]).unwrap();
        let trace = run_sync(&g, &FloodMax(4), &[(); 5], 16, 4).unwrap();
        assert_eq!(trace.rounds_used, 4);
        assert_eq!(trace.per_round_message_count, vec![8; 4]);
        assert!(trace.outputs.iter().all(|&x| x == 15));
    }

    #[test]
    fn budget_exceeded_keeps_partial_trace() {
        let g = ring(5);
        let err = run_sync(&g, &FloodMax(9), &[(); 5], 5, 2).unwrap_err();
        assert_eq!(err.max_rounds, 2);
        assert_eq!(err.missing, 5);
        assert_eq!(err.per_round_message_count.len(), 2);
    }

    #[test]
    fn ring_balls() {
        let g = ring(8);
        let b0 = ball(&g, 0, 0);
        assert_eq!((b0.len(), b0.edge_count()), (1, 0));
        let b2 = ball(&g, 0, 2);
        assert_eq!((b2.len(), b2.edge_count()), (5, 4));
        let sub = b2.to_subgraph(&g);
        assert_eq!(sub.graph.edge_count(), 4);
        assert_eq!(sub.graph.max_degree(), 2);
    }

    #[test]
    fn boundary_edges_are_dropped() {
        // triangle: both neighbors sit at distance 1
        let g = PortGraph::from_edges(vec![1, 2, 3], &[(1, 2), (2, 3), (1, 3)]).unwrap();
        let b = ball(&g, 0, 1);
        assert_eq!(b.edge_count(), 2);
        assert!(b.on_boundary(1) && b.on_boundary(2));
        assert_eq!(ball(&g, 0, 2).edge_count(), 3);
    }

    #[test]
    fn oblivious_checks() {
        let g = ring(4);
        let perm: BTreeMap<u64, u64> = [(1, 2), (2, 1)].into_iter().collect();
        assert!(check_id_oblivious(&Constant, &g, &[(); 4], &[perm.clone()], 4, 1).unwrap());
        assert!(!check_id_oblivious(&OwnId, &g, &[(); 4], &[perm], 4, 1).unwrap());
    }

    #[test]
    fn one_round_sums_neighbor_inputs() {
        let g = ring(5);
        let prog = OneRound::new(
            |_: &NodeContext, x: &u64| Outbox::Broadcast(*x),
            |_: &NodeContext, x: &u64, inbox: &[Option<u64>]| x + inbox.iter().flatten().sum::<u64>(),
        );
        let trace = run_sync(&g, &prog, &[1, 2, 3, 4, 5], 5, 1).unwrap();
        assert_eq!(trace.rounds_used, 1);
        assert_eq!(trace.outputs, vec![8, 6, 9, 12, 10]);
    }

    #[test]
    fn flood_output_depends_only_on_ball() {
        let g = ring(12);
        let t = 3;
        let full = run_sync(&g, &FloodMax(t), &[(); 12], 12, t).unwrap();
        for v in 0..g.n() {
            let b = ball(&g, v, t);
            let local = run_sync(&b, &FloodMax(t), &vec![(); b.len()], 12, t).unwrap();
            assert_eq!(local.outputs[0], full.outputs[v]);
            let direct = b.to_parent.iter().map(|&x| g.identity(x)).max().unwrap();
            assert_eq!(direct, full.outputs[v]);
        }
    }
}
