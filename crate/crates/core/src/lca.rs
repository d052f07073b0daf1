//! Local computation: answer "what is the color of `v`?" by probing the ball
//! around `v` and simulating the distributed solver on it.
//!
//! The adapter is stateless. Every query probes `ball(v, r₂ + r)`, where `r₂`
//! is the round count of the `Δ²`-coloring bootstrap and `r` the frozen
//! radius of the regime, builds the instance induced by the probed records,
//! runs the whole pipeline with the global knowledge, and reports `v`'s color.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::color::{Color, ColorAssignment};
use crate::instance::{validate_coloring, ConflictInstance};
use crate::linial::{delta2_coloring_with, reduction_schedule, LinialError};
use crate::math::log_star;
use crate::orientation::Orientation;
use crate::simplify::{solve_high_ratio, HighRatioConfig, Knowledge, SimplifyError};
use crate::theorem2::{solve_conflict_coloring, SolverConfig, SolverError};

/// Radius constants: `r = ⌈c·f(Δ)⌉` with `f = max(log* Δ, 1)` in the
/// high-ratio regime and `f = √Δ·log₂^{2.5}(Δ+2)` in the general one.
/// Each is the smallest multiple of 1/4 covering the worst measured
/// solver round count on the corpus plus a margin of 2.
pub const C_HIGH_RATIO: f64 = 20.0;
pub const C_GENERAL: f64 = 7.0;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LcaError {
    #[error("node {0} does not exist")]
    UnknownNode(u64),
    #[error("node {node}: the solver needed {needed} rounds, radius is {radius}")]
    RadiusInsufficient { node: u64, needed: usize, radius: usize },
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Simplify(#[from] SimplifyError),
    #[error(transparent)]
    Linial(#[from] LinialError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// Lists long enough for the high-ratio solver with the orientation
    /// toward smaller identities.
    HighRatio,
    /// Any instance with `|L(v)| ≥ d·deg(v) + 1`; the recursive solver.
    General,
}

/// What every node knows up front.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LcaProblem {
    pub regime: Regime,
    pub delta: usize,
    pub d: usize,
    pub n_upper_bound: u64,
}

impl LcaProblem {
    pub fn for_instance(instance: &ConflictInstance, regime: Regime) -> Self {
        let g = instance.graph();
        LcaProblem {
            regime,
            delta: g.max_degree(),
            d: instance.conflict_degree(),
            n_upper_bound: g.ids().iter().copied().max().unwrap_or(1),
        }
    }

    /// Rounds of the bootstrap on any graph with these bounds.
    pub fn bootstrap_radius(&self) -> Result<usize, LcaError> {
        Ok(reduction_schedule(self.n_upper_bound + 1, self.delta as u64)?.len())
    }

    pub fn solver_radius(&self) -> usize {
        solver_radius(self.regime, self.delta)
    }

    pub fn total_radius(&self) -> Result<usize, LcaError> {
        Ok(self.bootstrap_radius()? + self.solver_radius())
    }
}

pub fn solver_radius(regime: Regime, delta: usize) -> usize {
    let x = match regime {
        Regime::HighRatio => C_HIGH_RATIO * log_star(delta as f64).max(1) as f64,
        Regime::General => C_GENERAL * radius_shape(delta),
    };
    x.ceil() as usize
}

/// `√Δ·log₂^{2.5}(Δ+2)`.
pub fn radius_shape(delta: usize) -> f64 {
    (delta as f64).sqrt() * ((delta + 2) as f64).log2().powf(2.5)
}

/// What one probe reveals about a node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeRecord {
    pub id: u64,
    pub degree: usize,
    /// Neighbor identity behind each port.
    pub neighbors: Vec<u64>,
    pub list: Vec<Color>,
    pub conflicts: Vec<Vec<(Color, Color)>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ProbeLedger {
    pub query: u64,
    /// Distinct nodes probed; repeated probes are free.
    pub probed: BTreeSet<u64>,
}

impl ProbeLedger {
    pub fn new(query: u64) -> Self {
        ProbeLedger { query, probed: BTreeSet::new() }
    }

    pub fn count(&self) -> usize {
        self.probed.len()
    }
}

/// Read-only access to a hidden instance, one node per probe.
pub struct GraphOracle<'a> {
    instance: &'a ConflictInstance,
}

impl<'a> GraphOracle<'a> {
    pub fn new(instance: &'a ConflictInstance) -> Self {
        GraphOracle { instance }
    }

    pub fn probe(&self, ledger: &mut ProbeLedger, id: u64) -> Result<ProbeRecord, LcaError> {
        let g = self.instance.graph();
        let v = g.index_of(id).ok_or(LcaError::UnknownNode(id))?;
        ledger.probed.insert(id);
        Ok(ProbeRecord {
            id,
            degree: g.degree(v),
            neighbors: g.neighbors(v).map(|u| g.identity(u)).collect(),
            list: self.instance.list(v).to_vec(),
            conflicts: (0..g.degree(v)).map(|p| self.instance.conflicts(v, p).to_vec()).collect(),
        })
    }

    /// The instance induced by the probed nodes. It is exactly what their
    /// records describe: every edge between two probed nodes appears in both
    /// records, and ports keep their relative order.
    fn assemble(&self, ledger: &ProbeLedger) -> Result<(ConflictInstance, Vec<u64>), LcaError> {
        let g = self.instance.graph();
        let mut nodes: Vec<usize> = ledger.probed.iter().map(|&id| g.index_of(id).expect("probed nodes exist")).collect();
        nodes.sort_unstable();
        let (inst, sub) = self.instance.induced(&nodes, None).map_err(SolverError::from)?;
        let ids = sub.to_parent.iter().map(|&v| g.identity(v)).collect();
        Ok((inst, ids))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LcaAnswer {
    pub node: u64,
    pub color: Color,
    pub ledger: ProbeLedger,
    pub bootstrap_radius: usize,
    pub solver_radius: usize,
    /// Rounds the simulated solver used on the ball, bootstrap excluded.
    pub solver_rounds: usize,
}

/// Probes `ball(v, radius)` breadth-first; returns the ledger.
fn probe_ball(oracle: &GraphOracle, v: u64, radius: usize) -> Result<ProbeLedger, LcaError> {
    let mut ledger = ProbeLedger::new(v);
    let mut seen = BTreeSet::from([v]);
    let mut queue = VecDeque::from([(v, 0usize)]);
    while let Some((u, du)) = queue.pop_front() {
        let rec = oracle.probe(&mut ledger, u)?;
        if du == radius {
            continue;
        }
        for w in rec.neighbors {
            if seen.insert(w) {
                queue.push_back((w, du + 1));
            }
        }
    }
    Ok(ledger)
}

/// Runs the regime's full pipeline on `instance` with the global knowledge
/// of `problem`; returns the assignment and the rounds after the bootstrap.
pub fn run_pipeline(instance: &ConflictInstance, problem: &LcaProblem) -> Result<(ColorAssignment, usize), LcaError> {
    match problem.regime {
        Regime::General => {
            let cfg = SolverConfig {
                n_upper_bound: Some(problem.n_upper_bound),
                max_degree: Some(problem.delta),
                conflict_degree: Some(problem.d),
                ..SolverConfig::default()
            };
            let (a, m) = solve_conflict_coloring(instance, &cfg)?;
            Ok((a, m.simulated_rounds - m.bootstrap_rounds))
        }
        Regime::HighRatio => {
            let g = instance.graph();
            let boot = delta2_coloring_with(g, problem.delta, problem.n_upper_bound)?;
            let orient = Orientation::by_identity(g);
            let know = Knowledge {
                delta: problem.delta as u64,
                outdeg: problem.delta as u64,
                d: problem.d as u64,
                n_upper_bound: problem.n_upper_bound,
            };
            let run = solve_high_ratio(instance, &boot.colors, boot.palette, &orient, know, &HighRatioConfig::default())?;
            Ok((run.assignment, run.rounds))
        }
    }
}

pub fn lca_query(oracle: &GraphOracle, problem: &LcaProblem, v: u64) -> Result<LcaAnswer, LcaError> {
    let r2 = problem.bootstrap_radius()?;
    let r = problem.solver_radius();
    let ledger = probe_ball(oracle, v, r2 + r)?;
    let (ball, ids) = oracle.assemble(&ledger)?;
    let (assignment, rounds) = run_pipeline(&ball, problem)?;
    if rounds > r {
        return Err(LcaError::RadiusInsufficient { node: v, needed: rounds, radius: r });
    }
    let at = ids.iter().position(|&id| id == v).expect("query node is in its ball");
    let color = assignment.get(at).cloned().expect("pipeline output is total");
    Ok(LcaAnswer { node: v, color, ledger, bootstrap_radius: r2, solver_radius: r, solver_rounds: rounds })
}

/// Probe budget `Δ^{c'·r_total}·log* n`, kept in log₂ form.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BudgetCurve {
    pub c_prime: f64,
}

impl Default for BudgetCurve {
    fn default() -> Self {
        BudgetCurve { c_prime: 1.0 }
    }
}

impl BudgetCurve {
    pub fn log2_budget(&self, delta: usize, total_radius: usize, n_upper: u64) -> f64 {
        self.c_prime * total_radius as f64 * (delta.max(2) as f64).log2() + (log_star(n_upper as f64).max(1) as f64).log2()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QueryRecord {
    pub node: u64,
    pub probes: usize,
    pub ball_size: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LcaAuditReport {
    pub problem: LcaProblem,
    pub c_high_ratio: f64,
    pub c_general: f64,
    pub bootstrap_radius: usize,
    pub solver_radius: usize,
    pub budget: BudgetCurve,
    pub log2_budget: f64,
    pub orders: usize,
    /// Every order produced the same answer at every node.
    pub order_independent: bool,
    /// The assembled answers form a valid coloring.
    pub valid: bool,
    pub violations: usize,
    /// No query probed more than its ball.
    pub probes_within_ball: bool,
    pub budget_exceeded: bool,
    pub max_probes: usize,
    pub mean_probes: f64,
    pub max_solver_rounds: usize,
    pub queries: Vec<QueryRecord>,
    pub assignment: ColorAssignment,
}

impl LcaAuditReport {
    pub fn consistent(&self) -> bool {
        self.order_independent && self.valid && self.probes_within_ball
    }
}

/// Runs every node's query once per order and checks the answers.
pub fn lca_consistency_audit(
    instance: &ConflictInstance,
    problem: &LcaProblem,
    orders: &[Vec<u64>],
    budget: BudgetCurve,
) -> Result<LcaAuditReport, LcaError> {
    let g = instance.graph();
    let oracle = GraphOracle::new(instance);
    let r2 = problem.bootstrap_radius()?;
    let r = problem.solver_radius();
    let mut first: Option<BTreeMap<u64, Color>> = None;
    let mut order_independent = true;
    let mut queries = Vec::new();
    let mut max_solver_rounds = 0;
    for order in orders {
        let mut answers = BTreeMap::new();
        for &v in order {
            let a = lca_query(&oracle, problem, v)?;
            max_solver_rounds = max_solver_rounds.max(a.solver_rounds);
            if first.is_none() {
                let src = g.index_of(v).expect("queried node exists");
                let ball_size = g.distances(src).iter().filter(|&&d| d <= r2 + r).count();
                queries.push(QueryRecord { node: v, probes: a.ledger.count(), ball_size });
            }
            answers.insert(v, a.color);
        }
        match &first {
            None => first = Some(answers),
            Some(f) => order_independent &= *f == answers,
        }
    }
    queries.sort_by_key(|q| q.node);
    let answers = first.unwrap_or_default();
    let assignment = ColorAssignment::from_id_map(g, &answers);
    let report = validate_coloring(instance, &assignment);
    let log2_budget = budget.log2_budget(problem.delta, r2 + r, problem.n_upper_bound);
    let max_probes = queries.iter().map(|q| q.probes).max().unwrap_or(0);
    let mean_probes = if queries.is_empty() {
        0.0
    } else {
        queries.iter().map(|q| q.probes).sum::<usize>() as f64 / queries.len() as f64
    };
    Ok(LcaAuditReport {
        problem: *problem,
        c_high_ratio: C_HIGH_RATIO,
        c_general: C_GENERAL,
        bootstrap_radius: r2,
        solver_radius: r,
        budget,
        log2_budget,
        orders: orders.len(),
        order_independent,
        valid: report.valid && assignment.is_total(),
        violations: report.violations.len(),
        probes_within_ball: queries.iter().all(|q| q.probes <= q.ball_size),
        budget_exceeded: (max_probes.max(1) as f64).log2() > log2_budget,
        max_probes,
        mean_probes,
        max_solver_rounds,
        queries,
        assignment,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::PortGraph;
    use crate::lab::{encode_list_coloring, encode_plus_one_coloring};

    fn ring(n: u64) -> PortGraph {
        let edges: Vec<_> = (1..=n).map(|i| (i, i % n + 1)).collect();
        PortGraph::from_edges((1..=n).collect(), &edges).unwrap()
    }

    #[test]
    fn k2_gets_two_colors() {
        let g = PortGraph::from_edges(vec![1, 2], &[(1, 2)]).unwrap();
        let inst = encode_plus_one_coloring(&g);
        let oracle = GraphOracle::new(&inst);
        let p = LcaProblem::for_instance(&inst, Regime::General);
        let a = lca_query(&oracle, &p, 1).unwrap();
        let b = lca_query(&oracle, &p, 2).unwrap();
        assert_ne!(a.color, b.color);
        assert_eq!(a.ledger.count(), 2);
    }

    #[test]
    fn ring_probe_count_is_the_ball() {
        let g = ring(512);
        let inst = encode_plus_one_coloring(&g);
        let oracle = GraphOracle::new(&inst);
        let p = LcaProblem::for_instance(&inst, Regime::General);
        let a = lca_query(&oracle, &p, 100).unwrap();
        let r_total = p.total_radius().unwrap();
        assert_eq!(a.ledger.count(), 2 * r_total + 1);
    }

    #[test]
    fn answers_match_the_global_run() {
        let g = ring(200);
        let inst = encode_plus_one_coloring(&g);
        let p = LcaProblem::for_instance(&inst, Regime::General);
        let (global, _) = run_pipeline(&inst, &p).unwrap();
        let oracle = GraphOracle::new(&inst);
        for v in [1, 57, 200] {
            let a = lca_query(&oracle, &p, v).unwrap();
            assert_eq!(Some(&a.color), global.get(g.index_of(v).unwrap()));
        }
    }

    #[test]
    fn high_ratio_ring() {
        let g = ring(64);
        let inst = encode_list_coloring(&g, vec![(1..=40).map(Color::Int).collect(); 64]);
        let p = LcaProblem::for_instance(&inst, Regime::HighRatio);
        let orders = vec![(1..=64).collect::<Vec<u64>>(), (1..=64).rev().collect()];
        let rep = lca_consistency_audit(&inst, &p, &orders, BudgetCurve::default()).unwrap();
        assert!(rep.consistent(), "{rep:?}");
    }

    #[test]
    fn low_budget_is_flagged() {
        let g = ring(16);
        let inst = encode_plus_one_coloring(&g);
        let p = LcaProblem::for_instance(&inst, Regime::General);
        let orders = vec![(1..=16).collect::<Vec<u64>>()];
        let rep = lca_consistency_audit(&inst, &p, &orders, BudgetCurve { c_prime: 0.0 }).unwrap();
        assert!(rep.consistent());
        assert!(rep.budget_exceeded);
    }
}
