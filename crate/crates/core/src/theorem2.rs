//! Conflict coloring with lists of size `d·deg(v) + 1`: bootstrap a
//! `Δ²`-coloring, split into arbdefective classes, color the classes stage by
//! stage with the high-ratio solver, and recurse on the nodes that were left
//! with short lists.

use serde::Serialize;
use thiserror::Error;

use crate::arbdefective::{arbdefective_coloring, beta_audit_bound, class_count, ArbdefectiveConstants};
use crate::color::{Color, ColorAssignment};
use crate::instance::{ConflictInstance, InstanceError};
use crate::linial::{delta2_coloring_with, reduce_to_fixpoint, LinialError};
use crate::math::ln_clamped;
use crate::runtime::run_sync;
use crate::simplify::{ratio_threshold, solve_high_ratio, ClassGreedy, ClassInput, HighRatioConfig, Knowledge, SimplifyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("node {node} has {size} colors, needs at least {needed}")]
    ListTooShort { node: u64, size: usize, needed: usize },
    #[error(transparent)]
    Simplify(#[from] SimplifyError),
    #[error(transparent)]
    Linial(#[from] LinialError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error("greedy found no color for node {node}")]
    GreedyExhausted { node: u64 },
    #[error("runtime: {0}")]
    Runtime(String),
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub constants: ArbdefectiveConstants,
    /// Levels with `Δ` at most this are finished by the class greedy.
    pub base_degree: usize,
    pub high_ratio: HighRatioConfig,
    /// Upper bound on identities; defaults to the largest identity.
    pub n_upper_bound: Option<u64>,
    /// Known degree bound; defaults to the measured maximum degree.
    pub max_degree: Option<usize>,
    /// Known conflict degree bound; defaults to the measured one.
    pub conflict_degree: Option<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            constants: ArbdefectiveConstants::default(),
            base_degree: 4,
            high_ratio: HighRatioConfig::default(),
            n_upper_bound: None,
            max_degree: None,
            conflict_degree: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct StageMetrics {
    pub class: usize,
    pub class_size: usize,
    pub eligible: usize,
    pub rounds: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct LevelMetrics {
    pub level: usize,
    pub nodes: usize,
    /// Degree bound known at this level.
    pub delta: usize,
    pub measured_delta: usize,
    pub palette: u64,
    pub base_case: bool,
    pub k: usize,
    pub beta: usize,
    pub beta_bound: usize,
    pub beta_audit_bound: usize,
    pub threshold: f64,
    pub eligible: usize,
    /// Eligible nodes pushed to the recursion after a ratio failure.
    pub demoted: usize,
    pub leftover: usize,
    pub leftover_degree: usize,
    pub next_delta: usize,
    /// Rounds charged for the arbdefective split (`⌈k·log₂(Δ+2)⌉`).
    pub arbdefective_charged: usize,
    /// Rounds the sequential substitute actually simulates.
    pub arbdefective_simulated: usize,
    pub stage_rounds: usize,
    pub rebootstrap_rounds: usize,
    pub greedy_rounds: usize,
    pub stages: Vec<StageMetrics>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SolveMetrics {
    pub delta: usize,
    pub d: usize,
    pub bootstrap_rounds: usize,
    pub bootstrap_palette: u64,
    /// Total with the arbdefective split charged at its cited cost.
    pub rounds: usize,
    /// Total with the substitute's simulated rounds instead.
    pub simulated_rounds: usize,
    pub levels: Vec<LevelMetrics>,
    /// Broken invariants; empty on a correct run.
    pub violations: Vec<String>,
}

/// Solves `instance`; lists must satisfy `|L(v)| ≥ d·deg(v) + 1`.
pub fn solve_conflict_coloring(instance: &ConflictInstance, cfg: &SolverConfig) -> Result<(ColorAssignment, SolveMetrics), SolverError> {
    let g = instance.graph();
    let d = cfg.conflict_degree.unwrap_or_else(|| instance.conflict_degree());
    for v in 0..g.n() {
        let needed = d * g.degree(v) + 1;
        if instance.list(v).len() < needed {
            return Err(SolverError::ListTooShort { node: g.identity(v), size: instance.list(v).len(), needed });
        }
    }
    let delta = cfg.max_degree.unwrap_or_else(|| g.max_degree());
    let n_upper = cfg.n_upper_bound.unwrap_or_else(|| g.ids().iter().copied().max().unwrap_or(1));
    let boot = delta2_coloring_with(g, delta, n_upper)?;
    let mut metrics = SolveMetrics {
        delta,
        d,
        bootstrap_rounds: boot.rounds,
        bootstrap_palette: boot.palette,
        ..SolveMetrics::default()
    };
    let mut out = ColorAssignment::empty(g.n());
    let solver = Solver { top: instance, cfg, d: d as u64, n_upper };
    let nodes: Vec<usize> = (0..g.n()).collect();
    let lists = instance.lists().to_vec();
    solver.level(0, &nodes, lists, delta, &boot.colors, boot.palette, &mut out, &mut metrics)?;
    metrics.rounds += metrics.bootstrap_rounds;
    metrics.simulated_rounds += metrics.bootstrap_rounds;
    Ok((out, metrics))
}

struct Solver<'a> {
    top: &'a ConflictInstance,
    cfg: &'a SolverConfig,
    d: u64,
    n_upper: u64,
}

/// `L(v)` without the colors that conflict with a fixed neighbor.
fn residual_list(inst: &ConflictInstance, v: usize, fixed: impl Fn(usize) -> Option<Color>) -> Vec<Color> {
    let g = inst.graph();
    inst.list(v)
        .iter()
        .filter(|c| {
            (0..g.degree(v)).all(|p| match fixed(g.neighbor(v, p).0) {
                None => true,
                Some(theirs) => !inst.is_conflict(v, p, c, &theirs),
            })
        })
        .cloned()
        .collect()
}

impl Solver<'_> {
    /// One recursion level on the nodes `nodes` (top-level indices) with
    /// lists `lists`, degree bound `delta` and a proper coloring `base` with
    /// colors in `0..palette`.
    #[allow(clippy::too_many_arguments)]
    fn level(
        &self,
        depth: usize,
        nodes: &[usize],
        lists: Vec<Vec<Color>>,
        delta: usize,
        base: &[u64],
        palette: u64,
        out: &mut ColorAssignment,
        metrics: &mut SolveMetrics,
    ) -> Result<(), SolverError> {
        if nodes.is_empty() {
            return Ok(());
        }
        let (inst, sub) = self.top.induced(nodes, Some(lists))?;
        let g = inst.graph();
        let mut lm = LevelMetrics {
            level: depth,
            nodes: nodes.len(),
            delta,
            measured_delta: g.max_degree(),
            palette,
            ..LevelMetrics::default()
        };
        if g.max_degree() > delta {
            metrics.violations.push(format!("level {depth}: degree {} above bound {delta}", g.max_degree()));
        }
        for v in 0..g.n() {
            if inst.list(v).len() < self.d as usize * g.degree(v) + 1 {
                metrics.violations.push(format!("level {depth}: list slack broken at node {}", g.identity(v)));
            }
        }

        if delta <= self.cfg.base_degree {
            lm.base_case = true;
            let rounds = self.class_greedy(&inst, base, palette, |v, c| out.set(sub.to_parent[v], c))?;
            lm.greedy_rounds = rounds;
            metrics.rounds += rounds;
            metrics.simulated_rounds += rounds;
            metrics.levels.push(lm);
            return Ok(());
        }

        let c = &self.cfg.constants;
        let k = class_count(delta, c.c_k);
        let part = arbdefective_coloring(g, base, palette, k, delta);
        lm.k = k;
        lm.beta = part.beta;
        lm.beta_bound = part.beta_bound;
        lm.beta_audit_bound = beta_audit_bound(delta, k, c.c_a);
        lm.arbdefective_charged = (k as f64 * ((delta + 2) as f64).log2()).ceil() as usize;
        lm.arbdefective_simulated = part.rounds;
        if part.beta > part.beta_bound || part.beta > lm.beta_audit_bound {
            metrics.violations.push(format!("level {depth}: beta {} above bound", part.beta));
        }
        let beta = part.beta_bound as u64;
        let ln_delta = ln_clamped(delta);
        let know = Knowledge { delta: delta as u64, outdeg: beta, d: self.d, n_upper_bound: self.n_upper };
        let threshold = ratio_threshold(&know);
        lm.threshold = threshold;

        // colors fixed at this level, by level index
        let mut fixed: Vec<Option<Color>> = vec![None; g.n()];
        for (class, members) in part.classes().into_iter().enumerate() {
            if members.is_empty() {
                continue;
            }
            let mut eligible = Vec::new();
            let mut residual = Vec::new();
            for &v in &members {
                let l_prime = residual_list(&inst, v, |u| fixed[u].clone());
                if !l_prime.is_empty() && l_prime.len() as f64 >= threshold {
                    eligible.push(v);
                    residual.push(l_prime);
                } else {
                    let colored = g.neighbors(v).filter(|&u| fixed[u].is_some()).count() as f64;
                    if self.d > 0 && colored <= g.degree(v) as f64 - 10.0 * (beta * beta) as f64 * ln_delta {
                        metrics.violations.push(format!(
                            "level {depth}: ineligible node {} has only {colored} colored neighbors",
                            g.identity(v)
                        ));
                    }
                }
            }
            let mut stage = StageMetrics { class, class_size: members.len(), eligible: eligible.len(), rounds: 1 };
            if !eligible.is_empty() {
                let (sinst, ssub) = inst.induced(&eligible, Some(residual))?;
                let orient = part.orientation.restrict(&ssub.to_parent, &ssub.port_to_parent);
                let colors: Vec<u64> = ssub.to_parent.iter().map(|&v| base[v]).collect();
                match solve_high_ratio(&sinst, &colors, palette, &orient, know, &self.cfg.high_ratio) {
                    Ok(run) => {
                        for (i, &v) in ssub.to_parent.iter().enumerate() {
                            let c = run.assignment.get(i).expect("high-ratio output is total").clone();
                            fixed[v] = Some(c);
                        }
                        stage.rounds += run.rounds;
                    }
                    // demote the whole batch; the recursion picks it up
                    Err(SimplifyError::RatioPreconditionFailed { .. }) => {
                        lm.demoted += eligible.len();
                        stage.eligible = 0;
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            lm.eligible += stage.eligible;
            lm.stage_rounds += stage.rounds;
            lm.stages.push(stage);
            self.check_stage_safety(&inst, &fixed, depth, metrics);
        }

        for (v, c) in fixed.iter().enumerate() {
            if let Some(c) = c {
                out.set(sub.to_parent[v], c.clone());
            }
        }
        let rest: Vec<usize> = (0..g.n()).filter(|&v| fixed[v].is_none()).collect();
        let rest_lists: Vec<Vec<Color>> = rest.iter().map(|&v| residual_list(&inst, v, |u| fixed[u].clone())).collect();
        let next_delta = (10.0 * (beta * beta) as f64 * ln_delta).ceil() as usize;
        lm.leftover = rest.len();
        lm.next_delta = next_delta;
        let rest_sub = g.induced(&rest);
        lm.leftover_degree = rest_sub.graph.max_degree();
        if lm.leftover_degree > next_delta {
            metrics.violations.push(format!("level {depth}: leftover degree {} above {next_delta}", lm.leftover_degree));
        }
        let mut charged = lm.arbdefective_charged + lm.stage_rounds;
        let mut simulated = lm.arbdefective_simulated + lm.stage_rounds;
        if rest.is_empty() {
            metrics.rounds += charged;
            metrics.simulated_rounds += simulated;
            metrics.levels.push(lm);
            return Ok(());
        }
        let bound = if next_delta >= delta {
            metrics.violations.push(format!("level {depth}: degree bound does not shrink ({delta} -> {next_delta})"));
            // finish with the greedy so the recursion still terminates
            self.cfg.base_degree
        } else {
            next_delta.max(lm.leftover_degree)
        };
        let rest_base: Vec<u64> = rest.iter().map(|&v| base[v]).collect();
        let re = reduce_to_fixpoint(&rest_sub.graph, &rest_base, palette, bound as u64, self.n_upper)?;
        // one extra round tells the leftover nodes the last stage's colors
        lm.rebootstrap_rounds = re.rounds + 1;
        charged += lm.rebootstrap_rounds;
        simulated += lm.rebootstrap_rounds;
        metrics.rounds += charged;
        metrics.simulated_rounds += simulated;
        metrics.levels.push(lm);
        let top_nodes: Vec<usize> = rest.iter().map(|&v| sub.to_parent[v]).collect();
        self.level(depth + 1, &top_nodes, rest_lists, bound, &re.colors, re.palette, out, metrics)
    }

    /// Stage safety: colored nodes of this level form a conflict-free partial
    /// assignment.
    fn check_stage_safety(&self, inst: &ConflictInstance, fixed: &[Option<Color>], depth: usize, metrics: &mut SolveMetrics) {
        for (u, p, v, _) in inst.graph().edges() {
            if let (Some(a), Some(b)) = (&fixed[u], &fixed[v]) {
                if inst.is_conflict(u, p, a, b) {
                    metrics.violations.push(format!(
                        "level {depth}: conflict between {} and {}",
                        inst.graph().identity(u),
                        inst.graph().identity(v)
                    ));
                }
            }
        }
    }

    /// One round per base color class: each node takes its smallest color
    /// compatible with the neighbors fixed before it.
    fn class_greedy(&self, inst: &ConflictInstance, base: &[u64], palette: u64, mut set: impl FnMut(usize, Color)) -> Result<usize, SolverError> {
        let g = inst.graph();
        let inputs: Vec<ClassInput> = (0..g.n())
            .map(|v| ClassInput {
                class: base[v],
                list: inst.list(v).to_vec(),
                conflicts: (0..g.degree(v)).map(|p| inst.conflicts(v, p).to_vec()).collect(),
            })
            .collect();
        let trace = run_sync(g, &ClassGreedy, &inputs, self.n_upper, palette.max(1) as usize)
            .map_err(|e| SolverError::Runtime(e.to_string()))?;
        for (v, c) in trace.outputs.into_iter().enumerate() {
            set(v, c.ok_or(SolverError::GreedyExhausted { node: g.identity(v) })?);
        }
        Ok(trace.rounds_used)
    }
}

/// The plain comparator: bootstrap, then one round per class of the
/// `Δ²`-coloring.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BaselineRun {
    pub assignment: ColorAssignment,
    pub bootstrap_rounds: usize,
    /// Classes the greedy iterates over.
    pub classes: u64,
    /// Round in which the last node actually decided.
    pub measured_rounds: usize,
}

impl BaselineRun {
    /// Bootstrap plus one round per class, occupied or not.
    pub fn scheduled_rounds(&self) -> usize {
        self.bootstrap_rounds + self.classes as usize
    }
}

pub fn greedy_baseline(instance: &ConflictInstance, n_upper_bound: Option<u64>) -> Result<BaselineRun, SolverError> {
    let g = instance.graph();
    let n_upper = n_upper_bound.unwrap_or_else(|| g.ids().iter().copied().max().unwrap_or(1));
    let boot = delta2_coloring_with(g, g.max_degree(), n_upper)?;
    let cfg = SolverConfig::default();
    let solver = Solver { top: instance, cfg: &cfg, d: instance.conflict_degree() as u64, n_upper };
    let mut assignment = ColorAssignment::empty(g.n());
    let rounds = solver.class_greedy(instance, &boot.colors, boot.palette, |v, c| assignment.set(v, c))?;
    Ok(BaselineRun { assignment, bootstrap_rounds: boot.rounds, classes: boot.palette, measured_rounds: boot.rounds + rounds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::PortGraph;
    use crate::instance::validate_coloring;
    use crate::lab::{encode_list_coloring, encode_plus_one_coloring, gen_graph, GenParams, GraphKind};

    #[test]
    fn single_node() {
        let g = PortGraph::from_edges(vec![1], &[]).unwrap();
        let inst = encode_list_coloring(&g, vec![vec![Color::Int(7)]]);
        let (a, _) = solve_conflict_coloring(&inst, &SolverConfig::default()).unwrap();
        assert_eq!(a.get(0), Some(&Color::Int(7)));
    }

    #[test]
    fn petersen_with_four_colors() {
        let g = gen_graph(GraphKind::Petersen, GenParams::default(), 0).unwrap();
        let inst = encode_plus_one_coloring(&g);
        let (a, m) = solve_conflict_coloring(&inst, &SolverConfig::default()).unwrap();
        assert!(validate_coloring(&inst, &a).valid);
        assert!(m.violations.is_empty(), "{:?}", m.violations);
    }

    #[test]
    fn random_degree_eight_uses_the_recursion() {
        let g = gen_graph(GraphKind::RandomBoundedDegree { n: 200, max_degree: 8 }, GenParams::default(), 1).unwrap();
        let inst = encode_plus_one_coloring(&g);
        let (a, m) = solve_conflict_coloring(&inst, &SolverConfig::default()).unwrap();
        assert!(validate_coloring(&inst, &a).valid);
        assert!(m.violations.is_empty(), "{:?}", m.violations);
        assert!(!m.levels[0].base_case);
        assert_eq!(m.levels[0].k, 18);
    }

    fn small_k() -> SolverConfig {
        SolverConfig { constants: ArbdefectiveConstants { c_k: 0.2, c_a: 1.0 }, ..SolverConfig::default() }
    }

    #[test]
    fn few_classes_flag_a_non_shrinking_bound() {
        let g = gen_graph(GraphKind::RandomBoundedDegree { n: 200, max_degree: 8 }, GenParams::default(), 2).unwrap();
        let inst = encode_plus_one_coloring(&g);
        let (a, m) = solve_conflict_coloring(&inst, &small_k()).unwrap();
        assert!(validate_coloring(&inst, &a).valid);
        assert_eq!(m.levels[0].k, 4);
        assert_eq!(m.levels[0].eligible, 0);
        assert!(m.violations.iter().any(|v| v.contains("does not shrink")));
        assert!(m.levels[1].base_case);
    }

    #[test]
    fn long_lists_are_colored_in_the_stages() {
        let g = gen_graph(GraphKind::RandomBoundedDegree { n: 200, max_degree: 8 }, GenParams::default(), 3).unwrap();
        let inst = encode_list_coloring(&g, vec![(1..=200).map(Color::Int).collect(); 200]);
        let (a, m) = solve_conflict_coloring(&inst, &small_k()).unwrap();
        assert!(validate_coloring(&inst, &a).valid);
        assert!(m.violations.is_empty(), "{:?}", m.violations);
        let l = &m.levels[0];
        assert!(l.beta_bound >= 1 && l.beta <= l.beta_bound);
        assert_eq!((l.eligible, l.leftover), (200, 0));
    }

    #[test]
    fn short_list_rejected() {
        let g = PortGraph::from_edges(vec![1, 2], &[(1, 2)]).unwrap();
        let inst = encode_list_coloring(&g, vec![vec![Color::Int(1)], vec![Color::Int(1), Color::Int(2)]]);
        assert!(matches!(
            solve_conflict_coloring(&inst, &SolverConfig::default()),
            Err(SolverError::ListTooShort { node: 1, size: 1, needed: 2 })
        ));
    }
}
