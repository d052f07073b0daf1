//! Solver for instances whose list/degree ratio is large compared with the
//! outdegree of a given orientation.
//!
//! Two paths. The fallback reduces the input coloring with the oriented
//! Linial step and then lets color classes pick greedily, one class per
//! round. The simplification path builds `t` stages, solves the last
//! instance from a shared promise set without communication, and lifts back.

use serde::Serialize;

use crate::color::{Color, ColorAssignment};
use crate::instance::{normalize_interval_form, validate_coloring, ColorMaps, ConflictInstance, LocalInput};
use crate::linial::reduce_oriented_with;
use crate::math::{ln_clamped, log_star_from_log2};
use crate::orientation::Orientation;
use crate::runtime::{run_sync, NodeContext, NodeProgram, Outbox, Step};

use super::greedy::{GreedyTable, Promise};
use super::params::{simplify_params, stage_shape};
use super::stage::{lift_solution, simplify_instance, StageConfig, StagePair, MAX_MATERIALIZED_L};
use super::SimplifyError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum PathMode {
    /// Simplification when an explicit promise is supplied and every stage
    /// is usable within budget; the fallback otherwise.
    Auto,
    Fallback,
    /// Simplification with exactly `t` stages; failures are errors.
    Simplify { t: usize },
}

#[derive(Clone, Debug)]
pub struct HighRatioConfig {
    pub mode: PathMode,
    pub stage: StageConfig,
    /// Explicit promise set for the last instance of the chain.
    pub promise: Option<Vec<LocalInput>>,
    /// Check `l/d ≥ 10·Δ⃗²·max(ln Δ, 1)` before solving.
    pub check_ratio: bool,
}

impl Default for HighRatioConfig {
    fn default() -> Self {
        HighRatioConfig { mode: PathMode::Auto, stage: StageConfig::default(), promise: None, check_ratio: true }
    }
}

/// Globally known bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Knowledge {
    /// Maximum degree `Δ`.
    pub delta: u64,
    /// Outdegree bound `Δ⃗` of the orientation.
    pub outdeg: u64,
    /// Conflict degree bound `d`.
    pub d: u64,
    pub n_upper_bound: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "path")]
pub enum SolvePath {
    Fallback { reason: String },
    Simplify { t: usize },
}

/// Per-stage export record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageRecord {
    pub k: u64,
    pub tau: i64,
    pub l_next: String,
    pub d_next: String,
    pub degenerate: bool,
    pub measured_degree: u64,
    pub unpruned_degree: u64,
    pub max_removed_per_neighbor: u64,
    pub removal_bound: u64,
}

impl StageRecord {
    fn of(stage: &StagePair) -> Self {
        StageRecord {
            k: stage.params.k,
            tau: stage.params.tau,
            l_next: stage.params.l_next.to_string(),
            d_next: stage.params.d_next.to_string(),
            degenerate: stage.params.degenerate,
            measured_degree: stage.audit.measured_degree,
            unpruned_degree: stage.audit.unpruned_degree,
            max_removed_per_neighbor: stage.audit.max_removed_per_neighbor,
            removal_bound: stage.audit.removal_bound,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HighRatioRun {
    pub assignment: ColorAssignment,
    pub path: SolvePath,
    pub rounds: usize,
    pub linial_rounds: usize,
    pub class_rounds: usize,
    /// Number of color classes the fallback greedy iterates over.
    pub classes: u64,
    pub stages: Vec<StageRecord>,
}

/// `10·Δ⃗²·max(ln Δ, 1)·d`.
pub fn ratio_threshold(know: &Knowledge) -> f64 {
    10.0 * (know.outdeg * know.outdeg) as f64 * ln_clamped(know.delta as usize) * know.d as f64
}

/// Smallest `t ≥ 1` with `t ≥ 2·log*(Δ·s·|I_t|) + 1` under the bound
/// `log₂|I_t| < 2·l0²·Δ^{t+1}`.
pub fn stage_count(l0: u64, delta: u64, s: u64) -> usize {
    let mut t = 1usize;
    loop {
        let log2_it = 2.0 * (l0 as f64).powi(2) * (delta.max(1) as f64).powi(t as i32 + 1);
        let log2_total = log2_it + (delta.max(1) as f64).log2() + (s.max(1) as f64).log2();
        if t as u32 >= 2 * log_star_from_log2(log2_total) + 1 {
            return t;
        }
        t += 1;
    }
}

pub fn solve_high_ratio(
    instance: &ConflictInstance,
    s_coloring: &[u64],
    s: u64,
    orientation: &Orientation,
    know: Knowledge,
    cfg: &HighRatioConfig,
) -> Result<HighRatioRun, SimplifyError> {
    let g = instance.graph();
    if orientation.max_outdegree() as u64 > know.outdeg || g.max_degree() as u64 > know.delta {
        return Err(SimplifyError::ParamsMismatch("graph exceeds the known degree bounds".into()));
    }
    if instance.conflict_degree() as u64 > know.d {
        return Err(SimplifyError::ParamsMismatch("conflict degree exceeds the known bound".into()));
    }
    let l = instance.min_list_size() as u64;
    let threshold = ratio_threshold(&know);
    if cfg.check_ratio && (l as f64) < threshold {
        return Err(SimplifyError::RatioPreconditionFailed { l, d: know.d, threshold: format!("{threshold:.3}") });
    }
    if g.n() == 0 {
        let path = SolvePath::Fallback { reason: "empty graph".into() };
        return Ok(HighRatioRun {
            assignment: ColorAssignment::empty(0),
            path,
            rounds: 0,
            linial_rounds: 0,
            class_rounds: 0,
            classes: 0,
            stages: vec![],
        });
    }
    match cfg.mode {
        PathMode::Fallback => fallback(instance, s_coloring, s, orientation, know, "forced".into()),
        PathMode::Simplify { t } => {
            let promise = cfg.promise.as_ref().ok_or(SimplifyError::PromiseRequired)?;
            let stage_cfg = StageConfig { allow_tau_zero: true, ..cfg.stage };
            simplification_path(instance, s_coloring, s, orientation, know, t, promise, &stage_cfg)
        }
        PathMode::Auto => {
            let l0 = (threshold.ceil() as u64).max(1);
            let t = stage_count(l0, know.delta, s);
            let Some(promise) = cfg.promise.as_ref() else {
                return fallback(instance, s_coloring, s, orientation, know, "no explicit promise set".into());
            };
            if let Some(reason) = chain_obstacle(l0, know, t, &cfg.stage) {
                return fallback(instance, s_coloring, s, orientation, know, reason);
            }
            simplification_path(instance, s_coloring, s, orientation, know, t, promise, &cfg.stage)
        }
    }
}

/// Why the `t`-stage chain from `l0` cannot be materialized, if it cannot.
fn chain_obstacle(l0: u64, know: Knowledge, t: usize, cfg: &StageConfig) -> Option<String> {
    let (mut l, mut d) = (l0, know.d.max(1));
    for i in 0..t {
        let (k, tau) = stage_shape(l, d, know.outdeg.max(1));
        if k < 1 || tau < 1 {
            return Some(format!("stage {} degenerate (k = {k}, tau = {tau})", i + 1));
        }
        if l > MAX_MATERIALIZED_L {
            return Some(format!("stage {} has list length {l} above {MAX_MATERIALIZED_L}", i + 1));
        }
        let p = simplify_params(l, d, know.delta.max(1), know.outdeg.max(1));
        let c = p.subset_count();
        if c > cfg.max_subsets.into() {
            return Some(format!("stage {} needs C({l}, {k}) = {c} subsets", i + 1));
        }
        match (p.l_next_u64(), p.d_next_u64()) {
            (Some(a), Some(b)) => (l, d) = (a, b),
            _ => return Some(format!("stage {} parameters exceed machine range", i + 2)),
        }
    }
    None
}

fn check_s_coloring(instance: &ConflictInstance, colors: &[u64], s: u64) -> Result<(), SimplifyError> {
    let g = instance.graph();
    if colors.len() != g.n() {
        return Err(SimplifyError::BadColoring("length differs from node count".into()));
    }
    if let Some(v) = (0..g.n()).find(|&v| colors[v] >= s) {
        return Err(SimplifyError::BadColoring(format!("node {} has color {} >= s = {s}", g.identity(v), colors[v])));
    }
    if let Some((u, _, v, _)) = g.edges().find(|&(u, _, v, _)| colors[u] == colors[v]) {
        return Err(SimplifyError::BadColoring(format!("nodes {} and {} share a color", g.identity(u), g.identity(v))));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn simplification_path(
    instance: &ConflictInstance,
    s_coloring: &[u64],
    s: u64,
    orientation: &Orientation,
    know: Knowledge,
    t: usize,
    promise: &[LocalInput],
    cfg: &StageConfig,
) -> Result<HighRatioRun, SimplifyError> {
    check_s_coloring(instance, s_coloring, s)?;
    let g = instance.graph();
    let l0 = (ratio_threshold(&know).ceil() as u64).max(1) as usize;
    let truncated: Vec<Vec<Color>> = instance.lists().iter().map(|l| l.iter().take(l0).cloned().collect()).collect();
    let restricted = instance.with_lists(truncated)?;
    let (mut current, maps0) = normalize_interval_form(&restricted)?;
    let mut stages: Vec<(StagePair, ColorMaps)> = Vec::with_capacity(t);
    let mut d = know.d.max(1);
    for _ in 0..t {
        let l = current.interval_len().ok_or(SimplifyError::NotIntervalForm)? as u64;
        let params = simplify_params(l, d, know.delta.max(1), know.outdeg.max(1));
        let stage = simplify_instance(&current, orientation, &params, cfg)?;
        let (next, maps) = normalize_interval_form(&stage.lifted)?;
        d = params.d_next_u64().ok_or_else(|| SimplifyError::MaterializationBudgetExceeded {
            what: "d_next".into(),
            value: params.d_next.to_string(),
        })?;
        current = next;
        stages.push((stage, maps));
    }

    let promise = Promise::new(promise.iter().cloned());
    let l_t = current.interval_len().ok_or(SimplifyError::NotIntervalForm)? as u64;
    let table = GreedyTable::new(promise.clone(), l_t, promise.conflict_degree(), know.delta, s)?;
    let mut solution = Vec::with_capacity(g.n());
    for v in 0..g.n() {
        let input = current.local_input(v).ok_or(SimplifyError::NotIntervalForm)?;
        solution.push(Color::Int(table.color(&input, s_coloring[v] + 1)? as i64));
    }
    let mut solution = ColorAssignment::from_colors(solution);
    debug_assert!(validate_coloring(&current, &solution).valid);

    let mut lift_rounds = 0;
    for (stage, maps) in stages.iter().rev() {
        let tokens = maps.restore(&solution);
        let (lifted, r) = lift_solution(stage, &tokens)?;
        lift_rounds += r;
        solution = lifted;
    }
    let assignment = maps0.restore(&solution);
    let records = stages.iter().map(|(s, _)| StageRecord::of(s)).collect();
    let build_rounds: usize = stages.iter().map(|(s, _)| s.rounds).sum();
    Ok(HighRatioRun {
        assignment,
        path: SolvePath::Simplify { t },
        rounds: 1 + build_rounds + lift_rounds,
        linial_rounds: 0,
        class_rounds: 0,
        classes: 0,
        stages: records,
    })
}

/// Input of the class greedy at one node.
#[derive(Clone, Debug)]
pub struct ClassInput {
    pub class: u64,
    pub list: Vec<Color>,
    pub conflicts: Vec<Vec<(Color, Color)>>,
}

pub struct ClassState {
    input: ClassInput,
    fixed: Vec<Option<Color>>,
}

/// Class `c` picks in round `c`: the smallest list color that conflicts with
/// no neighbor color fixed so far.
pub struct ClassGreedy;

impl NodeProgram for ClassGreedy {
    type Input = ClassInput;
    type State = ClassState;
    type Msg = Color;
    type Output = Option<Color>;

    fn init(&self, ctx: &NodeContext, input: &ClassInput) -> ClassState {
        ClassState { input: input.clone(), fixed: vec![None; ctx.degree] }
    }

    fn step(&self, _: &NodeContext, round: usize, st: &mut ClassState, inbox: &[Option<Color>]) -> Step<Color, Option<Color>> {
        for (slot, msg) in st.fixed.iter_mut().zip(inbox) {
            if msg.is_some() {
                *slot = msg.clone();
            }
        }
        if (round as u64) < st.input.class {
            return Step::wait();
        }
        let choice = st
            .input
            .list
            .iter()
            .find(|c| {
                st.fixed.iter().zip(&st.input.conflicts).all(|(theirs, pairs)| match theirs {
                    None => true,
                    Some(t) => !pairs.iter().any(|(a, b)| a == *c && b == t),
                })
            })
            .cloned();
        match choice {
            Some(c) => Step { outbox: Outbox::Broadcast(c.clone()), output: Some(Some(c)) },
            None => Step::done(None),
        }
    }
}

fn fallback(
    instance: &ConflictInstance,
    s_coloring: &[u64],
    s: u64,
    orientation: &Orientation,
    know: Knowledge,
    reason: String,
) -> Result<HighRatioRun, SimplifyError> {
    check_s_coloring(instance, s_coloring, s)?;
    let g = instance.graph();
    let run = reduce_oriented_with(g, orientation, know.outdeg, s_coloring, s, know.n_upper_bound)?;
    let inputs: Vec<ClassInput> = (0..g.n())
        .map(|v| ClassInput {
            class: run.colors[v],
            list: instance.list(v).to_vec(),
            conflicts: (0..g.degree(v)).map(|p| instance.conflicts(v, p).to_vec()).collect(),
        })
        .collect();
    let max_rounds = run.palette.saturating_sub(1) as usize;
    let trace = run_sync(g, &ClassGreedy, &inputs, know.n_upper_bound, max_rounds)
        .map_err(|e| SimplifyError::Runtime(e.to_string()))?;
    let mut colors = Vec::with_capacity(g.n());
    for (v, c) in trace.outputs.into_iter().enumerate() {
        colors.push(c.ok_or(SimplifyError::FallbackExhausted { node: g.identity(v) })?);
    }
    Ok(HighRatioRun {
        assignment: ColorAssignment::from_colors(colors),
        path: SolvePath::Fallback { reason },
        rounds: run.rounds + trace.rounds_used,
        linial_rounds: run.rounds,
        class_rounds: trace.rounds_used,
        classes: run.palette,
        stages: vec![],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::PortGraph;
    use crate::lab::encode_list_coloring;
    use crate::linial::{delta2_coloring, LINIAL_K};
    use crate::math::log_star;

    fn ring(n: u64) -> PortGraph {
        let edges: Vec<_> = (1..=n).map(|i| (i, i % n + 1)).collect();
        PortGraph::from_edges((1..=n).collect(), &edges).unwrap()
    }

    #[test]
    fn ring_fallback_is_valid_and_fast() {
        let g = ring(64);
        // with ln Δ clamped to 1 the threshold is 10·Δ⃗² = 40
        let inst = encode_list_coloring(&g, vec![(1..=40).map(Color::Int).collect(); 64]);
        let boot = delta2_coloring(&g).unwrap();
        let o = Orientation::by_identity(&g);
        let know = Knowledge { delta: 2, outdeg: 2, d: 1, n_upper_bound: 64 };
        let run = solve_high_ratio(&inst, &boot.colors, boot.palette, &o, know, &HighRatioConfig::default()).unwrap();
        assert!(validate_coloring(&inst, &run.assignment).valid);
        assert!(matches!(run.path, SolvePath::Fallback { .. }));
        let budget = LINIAL_K as usize * 4 + log_star(64.0) as usize + 2;
        assert!(boot.rounds + run.rounds <= budget, "{} + {}", boot.rounds, run.rounds);
    }

    #[test]
    fn forced_single_stage_on_an_edge() {
        let g = PortGraph::from_edges(vec![1, 2], &[(1, 2)]).unwrap();
        let inst = encode_list_coloring(&g, vec![(1..=10).map(Color::Int).collect(); 2]);
        let o = Orientation::by_identity(&g);
        let know = Knowledge { delta: 1, outdeg: 1, d: 1, n_upper_bound: 2 };
        let p1 = LocalInput { list_len: 5, ports: vec![(1..=5).map(|c| (c, c)).collect()] };
        let cfg = HighRatioConfig { mode: PathMode::Simplify { t: 1 }, promise: Some(vec![p1]), ..HighRatioConfig::default() };
        let run = solve_high_ratio(&inst, &[0, 1], 2, &o, know, &cfg).unwrap();
        assert!(validate_coloring(&inst, &run.assignment).valid);
        assert_eq!(run.path, SolvePath::Simplify { t: 1 });
        assert_eq!(run.rounds, 3);
        assert_eq!(run.stages.len(), 1);
    }

    #[test]
    fn ratio_precondition() {
        let g = ring(64);
        let inst = encode_list_coloring(&g, vec![(1..=28).map(Color::Int).collect(); 64]);
        let boot = delta2_coloring(&g).unwrap();
        let o = Orientation::by_identity(&g);
        let know = Knowledge { delta: 2, outdeg: 2, d: 1, n_upper_bound: 64 };
        let err = solve_high_ratio(&inst, &boot.colors, boot.palette, &o, know, &HighRatioConfig::default()).unwrap_err();
        assert!(matches!(err, SimplifyError::RatioPreconditionFailed { l: 28, d: 1, .. }));
    }

    #[test]
    fn stage_counts_are_small() {
        // log₂(Δ·s·|I_t|) ≤ 201 for every t, and log*(2^201) = 5
        assert_eq!(stage_count(10, 1, 2), 11);
        assert_eq!(stage_count(100, 3, 64), 13);
    }
}
