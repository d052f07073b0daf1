//! Round-elimination style simplification of conflict coloring: build a
//! subset instance in one round, lift its solutions back in one round, solve
//! the last instance of a chain without communication, and drive the whole
//! chain (or a slow fallback) for instances with a large list/degree ratio.

mod greedy;
mod high_ratio;
mod params;
mod stage;
mod trajectory;

use thiserror::Error;

use crate::instance::InstanceError;
use crate::linial::LinialError;

pub use greedy::{greedy_zero_round, GreedyTable, Promise};
pub use high_ratio::{
    ratio_threshold, solve_high_ratio, stage_count, ClassGreedy, ClassInput, HighRatioConfig, HighRatioRun, Knowledge, PathMode,
    SolvePath, StageRecord,
};
pub use params::{simplify_params, stage_shape, SimplifyParams};
pub use stage::{
    k_subsets, lift_solution, mask_colors, simplify_instance, LiftInput, LiftProgram, NodeStageOutput, SimplifyProgram,
    StageAudit, StageConfig, StageKnowledge, StagePair, MAX_MATERIALIZED_L,
};
pub use trajectory::{clause3_sweep, sweep_l0, trajectory_check, Clause3Sweep, StageBound, TrajectoryReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimplifyError {
    #[error("instance lists are not in interval form {{1..l}} of uniform length")]
    NotIntervalForm,
    #[error("stage parameters do not match the instance: {0}")]
    ParamsMismatch(String),
    #[error("degenerate stage (k = {k}, tau = {tau})")]
    DegenerateStage { k: u64, tau: i64 },
    #[error("materialization budget exceeded: {what} = {value}")]
    MaterializationBudgetExceeded { what: String, value: String },
    #[error("node {node} kept fewer subsets than required after pruning")]
    ListUnderflow { node: u64 },
    #[error("node {node} pruned {removed} subsets for one neighbor, bound is {bound}")]
    PruningBoundViolated { node: u64, removed: u64, bound: u64 },
    #[error("lifted conflict degree {measured} exceeds the bound {bound}")]
    DegreeBoundViolated { measured: u64, bound: String },
    #[error("solution to lift is invalid ({0} violations)")]
    InvalidSolution(usize),
    #[error("node {node} has no admissible color while lifting")]
    EmptyChoiceSet { node: u64 },
    #[error("local input is not in the promise set")]
    PromiseViolated,
    #[error("promise set is malformed: {0}")]
    InvalidPromise(String),
    #[error("list size {l} does not exceed d*Δ*|I'| = {bound}")]
    RatioTooSmall { l: u64, bound: String },
    #[error("ratio precondition failed: l/d = {l}/{d} below 10*outdeg^2*ln(Δ) = {threshold}")]
    RatioPreconditionFailed { l: u64, d: u64, threshold: String },
    #[error("simplification path requires an explicit promise set")]
    PromiseRequired,
    #[error("node {node} found no free color in the class greedy")]
    FallbackExhausted { node: u64 },
    #[error("input coloring is not proper or out of range: {0}")]
    BadColoring(String),
    #[error("runtime: {0}")]
    Runtime(String),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Linial(#[from] LinialError),
}
