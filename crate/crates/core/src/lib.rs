//! Conflict coloring in the LOCAL model: problem model, synchronous-round
//! simulator, Linial bootstrap, instance simplification, the arbdefective
//! recursive solver, an LCA adapter, and a small instance laboratory.

pub mod arbdefective;
pub mod color;
pub mod graph;
pub mod instance;
pub mod io;
pub mod lca;
pub mod lab;
pub mod linial;
pub mod math;
pub mod orientation;
pub mod runtime;
pub mod simplify;
pub mod theorem2;

pub use color::{Color, ColorAssignment};
pub use graph::{GraphError, PortGraph, Subgraph, Topology};
pub use instance::{
    build_conflict_graph, instance_params, normalize_interval_form, validate_coloring,
    ColorMaps, ConflictGraphView, ConflictInstance, InstanceError, LocalInput,
    ValidationReport, Violation, ViolationKind,
};
pub use arbdefective::{arbdefective_coloring, ArbdefectiveConstants, ArbdefectivePartition};
pub use theorem2::{greedy_baseline, BaselineRun, solve_conflict_coloring, LevelMetrics, SolveMetrics, SolverConfig, SolverError, StageMetrics};
pub use lca::{lca_consistency_audit, lca_query, GraphOracle, LcaAnswer, LcaAuditReport, LcaError, LcaProblem, ProbeLedger, Regime};
