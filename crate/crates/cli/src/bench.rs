use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use confcolor::lab::{encode_plus_one_coloring, gen_graph, GenParams, GraphKind};
use confcolor::{greedy_baseline, solve_conflict_coloring, validate_coloring, SolverConfig};
use serde::Serialize;

use crate::report::write_csv;
use crate::Outcome;

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Degree bounds to sweep.
    #[arg(long, value_delimiter = ',', default_value = "4,8,16,32")]
    pub deltas: Vec<usize>,
    #[arg(long, default_value_t = 500)]
    pub n: usize,
    #[arg(long, default_value_t = 1_000_000)]
    pub id_range: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV file; stdout when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// One row of the round-budget trend.
#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub delta: usize,
    pub measured_delta: usize,
    pub valid: bool,
    pub rounds: usize,
    pub simulated_rounds: usize,
    pub bootstrap_rounds: usize,
    pub levels: usize,
    pub baseline_scheduled: usize,
    pub baseline_measured: usize,
    pub baseline_classes: u64,
}

pub fn bench_row(delta: usize, n: usize, id_range: u64, seed: u64) -> Result<BenchRow> {
    let g = gen_graph(GraphKind::RandomBoundedDegree { n, max_degree: delta }, GenParams { id_range: Some(id_range) }, seed)?;
    let inst = encode_plus_one_coloring(&g);
    let cfg = SolverConfig { n_upper_bound: Some(id_range), ..SolverConfig::default() };
    let (a, m) = solve_conflict_coloring(&inst, &cfg)?;
    let base = greedy_baseline(&inst, Some(id_range))?;
    Ok(BenchRow {
        delta,
        measured_delta: g.max_degree(),
        valid: validate_coloring(&inst, &a).valid && validate_coloring(&inst, &base.assignment).valid,
        rounds: m.rounds,
        simulated_rounds: m.simulated_rounds,
        bootstrap_rounds: m.bootstrap_rounds,
        levels: m.levels.len(),
        baseline_scheduled: base.scheduled_rounds(),
        baseline_measured: base.measured_rounds,
        baseline_classes: base.classes,
    })
}

pub fn run(args: &BenchArgs) -> Result<Outcome> {
    let rows = args
        .deltas
        .iter()
        .map(|&d| bench_row(d, args.n, args.id_range, args.seed))
        .collect::<Result<Vec<_>>>()?;
    write_csv(&args.output, &rows)?;
    Ok(if rows.iter().all(|r| r.valid) { Outcome::Valid } else { Outcome::Failed })
}
