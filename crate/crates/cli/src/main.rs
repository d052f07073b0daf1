//! `confcolor`: solve conflict-coloring instances, trace simplification
//! stages, audit the LCA, generate graphs and benchmark round counts.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use confcolor::io::save_graph;
use confcolor::lab::{gen_graph, GenParams, GraphKind};

mod audit;
mod bench;
mod input;
mod report;
mod solve;
mod trace;

#[derive(Parser, Debug)]
#[command(name = "confcolor", version, about = "Conflict coloring in the LOCAL model")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve an instance and validate the result.
    Solve(solve::SolveArgs),
    /// Iterate the stage parameters, or sweep the ratio condition.
    Trace(trace::TraceArgs),
    /// Query every node through the LCA under several orders.
    LcaAudit(audit::AuditArgs),
    /// Write a generated graph as JSON.
    Gen(GenArgs),
    /// Round counts of the solver and the greedy comparator.
    Bench(bench::BenchArgs),
}

#[derive(clap::Args, Debug)]
struct GenArgs {
    /// Generator spec such as `ring:64` or `random:200:8`.
    spec: GraphKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    id_range: Option<u64>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

/// How a command ended; maps onto the exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Valid,
    /// No solution exists or the search gave up.
    Unsolved,
    Failed,
}

fn gen(args: &GenArgs) -> Result<Outcome> {
    let g = gen_graph(args.spec, GenParams { id_range: args.id_range }, args.seed)?;
    let mut text = save_graph(&g);
    text.push('\n');
    match &args.output {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(Outcome::Valid)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Command::Solve(a) => solve::run(a),
        Command::Trace(a) => trace::run(a),
        Command::LcaAudit(a) => audit::run(a),
        Command::Gen(a) => gen(a),
        Command::Bench(a) => bench::run(a),
    };
    match result {
        Ok(Outcome::Valid) => ExitCode::SUCCESS,
        Ok(Outcome::Unsolved) => ExitCode::from(2),
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
