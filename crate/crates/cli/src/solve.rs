use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, ValueEnum};
use confcolor::lab::{brute_force_solve, decode_edge_coloring, decode_mis, BruteForce};
use confcolor::linial::delta2_coloring_with;
use confcolor::orientation::Orientation;
use confcolor::simplify::{solve_high_ratio, HighRatioConfig, Knowledge};
use confcolor::{solve_conflict_coloring, validate_coloring, ColorAssignment, SolverConfig};
use serde_json::{json, Value};

use crate::input::{Encode, InputArgs};
use crate::report::{constants, write_json};
use crate::Outcome;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Solver {
    /// Recursive arbdefective solver; needs |L(v)| ≥ d·deg(v)+1.
    Theorem2,
    /// High-ratio solver with the orientation toward smaller identities.
    Lemma3,
    /// Exhaustive backtracking.
    Bruteforce,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value = "theorem2")]
    pub solver: Solver,
    /// Step budget of the brute-force search.
    #[arg(long, default_value_t = 10_000_000)]
    pub budget: u64,
    /// Result file; stdout when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

pub fn run(args: &SolveArgs) -> Result<Outcome> {
    let loaded = args.input.load()?;
    let inst = &loaded.instance;
    let g = inst.graph();
    let (assignment, rounds, metrics): (ColorAssignment, Option<usize>, Value) = match args.solver {
        Solver::Theorem2 => {
            let (a, m) = solve_conflict_coloring(inst, &SolverConfig::default())?;
            (a, Some(m.rounds), serde_json::to_value(&m)?)
        }
        Solver::Lemma3 => {
            let n_upper = g.ids().iter().copied().max().unwrap_or(1);
            let boot = delta2_coloring_with(g, g.max_degree(), n_upper)?;
            let orient = Orientation::by_identity(g);
            let know = Knowledge {
                delta: g.max_degree() as u64,
                outdeg: orient.max_outdegree() as u64,
                d: inst.conflict_degree() as u64,
                n_upper_bound: n_upper,
            };
            let run = solve_high_ratio(inst, &boot.colors, boot.palette, &orient, know, &HighRatioConfig::default())?;
            let rounds = boot.rounds + run.rounds;
            let m = json!({ "bootstrap_rounds": boot.rounds, "path": run.path, "linial_rounds": run.linial_rounds,
                "class_rounds": run.class_rounds, "classes": run.classes, "stages": run.stages });
            (run.assignment, Some(rounds), m)
        }
        Solver::Bruteforce => match brute_force_solve(inst, args.budget) {
            BruteForce::Solved(a) => (a, None, json!({})),
            BruteForce::Unsat => {
                write_json(&args.output, &json!({ "status": "unsat", "valid": false }))?;
                eprintln!("instance is unsatisfiable");
                return Ok(Outcome::Unsolved);
            }
            BruteForce::BudgetExceeded => {
                write_json(&args.output, &json!({ "status": "budget-exceeded", "valid": false }))?;
                eprintln!("search budget of {} steps exhausted", args.budget);
                return Ok(Outcome::Unsolved);
            }
        },
    };
    let report = validate_coloring(inst, &assignment);
    let valid = report.valid && assignment.is_total();
    let mut out = json!({
        "status": "solved",
        "assignment": assignment.to_id_map(g),
        "valid": valid,
        "violations": report.violations.len(),
        "rounds": rounds,
        "metrics": metrics,
        "constants": constants(),
    });
    if let Some(enc) = &loaded.edge {
        let (edges, proper) = decode_edge_coloring(enc, &assignment);
        out["edge_coloring"] = json!({ "edges": edges, "proper": proper });
    }
    if args.input.instance.is_none() && matches!(args.input.encode, Encode::MisLiteral | Encode::MisStrict) {
        let (set, is_mis) = decode_mis(&loaded.graph, &assignment);
        out["mis"] = json!({ "nodes": set, "is_mis": is_mis });
    }
    write_json(&args.output, &out)?;
    Ok(if valid { Outcome::Valid } else { Outcome::Failed })
}
