use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, ValueEnum};
use confcolor::lca::{lca_consistency_audit, BudgetCurve, LcaError, LcaProblem, Regime};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::input::InputArgs;
use crate::report::{constants, write_csv, write_json};
use crate::Outcome;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RegimeArg {
    General,
    HighRatio,
}

#[derive(Args, Debug)]
pub struct AuditArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value = "general")]
    pub regime: RegimeArg,
    /// Number of random query orders.
    #[arg(long, default_value_t = 10)]
    pub orders: usize,
    /// Exponent factor c′ of the probe budget `Δ^{c′·r}·log* n`.
    #[arg(long, default_value_t = 1.0)]
    pub budget_c: f64,
    /// Per-query probe counts as CSV.
    #[arg(long)]
    pub histogram: Option<PathBuf>,
    /// Report file; stdout when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

pub fn run(args: &AuditArgs) -> Result<Outcome> {
    let loaded = args.input.load()?;
    let inst = &loaded.instance;
    let regime = match args.regime {
        RegimeArg::General => Regime::General,
        RegimeArg::HighRatio => Regime::HighRatio,
    };
    let problem = LcaProblem::for_instance(inst, regime);
    let mut rng = ChaCha8Rng::seed_from_u64(args.input.seed);
    let orders: Vec<Vec<u64>> = (0..args.orders.max(1))
        .map(|_| {
            let mut ids = inst.graph().ids().to_vec();
            ids.shuffle(&mut rng);
            ids
        })
        .collect();
    let report = match lca_consistency_audit(inst, &problem, &orders, BudgetCurve { c_prime: args.budget_c }) {
        Ok(r) => r,
        Err(e @ LcaError::RadiusInsufficient { .. }) => {
            eprintln!("{e}");
            return Ok(Outcome::Failed);
        }
        Err(e) => return Err(e.into()),
    };
    if args.histogram.is_some() {
        write_csv(&args.histogram, &report.queries)?;
    }
    let consistent = report.consistent();
    if report.budget_exceeded {
        eprintln!("probe budget exceeded (advisory)");
    }
    write_json(&args.output, &json!({ "consistent": consistent, "report": report, "constants": constants() }))?;
    Ok(if consistent { Outcome::Valid } else { Outcome::Failed })
}
