use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::Args;
use confcolor::simplify::{clause3_sweep, trajectory_check, StageBound};
use num_rational::Rational64;
use serde::Serialize;

use crate::report::{write_csv, write_json};
use crate::Outcome;

#[derive(Args, Debug)]
pub struct TraceArgs {
    #[arg(long, default_value_t = 1)]
    pub l0: u64,
    #[arg(long, default_value_t = 1)]
    pub d0: u64,
    #[arg(long, default_value_t = 1)]
    pub delta: u64,
    #[arg(long, default_value_t = 1)]
    pub outdeg: u64,
    #[arg(long, default_value_t = 1)]
    pub t: usize,
    /// Slack ε of the ratio condition, as a fraction.
    #[arg(long, default_value = "1/10")]
    pub epsilon: Rational64,
    /// Sweep `Δ = Δ⃗` over `lo:hi` with `l0 = ⌈10Δ² ln Δ⌉`, `d0 = 1`, one stage.
    #[arg(long)]
    pub sweep: Option<String>,
    /// CSV table; stdout when absent.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Full JSON report.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Serialize)]
struct Row {
    stage: usize,
    l: u64,
    d: u64,
    k: u64,
    tau: i64,
    l_next: String,
    d_next: String,
    ln_ratio_lower_bound: f64,
    clause3_rhs: f64,
    clause3_holds: bool,
}

impl From<&StageBound> for Row {
    fn from(s: &StageBound) -> Self {
        let show = |x: &Option<num_bigint::BigUint>| x.as_ref().map_or_else(|| "-".to_string(), |v| v.to_string());
        Row {
            stage: s.i,
            l: s.l,
            d: s.d,
            k: s.k,
            tau: s.tau,
            l_next: show(&s.l_next),
            d_next: show(&s.d_next),
            ln_ratio_lower_bound: s.ln_ratio_lb,
            clause3_rhs: s.clause3_rhs,
            clause3_holds: s.clause3_holds,
        }
    }
}

#[derive(Serialize)]
struct SweepRow {
    outdeg: u64,
    clause3_holds: bool,
}

fn parse_range(range: &str) -> Result<(u64, u64)> {
    let Some((lo, hi)) = range.split_once(':') else { bail!("--sweep expects lo:hi") };
    let (lo, hi): (u64, u64) = (lo.parse()?, hi.parse()?);
    if lo < 2 || hi < lo {
        bail!("--sweep needs 2 <= lo <= hi");
    }
    Ok((lo, hi))
}

pub fn run(args: &TraceArgs) -> Result<Outcome> {
    if let Some(range) = &args.sweep {
        let (lo, hi) = parse_range(range)?;
        let sweep = clause3_sweep(lo..=hi, args.epsilon);
        let rows: Vec<SweepRow> = sweep.results.iter().map(|&(outdeg, clause3_holds)| SweepRow { outdeg, clause3_holds }).collect();
        if args.csv.is_some() {
            write_csv(&args.csv, &rows)?;
        }
        if args.json.is_some() {
            write_json(&args.json, &sweep)?;
        }
        let show = |x: Option<u64>| x.map_or_else(|| format!("none in {lo}..={hi}"), |v| v.to_string());
        println!("smallest passing outdegree: {}", show(sweep.first_pass));
        println!("passing from: {}", show(sweep.threshold));
        return Ok(Outcome::Valid);
    }
    if [args.l0, args.d0, args.delta, args.outdeg].contains(&0) {
        bail!("l0, d0, delta and outdeg must be at least 1");
    }
    let report = trajectory_check(args.l0, args.d0, args.delta, args.outdeg, args.t, args.epsilon);
    let rows: Vec<Row> = report.stages.iter().map(Row::from).collect();
    if rows.is_empty() {
        let header = "stage,l,d,k,tau,l_next,d_next,ln_ratio_lower_bound,clause3_rhs,clause3_holds\n";
        match &args.csv {
            Some(p) => std::fs::write(p, header)?,
            None => print!("{header}"),
        }
    } else {
        write_csv(&args.csv, &rows)?;
    }
    if args.json.is_some() {
        write_json(&args.json, &report)?;
    }
    Ok(Outcome::Valid)
}
