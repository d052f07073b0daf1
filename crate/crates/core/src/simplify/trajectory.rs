//! Symbolic iteration of the stage parameters with certified log-space
//! bounds on the list/degree ratio.

use num_bigint::BigUint;
use num_rational::Rational64;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use crate::math::{e2_f64, ln_big, ln_binomial, log_star_from_log2, Interval};

use super::params::{as_decimal, simplify_params, stage_shape};

/// Largest `k` for which a stage is evaluated with exact binomials.
const EXACT_K_MAX: u64 = 256;

/// One stage `i -> i+1` of the trajectory.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StageBound {
    /// Index of the produced instance (`1` for the first stage).
    pub i: usize,
    pub l: u64,
    pub d: u64,
    pub k: u64,
    pub tau: i64,
    pub degenerate: bool,
    #[serde(serialize_with = "opt_decimal")]
    pub l_next: Option<BigUint>,
    #[serde(serialize_with = "opt_decimal")]
    pub d_next: Option<BigUint>,
    /// Certified lower bound on `ln(l_next / d_next)`.
    pub ln_ratio_lb: f64,
    /// `ln(l_next / d_next)` from exact values, when they were computed.
    pub ln_ratio_exact: Option<f64>,
    /// Right-hand side `l/((e²+ε)Δ⃗²d) − ln Δ` of the ratio condition (rounded up).
    pub clause3_rhs: f64,
    pub clause3_holds: bool,
    /// `log*` of the certified lower bound on `l_next / d_next`.
    pub ratio_log_star_bound: u32,
}

fn opt_decimal<S: Serializer>(x: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => as_decimal(v, s),
        None => s.serialize_none(),
    }
}

fn ratio_as_string<S: Serializer>(x: &Rational64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrajectoryReport {
    pub l0: u64,
    pub d0: u64,
    pub delta: u64,
    pub outdeg: u64,
    pub t: usize,
    #[serde(serialize_with = "ratio_as_string")]
    pub epsilon: Rational64,
    pub stages: Vec<StageBound>,
    /// All `t` stages were evaluated. Evaluation stops after a degenerate
    /// stage or once the next `l, d` no longer fit a machine word.
    pub complete: bool,
    /// `log*(l_t/d_t) ≥ t/2 − 1` on certified bounds; `None` if incomplete
    /// or `t = 0`.
    pub log_star_check: Option<bool>,
}

impl TrajectoryReport {
    pub fn clause3_all(&self) -> bool {
        self.complete && self.stages.iter().all(|s| s.clause3_holds)
    }
}

/// `ln(8Δ · C(kd, τ) · C(l, k − τ))` from above, `τ ≥ 0`.
fn ln_d_next_hi(l: u64, d: u64, delta: u64, k: u64, tau: u64) -> f64 {
    let ln8d = Interval::point(((8 * delta) as f64).ln()).widen(1e-15 * 64.0);
    ln8d.add(ln_binomial(k * d, tau)).add(ln_binomial(l, k - tau)).hi
}

/// Lower bound on `ln((l−k)τ/(e k² d))` times `τ`, minus `ln(16Δ)`.
fn newratio_lb(l: u64, d: u64, delta: u64, k: u64, tau: u64) -> f64 {
    if tau == 0 {
        return -((16 * delta) as f64).ln() - 1e-12;
    }
    let base = ((l - k) as f64).ln() + (tau as f64).ln() - 1.0 - 2.0 * (k as f64).ln() - (d as f64).ln();
    let margin = 1e-12 * (1.0 + base.abs()) * tau as f64;
    tau as f64 * base - ((16 * delta) as f64).ln() - margin - 1e-12
}

fn clause3_rhs(l: u64, d: u64, delta: u64, outdeg: u64, eps: f64) -> f64 {
    let x = l as f64 / ((e2_f64() + eps) * (outdeg * outdeg) as f64 * d as f64);
    let v = x - (delta as f64).ln();
    v + 1e-12 * (1.0 + x.abs())
}

/// Iterates the stage parameters `t` times from `(l0, d0)`.
pub fn trajectory_check(l0: u64, d0: u64, delta: u64, outdeg: u64, t: usize, epsilon: Rational64) -> TrajectoryReport {
    let eps = epsilon.to_f64().expect("finite epsilon");
    let mut stages = Vec::new();
    let (mut l, mut d) = (l0, d0);
    let mut complete = true;
    for i in 1..=t {
        if l == 0 || d == 0 {
            complete = false;
            break;
        }
        let (k, tau) = stage_shape(l, d, outdeg);
        let degenerate = k < 1 || tau < 1;
        let rhs = clause3_rhs(l, d, delta, outdeg, eps);
        let mut stage = StageBound {
            i,
            l,
            d,
            k,
            tau,
            degenerate,
            l_next: None,
            d_next: None,
            ln_ratio_lb: f64::NEG_INFINITY,
            ln_ratio_exact: None,
            clause3_rhs: rhs,
            clause3_holds: false,
            ratio_log_star_bound: 0,
        };
        if k >= 1 && tau >= 0 {
            let tau = tau as u64;
            if k <= EXACT_K_MAX {
                let p = simplify_params(l, d, delta, outdeg);
                stage.ln_ratio_lb = ln_big(&p.l_next).lo - ln_big(&p.d_next).hi;
                stage.ln_ratio_exact = Some(ln_big(&p.l_next).hi - ln_big(&p.d_next).lo);
                stage.l_next = Some(p.l_next);
                stage.d_next = Some(p.d_next);
            } else {
                // ⌊C/2⌋ ≥ C/2 − 1 > C/2 · (1 − 1e-9) for the huge C seen here
                let ln_l = ln_binomial(l, k).lo - std::f64::consts::LN_2 - 1e-9;
                let direct = ln_l - ln_d_next_hi(l, d, delta, k, tau);
                stage.ln_ratio_lb = direct.max(newratio_lb(l, d, delta, k, tau));
            }
            stage.clause3_holds = !degenerate && stage.ln_ratio_lb > rhs;
            if stage.ln_ratio_lb > 0.0 {
                stage.ratio_log_star_bound = log_star_from_log2(stage.ln_ratio_lb / std::f64::consts::LN_2);
            }
        }
        let next = match (&stage.l_next, &stage.d_next) {
            (Some(a), Some(b)) if !degenerate => a.to_u64().zip(b.to_u64()),
            _ => None,
        };
        stages.push(stage);
        match next {
            Some((a, b)) if i < t => {
                l = a;
                d = b;
            }
            Some(_) => {}
            None => {
                complete = i == t;
                break;
            }
        }
    }
    let log_star_check = match stages.last() {
        Some(last) if complete => Some(2 * last.ratio_log_star_bound as i64 >= t as i64 - 2),
        _ => None,
    };
    TrajectoryReport { l0, d0, delta, outdeg, t, epsilon, stages, complete, log_star_check }
}

/// Clause-3 status at stage 1 for `Δ = Δ⃗ = x`, `d0 = 1`,
/// `l0 = ⌈10x² ln x⌉`, over `x` in `range`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Clause3Sweep {
    pub results: Vec<(u64, bool)>,
    /// Smallest tested `x` passing.
    pub first_pass: Option<u64>,
    /// Smallest tested `x` from which every larger tested value passes.
    pub threshold: Option<u64>,
}

pub fn sweep_l0(x: u64) -> u64 {
    (10.0 * (x * x) as f64 * (x as f64).ln()).ceil() as u64
}

pub fn clause3_sweep(range: std::ops::RangeInclusive<u64>, epsilon: Rational64) -> Clause3Sweep {
    let results: Vec<(u64, bool)> = range
        .map(|x| {
            let r = trajectory_check(sweep_l0(x).max(1), 1, x, x, 1, epsilon);
            (x, r.stages.first().is_some_and(|s| s.clause3_holds))
        })
        .collect();
    let first_pass = results.iter().find(|r| r.1).map(|r| r.0);
    let threshold = match results.iter().rposition(|r| !r.1) {
        None => results.first().map(|r| r.0),
        Some(i) => results.get(i + 1).map(|r| r.0),
    };
    Clause3Sweep { results, first_pass, threshold }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tenth() -> Rational64 {
        Rational64::new(1, 10)
    }

    #[test]
    fn tiny_stage_fails_honestly() {
        let r = trajectory_check(28, 1, 2, 1, 1, tenth());
        let s = &r.stages[0];
        assert_eq!((s.k, s.tau), (3, 2));
        assert_eq!(s.l_next, Some(BigUint::from(1638u32)));
        assert_eq!(s.d_next, Some(BigUint::from(1344u32)));
        assert!((s.ln_ratio_exact.unwrap() - (1638f64 / 1344.0).ln()).abs() < 1e-9);
        assert!(!s.clause3_holds);
        assert!(r.complete);
    }

    #[test]
    fn zero_stages() {
        let r = trajectory_check(28, 1, 2, 1, 0, tenth());
        assert!(r.stages.is_empty());
        assert!(r.complete);
        assert_eq!(r.log_star_check, None);
    }

    #[test]
    fn certified_bounds_below_exact() {
        for (l, d, delta, o) in [(28, 1, 2, 1), (100, 1, 3, 2), (400, 1, 4, 2), (2000, 2, 3, 3)] {
            let r = trajectory_check(l, d, delta, o, 1, tenth());
            let s = &r.stages[0];
            if let Some(x) = s.ln_ratio_exact {
                assert!(s.ln_ratio_lb <= x, "{l} {d}");
                let tau = s.tau.max(0) as u64;
                if s.k >= 1 && s.tau >= 0 {
                    let direct = ln_binomial(l, s.k).lo - std::f64::consts::LN_2 - 1e-9 - ln_d_next_hi(l, d, delta, s.k, tau);
                    assert!(direct <= x + 1e-9);
                    assert!(newratio_lb(l, d, delta, s.k, tau) <= x);
                }
            }
        }
    }

    #[test]
    fn stops_when_values_leave_machine_range() {
        let r = trajectory_check(400, 1, 4, 2, 3, tenth());
        assert!(!r.complete);
        assert_eq!(r.log_star_check, None);
    }
}
