use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::math::{binomial, floor_div_e2};

/// Parameters of one simplification stage, computed exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimplifyParams {
    pub l: u64,
    pub d: u64,
    pub delta: u64,
    pub outdeg: u64,
    /// Subset size `⌊l / (e² d Δ⃗)⌋`.
    pub k: u64,
    /// Threshold `⌊k / Δ⃗⌋ - 1` (may be negative).
    pub tau: i64,
    #[serde(serialize_with = "as_decimal")]
    pub l_next: BigUint,
    #[serde(serialize_with = "as_decimal")]
    pub d_next: BigUint,
    /// `k < 1` or `τ < 1`.
    pub degenerate: bool,
}

pub(crate) fn as_decimal<S: serde::Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl SimplifyParams {
    /// The construction and its lifting are well defined: `k ≥ 1`, `τ ≥ 0`
    /// and `k ≥ Δ⃗τ + 1`. Weaker than non-degeneracy; a `τ = 0` stage is
    /// constructible but shrinks the ratio.
    pub fn constructible(&self) -> bool {
        self.k >= 1 && self.tau >= 0 && self.k >= self.outdeg * self.tau as u64 + 1
    }

    /// `C(l, k)`, the number of candidate subsets per node.
    pub fn subset_count(&self) -> BigUint {
        binomial(self.l, self.k)
    }

    pub fn l_next_u64(&self) -> Option<u64> {
        self.l_next.to_u64()
    }

    pub fn d_next_u64(&self) -> Option<u64> {
        self.d_next.to_u64()
    }
}

/// `(k, τ)` without the binomials.
pub fn stage_shape(l: u64, d: u64, outdeg: u64) -> (u64, i64) {
    let k = floor_div_e2(&BigUint::from(l), &(BigUint::from(d) * outdeg))
        .to_u64()
        .expect("k <= l fits");
    (k, (k / outdeg) as i64 - 1)
}

/// Exact stage parameters; all inputs must be at least 1.
pub fn simplify_params(l: u64, d: u64, delta: u64, outdeg: u64) -> SimplifyParams {
    assert!(l >= 1 && d >= 1 && delta >= 1 && outdeg >= 1, "parameters must be positive");
    let (k, tau) = stage_shape(l, d, outdeg);
    let degenerate = k < 1 || tau < 1;
    let l_next = binomial(l, k) / 2u32;
    let d_next = if tau < 0 {
        BigUint::from(0u32)
    } else {
        BigUint::from(8 * delta) * binomial(k * d, tau as u64) * binomial(l, k - tau as u64)
    };
    SimplifyParams { l, d, delta, outdeg, k, tau, l_next, d_next, degenerate }
}
