//! Exact and certified numeric helpers: iterated logarithm, binomials, exact
//! division by e², and log-space bounds with explicit error margins.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Least `k` such that the `k`-fold base-2 logarithm of `x` drops below 1.
pub fn log_star(x: f64) -> u32 {
    let mut k = 0;
    let mut y = x;
    while y >= 1.0 {
        y = if y > 0.0 { y.log2() } else { f64::NEG_INFINITY };
        k += 1;
    }
    k
}

/// `log_star(x)` given `log2(x)`, for arguments too large for `f64`.
pub fn log_star_from_log2(log2x: f64) -> u32 {
    if log2x < 0.0 {
        0
    } else {
        1 + log_star(log2x)
    }
}

/// `max(ln x, 1)`: the constant-regime clamp used by every threshold.
pub fn ln_clamped(x: usize) -> f64 {
    (x.max(1) as f64).ln().max(1.0)
}

pub fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Binomial as `u128` if it fits.
pub fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        // acc * (n - i) / (i + 1) stays integral; split to limit overflow
        let g = acc.gcd(&(i + 1));
        let num = (n as u128 - i).checked_mul(acc / g)?;
        acc = num / ((i + 1) / g);
    }
    Some(acc)
}

/// Digits of e² scaled by 10^49: `E2_LO < e² * 10^49 < E2_LO + 1`.
const E2_DIGITS: &str = "73890560989306502272304274605750078131803155705518";
const E2_SCALE_EXP: u32 = 49;

fn e2_bounds() -> (BigUint, BigUint, BigUint) {
    let lo: BigUint = E2_DIGITS.parse().expect("digits");
    let hi = &lo + 1u32;
    (lo, hi, BigUint::from(10u32).pow(E2_SCALE_EXP))
}

/// Exact `⌊num / (e² · den)⌋` for `den > 0`.
pub fn floor_div_e2(num: &BigUint, den: &BigUint) -> BigUint {
    assert!(!den.is_zero(), "division by zero");
    let (lo, hi, scale) = e2_bounds();
    let scaled = num * &scale;
    let k_low = &scaled / (&hi * den);
    let k_high = &scaled / (&lo * den);
    if k_low == k_high {
        return k_low;
    }
    assert!(
        k_high.clone() - &k_low == BigUint::one(),
        "e² precision insufficient for this magnitude"
    );
    // k_high is valid iff k_high * e² * den <= num
    if &k_high * &hi * den <= scaled {
        k_high
    } else if &k_high * &lo * den >= scaled {
        k_low
    } else {
        panic!("e² precision insufficient to separate floor candidates")
    }
}

pub fn e2_f64() -> f64 {
    std::f64::consts::E * std::f64::consts::E
}

/// Closed interval certified to contain a real quantity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn widen(self, margin: f64) -> Self {
        Interval { lo: self.lo - margin, hi: self.hi + margin }
    }

    pub fn add(self, o: Interval) -> Interval {
        Interval { lo: self.lo + o.lo, hi: self.hi + o.hi }.widen(ulp_margin(self, o))
    }

    pub fn sub(self, o: Interval) -> Interval {
        Interval { lo: self.lo - o.hi, hi: self.hi - o.lo }.widen(ulp_margin(self, o))
    }

    pub fn scale(self, c: f64) -> Interval {
        assert!(c >= 0.0);
        Interval { lo: self.lo * c, hi: self.hi * c }.widen(REL * (self.lo.abs() + self.hi.abs()) * c)
    }
}

const REL: f64 = 1e-14;

fn ulp_margin(a: Interval, b: Interval) -> f64 {
    REL * (a.lo.abs().max(a.hi.abs()) + b.lo.abs().max(b.hi.abs()))
}

/// `ln x` for an arbitrary-precision positive integer, with a safe margin.
pub fn ln_big(x: &BigUint) -> Interval {
    assert!(!x.is_zero(), "ln of zero");
    let bits = x.bits();
    let (mantissa, shift) = if bits > 60 {
        ((x >> (bits - 60)).to_f64().expect("fits"), bits - 60)
    } else {
        (x.to_f64().expect("fits"), 0)
    };
    let v = mantissa.ln() + shift as f64 * std::f64::consts::LN_2;
    // truncation of the mantissa loses < 2^-59 relative
    Interval { lo: v - 2f64.powi(-58), hi: v }.widen(REL * v.abs().max(1.0))
}

/// Certified bounds on `ln C(n, k)` by summing logarithms.
pub fn ln_binomial(n: u64, k: u64) -> Interval {
    assert!(k <= n);
    let k = k.min(n - k);
    if k <= 64 && n <= 1 << 20 {
        return ln_big(&binomial(n, k));
    }
    let mut s = 0.0f64;
    let mut mag = 0.0f64;
    for i in 0..k {
        let t = ((n - i) as f64).ln() - ((i + 1) as f64).ln();
        s += t;
        mag += t.abs() + ((n - i) as f64).ln();
    }
    Interval::point(s).widen(8.0 * f64::EPSILON * (mag + k as f64))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub fn next_prime(n: u64) -> u64 {
    let mut p = n.max(2);
    while !is_prime(p) {
        p += 1;
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_star_values() {
        assert_eq!(log_star(0.5), 0);
        assert_eq!(log_star(1.0), 1);
        assert_eq!(log_star(2.0), 2);
        assert_eq!(log_star(16.0), 4);
        assert_eq!(log_star(65536.0), 5);
        assert_eq!(log_star(1e10), 5);
        assert_eq!(log_star_from_log2(65536.0), 6);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(28, 3), BigUint::from(3276u32));
        assert_eq!(binomial(16, 2), BigUint::from(120u32));
        assert_eq!(binomial(5, 7), BigUint::zero());
        assert_eq!(binomial_u128(100, 6), Some(1_192_052_400));
        assert_eq!(binomial_u128(100, 4), Some(3_921_225));
        assert_eq!(binomial_u128(200, 100), None);
    }

    #[test]
    fn floor_by_e_squared() {
        let f = |a: u64, b: u64| floor_div_e2(&BigUint::from(a), &BigUint::from(b));
        assert_eq!(f(28, 1), BigUint::from(3u32));
        assert_eq!(f(100, 2), BigUint::from(6u32));
        assert_eq!(f(4, 1), BigUint::zero());
        assert_eq!(f(7, 1), BigUint::zero());
        assert_eq!(f(8, 1), BigUint::one());
        assert_eq!(f(73_890_560_989, 10_000_000_000), BigUint::zero());
        assert_eq!(f(73_890_560_990, 10_000_000_000), BigUint::one());
    }

    #[test]
    fn ln_bounds_contain_truth() {
        let exact = ln_big(&binomial(60, 30));
        let truth = 118264581564861424f64.ln();
        assert!(exact.lo <= truth && truth <= exact.hi);
        let summed = ln_binomial(5_000_000, 70);
        let big = ln_big(&binomial(5_000_000, 70));
        assert!(summed.lo <= big.hi && big.lo <= summed.hi);
        assert!(summed.hi - summed.lo < 1e-6);
    }

    #[test]
    fn primes() {
        assert_eq!(next_prime(4), 5);
        assert_eq!(next_prime(17), 17);
        assert!(!is_prime(1));
        assert!(is_prime(1_000_003));
    }

    #[test]
    fn clamps() {
        assert_eq!(ln_clamped(2), 1.0);
        assert!((ln_clamped(1024) - 1024f64.ln()).abs() < 1e-12);
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(5), 3);
        assert_eq!(ceil_log2(8), 3);
    }
}
