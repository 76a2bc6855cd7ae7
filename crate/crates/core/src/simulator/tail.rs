//! Upper tail of a ±1 random walk and its entropy sandwich.

use statrs::function::factorial::ln_binomial;
use std::f64::consts::LN_2;

use crate::error::RateError;
use crate::rate_engine::bernoulli_rate_bits;

/// Lower sandwich constant. A sweep over `l = 1..=10⁴` and relative
/// thresholds `x = 0.1, …, 0.9` puts the smallest ratio of exact tail to
/// `2^{−l(1−h)} / √l` at 0.1003 (`l = 19`, `x = 0.9`).
pub const TAIL_LOWER_CONST: f64 = 0.1;
/// Upper sandwich constant; the largest ratio in the same sweep is 4.372
/// (`l = 10⁴`, `x = 0.1`).
pub const TAIL_UPPER_CONST: f64 = 4.4;

/// All three quantities as base-2 logarithms, since the tails underflow
/// `f64` long before `l = 10⁴`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailBounds {
    pub log2_lower: f64,
    pub log2_upper: f64,
    pub log2_exact: f64,
}

impl TailBounds {
    pub fn lower(&self) -> f64 {
        self.log2_lower.exp2()
    }

    pub fn upper(&self) -> f64 {
        self.log2_upper.exp2()
    }

    pub fn exact(&self) -> f64 {
        self.log2_exact.exp2()
    }

    pub fn holds(&self) -> bool {
        self.log2_lower <= self.log2_exact && self.log2_exact <= self.log2_upper
    }
}

/// `P(ξ₁ + … + ξ_l ≥ threshold)` for fair ±1 steps, together with the
/// sandwich `(u/√l) 2^{−l[1−h(1/2 + threshold/2l)]}` and the same with `U`.
///
/// The sandwich constants are calibrated for `0.1 ≤ threshold/l ≤ 0.9`;
/// outside that band only `log2_exact` is meaningful.
pub fn binomial_tail_bounds(l: u64, threshold: f64) -> Result<TailBounds, RateError> {
    if l == 0 || !threshold.is_finite() || threshold.abs() > l as f64 {
        return Err(RateError::Domain {
            value: threshold,
            domain: format!("|threshold| <= l with l = {l} >= 1"),
        });
    }
    let lf = l as f64;
    // The walk is 2j − l after j up-steps; the slack absorbs rounding in
    // thresholds such as 0.3 · 10.
    let j0 = ((lf + threshold) / 2.0 - 1e-9 * lf).ceil().max(0.0) as u64;
    let log_terms: Vec<f64> = (j0..=l).map(|j| ln_binomial(l, j)).collect();
    let peak = log_terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ln_sum = peak + log_terms.iter().map(|v| (v - peak).exp()).sum::<f64>().ln();
    let log2_exact = ln_sum / LN_2 - lf;

    let core = -0.5 * lf.log2() - lf * bernoulli_rate_bits(threshold / lf);
    Ok(TailBounds {
        log2_lower: core + TAIL_LOWER_CONST.log2(),
        log2_upper: core + TAIL_UPPER_CONST.log2(),
        log2_exact,
    })
}
