use std::f64::consts::LN_2;

use crate::error::RateError;

/// Binary entropy in bits, extended continuously by `h(0) = h(1) = 0`.
pub fn entropy_h(t: f64) -> Result<f64, RateError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(RateError::Domain {
            value: t,
            domain: "[0, 1]".into(),
        });
    }
    if t == 0.0 || t == 1.0 {
        return Ok(0.0);
    }
    Ok(-(t * t.ln() + (1.0 - t) * (1.0 - t).ln()) / LN_2)
}

/// `1 − h((1 + a)/2)` for `|a| ≤ 1`, written without the cancellation that the
/// direct form suffers near `a = 0`.
pub(crate) fn bernoulli_rate_bits(a: f64) -> f64 {
    let a = a.abs();
    if a >= 1.0 {
        return 1.0;
    }
    ((1.0 + a) * a.ln_1p() + (1.0 - a) * (-a).ln_1p()) / (2.0 * LN_2)
}

/// `g_a(y) = y [1 − h(1/2 + a/(2y))]`, the per-unit-window Bernoulli exponent
/// in bits.
pub fn g(a: f64, y: f64) -> Result<f64, RateError> {
    if !(y > 0.0) || (a / y).abs() > 1.0 {
        return Err(RateError::Domain {
            value: a / y,
            domain: "a/y in [-1, 1] with y > 0".into(),
        });
    }
    Ok(y * bernoulli_rate_bits(a / y))
}
