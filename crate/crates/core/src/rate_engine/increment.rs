use std::f64::consts::LN_2;

use crate::error::RateError;

use super::legendre::{sup_right, Cgf, Reflected};
use super::tabulated::TabulatedCgf;
use super::Interval;

/// Distribution of a single increment `ξ`.
#[derive(Debug, Clone, PartialEq)]
pub enum IncrementLaw {
    /// `±1` with probability 1/2 each.
    BernoulliPM1,
    /// Centered normal with the given variance.
    Gaussian { variance: f64 },
    /// `w²` for a centered normal weight `w` of the given variance; the
    /// increment of the row statistics of a weighted random matrix.
    SquaredGaussianWeight { weight_variance: f64 },
    /// Point mass, e.g. `w² ≡ 1` for `±1` weights.
    Degenerate { value: f64 },
    Tabulated(TabulatedCgf),
}

impl IncrementLaw {
    pub fn gaussian(variance: f64) -> Result<Self, RateError> {
        positive(variance, "variance")?;
        Ok(IncrementLaw::Gaussian { variance })
    }

    pub fn squared_gaussian_weight(weight_variance: f64) -> Result<Self, RateError> {
        positive(weight_variance, "weight variance")?;
        Ok(IncrementLaw::SquaredGaussianWeight { weight_variance })
    }

    pub fn degenerate(value: f64) -> Result<Self, RateError> {
        if !value.is_finite() {
            return Err(RateError::Domain {
                value,
                domain: "finite reals".into(),
            });
        }
        Ok(IncrementLaw::Degenerate { value })
    }

    pub fn mean(&self) -> f64 {
        match self {
            IncrementLaw::BernoulliPM1 | IncrementLaw::Gaussian { .. } => 0.0,
            IncrementLaw::SquaredGaussianWeight { weight_variance } => *weight_variance,
            IncrementLaw::Degenerate { value } => *value,
            IncrementLaw::Tabulated(t) => t.slope(0.0),
        }
    }

    pub fn variance(&self) -> f64 {
        match self {
            IncrementLaw::BernoulliPM1 => 1.0,
            IncrementLaw::Gaussian { variance } => *variance,
            IncrementLaw::SquaredGaussianWeight { weight_variance } => {
                2.0 * weight_variance * weight_variance
            }
            IncrementLaw::Degenerate { .. } => 0.0,
            IncrementLaw::Tabulated(t) => {
                let h: f64 = 1e-4;
                let d = t.domain();
                let (lo, hi) = ((-h).max(d.lo), h.min(d.hi));
                (t.slope(hi) - t.slope(lo)) / (hi - lo)
            }
        }
    }

    /// Essential supremum of `ξ`; `+∞` when unbounded or unknown.
    pub fn ess_sup(&self) -> f64 {
        match self {
            IncrementLaw::BernoulliPM1 => 1.0,
            IncrementLaw::Degenerate { value } => *value,
            _ => f64::INFINITY,
        }
    }

    pub fn cgf_domain(&self) -> Interval {
        match self {
            IncrementLaw::SquaredGaussianWeight { weight_variance } => {
                Interval::new(f64::NEG_INFINITY, 0.5 / weight_variance)
            }
            IncrementLaw::Tabulated(t) => t.domain(),
            _ => Interval::new(f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// `log E e^{τξ}`.
    pub fn cgf(&self, tau: f64) -> Result<f64, RateError> {
        if tau != 0.0 && !self.cgf_domain().contains_open_hi(tau) {
            return Err(RateError::Domain {
                value: tau,
                domain: self.cgf_domain().to_string(),
            });
        }
        Ok(self.value(tau))
    }

    /// Upper-tail rate `sup_{τ ≥ 0} [aτ − log φ(τ)]`: zero at or below the
    /// mean and `+∞` above the essential supremum.
    pub fn upper_tail_rate(&self, a: f64, tol: f64) -> f64 {
        if a > self.ess_sup() {
            return f64::INFINITY;
        }
        match self {
            IncrementLaw::Gaussian { variance } => {
                if a <= 0.0 {
                    0.0
                } else {
                    0.5 * a * a / variance
                }
            }
            IncrementLaw::Degenerate { .. } => 0.0,
            _ => sup_right(self, a, tol).max(0.0),
        }
    }

    /// Full Legendre transform `sup_τ [aτ − log φ(τ)]` over the CGF domain.
    pub fn cramer_d(&self, a: f64, tol: f64) -> Result<f64, RateError> {
        if !(tol > 0.0) {
            return Err(RateError::Tolerance(tol));
        }
        if a.is_nan() {
            return Ok(f64::INFINITY);
        }
        if let IncrementLaw::Degenerate { value } = self {
            return Ok(if a == *value { 0.0 } else { f64::INFINITY });
        }
        let right = self.upper_tail_rate(a, tol);
        let left = if self.cgf_domain().lo < 0.0 {
            sup_right(&Reflected(self), -a, tol)
        } else {
            0.0
        };
        Ok(right.max(left).max(0.0))
    }

    /// `log 2 · (1 − h((1 + a)/2))`, the Bernoulli rate in closed form.
    pub fn bernoulli_d_closed_form(a: f64) -> f64 {
        if a.abs() > 1.0 {
            f64::INFINITY
        } else {
            LN_2 * super::entropy::bernoulli_rate_bits(a)
        }
    }
}

impl Cgf for IncrementLaw {
    fn value(&self, tau: f64) -> f64 {
        match self {
            IncrementLaw::BernoulliPM1 => {
                let a = tau.abs();
                a + (-2.0 * a).exp().ln_1p() - LN_2
            }
            IncrementLaw::Gaussian { variance } => 0.5 * variance * tau * tau,
            IncrementLaw::SquaredGaussianWeight { weight_variance } => {
                let s = 1.0 - 2.0 * weight_variance * tau;
                if s <= 0.0 {
                    f64::INFINITY
                } else {
                    -0.5 * s.ln()
                }
            }
            IncrementLaw::Degenerate { value } => value * tau,
            IncrementLaw::Tabulated(t) => t.value(tau),
        }
    }

    fn domain(&self) -> Interval {
        self.cgf_domain()
    }

    fn slope(&self, tau: f64) -> f64 {
        match self {
            IncrementLaw::BernoulliPM1 => tau.tanh(),
            IncrementLaw::Gaussian { variance } => variance * tau,
            IncrementLaw::SquaredGaussianWeight { weight_variance } => {
                let s = 1.0 - 2.0 * weight_variance * tau;
                if s <= 0.0 {
                    f64::INFINITY
                } else {
                    weight_variance / s
                }
            }
            IncrementLaw::Degenerate { value } => *value,
            IncrementLaw::Tabulated(t) => t.slope(tau),
        }
    }
}

fn positive(v: f64, what: &str) -> Result<(), RateError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(RateError::Domain {
            value: v,
            domain: format!("{what} > 0"),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-10;

    #[test]
    fn cgf_examples() {
        let b = IncrementLaw::BernoulliPM1;
        assert_eq!(b.cgf(0.0).unwrap(), 0.0);
        assert!((b.cgf(1.0).unwrap() - 1f64.cosh().ln()).abs() < 1e-15);
        assert!((b.cgf(1.0).unwrap() - 0.433_780_830_483_027).abs() < 1e-14);
        assert!((b.cgf(800.0).unwrap() - (800.0 - LN_2)).abs() < 1e-9);
        let g = IncrementLaw::gaussian(1.0).unwrap();
        assert_eq!(g.cgf(2.0).unwrap(), 2.0);
    }

    #[test]
    fn cgf_outside_domain_is_an_error() {
        let w = IncrementLaw::squared_gaussian_weight(0.5).unwrap();
        assert!(w.cgf(0.9).is_ok());
        assert!(matches!(w.cgf(1.0), Err(RateError::Domain { .. })));
        assert!(matches!(w.cgf(3.0), Err(RateError::Domain { .. })));
    }

    #[test]
    fn bernoulli_d_examples() {
        let b = IncrementLaw::BernoulliPM1;
        assert_eq!(b.cramer_d(0.0, TOL).unwrap(), 0.0);
        assert!((b.cramer_d(1.0, TOL).unwrap() - LN_2).abs() < 1e-12);
        // ln 2 (1 - h(0.75)) from the entropy formula
        assert!((b.cramer_d(0.5, TOL).unwrap() - 0.130_812_035_941_137_6).abs() < 1e-10);
        assert_eq!(b.cramer_d(1.01, TOL).unwrap(), f64::INFINITY);
        assert_eq!(b.cramer_d(-1.01, TOL).unwrap(), f64::INFINITY);
    }

    #[test]
    fn squared_weight_rate_matches_closed_form() {
        // For w ~ N(0, v2): D(a) = (a/v2 - 1 - ln(a/v2)) / 2
        let v2 = 0.7;
        let w = IncrementLaw::squared_gaussian_weight(v2).unwrap();
        for &a in &[0.1, 0.35, 0.7, 1.0, 2.5, 6.0] {
            let r = a / v2;
            let exact = 0.5 * (r - 1.0 - r.ln());
            let d = w.cramer_d(a, TOL).unwrap();
            assert!((d - exact).abs() < 1e-9, "a = {a}: {d} vs {exact}");
        }
        assert_eq!(w.upper_tail_rate(0.3, TOL), 0.0);
        assert!(w.upper_tail_rate(2.0, TOL) > 0.0);
    }

    #[test]
    fn degenerate_law_rates() {
        let d = IncrementLaw::degenerate(1.0).unwrap();
        assert_eq!(d.cramer_d(1.0, TOL).unwrap(), 0.0);
        assert_eq!(d.cramer_d(0.5, TOL).unwrap(), f64::INFINITY);
        assert_eq!(d.upper_tail_rate(0.5, TOL), 0.0);
        assert_eq!(d.upper_tail_rate(1.5, TOL), f64::INFINITY);
    }

    #[test]
    fn moments() {
        assert_eq!(IncrementLaw::BernoulliPM1.variance(), 1.0);
        let w = IncrementLaw::squared_gaussian_weight(2.0).unwrap();
        assert_eq!(w.mean(), 2.0);
        assert_eq!(w.variance(), 8.0);
        assert!(IncrementLaw::gaussian(0.0).is_err());
    }
}
