use crate::error::RateError;

use super::legendre::{sup_right, Cgf};
use super::{Interval, DEFAULT_INNER_TOL};

/// Distribution of the random window length `λ`, with `E λ = p`.
#[derive(Debug, Clone, PartialEq)]
pub enum WindowLaw {
    Poisson { p: f64 },
    /// `λ ≡ k`; `p` is the scale the window is measured against.
    Deterministic { k: f64, p: f64 },
    BoundedSupport(BoundedWindow),
}

/// A window law with finitely many integer lengths `l_min, …, l_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundedWindow {
    l_min: u64,
    probs: Vec<f64>,
    log_probs: Vec<f64>,
    p: f64,
}

impl BoundedWindow {
    /// Builds the law from probabilities of `l_min, l_min + 1, …`; the
    /// probabilities are normalized and `p` is set to the resulting mean.
    pub fn from_pmf(l_min: u64, probs: Vec<f64>) -> Result<Self, RateError> {
        if probs.is_empty() || probs.iter().any(|q| !(*q >= 0.0) || !q.is_finite()) {
            return Err(RateError::Domain {
                value: f64::NAN,
                domain: "non-empty, non-negative probabilities".into(),
            });
        }
        let total: f64 = probs.iter().sum();
        if !(total > 0.0) {
            return Err(RateError::Domain {
                value: total,
                domain: "positive total mass".into(),
            });
        }
        // Trim zero-mass ends so the support interval is tight.
        let first = probs.iter().position(|&q| q > 0.0).unwrap();
        let last = probs.iter().rposition(|&q| q > 0.0).unwrap();
        let probs: Vec<f64> = probs[first..=last].iter().map(|q| q / total).collect();
        let l_min = l_min + first as u64;
        let p: f64 = probs
            .iter()
            .enumerate()
            .map(|(j, q)| q * (l_min + j as u64) as f64)
            .sum();
        if !(p > 0.0) {
            return Err(RateError::Domain {
                value: p,
                domain: "positive mean window".into(),
            });
        }
        let log_probs = probs.iter().map(|q| q.ln()).collect();
        Ok(BoundedWindow {
            l_min,
            probs,
            log_probs,
            p,
        })
    }

    /// Poisson(`p_nominal`) conditioned on a range of lengths chosen so that
    /// the support, measured in units of the conditioned mean `p`, lies in
    /// `[y_lo, y_hi]`.
    pub fn truncated_poisson(p_nominal: f64, y_lo: f64, y_hi: f64) -> Result<Self, RateError> {
        if !(p_nominal > 0.0) || !(0.0 <= y_lo && y_lo < y_hi) || !y_hi.is_finite() {
            return Err(RateError::Domain {
                value: p_nominal,
                domain: "p > 0 and 0 <= y_lo < y_hi < inf".into(),
            });
        }
        let ln_p = p_nominal.ln();
        let build = |l_min: u64, l_max: u64| -> Result<Self, RateError> {
            if l_max < l_min {
                return Err(RateError::Domain {
                    value: y_hi,
                    domain: "support containing an integer".into(),
                });
            }
            let log_q: Vec<f64> = (l_min..=l_max)
                .map(|l| l as f64 * ln_p - p_nominal - statrs::function::factorial::ln_factorial(l))
                .collect();
            let top = log_q.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            Self::from_pmf(l_min, log_q.iter().map(|v| (v - top).exp()).collect())
        };
        // The conditioned mean moves with the cut points; iterate to a
        // range that is consistent with its own mean.
        let mut mean = p_nominal;
        for _ in 0..64 {
            let law = build((y_lo * mean).ceil() as u64, (y_hi * mean).floor() as u64)?;
            let inside = law.l_min as f64 >= y_lo * law.p && law.l_max() as f64 <= y_hi * law.p;
            if inside {
                return Ok(law);
            }
            mean = law.p;
        }
        Err(RateError::Domain {
            value: p_nominal,
            domain: "a truncation consistent with its own mean".into(),
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn lengths(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.probs
            .iter()
            .enumerate()
            .map(move |(j, &q)| (self.l_min + j as u64, q))
    }

    pub fn l_max(&self) -> u64 {
        self.l_min + self.probs.len() as u64 - 1
    }

    /// `[l_min / p, l_max / p]`.
    pub fn support(&self) -> Interval {
        Interval::new(self.l_min as f64 / self.p, self.l_max() as f64 / self.p)
    }

    /// Inverse-CDF draw from a uniform `u ∈ [0, 1)`.
    pub fn quantile(&self, u: f64) -> u64 {
        let mut acc = 0.0;
        for (j, q) in self.probs.iter().enumerate() {
            acc += q;
            if u < acc {
                return self.l_min + j as u64;
            }
        }
        self.l_max()
    }

    fn log_mgf_terms(&self, t: f64) -> (f64, f64) {
        // log Σ q_l e^{tl} and Σ q_l l e^{tl} / Σ q_l e^{tl}, via log-sum-exp
        let top = self
            .log_probs
            .iter()
            .enumerate()
            .map(|(j, lq)| lq + t * (self.l_min + j as u64) as f64)
            .fold(f64::NEG_INFINITY, f64::max);
        let mut s = 0.0;
        let mut sl = 0.0;
        for (j, lq) in self.log_probs.iter().enumerate() {
            let l = (self.l_min + j as u64) as f64;
            let w = (lq + t * l - top).exp();
            s += w;
            sl += w * l;
        }
        (top + s.ln(), sl / s)
    }
}

impl WindowLaw {
    pub fn poisson(p: f64) -> Result<Self, RateError> {
        if !(p > 0.0) || !p.is_finite() {
            return Err(RateError::Domain {
                value: p,
                domain: "p > 0".into(),
            });
        }
        Ok(WindowLaw::Poisson { p })
    }

    pub fn deterministic(k: f64, p: f64) -> Result<Self, RateError> {
        if !(p > 0.0) || !(k >= 0.0) || !k.is_finite() || !p.is_finite() {
            return Err(RateError::Domain {
                value: k,
                domain: "k >= 0 and p > 0".into(),
            });
        }
        Ok(WindowLaw::Deterministic { k, p })
    }

    /// Expected window length.
    pub fn p(&self) -> f64 {
        match self {
            WindowLaw::Poisson { p } | WindowLaw::Deterministic { p, .. } => *p,
            WindowLaw::BoundedSupport(b) => b.p(),
        }
    }

    /// The same family rescaled to mean window `p` (a deterministic window
    /// becomes `k = p`). Bounded windows carry their own mean and are returned
    /// unchanged.
    pub fn with_p(&self, p: f64) -> Result<Self, RateError> {
        match self {
            WindowLaw::Poisson { .. } => WindowLaw::poisson(p),
            WindowLaw::Deterministic { .. } => WindowLaw::deterministic(p, p),
            WindowLaw::BoundedSupport(_) => Ok(self.clone()),
        }
    }

    pub fn cgf_domain(&self) -> Interval {
        Interval::new(0.0, f64::INFINITY)
    }

    /// `χ(t)`, the exponent of `E e^{λt} ≈ e^{pχ(t)}`.
    pub fn window_scaled_cgf(&self, t: f64) -> Result<f64, RateError> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(RateError::Domain {
                value: t,
                domain: self.cgf_domain().to_string(),
            });
        }
        Ok(self.value(t))
    }

    /// Interval outside which the rate is `+∞`.
    pub fn finite_domain(&self) -> Interval {
        match self {
            WindowLaw::Poisson { .. } => Interval::new(0.0, f64::INFINITY),
            WindowLaw::Deterministic { k, p } => Interval::new(k / p, k / p),
            WindowLaw::BoundedSupport(b) => b.support(),
        }
    }

    /// Location of the rate's zero, `E λ / p`.
    pub fn rate_minimizer(&self) -> f64 {
        match self {
            WindowLaw::Deterministic { k, p } => k / p,
            _ => 1.0,
        }
    }

    /// Rate `f(y)` of `Pr{λ ≥ yp} ≈ e^{−p f(y)}`; `+∞` outside the finite
    /// domain.
    pub fn rate(&self, y: f64) -> f64 {
        self.rate_with_tol(y, DEFAULT_INNER_TOL)
    }

    pub fn rate_with_tol(&self, y: f64, tol: f64) -> f64 {
        if !(y >= 0.0) {
            return f64::INFINITY;
        }
        match self {
            WindowLaw::Poisson { .. } => poisson_rate(y),
            WindowLaw::Deterministic { k, p } => {
                let r = k / p;
                if (y - r).abs() <= 1e-12 * r.max(1.0) {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            WindowLaw::BoundedSupport(b) => {
                let s = b.support();
                let slack = 1e-12 * s.hi;
                if y < s.lo - slack || y > s.hi + slack {
                    f64::INFINITY
                } else {
                    sup_right(self, y.min(s.hi), tol).max(0.0)
                }
            }
        }
    }
}

/// `f(y) = 0` on `[0, 1)` and `y (log y − 1) + 1` on `[1, ∞)`.
pub fn poisson_rate(y: f64) -> f64 {
    if y < 1.0 {
        0.0
    } else {
        y * (y.ln() - 1.0) + 1.0
    }
}

impl Cgf for WindowLaw {
    fn value(&self, t: f64) -> f64 {
        if t < 0.0 {
            return f64::INFINITY;
        }
        match self {
            WindowLaw::Poisson { .. } => t.exp_m1(),
            WindowLaw::Deterministic { k, p } => t * k / p,
            WindowLaw::BoundedSupport(b) => b.log_mgf_terms(t).0 / b.p,
        }
    }

    fn domain(&self) -> Interval {
        self.cgf_domain()
    }

    fn slope(&self, t: f64) -> f64 {
        match self {
            WindowLaw::Poisson { .. } => t.exp(),
            WindowLaw::Deterministic { k, p } => k / p,
            WindowLaw::BoundedSupport(b) => b.log_mgf_terms(t).1 / b.p,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn chi_examples() {
        let w = WindowLaw::poisson(10.0).unwrap();
        assert_eq!(w.window_scaled_cgf(0.0).unwrap(), 0.0);
        assert!((w.window_scaled_cgf(1.0).unwrap() - (E - 1.0)).abs() < 1e-15);
        assert!(w.window_scaled_cgf(-0.5).is_err());
        let d = WindowLaw::deterministic(7.0, 7.0).unwrap();
        assert_eq!(d.window_scaled_cgf(0.5).unwrap(), 0.5);
    }

    #[test]
    fn poisson_rate_examples() {
        let w = WindowLaw::poisson(3.0).unwrap();
        assert_eq!(w.rate(0.5), 0.0);
        assert_eq!(w.rate(1.0), 0.0);
        assert!((w.rate(E) - 1.0).abs() < 1e-15);
        assert_eq!(w.rate(-0.1), f64::INFINITY);
    }

    #[test]
    fn deterministic_rate_is_indicator() {
        let d = WindowLaw::deterministic(5.0, 5.0).unwrap();
        assert_eq!(d.rate(1.0), 0.0);
        assert_eq!(d.rate(0.999), f64::INFINITY);
        assert_eq!(d.rate(1.2), f64::INFINITY);
        assert_eq!(d.finite_domain(), Interval::new(1.0, 1.0));
    }

    #[test]
    fn bounded_window_mean_and_rate() {
        let b = BoundedWindow::truncated_poisson(50.0, 0.5, 2.0).unwrap();
        let mean: f64 = b.lengths().map(|(l, q)| l as f64 * q).sum();
        assert!((mean - b.p()).abs() < 1e-9);
        let s = b.support();
        assert!(s.lo >= 0.5 && s.hi <= 2.0, "{s}");
        let w = WindowLaw::BoundedSupport(b);
        assert!(w.value(0.0).abs() < 1e-14);
        assert!((w.slope(0.0) - 1.0).abs() < 1e-12);
        assert!(w.rate(1.0).abs() < 1e-9);
        assert_eq!(w.rate(0.3), f64::INFINITY);
        assert_eq!(w.rate(2.1), f64::INFINITY);
        let f_hi = w.rate(s.hi);
        assert!(f_hi.is_finite() && f_hi > w.rate(1.5));
        // close to the untruncated Poisson rate in the interior
        assert!((w.rate(1.5) - poisson_rate(1.5)).abs() < 0.05);
    }

    #[test]
    fn truncation_is_relative_to_own_mean() {
        for p in [3.0, 7.5, 30.0, 200.0] {
            let s = BoundedWindow::truncated_poisson(p, 0.5, 2.0).unwrap().support();
            assert!(s.lo >= 0.5 && s.hi <= 2.0, "p = {p}: {s}");
        }
    }

    #[test]
    fn bounded_quantile_covers_support() {
        let b = BoundedWindow::from_pmf(3, vec![0.0, 0.25, 0.5, 0.25, 0.0]).unwrap();
        assert_eq!(b.quantile(0.0), 4);
        assert_eq!(b.quantile(0.3), 5);
        assert_eq!(b.quantile(0.999), 6);
        assert_eq!(b.p(), 5.0);
    }
}
