use super::{IncrementLaw, Interval, WindowLaw, DEFAULT_INNER_TOL};

#[derive(Debug, Clone, PartialEq)]
enum Source {
    Window(WindowLaw),
    UpperTail(IncrementLaw),
}

/// A one-dimensional rate function together with its effective domain.
///
/// Built either from a window law (`y ↦ f(y)`) or from an increment law
/// (`a ↦ sup_{τ ≥ 0}[aτ − log φ(τ)]`). Evaluation is pure and thread-safe.
#[derive(Debug, Clone, PartialEq)]
pub struct RateProfile {
    source: Source,
    finite_domain: Interval,
    minimizer: f64,
    steep: bool,
    tol: f64,
}

impl RateProfile {
    pub fn window(wlaw: &WindowLaw) -> Self {
        let finite_domain = wlaw.finite_domain();
        RateProfile {
            steep: finite_domain.hi.is_finite(),
            finite_domain,
            minimizer: wlaw.rate_minimizer(),
            source: Source::Window(wlaw.clone()),
            tol: DEFAULT_INNER_TOL,
        }
    }

    pub fn upper_tail(law: &IncrementLaw) -> Self {
        let hi = law.ess_sup();
        RateProfile {
            steep: hi.is_finite(),
            finite_domain: Interval::new(f64::NEG_INFINITY, hi),
            minimizer: law.mean(),
            source: Source::UpperTail(law.clone()),
            tol: DEFAULT_INNER_TOL,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn eval(&self, y: f64) -> f64 {
        match &self.source {
            Source::Window(w) => w.rate_with_tol(y, self.tol),
            Source::UpperTail(law) => law.upper_tail_rate(y, self.tol),
        }
    }

    pub fn finite_domain(&self) -> Interval {
        self.finite_domain
    }

    pub fn minimizer(&self) -> f64 {
        self.minimizer
    }

    /// True when the rate is `+∞` beyond a finite upper end.
    pub fn is_steep(&self) -> bool {
        self.steep
    }
}
