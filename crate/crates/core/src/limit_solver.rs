//! Limit constants of the maximal window average.
//!
//! The classical constant solves `D⁺(α) = 1/C`; the stochastic one solves
//! `inf_y [f(y) + y D⁺(α/y)] = 1/C`, where `f` is the window rate and `D⁺` the
//! upper-tail rate of the increments. Both maps are nondecreasing in `α`, so
//! the outer solve is a bisection; the inner infimum is over a convex
//! function of `y` and is found by a geometric scan followed by golden-section
//! search.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::SolveError;
use crate::optimize::golden_min;
use crate::rate_engine::{bernoulli_rate_bits, IncrementLaw, Interval, WindowLaw};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Target accuracy of the reported constant and of its residual.
    pub tol: f64,
    /// Accuracy of the inner Legendre and golden-section searches.
    pub inner_tol: f64,
    /// Upper limit of the expanding `α` bracket.
    pub alpha_cap: f64,
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-8,
            inner_tol: 1e-10,
            alpha_cap: 1e6,
            max_iter: 500,
        }
    }
}

impl SolverOptions {
    pub fn with_tol(tol: f64) -> Self {
        SolverOptions {
            tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub alpha: f64,
    /// `|objective(alpha) − target|`.
    pub residual: f64,
    /// Optimal `y` of the inner infimum (stochastic solvers only).
    pub inner_minimizer: Option<f64>,
    pub bracket: Interval,
    pub iterations: usize,
    /// The equation has no root because the objective stays below target on
    /// the whole feasible range; `alpha` is then the largest feasible value
    /// (e.g. 1 for `±1` increments with `c < 1`).
    pub saturated: bool,
}

/// Value and location of the inner infimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerMin {
    pub value: f64,
    pub y_star: f64,
}

/// `f(y) + y D⁺(alpha / y)`, `+∞` where either term is infinite.
pub fn objective(law: &IncrementLaw, wlaw: &WindowLaw, alpha: f64, y: f64) -> f64 {
    objective_with_tol(law, wlaw, alpha, y, SolverOptions::default().inner_tol)
}

fn objective_with_tol(law: &IncrementLaw, wlaw: &WindowLaw, alpha: f64, y: f64, tol: f64) -> f64 {
    let f = wlaw.rate_with_tol(y, tol);
    if !f.is_finite() {
        return f64::INFINITY;
    }
    if y <= 0.0 {
        // empty window: the sum is 0
        return if alpha <= 0.0 { f } else { f64::INFINITY };
    }
    let d = law.upper_tail_rate(alpha / y, tol);
    if d.is_finite() {
        f + y * d
    } else {
        f64::INFINITY
    }
}

/// Feasible `y` for the nats objective: inside the window's finite domain
/// and with `alpha / y` not above the essential supremum.
fn feasible_range(law: &IncrementLaw, wlaw: &WindowLaw, alpha: f64) -> Interval {
    let dom = wlaw.finite_domain();
    let sup = law.ess_sup();
    let lo = if alpha > 0.0 && sup.is_finite() && sup > 0.0 {
        dom.lo.max(alpha / sup)
    } else {
        dom.lo
    };
    Interval::new(lo, dom.hi)
}

/// `inf_y [f(y) + y D⁺(alpha / y)]` and its argmin.
pub fn inner_min(
    law: &IncrementLaw,
    wlaw: &WindowLaw,
    alpha: f64,
    tol: f64,
) -> Result<InnerMin, SolveError> {
    let feasible = feasible_range(law, wlaw, alpha);
    minimize_convex(
        |y| objective_with_tol(law, wlaw, alpha, y, tol),
        feasible,
        alpha.max(1.0),
        tol,
    )
    .ok_or(SolveError::Infeasible { alpha })
}

/// Bits form of the Bernoulli inner infimum:
/// `inf_{y ≥ alpha} [f(y)/ln 2 + g_alpha(y)]`.
pub fn inner_min_bernoulli_bits(
    wlaw: &WindowLaw,
    alpha: f64,
    tol: f64,
) -> Result<InnerMin, SolveError> {
    let dom = wlaw.finite_domain();
    let feasible = Interval::new(dom.lo.max(alpha), dom.hi);
    let obj = |y: f64| {
        let f = wlaw.rate_with_tol(y, tol);
        if !f.is_finite() || y < alpha {
            return f64::INFINITY;
        }
        if y <= 0.0 {
            return f / LN_2;
        }
        f / LN_2 + y * bernoulli_rate_bits(alpha / y)
    };
    minimize_convex(obj, feasible, alpha.max(1.0), tol).ok_or(SolveError::Infeasible { alpha })
}

/// Minimizes a convex, possibly `+∞`-valued function over `feasible`.
///
/// A geometric scan `start · 2^j` locates a bracket around the smallest
/// sample; golden-section search refines it. Among equal values the largest
/// `y` wins.
fn minimize_convex<F>(f: F, feasible: Interval, start: f64, tol: f64) -> Option<InnerMin>
where
    F: Fn(f64) -> f64,
{
    let Interval { lo, hi } = feasible;
    if !(lo <= hi) {
        return None;
    }
    if lo == hi {
        let v = f(lo);
        return v.is_finite().then_some(InnerMin { value: v, y_star: lo });
    }
    let mut ys = Vec::new();
    let mut vals: Vec<f64> = Vec::new();
    let mut y = start.clamp(lo, hi);
    if y <= 0.0 {
        y = hi.min(1.0);
    }
    for _ in 0..200 {
        let v = f(y);
        let increasing = vals.last().is_some_and(|&prev| prev.is_finite() && v > prev);
        ys.push(y);
        vals.push(v);
        if increasing || y >= hi {
            break;
        }
        y = (2.0 * y).min(hi);
    }
    // last index attaining the minimum
    let m = (0..vals.len())
        .rev()
        .min_by(|&a, &b| vals[a].total_cmp(&vals[b]))
        .unwrap();
    let (mut best_y, mut best_v) = (ys[m], vals[m]);
    let left = if m == 0 { lo } else { ys[m - 1] };
    let right = if m + 1 < ys.len() { ys[m + 1] } else { ys[m] };
    let mut consider = |y: f64, v: f64| {
        if v < best_v || (v == best_v && y > best_y) {
            best_y = y;
            best_v = v;
        }
    };
    if right > left {
        let r = golden_min(&f, left, right, tol * right.abs().max(1.0));
        consider(r.x, r.value);
        consider(left, f(left));
    }
    best_v.is_finite().then_some(InnerMin {
        value: best_v,
        y_star: best_y,
    })
}

struct Bisection {
    alpha: f64,
    residual: f64,
    bracket: Interval,
    iterations: usize,
}

/// Root of a nondecreasing `value(α) = target` with
/// `value(lo) < target <= value(hi)`. Stops once the bracket is narrower than
/// `tol` and the residual at its midpoint is within `tol`, or the bracket
/// reaches floating-point resolution.
fn bisect<V: Fn(f64) -> f64>(
    value: V,
    target: f64,
    mut lo: f64,
    mut hi: f64,
    opts: &SolverOptions,
    iterations: usize,
) -> Bisection {
    let mut iterations = iterations;
    loop {
        let mid = 0.5 * (lo + hi);
        let width = hi - lo;
        if width <= opts.tol {
            let r = (value(mid) - target).abs();
            let resolved = width <= 4.0 * f64::EPSILON * mid.abs().max(1.0);
            if r <= opts.tol || resolved || iterations >= opts.max_iter {
                return Bisection {
                    alpha: mid,
                    residual: r,
                    bracket: Interval::new(lo, hi),
                    iterations,
                };
            }
        }
        if value(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
}

fn check_c(big_c: f64) -> Result<f64, SolveError> {
    if big_c > 0.0 && !big_c.is_nan() {
        Ok(1.0 / big_c)
    } else {
        Err(SolveError::InvalidC(big_c))
    }
}

fn saturated(alpha: f64, residual: f64, inner_minimizer: Option<f64>) -> SolveResult {
    SolveResult {
        alpha,
        residual,
        inner_minimizer,
        bracket: Interval::new(alpha, alpha),
        iterations: 0,
        saturated: true,
    }
}

/// Grows `hi` geometrically from `lo` until `value(hi) >= target`, staying
/// below `limit` (the largest feasible alpha) and the configured cap.
fn expand_upper<V: Fn(f64) -> f64>(
    value: &V,
    target: f64,
    lo: f64,
    limit: f64,
    opts: &SolverOptions,
) -> Result<(f64, f64, usize), SolveError> {
    let mut lo = lo;
    let mut hi = (lo + 1.0).min(limit);
    let mut steps = 0;
    loop {
        let v = value(hi);
        if v >= target {
            return Ok((lo, hi, steps));
        }
        if hi >= opts.alpha_cap {
            return Err(SolveError::CapReached {
                cap: opts.alpha_cap,
                last_value: v,
                target,
            });
        }
        lo = hi;
        hi = (2.0 * hi).max(hi + 1.0).min(limit).min(opts.alpha_cap);
        steps += 1;
    }
}

/// Classical constant: `D⁺(α) = 1/C` for `α` between the mean and the
/// essential supremum of the increments.
pub fn classical_alpha(
    law: &IncrementLaw,
    big_c: f64,
    opts: &SolverOptions,
) -> Result<SolveResult, SolveError> {
    let target = check_c(big_c)?;
    let value = |a: f64| law.upper_tail_rate(a, opts.inner_tol);
    let lo = law.mean();
    let sup = law.ess_sup();
    if sup.is_finite() {
        let v = value(sup);
        if v < target {
            return Ok(saturated(sup, target - v, None));
        }
    }
    let (lo, hi, steps) = expand_upper(&value, target, lo, sup, opts)?;
    let b = bisect(value, target, lo, hi, opts, steps);
    Ok(SolveResult {
        alpha: b.alpha,
        residual: b.residual,
        inner_minimizer: None,
        bracket: b.bracket,
        iterations: b.iterations,
        saturated: false,
    })
}

/// Classical constant for `±1` increments in bits: `1/c = 1 − h((1 + α)/2)`.
pub fn classical_alpha_bernoulli(c: f64, opts: &SolverOptions) -> Result<SolveResult, SolveError> {
    let target = check_c(c)?;
    if target >= 1.0 {
        return Ok(saturated(1.0, target - 1.0, None));
    }
    let b = bisect(bernoulli_rate_bits, target, 0.0, 1.0, opts, 0);
    Ok(SolveResult {
        alpha: b.alpha,
        residual: b.residual,
        inner_minimizer: None,
        bracket: b.bracket,
        iterations: b.iterations,
        saturated: false,
    })
}

fn solve_nested<I>(
    inner: I,
    target: f64,
    lo: f64,
    alpha_max: f64,
    opts: &SolverOptions,
) -> Result<SolveResult, SolveError>
where
    I: Fn(f64) -> Result<InnerMin, SolveError>,
{
    let value = |a: f64| inner(a).map_or(f64::INFINITY, |m| m.value);
    if alpha_max.is_finite() {
        if let Ok(m) = inner(alpha_max) {
            if m.value < target {
                return Ok(saturated(alpha_max, target - m.value, Some(m.y_star)));
            }
        }
    }
    let (lo, hi, steps) = expand_upper(&value, target, lo, alpha_max, opts)?;
    let b = bisect(&value, target, lo, hi, opts, steps);
    Ok(SolveResult {
        alpha: b.alpha,
        residual: b.residual,
        inner_minimizer: inner(b.alpha).ok().map(|m| m.y_star),
        bracket: b.bracket,
        iterations: b.iterations,
        saturated: false,
    })
}

/// Stochastic constant: `inf_y [f(y) + y D⁺(α/y)] = 1/C`.
///
/// Returns [`SolveError::CapReached`] when the objective is still below
/// target at `opts.alpha_cap`, which is how the divergence for small `C`
/// with Poisson windows shows up.
pub fn stochastic_alpha(
    law: &IncrementLaw,
    wlaw: &WindowLaw,
    big_c: f64,
    opts: &SolverOptions,
) -> Result<SolveResult, SolveError> {
    let target = check_c(big_c)?;
    let alpha_max = wlaw.finite_domain().hi * law.ess_sup();
    solve_nested(
        |a| inner_min(law, wlaw, a, opts.inner_tol),
        target,
        law.mean().max(0.0),
        alpha_max,
        opts,
    )
}

/// Stochastic constant for `±1` increments, evaluated in bits:
/// `inf_{y > α} [f(y)/ln 2 + g_α(y)] = 1/c`.
pub fn stochastic_alpha_bernoulli(
    wlaw: &WindowLaw,
    c: f64,
    opts: &SolverOptions,
) -> Result<SolveResult, SolveError> {
    let target = check_c(c)?;
    solve_nested(
        |a| inner_min_bernoulli_bits(wlaw, a, opts.inner_tol),
        target,
        0.0,
        wlaw.finite_domain().hi,
        opts,
    )
}
