//! Numeric Legendre transforms of convex cumulant generating functions.

use crate::error::RateError;
use crate::optimize::golden_max;

use super::Interval;

/// Past this argument the expanding bracket gives up and reports an
/// unbounded transform; `e^t` overflows shortly after.
pub const EXPANSION_LIMIT: f64 = 700.0;

/// A convex function of one variable with a known domain, typically
/// `t ↦ log E e^{tX}`.
pub trait Cgf {
    /// Value at `t`; `+∞` outside the domain.
    fn value(&self, t: f64) -> f64;

    fn domain(&self) -> Interval;

    /// Derivative at `t`. The default is a central difference kept inside
    /// the domain.
    fn slope(&self, t: f64) -> f64 {
        let d = self.domain();
        let h = 1e-6 * t.abs().max(1.0);
        let lo = (t - h).max(d.lo);
        let hi = (t + h).min(d.hi);
        (self.value(hi) - self.value(lo)) / (hi - lo)
    }
}

impl<C: Cgf + ?Sized> Cgf for &C {
    fn value(&self, t: f64) -> f64 {
        (**self).value(t)
    }
    fn domain(&self) -> Interval {
        (**self).domain()
    }
    fn slope(&self, t: f64) -> f64 {
        (**self).slope(t)
    }
}

/// Adapts a closure into a [`Cgf`] with a numeric derivative.
pub struct FnCgf<F> {
    f: F,
    domain: Interval,
}

impl<F: Fn(f64) -> f64> FnCgf<F> {
    pub fn new(f: F, domain: Interval) -> Self {
        FnCgf { f, domain }
    }
}

impl<F: Fn(f64) -> f64> Cgf for FnCgf<F> {
    fn value(&self, t: f64) -> f64 {
        if self.domain.contains(t) {
            (self.f)(t)
        } else {
            f64::INFINITY
        }
    }
    fn domain(&self) -> Interval {
        self.domain
    }
}

/// `t ↦ cgf(−t)`; turns a left-side supremum into a right-side one.
pub(crate) struct Reflected<C>(pub C);

impl<C: Cgf> Cgf for Reflected<C> {
    fn value(&self, t: f64) -> f64 {
        self.0.value(-t)
    }
    fn domain(&self) -> Interval {
        let d = self.0.domain();
        Interval::new(-d.hi, -d.lo)
    }
    fn slope(&self, t: f64) -> f64 {
        -self.0.slope(-t)
    }
}

/// `sup_{t ∈ bracket} [y t − cgf(t)]` to absolute accuracy `tol`.
///
/// A bracket with an infinite upper end is explored by doubling its width
/// until the objective's slope turns non-positive. If the slope is still
/// positive past [`EXPANSION_LIMIT`] on an unbounded domain the transform is
/// reported as `+∞`.
pub fn legendre<C: Cgf + ?Sized>(
    cgf: &C,
    y: f64,
    bracket: Interval,
    tol: f64,
) -> Result<f64, RateError> {
    if !(tol > 0.0) {
        return Err(RateError::Tolerance(tol));
    }
    let domain = cgf.domain();
    if !bracket.lo.is_finite() || !(bracket.lo < bracket.hi) || !domain.contains(bracket.lo) {
        return Err(RateError::Bracket {
            lo: bracket.lo,
            hi: bracket.hi,
        });
    }
    let upper = bracket.hi.min(domain.hi);
    chord_test(cgf, bracket.lo, upper.min(bracket.lo + 1.0))?;
    let (t_lo, t_hi) = match expand(cgf, y, bracket.lo, upper) {
        Some(b) => b,
        None => return Ok(f64::INFINITY),
    };
    chord_test(cgf, bracket.lo, t_hi)?;
    Ok(maximize(cgf, y, t_lo, t_hi, tol))
}

/// Same as [`legendre`] over `[0, domain.hi)` for inputs known to be convex.
pub(crate) fn sup_right<C: Cgf + ?Sized>(cgf: &C, y: f64, tol: f64) -> f64 {
    match expand(cgf, y, 0.0, cgf.domain().hi) {
        Some((t_lo, t_hi)) => maximize(cgf, y, t_lo, t_hi, tol),
        None => f64::INFINITY,
    }
}

/// Locates `[t_lo, t_hi]` containing the maximizer, or `None` when the
/// objective is still increasing at the expansion limit.
fn expand<C: Cgf + ?Sized>(cgf: &C, y: f64, lo: f64, upper: f64) -> Option<(f64, f64)> {
    if y - cgf.slope(lo) <= 0.0 {
        return Some((lo, lo));
    }
    let mut width = 1.0;
    let mut t_lo = lo;
    loop {
        let t = lo + width;
        if t >= upper {
            return Some((t_lo, upper));
        }
        if y - cgf.slope(t) <= 0.0 {
            return Some((t_lo, t));
        }
        if upper.is_infinite() && t > EXPANSION_LIMIT {
            return None;
        }
        t_lo = t;
        width *= 2.0;
    }
}

fn maximize<C: Cgf + ?Sized>(cgf: &C, y: f64, t_lo: f64, t_hi: f64, tol: f64) -> f64 {
    let obj = |t: f64| {
        let v = y * t - cgf.value(t);
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    };
    let ends = obj(t_lo).max(obj(t_hi));
    if t_hi <= t_lo {
        return ends;
    }
    golden_max(obj, t_lo, t_hi, tol).value.max(ends)
}

fn chord_test<C: Cgf + ?Sized>(cgf: &C, a: f64, b: f64) -> Result<(), RateError> {
    if !(b > a) {
        return Ok(());
    }
    let (fa, fb) = (cgf.value(a), cgf.value(b));
    if !fa.is_finite() || !fb.is_finite() {
        return Ok(());
    }
    for frac in [0.25, 0.5, 0.75] {
        let t = a + frac * (b - a);
        let chord = (1.0 - frac) * fa + frac * fb;
        if cgf.value(t) > chord + 1e-10 * (1.0 + chord.abs()) {
            return Err(RateError::NotConvex { at: t });
        }
    }
    Ok(())
}
