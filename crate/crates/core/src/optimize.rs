//! Derivative-free one-dimensional search used by the Legendre transforms and
//! the variational solvers.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Outcome of a golden-section search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoldenResult {
    pub x: f64,
    pub value: f64,
    pub iterations: usize,
}

/// Minimizes a unimodal function on `[lo, hi]` until the bracket is narrower
/// than `tol`.
///
/// Ties between the two probes move the bracket to the right, so on a flat
/// minimum the search settles on the largest minimizer. `+∞` values are
/// ordinary comparands.
pub fn golden_min<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> GoldenResult
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iterations = 0;
    while b - a > tol && iterations < 500 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        iterations += 1;
        // Probes collapse once the bracket reaches floating resolution.
        if c >= d {
            break;
        }
    }
    let (x, value) = if fc < fd { (c, fc) } else { (d, fd) };
    GoldenResult {
        x,
        value,
        iterations,
    }
}

/// Maximizes a unimodal function on `[lo, hi]`; see [`golden_min`].
pub fn golden_max<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> GoldenResult
where
    F: FnMut(f64) -> f64,
{
    let r = golden_min(|x| -f(x), lo, hi, tol);
    GoldenResult {
        value: -r.value,
        ..r
    }
}
