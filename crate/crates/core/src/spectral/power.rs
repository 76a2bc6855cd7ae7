use rand_distr::{Distribution, StandardNormal};

use crate::error::SpectralError;
use crate::simulator::rng::{stream, Purpose};

use super::SparseSymmetricSample;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerOptions {
    /// Relative change of the Rayleigh quotient of `Ŵ²` that ends the
    /// iteration.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PowerOptions {
    fn default() -> Self {
        PowerOptions {
            tol: 1e-12,
            max_iter: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormEstimate {
    pub norm: f64,
    pub iterations: usize,
    /// `‖Ŵ²v − ρv‖ / ρ` at the final unit vector `v`.
    pub residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) -> f64 {
    let len = dot(v, v).sqrt();
    if len > 0.0 {
        v.iter_mut().for_each(|x| *x /= len);
    }
    len
}

/// Spectral norm `‖Ŵ‖` by power iteration on `Ŵ²`.
///
/// Iterating on the square sidesteps the sign ambiguity when the extreme
/// eigenvalues are close to `±λ`. The start vector is a Gaussian vector
/// drawn from the sample's seed, so iteration counts are reproducible.
pub fn spectral_norm(sample: &SparseSymmetricSample, opts: &PowerOptions) -> Result<NormEstimate, SpectralError> {
    let n = sample.n();
    if sample.nnz() == 0 {
        return Ok(NormEstimate {
            norm: 0.0,
            iterations: 0,
            residual: 0.0,
        });
    }
    let mut rng = stream(sample.seed(), Purpose::StartVector);
    let mut v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
    normalize(&mut v);
    let mut u = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut rho_prev = f64::NAN;
    let max_iter = opts.max_iter.max(1);
    for iter in 1..=max_iter {
        sample.matvec(&v, &mut u);
        sample.matvec(&u, &mut w);
        // v is a unit vector, so vᵀŴ²v = ‖Ŵv‖².
        let rho = dot(&u, &u);
        if rho == 0.0 {
            // v fell into the kernel; no further progress is possible
            return Ok(NormEstimate {
                norm: 0.0,
                iterations: iter,
                residual: 0.0,
            });
        }
        let converged = (rho - rho_prev).abs() <= opts.tol * rho;
        if converged || iter == max_iter {
            let residual = w.iter().zip(&v).map(|(wi, vi)| (wi - rho * vi).powi(2)).sum::<f64>().sqrt() / rho;
            let est = NormEstimate {
                norm: rho.sqrt(),
                iterations: iter,
                residual,
            };
            if converged {
                return Ok(est);
            }
            return Err(SpectralError::NoConvergence {
                norm: est.norm,
                iterations: iter,
                residual,
            });
        }
        rho_prev = rho;
        std::mem::swap(&mut v, &mut w);
        normalize(&mut v);
    }
    unreachable!("the loop returns on its last iteration")
}
