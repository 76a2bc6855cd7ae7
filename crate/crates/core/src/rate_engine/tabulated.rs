//! Cumulant generating functions given as samples on a grid.

use std::io::Read;

use serde::Deserialize;

use crate::error::RateError;

use super::legendre::Cgf;
use super::Interval;

/// A convex CGF sampled at strictly increasing points and interpolated with
/// a monotone (Fritsch–Carlson) cubic. The table is shifted so that the
/// interpolant vanishes at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedCgf {
    tau: Vec<f64>,
    log_phi: Vec<f64>,
    slopes: Vec<f64>,
}

#[derive(Deserialize)]
struct Row {
    tau: f64,
    logphi: f64,
}

impl TabulatedCgf {
    pub fn from_points(tau: Vec<f64>, log_phi: Vec<f64>) -> Result<Self, RateError> {
        if tau.len() != log_phi.len() {
            return Err(RateError::Table("column lengths differ".into()));
        }
        if tau.len() < 3 {
            return Err(RateError::Table("need at least three grid points".into()));
        }
        if tau.iter().chain(&log_phi).any(|v| !v.is_finite()) {
            return Err(RateError::Table("non-finite entry".into()));
        }
        if tau.windows(2).any(|w| w[1] <= w[0]) {
            return Err(RateError::Table("tau must be strictly increasing".into()));
        }
        if tau[0] > 0.0 || *tau.last().unwrap() <= 0.0 {
            return Err(RateError::Table("grid must contain 0 and a positive tau".into()));
        }
        let secants: Vec<f64> = tau
            .windows(2)
            .zip(log_phi.windows(2))
            .map(|(t, v)| (v[1] - v[0]) / (t[1] - t[0]))
            .collect();
        for (i, s) in secants.windows(2).enumerate() {
            if s[1] < s[0] - 1e-12 * (1.0 + s[0].abs()) {
                return Err(RateError::NotConvex { at: tau[i + 1] });
            }
        }
        let slopes = pchip_slopes(&tau, &secants);
        let mut table = TabulatedCgf {
            tau,
            log_phi,
            slopes,
        };
        let shift = table.interpolate(0.0);
        for v in &mut table.log_phi {
            *v -= shift;
        }
        Ok(table)
    }

    /// Reads a two-column CSV with header `tau,logphi`.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self, RateError> {
        let mut rdr = csv::Reader::from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| RateError::Table(e.to_string()))?
            .clone();
        if headers.len() != 2 || &headers[0] != "tau" || &headers[1] != "logphi" {
            return Err(RateError::Table(format!(
                "expected header `tau,logphi`, found `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut tau = Vec::new();
        let mut log_phi = Vec::new();
        for row in rdr.deserialize::<Row>() {
            let row = row.map_err(|e| RateError::Table(e.to_string()))?;
            tau.push(row.tau);
            log_phi.push(row.logphi);
        }
        Self::from_points(tau, log_phi)
    }

    pub fn grid(&self) -> (&[f64], &[f64]) {
        (&self.tau, &self.log_phi)
    }

    fn segment(&self, t: f64) -> usize {
        let k = self.tau.partition_point(|&x| x <= t);
        k.clamp(1, self.tau.len() - 1) - 1
    }

    fn interpolate(&self, t: f64) -> f64 {
        let k = self.segment(t);
        let h = self.tau[k + 1] - self.tau[k];
        let s = (t - self.tau[k]) / h;
        let (s2, s3) = (s * s, s * s * s);
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * self.log_phi[k]
            + h10 * h * self.slopes[k]
            + h01 * self.log_phi[k + 1]
            + h11 * h * self.slopes[k + 1]
    }

    fn derivative(&self, t: f64) -> f64 {
        let k = self.segment(t);
        let h = self.tau[k + 1] - self.tau[k];
        let s = (t - self.tau[k]) / h;
        let s2 = s * s;
        let d00 = (6.0 * s2 - 6.0 * s) / h;
        let d10 = 3.0 * s2 - 4.0 * s + 1.0;
        let d01 = (-6.0 * s2 + 6.0 * s) / h;
        let d11 = 3.0 * s2 - 2.0 * s;
        d00 * self.log_phi[k]
            + d10 * self.slopes[k]
            + d01 * self.log_phi[k + 1]
            + d11 * self.slopes[k + 1]
    }
}

impl Cgf for TabulatedCgf {
    fn value(&self, t: f64) -> f64 {
        if self.domain().contains(t) {
            self.interpolate(t)
        } else {
            f64::INFINITY
        }
    }

    fn domain(&self) -> Interval {
        Interval::new(self.tau[0], *self.tau.last().unwrap())
    }

    fn slope(&self, t: f64) -> f64 {
        let d = self.domain();
        self.derivative(t.clamp(d.lo, d.hi))
    }
}

fn pchip_slopes(x: &[f64], delta: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let mut m = vec![0.0; n];
    for k in 1..n - 1 {
        if delta[k - 1] * delta[k] > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            m[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
        }
    }
    m[0] = end_slope(h[0], h.get(1).copied().unwrap_or(h[0]), delta[0], delta.get(1).copied().unwrap_or(delta[0]));
    m[n - 1] = end_slope(
        h[n - 2],
        if n > 2 { h[n - 3] } else { h[n - 2] },
        delta[n - 2],
        if n > 2 { delta[n - 3] } else { delta[n - 2] },
    );
    m
}

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if m.signum() != d0.signum() {
        0.0
    } else if d0.signum() != d1.signum() && m.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_table(shift: f64) -> TabulatedCgf {
        let tau: Vec<f64> = (-40..=80).map(|i| i as f64 * 0.05).collect();
        let v = tau.iter().map(|t| 0.5 * t * t + shift).collect();
        TabulatedCgf::from_points(tau, v).unwrap()
    }

    #[test]
    fn zero_is_enforced_by_shift() {
        let t = gaussian_table(0.37);
        assert!(t.value(0.0).abs() < 1e-12);
        assert!((t.value(1.0) - 0.5).abs() < 1e-4);
        assert!((t.slope(1.0) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn outside_grid_is_infinite() {
        let t = gaussian_table(0.0);
        assert_eq!(t.value(4.5), f64::INFINITY);
        assert_eq!(t.value(-2.5), f64::INFINITY);
    }

    #[test]
    fn rejects_concave_and_unsorted() {
        let tau = vec![-1.0, 0.0, 1.0, 2.0];
        assert!(matches!(
            TabulatedCgf::from_points(tau.clone(), vec![0.0, 0.0, 1.0, 1.5]),
            Err(RateError::NotConvex { .. })
        ));
        assert!(TabulatedCgf::from_points(vec![0.0, 2.0, 1.0], vec![0.0, 1.0, 2.0]).is_err());
        assert!(TabulatedCgf::from_points(vec![0.5, 1.0, 2.0], vec![0.0, 1.0, 2.0]).is_err());
    }

    #[test]
    fn reads_csv() {
        let csv = "tau,logphi\n-1,0.5\n0,0\n1,0.5\n2,2\n";
        let t = TabulatedCgf::from_csv(csv.as_bytes()).unwrap();
        assert_eq!(t.grid().0, &[-1.0, 0.0, 1.0, 2.0]);
        assert!(t.value(0.0).abs() < 1e-15);
        let bad = "t,logphi\n0,0\n1,1\n2,3\n";
        assert!(TabulatedCgf::from_csv(bad.as_bytes()).is_err());
    }
}
