use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::SpectralError;
use crate::rate_engine::IncrementLaw;
use crate::simulator::rng::{stream, Purpose};

/// Symmetric law of the matrix weights `w_ij`, with standard deviation `v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightLaw {
    /// `±v` with probability one half each.
    BernoulliPM1 { v: f64 },
    /// Centered normal with standard deviation `v`.
    Gaussian { v: f64 },
}

impl WeightLaw {
    pub fn v(&self) -> f64 {
        match *self {
            WeightLaw::BernoulliPM1 { v } | WeightLaw::Gaussian { v } => v,
        }
    }

    /// Law of `w²`, which drives the row statistics.
    pub fn squared_increment_law(&self) -> IncrementLaw {
        match *self {
            WeightLaw::BernoulliPM1 { v } => IncrementLaw::Degenerate { value: v * v },
            WeightLaw::Gaussian { v } => IncrementLaw::SquaredGaussianWeight {
                weight_variance: v * v,
            },
        }
    }

    fn draw<R: Rng>(&self, rng: &mut R) -> f64 {
        match *self {
            WeightLaw::BernoulliPM1 { v } => {
                if rng.random::<bool>() {
                    v
                } else {
                    -v
                }
            }
            WeightLaw::Gaussian { v } => {
                let z: f64 = StandardNormal.sample(rng);
                v * z
            }
        }
    }
}

/// A sampled symmetric matrix `W` with `a_ij ~ Bernoulli(p/N)` edges and
/// weights `w_ij`, stored row-wise with sorted column indices. The scaled
/// matrix is `Ŵ = W / √p`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymmetricSample {
    n: usize,
    p: f64,
    seed: u64,
    weight_law: WeightLaw,
    include_diagonal: bool,
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<f64>,
    edges: u64,
}

impl SparseSymmetricSample {
    /// Samples the upper triangle by geometric skips over its entries in
    /// row-major order, then mirrors it. Edge positions and weights read
    /// separate streams of `seed`, so changing the weight law never moves
    /// an edge.
    pub fn sample(
        n: usize,
        p: f64,
        weight_law: WeightLaw,
        seed: u64,
        include_diagonal: bool,
    ) -> Result<Self, SpectralError> {
        if n == 0 || n > u32::MAX as usize || !(p > 0.0) || p > n as f64 || !(weight_law.v() >= 0.0) {
            return Err(SpectralError::Dimension { n, p });
        }
        let q = p / n as f64;
        let off = usize::from(!include_diagonal);
        let row_len = |i: usize| n - i - off;
        let total: u64 = (0..n).map(|i| row_len(i) as u64).sum();

        let mut edge_rng = stream(seed, Purpose::Edges);
        let mut weight_rng = stream(seed, Purpose::Weights);
        let log_miss = (-q).ln_1p();
        let mut upper: Vec<(u32, u32, f64)> = Vec::new();
        let (mut row, mut row_start) = (0usize, 0u64);
        // Next candidate slot; f64 so that huge skips at tiny q cannot wrap.
        let mut next = 0.0f64;
        loop {
            if q < 1.0 {
                let u = 1.0 - edge_rng.random::<f64>();
                next += (u.ln() / log_miss).floor();
            }
            if next >= total as f64 {
                break;
            }
            let pos = next as u64;
            while pos >= row_start + row_len(row) as u64 {
                row_start += row_len(row) as u64;
                row += 1;
            }
            let col = row + off + (pos - row_start) as usize;
            upper.push((row as u32, col as u32, weight_law.draw(&mut weight_rng)));
            next += 1.0;
        }

        let mut degree = vec![0usize; n];
        for &(i, j, _) in &upper {
            degree[i as usize] += 1;
            if i != j {
                degree[j as usize] += 1;
            }
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        row_ptr.push(0);
        for d in &degree {
            row_ptr.push(row_ptr.last().unwrap() + d);
        }
        let nnz = *row_ptr.last().unwrap();
        let mut cols = vec![0u32; nnz];
        let mut vals = vec![0.0; nnz];
        let mut fill = row_ptr[..n].to_vec();
        // Row r first receives its mirrored entries (from rows i < r, in
        // increasing i) and then its own upper entries, so every row comes
        // out sorted.
        for &(i, j, w) in &upper {
            let (iu, ju) = (i as usize, j as usize);
            if iu != ju {
                cols[fill[ju]] = i;
                vals[fill[ju]] = w;
                fill[ju] += 1;
            }
            cols[fill[iu]] = j;
            vals[fill[iu]] = w;
            fill[iu] += 1;
        }
        Ok(SparseSymmetricSample {
            n,
            p,
            seed,
            weight_law,
            include_diagonal,
            row_ptr,
            cols,
            vals,
            edges: upper.len() as u64,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn weight_law(&self) -> WeightLaw {
        self.weight_law
    }

    pub fn includes_diagonal(&self) -> bool {
        self.include_diagonal
    }

    /// `1/√p`.
    pub fn scale(&self) -> f64 {
        1.0 / self.p.sqrt()
    }

    /// Stored nonzeros of the full symmetric matrix.
    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// Sampled entries of the upper triangle.
    pub fn edges(&self) -> u64 {
        self.edges
    }

    /// Columns and unscaled weights of row `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let (a, b) = (self.row_ptr[i], self.row_ptr[i + 1]);
        self.cols[a..b].iter().map(|&c| c as usize).zip(self.vals[a..b].iter().copied())
    }

    /// Standardized deviation of the upper-triangle edge count from its
    /// binomial mean.
    pub fn edge_count_zscore(&self) -> f64 {
        let n = self.n as f64;
        let slots = if self.include_diagonal {
            n * (n + 1.0) / 2.0
        } else {
            n * (n - 1.0) / 2.0
        };
        let q = (self.p / n).min(1.0);
        let var = slots * q * (1.0 - q);
        if var == 0.0 {
            return 0.0;
        }
        (self.edges as f64 - slots * q) / var.sqrt()
    }

    /// `y = Ŵ x`, summing each row left to right.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        let s = self.scale();
        for (i, yi) in y.iter_mut().enumerate() {
            let (a, b) = (self.row_ptr[i], self.row_ptr[i + 1]);
            let mut acc = 0.0;
            for k in a..b {
                acc += self.vals[k] * x[self.cols[k] as usize];
            }
            *yi = s * acc;
        }
    }

    /// The scaled matrix as dense rows; meant for small `N`.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let s = self.scale();
        let mut m = vec![vec![0.0; self.n]; self.n];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, w) in self.row(i) {
                row[j] = s * w;
            }
        }
        m
    }
}
