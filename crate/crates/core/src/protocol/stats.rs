use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::RunRecord;
use crate::linalg::ComplexMatrix;

/// Distribution of repetitions-to-success over non-blind runs.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RepetitionStats {
    /// `(repetitions, count)` ascending.
    pub histogram: Vec<(usize, usize)>,
    /// Fraction of successful runs finishing within each repetition count.
    pub cdf: Vec<(usize, f64)>,
    pub mean: Option<f64>,
    pub std_error: Option<f64>,
    pub successes: usize,
    pub failures: usize,
}

pub fn repetition_stats(records: &[RunRecord]) -> RepetitionStats {
    let reps: Vec<usize> = records.iter().filter_map(|r| r.repetitions_to_success).collect();
    let failures = records.len() - reps.len();
    let max = reps.iter().copied().max().unwrap_or(0);
    let mut counts = vec![0usize; max + 1];
    for &r in &reps {
        counts[r] += 1;
    }
    let histogram: Vec<(usize, usize)> = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(r, &c)| (r, c))
        .collect();
    let n = reps.len();
    let mut cum = 0usize;
    let cdf = histogram
        .iter()
        .map(|&(r, c)| {
            cum += c;
            (r, cum as f64 / n as f64)
        })
        .collect();
    let (mean, std_error) = if n == 0 {
        (None, None)
    } else {
        let m = reps.iter().sum::<usize>() as f64 / n as f64;
        let var = if n > 1 {
            reps.iter().map(|&r| (r as f64 - m).powi(2)).sum::<f64>() / (n - 1) as f64
        } else {
            0.0
        };
        (Some(m), Some((var / n as f64).sqrt()))
    };
    RepetitionStats {
        histogram,
        cdf,
        mean,
        std_error,
        successes: n,
        failures,
    }
}

impl RepetitionStats {
    /// Maximum-likelihood geometric parameter on `{1, 2, …}`: `1/mean`.
    pub fn fitted_geometric_p(&self) -> Option<f64> {
        self.mean.map(|m| 1.0 / m)
    }

    /// Kolmogorov–Smirnov distance between the empirical CDF and the
    /// geometric CDF `1 − (1 − p)^n`.
    pub fn ks_distance_geometric(&self, p: f64) -> f64 {
        let max = self.histogram.last().map(|h| h.0).unwrap_or(0);
        let mut d: f64 = 0.0;
        let mut idx = 0;
        let mut emp = 0.0;
        for n in 1..=max {
            if idx < self.cdf.len() && self.cdf[idx].0 == n {
                emp = self.cdf[idx].1;
                idx += 1;
            }
            let geo = 1.0 - (1.0 - p).powi(n as i32);
            d = d.max((emp - geo).abs());
        }
        d
    }

    /// Coefficient of determination of `ln(count)` against repetitions over
    /// histogram bins with at least `min_count` entries.
    pub fn log_linear_r2(&self, min_count: usize) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .histogram
            .iter()
            .filter(|h| h.1 >= min_count)
            .map(|&(r, c)| (r as f64, (c as f64).ln()))
            .collect();
        if pts.len() < 3 {
            return None;
        }
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
        if syy == 0.0 {
            return Some(1.0);
        }
        Some(sxy * sxy / (sxx * syy))
    }
}

/// Running elementwise mean and variance of density matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct StateMoments {
    count: usize,
    sum: Vec<[f64; 2]>,
    sum_sq: Vec<[f64; 2]>,
    dim: usize,
}

impl StateMoments {
    pub fn new(dim: usize) -> Self {
        Self {
            count: 0,
            sum: vec![[0.0; 2]; dim * dim],
            sum_sq: vec![[0.0; 2]; dim * dim],
            dim,
        }
    }

    pub fn push(&mut self, m: &ComplexMatrix) {
        self.count += 1;
        for (k, z) in m.as_slice().iter().enumerate() {
            self.sum[k][0] += z.re;
            self.sum[k][1] += z.im;
            self.sum_sq[k][0] += z.re * z.re;
            self.sum_sq[k][1] += z.im * z.im;
        }
    }

    /// Combines two accumulators; the result does not depend on how samples
    /// were split as long as merges happen in a fixed order.
    pub fn merge(&mut self, other: &StateMoments) {
        self.count += other.count;
        for k in 0..self.sum.len() {
            for c in 0..2 {
                self.sum[k][c] += other.sum[k][c];
                self.sum_sq[k][c] += other.sum_sq[k][c];
            }
        }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn mean(&self) -> ComplexMatrix {
        let n = self.count.max(1) as f64;
        ComplexMatrix::from_fn(self.dim, |i, j| {
            let s = self.sum[i * self.dim + j];
            crate::linalg::c(s[0] / n, s[1] / n)
        })
    }

    /// Standard error of the mean for the real and imaginary part of every
    /// entry (row-major).
    pub fn standard_error(&self) -> Vec<[f64; 2]> {
        let n = self.count as f64;
        self.sum
            .iter()
            .zip(&self.sum_sq)
            .map(|(s, q)| {
                let mut out = [0.0; 2];
                for c in 0..2 {
                    let m = s[c] / n;
                    let var = if self.count > 1 {
                        ((q[c] - n * m * m) / (n - 1.0)).max(0.0)
                    } else {
                        0.0
                    };
                    out[c] = (var / n).sqrt();
                }
                out
            })
            .collect()
    }
}
