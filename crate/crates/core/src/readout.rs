//! Readout confusion and its mitigation.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::{herm_eig, ComplexMatrix, Lu, C64};
use crate::rng::SplitMix64;
use crate::{Error, Result};

/// Row-stochastic matrix `C[true][recorded]` of classification
/// probabilities, so recorded frequencies are `Cᵀ p_true`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "ConfusionRepr", into = "ConfusionRepr"))]
pub struct ConfusionMatrix {
    n: usize,
    entries: Vec<f64>,
    labels: Vec<String>,
}

/// Serialized form: row-major rows plus outcome labels.
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
#[derive(Clone, Debug)]
pub struct ConfusionRepr {
    #[cfg_attr(feature = "serde", serde(default))]
    pub labels: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl TryFrom<ConfusionRepr> for ConfusionMatrix {
    type Error = Error;
    fn try_from(r: ConfusionRepr) -> Result<Self> {
        let m = Self::new(r.rows)?;
        if r.labels.is_empty() {
            Ok(m)
        } else {
            m.with_labels(r.labels)
        }
    }
}

impl From<ConfusionMatrix> for ConfusionRepr {
    fn from(m: ConfusionMatrix) -> Self {
        ConfusionRepr {
            rows: m.rows(),
            labels: m.labels,
        }
    }
}

fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{i}")).collect()
}

impl ConfusionMatrix {
    /// `rows[i][j]` is the probability of recording `j` given true outcome `i`.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidNoise("empty confusion matrix".into()));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidNoise(format!(
                    "confusion row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(x) = row.iter().find(|x| !(0.0..=1.0).contains(*x)) {
                return Err(Error::InvalidNoise(format!("confusion entry {x} outside [0, 1]")));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidNoise(format!("confusion row {i} sums to {sum}")));
            }
            entries.extend_from_slice(row);
        }
        Ok(Self {
            n,
            entries,
            labels: default_labels(n),
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::InvalidNoise(format!(
                "{} labels for {} outcomes",
                labels.len(),
                self.n
            )));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = alloc::vec![0.0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1.0;
        }
        Self {
            n,
            entries,
            labels: default_labels(n),
        }
    }

    /// Symmetric confusion with `accuracy` on the diagonal and the remainder
    /// spread evenly over the other outcomes.
    pub fn uniform(n: usize, accuracy: f64) -> Result<Self> {
        let off = if n > 1 { (1.0 - accuracy) / (n - 1) as f64 } else { 0.0 };
        Self::new(
            (0..n)
                .map(|i| (0..n).map(|j| if i == j { accuracy } else { off }).collect())
                .collect(),
        )
    }

    pub fn outcomes(&self) -> usize {
        self.n
    }

    pub fn get(&self, true_outcome: usize, recorded: usize) -> f64 {
        self.entries[true_outcome * self.n + recorded]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.entries == Self::identity(self.n).entries
    }

    /// Samples the recorded outcome for a true outcome.
    pub fn corrupt(&self, true_outcome: usize, rng: &mut SplitMix64) -> usize {
        rng.categorical(&self.entries[true_outcome * self.n..(true_outcome + 1) * self.n])
    }

    /// Recorded distribution `Cᵀ p`.
    pub fn apply(&self, p: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self.get(i, j) * p[i]).sum())
            .collect()
    }

    /// 2-norm condition number.
    pub fn condition_number(&self) -> f64 {
        let n = self.n;
        let gram = ComplexMatrix::from_fn(n, |i, j| {
            C64::new((0..n).map(|k| self.get(k, i) * self.get(k, j)).sum(), 0.0)
        });
        match herm_eig(&gram) {
            Ok(e) => {
                let lo = e.values[0].max(0.0).sqrt();
                let hi = e.values[n - 1].max(0.0).sqrt();
                if lo <= hi * 1e-14 {
                    f64::INFINITY
                } else {
                    hi / lo
                }
            }
            Err(_) => f64::INFINITY,
        }
    }
}

/// Mitigated outcome distribution with its conditioning diagnostic.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MitigatedDistribution {
    pub probabilities: Vec<f64>,
    pub condition_number: f64,
}

/// Inverts the confusion on empirical frequencies, then projects onto the
/// probability simplex.
pub fn mitigate_readout(counts: &[usize], confusion: &ConfusionMatrix) -> Result<MitigatedDistribution> {
    let n = confusion.outcomes();
    if counts.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: counts.len(),
        });
    }
    let shots: usize = counts.iter().sum();
    if shots == 0 {
        return Err(Error::InvalidState("no shots recorded".into()));
    }
    let cond = confusion.condition_number();
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(cond < 1e12) {
        return Err(Error::Singular(cond));
    }
    let ct = ComplexMatrix::from_fn(n, |i, j| C64::new(confusion.get(j, i), 0.0));
    let freq: Vec<C64> = counts
        .iter()
        .map(|&k| C64::new(k as f64 / shots as f64, 0.0))
        .collect();
    let raw = Lu::new(&ct)
        .map_err(|_| Error::Singular(cond))?
        .solve(&freq)?;
    let raw: Vec<f64> = raw.iter().map(|z| z.re).collect();
    Ok(MitigatedDistribution {
        probabilities: project_to_simplex(&raw),
        condition_number: cond,
    })
}

/// Euclidean projection onto `{p ≥ 0, Σp = 1}`.
pub fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut tau = 0.0;
    for (k, &x) in sorted.iter().enumerate() {
        cum += x;
        let t = (cum - 1.0) / (k + 1) as f64;
        if x - t > 0.0 {
            tau = t;
        }
    }
    v.iter().map(|&x| (x - tau).max(0.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::vec;

    #[test]
    fn validation() {
        assert!(ConfusionMatrix::new(vec![vec![0.9, 0.2], vec![0.1, 0.9]]).is_err());
        assert!(ConfusionMatrix::new(vec![vec![1.1, -0.1], vec![0.0, 1.0]]).is_err());
        assert!(ConfusionMatrix::new(vec![vec![1.0]]).is_ok());
        assert!(ConfusionMatrix::new(vec![vec![0.5, 0.5]]).is_err());
        assert!(ConfusionMatrix::identity(3).is_identity());
    }

    #[test]
    fn identity_mitigation_is_a_no_op() {
        let m = mitigate_readout(&[30, 70], &ConfusionMatrix::identity(2)).unwrap();
        assert!((m.probabilities[0] - 0.3).abs() < 1e-15);
        assert!((m.condition_number - 1.0).abs() < 1e-12);
    }

    #[test]
    fn singular_confusion_is_rejected() {
        let c = ConfusionMatrix::new(vec![vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        assert!(matches!(mitigate_readout(&[1, 1], &c), Err(Error::Singular(_))));
    }

    #[test]
    fn forward_then_inverse_recovers_truth() {
        let c = ConfusionMatrix::new(vec![vec![0.95, 0.05], vec![0.1, 0.9]]).unwrap();
        let truth = [0.3, 0.7];
        let shots = 100_000usize;
        let mut rng = SplitMix64::new(12);
        let mut counts = [0usize; 2];
        for _ in 0..shots {
            let t = rng.categorical(&truth);
            counts[c.corrupt(t, &mut rng)] += 1;
        }
        let m = mitigate_readout(&counts, &c).unwrap();
        // Standard error inflated by the inverse's gain (≤ 1/(1 − 0.15)).
        let sigma = (0.3f64 * 0.7 / shots as f64).sqrt() / 0.85;
        assert!((m.probabilities[0] - 0.3).abs() < 3.0 * sigma, "{:?}", m.probabilities);
    }

    #[test]
    fn simplex_projection() {
        assert_eq!(project_to_simplex(&[0.2, 0.8]), vec![0.2, 0.8]);
        let p = project_to_simplex(&[1.2, -0.2]);
        assert!((p[0] - 1.0).abs() < 1e-15 && p[1] == 0.0);
        let p = project_to_simplex(&[0.6, 0.6, -0.2]);
        assert!((p[0] - 0.5).abs() < 1e-15 && (p[1] - 0.5).abs() < 1e-15 && p[2] == 0.0);
    }

    #[test]
    fn misclassification_rate_matches_matrix() {
        let c = ConfusionMatrix::uniform(3, 0.917).unwrap();
        let mut rng = SplitMix64::new(4);
        let n = 50_000;
        let wrong = (0..n).filter(|_| c.corrupt(1, &mut rng) != 1).count();
        let rate = wrong as f64 / n as f64;
        let sigma = (0.083f64 * 0.917 / n as f64).sqrt();
        assert!((rate - 0.083).abs() < 3.0 * sigma, "{rate}");
    }
}
