//! Accuracy, categorical cross-entropy and confusion matrices.
//!
//! The loss is natural-log (base e) cross-entropy averaged over samples,
//! with the true-class probability clipped from below by `epsilon`.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{argmax_class, LabelVector, PredictionMatrix};

/// Default clip floor for [`cross_entropy`].
pub const DEFAULT_EPSILON: f64 = 1e-12;

/// Counts of (true class, predicted class) pairs. Rows are true classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    classes: usize,
    counts: Vec<u64>,
}

impl ConfusionMatrix {
    pub fn from_counts(counts: Vec<Vec<u64>>) -> Self {
        let classes = counts.len();
        assert!(
            counts.iter().all(|r| r.len() == classes),
            "confusion matrix must be square"
        );
        Self {
            classes,
            counts: counts.into_iter().flatten().collect(),
        }
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn get(&self, truth: usize, predicted: usize) -> u64 {
        self.counts[truth * self.classes + predicted]
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.counts
            .chunks(self.classes)
            .map(<[u64]>::to_vec)
            .collect()
    }

    pub fn trace(&self) -> u64 {
        (0..self.classes).map(|c| self.get(c, c)).sum()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn row_sum(&self, truth: usize) -> u64 {
        (0..self.classes).map(|p| self.get(truth, p)).sum()
    }

    pub fn col_sum(&self, predicted: usize) -> u64 {
        (0..self.classes).map(|t| self.get(t, predicted)).sum()
    }

    /// `trace / total`, or 0 for an empty matrix.
    pub fn accuracy(&self) -> f64 {
        let total = self.total();
        if total == 0 {
            0.0
        } else {
            self.trace() as f64 / total as f64
        }
    }
}

/// Accuracy and loss of one prediction matrix against its labels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub accuracy: f64,
    pub loss: f64,
    pub n_samples: usize,
}

/// Precision and recall for one class. `None` marks an empty denominator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassStats {
    pub precision: Option<f64>,
    pub recall: Option<f64>,
}

fn correct_count(preds: &PredictionMatrix, labels: &LabelVector) -> usize {
    preds
        .iter_rows()
        .zip(labels.labels())
        .filter(|(row, &l)| argmax_class(row) == l)
        .count()
}

pub fn accuracy(preds: &PredictionMatrix, labels: &LabelVector) -> Result<f64> {
    labels.check_aligned(preds)?;
    Ok(correct_count(preds, labels) as f64 / preds.rows() as f64)
}

/// Mean of `-ln(max(p_true, epsilon))` over rows.
pub fn cross_entropy(preds: &PredictionMatrix, labels: &LabelVector, epsilon: f64) -> Result<f64> {
    labels.check_aligned(preds)?;
    let total: f64 = preds
        .iter_rows()
        .zip(labels.labels())
        .map(|(row, &l)| -row[l].max(epsilon).ln())
        .sum();
    Ok(total / preds.rows() as f64)
}

pub fn confusion(preds: &PredictionMatrix, labels: &LabelVector) -> Result<ConfusionMatrix> {
    labels.check_aligned(preds)?;
    let classes = preds.cols();
    let mut counts = vec![0u64; classes * classes];
    for (row, &truth) in preds.iter_rows().zip(labels.labels()) {
        counts[truth * classes + argmax_class(row)] += 1;
    }
    Ok(ConfusionMatrix { classes, counts })
}

pub fn per_class_summary(cm: &ConfusionMatrix) -> Vec<ClassStats> {
    (0..cm.classes())
        .map(|c| {
            let diag = cm.get(c, c) as f64;
            let ratio = |denom: u64| (denom > 0).then(|| diag / denom as f64);
            ClassStats {
                precision: ratio(cm.col_sum(c)),
                recall: ratio(cm.row_sum(c)),
            }
        })
        .collect()
}

/// Accuracy, loss and confusion matrix in one pass over the inputs.
pub fn summarize(
    preds: &PredictionMatrix,
    labels: &LabelVector,
    epsilon: f64,
) -> Result<(MetricSummary, ConfusionMatrix)> {
    let cm = confusion(preds, labels)?;
    let loss = cross_entropy(preds, labels, epsilon)?;
    let summary = MetricSummary {
        accuracy: cm.accuracy(),
        loss,
        n_samples: preds.rows(),
    };
    Ok((summary, cm))
}

/// Renders a fraction as a percentage with two decimals, e.g. `98.88%`.
pub fn format_percent(fraction: f64) -> String {
    format!("{:.2}%", fraction * 100.0)
}
