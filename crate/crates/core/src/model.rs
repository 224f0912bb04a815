//! Shared data types: class catalogs, prediction matrices, labels, weights
//! and member sets.
//!
//! Every type here is validated on construction and immutable afterwards.

use std::collections::HashSet;

use crate::error::{Error, Result};

/// Rows whose sum is already within this distance of 1 are left untouched
/// by [`PredictionMatrix::validate`]. Keeps validation idempotent.
const RENORM_SLACK: f64 = 1e-12;

/// Tolerance on `Σ w = 1` for a [`WeightVector`].
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

/// Default row-sum tolerance used when reading exported prediction files.
pub const DEFAULT_ROW_TOLERANCE: f64 = 1e-6;

/// Ordered class names. The order defines the column order of every
/// prediction matrix in a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassCatalog {
    names: Vec<String>,
}

impl ClassCatalog {
    pub fn new(names: Vec<String>) -> Result<Self> {
        if names.len() < 2 {
            return Err(Error::InvalidShape(format!(
                "a class catalog needs at least 2 classes, got {}",
                names.len()
            )));
        }
        let mut seen = HashSet::with_capacity(names.len());
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidShape(format!(
                    "duplicate class name `{name}`"
                )));
            }
        }
        Ok(Self { names })
    }

    /// `class_0`, `class_1`, ...
    pub fn numbered(classes: usize) -> Result<Self> {
        Self::new((0..classes).map(|c| format!("class_{c}")).collect())
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// An `N × C` row-stochastic matrix of one member's class probabilities.
///
/// Stored row-major. Every entry is finite and in `[0, 1]` and every row
/// sums to 1 (up to accumulation error).
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl PredictionMatrix {
    /// Validates raw row-major values.
    ///
    /// Rows whose sum lies within `tolerance` of 1 are renormalized to sum
    /// to 1; rows further off are rejected.
    pub fn validate(
        rows: usize,
        cols: usize,
        mut values: Vec<f64>,
        tolerance: f64,
    ) -> Result<Self> {
        if rows == 0 {
            return Err(Error::InvalidShape("prediction matrix has no rows".into()));
        }
        if cols < 2 {
            return Err(Error::InvalidShape(format!(
                "prediction matrix needs at least 2 columns, got {cols}"
            )));
        }
        if values.len() != rows * cols {
            return Err(Error::InvalidShape(format!(
                "{} values cannot fill a {rows}x{cols} matrix",
                values.len()
            )));
        }
        for (row, chunk) in values.chunks_exact_mut(cols).enumerate() {
            validate_row(row, chunk, tolerance)?;
        }
        Ok(Self { rows, cols, values })
    }

    /// Validates a nested row list. All rows must have the same length.
    pub fn from_rows(rows: &[Vec<f64>], tolerance: f64) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(Error::InvalidShape(format!(
                "row {i} has {} columns, expected {cols}",
                r.len()
            )));
        }
        let values = rows.iter().flatten().copied().collect();
        Self::validate(rows.len(), cols, values, tolerance)
    }

    /// Builds a matrix from values already known to be stochastic.
    pub(crate) fn from_trusted(rows: usize, cols: usize, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), rows * cols);
        Self { rows, cols, values }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.values.chunks_exact(self.cols)
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols + col]
    }
}

fn validate_row(row: usize, values: &mut [f64], tolerance: f64) -> Result<()> {
    for (col, &v) in values.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFinite { row, col });
        }
        if v < 0.0 {
            return Err(Error::NegativeEntry { row, col, value: v });
        }
    }
    let sum: f64 = values.iter().sum();
    if (sum - 1.0).abs() > tolerance {
        return Err(Error::RowSumOutOfTolerance {
            row,
            sum,
            tolerance,
        });
    }
    if (sum - 1.0).abs() > RENORM_SLACK {
        values.iter_mut().for_each(|v| *v /= sum);
    }
    Ok(())
}

/// Index of the largest entry; ties go to the lowest index.
pub fn argmax_class(row: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in row.iter().enumerate().skip(1) {
        if v > row[best] {
            best = i;
        }
    }
    best
}

/// Ground-truth class indices, aligned with the rows of a prediction matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelVector {
    labels: Vec<usize>,
    classes: usize,
}

impl LabelVector {
    pub fn new(labels: Vec<usize>, classes: usize) -> Result<Self> {
        if classes < 2 {
            return Err(Error::InvalidShape(format!(
                "labels need at least 2 classes, got {classes}"
            )));
        }
        if let Some(&value) = labels.iter().find(|&&l| l >= classes) {
            return Err(Error::OutOfRange { value, classes });
        }
        Ok(Self { labels, classes })
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Number of samples per class.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.classes];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    pub(crate) fn check_aligned(&self, preds: &PredictionMatrix) -> Result<()> {
        if preds.rows() != self.len() {
            return Err(Error::LengthMismatch {
                expected: preds.rows(),
                actual: self.len(),
            });
        }
        if preds.cols() != self.classes {
            return Err(Error::ShapeMismatch(format!(
                "matrix has {} columns but labels cover {} classes",
                preds.cols(),
                self.classes
            )));
        }
        Ok(())
    }
}

/// Nonnegative member weights summing to 1: a point on the probability
/// simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    weights: Vec<f64>,
}

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidWeights("no weights".into()));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidWeights(format!(
                "weight {w} is negative or non-finite"
            )));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(Error::InvalidWeights(format!(
                "weights sum to {sum}, not 1"
            )));
        }
        Ok(Self { weights })
    }

    /// All mass on member `k`.
    pub fn vertex(k: usize, members: usize) -> Self {
        assert!(k < members, "vertex {k} out of range for {members} members");
        let mut weights = vec![0.0; members];
        weights[k] = 1.0;
        Self { weights }
    }

    pub fn uniform(members: usize) -> Self {
        assert!(members > 0);
        Self {
            weights: vec![1.0 / members as f64; members],
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// One base learner: its name and its prediction matrices on the
/// validation and test splits.
#[derive(Debug, Clone, PartialEq)]
pub struct Member {
    pub name: String,
    pub validation: PredictionMatrix,
    pub test: PredictionMatrix,
}

/// The collection of base learners being ensembled.
#[derive(Debug, Clone, PartialEq)]
pub struct MemberSet {
    catalog: ClassCatalog,
    members: Vec<Member>,
}

impl MemberSet {
    pub fn new(catalog: ClassCatalog, members: Vec<Member>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptyMemberSet);
        }
        let classes = catalog.len();
        let n_val = members[0].validation.rows();
        let n_test = members[0].test.rows();
        let mut names = HashSet::new();
        for m in &members {
            let inconsistent = |detail: String| Error::InconsistentShapes {
                member: m.name.clone(),
                detail,
            };
            if !names.insert(m.name.as_str()) {
                return Err(inconsistent("duplicate member name".into()));
            }
            for (split, matrix) in [("validation", &m.validation), ("test", &m.test)] {
                if matrix.cols() != classes {
                    return Err(inconsistent(format!(
                        "{split} matrix has {} columns, catalog has {classes} classes",
                        matrix.cols()
                    )));
                }
            }
            if m.validation.rows() != n_val {
                return Err(inconsistent(format!(
                    "{} validation rows, expected {n_val}",
                    m.validation.rows()
                )));
            }
            if m.test.rows() != n_test {
                return Err(inconsistent(format!(
                    "{} test rows, expected {n_test}",
                    m.test.rows()
                )));
            }
        }
        Ok(Self { catalog, members })
    }

    pub fn catalog(&self) -> &ClassCatalog {
        &self.catalog
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.members.iter().map(|m| m.name.as_str())
    }

    pub fn validation_matrices(&self) -> Vec<&PredictionMatrix> {
        self.members.iter().map(|m| &m.validation).collect()
    }

    pub fn test_matrices(&self) -> Vec<&PredictionMatrix> {
        self.members.iter().map(|m| &m.test).collect()
    }

    pub fn validation_rows(&self) -> usize {
        self.members[0].validation.rows()
    }

    pub fn test_rows(&self) -> usize {
        self.members[0].test.rows()
    }
}
