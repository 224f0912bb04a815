//! Synthetic labels and base-learner predictions with exact, controllable
//! accuracy.
//!
//! A generated member is correct on exactly `round(target_accuracy * N)`
//! rows. Correct rows put `confidence` on the true class; wrong rows put it
//! on a seeded wrong class. The remaining mass is spread evenly over the
//! other `C - 1` classes.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{LabelVector, PredictionMatrix};
use crate::rng::stream_rng;

/// Tolerance used when validating generated rows.
const GEN_TOLERANCE: f64 = 1e-9;

// Stream ids keep the draws for different purposes independent.
const STREAM_MASK: u64 = 1;
const STREAM_WRONG: u64 = 2;
const GROUP_SEED_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthMemberSpec {
    pub target_accuracy: f64,
    /// Probability mass on the emitted argmax class; must exceed `1/C`.
    pub confidence: f64,
    /// Members sharing a group are correct on nested row sets drawn from
    /// one shared permutation (identical sets at equal accuracy).
    pub error_correlation_group: Option<u64>,
}

impl SynthMemberSpec {
    pub fn new(target_accuracy: f64, confidence: f64) -> Self {
        Self {
            target_accuracy,
            confidence,
            error_correlation_group: None,
        }
    }

    pub fn in_group(mut self, group: u64) -> Self {
        self.error_correlation_group = Some(group);
        self
    }
}

/// `n` labels drawn uniformly over `c` classes.
///
/// No balancing: with `n` close to `c` some classes may be absent.
pub fn gen_labels(n: usize, c: usize, seed: u64) -> Result<LabelVector> {
    if c < 2 || n < c {
        return Err(Error::InvalidShape(format!(
            "need n >= c >= 2, got n = {n}, c = {c}"
        )));
    }
    let mut rng = stream_rng(seed, 0);
    let labels = (0..n).map(|_| rng.random_range(0..c)).collect();
    LabelVector::new(labels, c)
}

fn check_confidence(confidence: f64, classes: usize) -> Result<()> {
    if confidence.is_finite() && confidence > 1.0 / classes as f64 && confidence <= 1.0 {
        Ok(())
    } else {
        Err(Error::InfeasibleSpec(format!(
            "confidence {confidence} must lie in (1/{classes}, 1]"
        )))
    }
}

/// Row with `peak` on `class` and the rest spread evenly.
fn peaked_row(out: &mut [f64], class: usize, peak: f64) {
    let rest = (1.0 - peak) / (out.len() - 1) as f64;
    out.fill(rest);
    out[class] = peak;
}

fn wrong_class<R: Rng>(rng: &mut R, truth: usize, classes: usize) -> usize {
    let r = rng.random_range(0..classes - 1);
    if r >= truth {
        r + 1
    } else {
        r
    }
}

/// Boolean mask with exactly `count` true rows, chosen by shuffling with
/// `seed`. Masks from the same seed are nested as `count` grows.
fn correct_mask(n: usize, count: usize, seed: u64) -> Vec<bool> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut stream_rng(seed, STREAM_MASK));
    let mut mask = vec![false; n];
    for &i in &order[..count] {
        mask[i] = true;
    }
    mask
}

pub fn gen_member(
    labels: &LabelVector,
    spec: &SynthMemberSpec,
    seed: u64,
) -> Result<PredictionMatrix> {
    let classes = labels.classes();
    check_confidence(spec.confidence, classes)?;
    if !(0.0..=1.0).contains(&spec.target_accuracy) {
        return Err(Error::InfeasibleSpec(format!(
            "target accuracy {} outside [0, 1]",
            spec.target_accuracy
        )));
    }
    let n = labels.len();
    if n == 0 {
        return Err(Error::InvalidShape("no labels".into()));
    }
    let count = (spec.target_accuracy * n as f64).round() as usize;
    let mask_seed = match spec.error_correlation_group {
        Some(group) => group ^ GROUP_SEED_SALT,
        None => seed,
    };
    let mask = correct_mask(n, count, mask_seed);

    let mut wrong_rng = stream_rng(seed, STREAM_WRONG);
    let mut values = vec![0.0; n * classes];
    for ((row, &truth), &correct) in values
        .chunks_exact_mut(classes)
        .zip(labels.labels())
        .zip(&mask)
    {
        let class = if correct {
            truth
        } else {
            wrong_class(&mut wrong_rng, truth, classes)
        };
        peaked_row(row, class, spec.confidence);
    }
    PredictionMatrix::validate(n, classes, values, GEN_TOLERANCE)
}

/// Two members that are each right on complementary halves of the data.
///
/// Member A is correct (peak `confidence_correct` on the truth) on a seeded
/// half of the rows and wrong (peak `confidence_wrong` on a seeded wrong
/// class) on the rest; member B is the mirror image. Because
/// `confidence_correct > confidence_wrong`, the equal-weight average puts
/// the most mass on the true class in every row.
pub fn gen_complementary_pair(
    labels: &LabelVector,
    confidence_correct: f64,
    confidence_wrong: f64,
    seed: u64,
) -> Result<(PredictionMatrix, PredictionMatrix)> {
    let classes = labels.classes();
    check_confidence(confidence_correct, classes)?;
    check_confidence(confidence_wrong, classes)?;
    if confidence_correct <= confidence_wrong {
        return Err(Error::InfeasibleSpec(format!(
            "correct peak {confidence_correct} must exceed wrong peak {confidence_wrong}"
        )));
    }
    let n = labels.len();
    if n < 2 {
        return Err(Error::InvalidShape(
            "need at least 2 rows for a pair".into(),
        ));
    }
    let a_correct = correct_mask(n, n / 2, seed);
    let mut wrong_rng = stream_rng(seed, STREAM_WRONG);
    let mut a = vec![0.0; n * classes];
    let mut b = vec![0.0; n * classes];
    for (i, &truth) in labels.labels().iter().enumerate() {
        let wrong = wrong_class(&mut wrong_rng, truth, classes);
        let (right, mistaken) = if a_correct[i] {
            (&mut a, &mut b)
        } else {
            (&mut b, &mut a)
        };
        peaked_row(
            &mut right[i * classes..(i + 1) * classes],
            truth,
            confidence_correct,
        );
        peaked_row(
            &mut mistaken[i * classes..(i + 1) * classes],
            wrong,
            confidence_wrong,
        );
    }
    Ok((
        PredictionMatrix::validate(n, classes, a, GEN_TOLERANCE)?,
        PredictionMatrix::validate(n, classes, b, GEN_TOLERANCE)?,
    ))
}
