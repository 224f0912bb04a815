//! Weighted-average ensembling and randomized Dirichlet weight search.
//!
//! The ensemble output for sample `i`, class `j` is the convex combination
//! `Σ_k w_k · P_k[i][j]` of the member probability matrices. Weights are
//! chosen on the validation split by scoring the `K` simplex vertices
//! (one member each) followed by `trials` points drawn from a symmetric
//! Dirichlet distribution, keeping the best candidate under
//! (accuracy desc, loss asc, candidate index asc).
//!
//! Trial `t` draws its weights from its own ChaCha stream `(seed, t)`, so
//! candidates are scored in parallel and the result does not depend on
//! scheduling.

use std::cmp::Ordering;

use rand::Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{self, ConfusionMatrix, MetricSummary, DEFAULT_EPSILON};
use crate::model::{argmax_class, LabelVector, MemberSet, PredictionMatrix, WeightVector};
use crate::rng::stream_rng;

/// What the weight search maximizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    /// Validation accuracy, ties broken by lower validation loss.
    #[default]
    Accuracy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub trials: usize,
    /// Symmetric Dirichlet concentration.
    pub alpha: f64,
    pub seed: u64,
    /// Score the one-member weight vectors before sampling.
    pub include_vertices: bool,
    pub objective: Objective,
    /// Clip floor for the cross-entropy tie-break.
    pub epsilon: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            trials: 1000,
            alpha: 1.0,
            seed: 0,
            include_vertices: true,
            objective: Objective::Accuracy,
            epsilon: DEFAULT_EPSILON,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 && !self.include_vertices {
            return Err(Error::InvalidConfig(
                "trials must be >= 1 when vertices are excluded".into(),
            ));
        }
        check_alpha(self.alpha)?;
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub weights: WeightVector,
    pub validation_accuracy: f64,
    pub validation_loss: f64,
    /// Position in the candidate sequence: vertices first (when enabled),
    /// then Dirichlet trials in order.
    pub trial_index: usize,
    pub per_member_validation_accuracy: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleEvaluation {
    pub summary: MetricSummary,
    pub confusion: ConfusionMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepeatRun {
    pub seed: u64,
    pub weights: Vec<f64>,
    pub validation_accuracy: f64,
    pub test_accuracy: f64,
    pub test_loss: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepeatReport {
    pub runs: Vec<RepeatRun>,
    pub mean_accuracy: f64,
    /// Population standard deviation of the run accuracies.
    pub std_accuracy: f64,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidAlpha(alpha))
    }
}

fn check_members(members: &[&PredictionMatrix], weights: &WeightVector) -> Result<()> {
    let first = members.first().ok_or(Error::EmptyMemberSet)?;
    if weights.len() != members.len() {
        return Err(Error::WeightCountMismatch {
            weights: weights.len(),
            members: members.len(),
        });
    }
    if let Some((k, m)) = members
        .iter()
        .enumerate()
        .find(|(_, m)| m.rows() != first.rows() || m.cols() != first.cols())
    {
        return Err(Error::ShapeMismatch(format!(
            "member {k} is {}x{}, member 0 is {}x{}",
            m.rows(),
            m.cols(),
            first.rows(),
            first.cols()
        )));
    }
    Ok(())
}

#[inline]
fn combine_row(members: &[&PredictionMatrix], weights: &[f64], row: usize, out: &mut [f64]) {
    out.fill(0.0);
    for (m, &w) in members.iter().zip(weights) {
        for (o, &p) in out.iter_mut().zip(m.row(row)) {
            *o += w * p;
        }
    }
}

/// Weighted average of member probability matrices.
pub fn combine(members: &[&PredictionMatrix], weights: &WeightVector) -> Result<PredictionMatrix> {
    check_members(members, weights)?;
    let (rows, cols) = (members[0].rows(), members[0].cols());
    let mut values = vec![0.0; rows * cols];
    for (i, out) in values.chunks_exact_mut(cols).enumerate() {
        combine_row(members, weights.as_slice(), i, out);
    }
    Ok(PredictionMatrix::from_trusted(rows, cols, values))
}

/// One draw from the symmetric Dirichlet(`alpha`) distribution on the
/// `(k-1)`-simplex, built from `k` normalized Gamma(`alpha`, 1) draws.
pub fn dirichlet_sample<R: Rng + ?Sized>(
    k: usize,
    alpha: f64,
    rng: &mut R,
) -> Result<WeightVector> {
    check_alpha(alpha)?;
    if k == 0 {
        return Err(Error::InvalidShape(
            "cannot sample weights for 0 members".into(),
        ));
    }
    if k == 1 {
        return Ok(WeightVector::vertex(0, 1));
    }
    let gamma = Gamma::new(alpha, 1.0).map_err(|_| Error::InvalidAlpha(alpha))?;
    let mut draws = vec![0.0; k];
    loop {
        draws.iter_mut().for_each(|d| *d = gamma.sample(rng));
        let sum: f64 = draws.iter().sum();
        // All draws can underflow to zero for very small alpha; redraw.
        if sum > 0.0 && sum.is_finite() {
            draws.iter_mut().for_each(|d| *d /= sum);
            return WeightVector::new(draws);
        }
    }
}

/// The candidate weight vectors a search evaluates, in index order.
pub fn candidate_weights(members: usize, cfg: &SearchConfig) -> Result<Vec<WeightVector>> {
    cfg.validate()?;
    if members == 0 {
        return Err(Error::EmptyMemberSet);
    }
    let vertices = cfg
        .include_vertices
        .then(|| (0..members).map(|k| WeightVector::vertex(k, members)))
        .into_iter()
        .flatten();
    let trials: Vec<WeightVector> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| dirichlet_sample(members, cfg.alpha, &mut stream_rng(cfg.seed, t)))
        .collect::<Result<_>>()?;
    Ok(vertices.chain(trials).collect())
}

#[derive(Debug, Clone, Copy)]
struct Score {
    index: usize,
    correct: usize,
    loss: f64,
}

impl Score {
    /// `Less` means `self` is the better candidate.
    fn rank(&self, other: &Self) -> Ordering {
        other
            .correct
            .cmp(&self.correct)
            .then(self.loss.total_cmp(&other.loss))
            .then(self.index.cmp(&other.index))
    }
}

fn score(
    index: usize,
    members: &[&PredictionMatrix],
    weights: &[f64],
    labels: &LabelVector,
    epsilon: f64,
) -> Score {
    let cols = members[0].cols();
    let mut row = vec![0.0; cols];
    let mut correct = 0;
    let mut loss = 0.0;
    for (i, &truth) in labels.labels().iter().enumerate() {
        combine_row(members, weights, i, &mut row);
        if argmax_class(&row) == truth {
            correct += 1;
        }
        loss -= row[truth].max(epsilon).ln();
    }
    Score {
        index,
        correct,
        loss: loss / labels.len() as f64,
    }
}

/// Randomized Dirichlet search for ensemble weights on the validation split.
pub fn search_weights(
    members: &MemberSet,
    labels_val: &LabelVector,
    cfg: &SearchConfig,
) -> Result<SearchResult> {
    if members.is_empty() {
        return Err(Error::EmptyMemberSet);
    }
    let matrices = members.validation_matrices();
    for m in &matrices {
        labels_val.check_aligned(m)?;
    }
    let per_member_validation_accuracy = matrices
        .iter()
        .map(|m| metrics::accuracy(m, labels_val))
        .collect::<Result<Vec<_>>>()?;

    let candidates = candidate_weights(members.len(), cfg)?;
    let scores: Vec<Score> = candidates
        .par_iter()
        .enumerate()
        .map(|(i, w)| score(i, &matrices, w.as_slice(), labels_val, cfg.epsilon))
        .collect();
    let best = scores
        .iter()
        .copied()
        .min_by(Score::rank)
        .expect("at least one candidate");

    Ok(SearchResult {
        weights: candidates[best.index].clone(),
        validation_accuracy: best.correct as f64 / labels_val.len() as f64,
        validation_loss: best.loss,
        trial_index: best.index,
        per_member_validation_accuracy,
    })
}

/// Metrics of the weighted ensemble on the test split.
pub fn evaluate_ensemble(
    members: &MemberSet,
    weights: &WeightVector,
    labels_test: &LabelVector,
    epsilon: f64,
) -> Result<EnsembleEvaluation> {
    let combined = combine(&members.test_matrices(), weights)?;
    let (summary, confusion) = metrics::summarize(&combined, labels_test, epsilon)?;
    Ok(EnsembleEvaluation { summary, confusion })
}

/// Repeats search + test evaluation with seeds `cfg.seed + i`.
pub fn run_repeated(
    members: &MemberSet,
    labels_val: &LabelVector,
    labels_test: &LabelVector,
    cfg: &SearchConfig,
    repeats: usize,
) -> Result<RepeatReport> {
    if repeats == 0 {
        return Err(Error::InvalidConfig("repeats must be >= 1".into()));
    }
    let runs = (0..repeats as u64)
        .map(|i| {
            let seed = cfg.seed.wrapping_add(i);
            let run_cfg = SearchConfig {
                seed,
                ..cfg.clone()
            };
            let found = search_weights(members, labels_val, &run_cfg)?;
            let eval = evaluate_ensemble(members, &found.weights, labels_test, cfg.epsilon)?;
            Ok(RepeatRun {
                seed,
                weights: found.weights.as_slice().to_vec(),
                validation_accuracy: found.validation_accuracy,
                test_accuracy: eval.summary.accuracy,
                test_loss: eval.summary.loss,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let n = runs.len() as f64;
    let mean_accuracy = runs.iter().map(|r| r.test_accuracy).sum::<f64>() / n;
    let var = runs
        .iter()
        .map(|r| (r.test_accuracy - mean_accuracy).powi(2))
        .sum::<f64>()
        / n;
    Ok(RepeatReport {
        runs,
        mean_accuracy,
        std_accuracy: var.sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ClassCatalog, Member};

    fn pm(rows: &[Vec<f64>]) -> PredictionMatrix {
        PredictionMatrix::from_rows(rows, 1e-9).unwrap()
    }

    #[test]
    fn single_member_identity() {
        let m = pm(&[vec![0.3, 0.7], vec![0.6, 0.4]]);
        let out = combine(&[&m], &WeightVector::new(vec![1.0]).unwrap()).unwrap();
        assert_eq!(out, m);
    }

    #[test]
    fn hand_computed_combination() {
        let a = pm(&[vec![0.8, 0.2]]);
        let b = pm(&[vec![0.0, 1.0]]);
        let out = combine(&[&a, &b], &WeightVector::new(vec![0.25, 0.75]).unwrap()).unwrap();
        assert!((out.get(0, 0) - 0.2).abs() < 1e-15);
        assert!((out.get(0, 1) - 0.8).abs() < 1e-15);
    }

    #[test]
    fn identical_members_reproduce_member() {
        let m = pm(&[vec![0.1, 0.6, 0.3], vec![0.25, 0.25, 0.5]]);
        let w = WeightVector::new(vec![0.2, 0.5, 0.3]).unwrap();
        let out = combine(&[&m, &m, &m], &w).unwrap();
        for (x, y) in out.values().iter().zip(m.values()) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn combine_errors() {
        let a = pm(&[vec![0.5, 0.5]]);
        let b = pm(&[vec![0.5, 0.5], vec![0.5, 0.5]]);
        let w2 = WeightVector::uniform(2);
        assert!(matches!(
            combine(&[&a, &b], &w2),
            Err(Error::ShapeMismatch(_))
        ));
        assert!(matches!(
            combine(&[&a], &w2),
            Err(Error::WeightCountMismatch {
                weights: 2,
                members: 1
            })
        ));
        assert!(matches!(combine(&[], &w2), Err(Error::EmptyMemberSet)));
    }

    #[test]
    fn dirichlet_degenerate_and_invalid() {
        let mut rng = stream_rng(1, 0);
        assert_eq!(
            dirichlet_sample(1, 0.3, &mut rng).unwrap().as_slice(),
            &[1.0]
        );
        assert!(matches!(
            dirichlet_sample(3, 0.0, &mut rng),
            Err(Error::InvalidAlpha(_))
        ));
        assert!(matches!(
            dirichlet_sample(3, -1.0, &mut rng),
            Err(Error::InvalidAlpha(_))
        ));
        assert!(matches!(
            dirichlet_sample(3, f64::NAN, &mut rng),
            Err(Error::InvalidAlpha(_))
        ));
    }

    #[test]
    fn dirichlet_mean_is_one_over_k() {
        let mut rng = stream_rng(7, 0);
        let n = 100_000;
        let mut sums = [0.0; 4];
        for _ in 0..n {
            let w = dirichlet_sample(4, 1.0, &mut rng).unwrap();
            let total: f64 = w.as_slice().iter().sum();
            assert!((total - 1.0).abs() < 1e-12);
            for (s, x) in sums.iter_mut().zip(w.as_slice()) {
                assert!(*x >= 0.0);
                *s += x;
            }
        }
        for s in sums {
            assert!((s / n as f64 - 0.25).abs() < 0.005);
        }
    }

    #[test]
    fn large_alpha_concentrates_near_uniform() {
        let mut rng = stream_rng(11, 0);
        let outside = (0..2000)
            .filter(|_| {
                let w = dirichlet_sample(4, 1000.0, &mut rng).unwrap();
                w.as_slice().iter().any(|x| (x - 0.25).abs() > 0.05)
            })
            .count();
        assert_eq!(outside, 0);
    }

    fn single_member_set() -> (MemberSet, LabelVector) {
        let catalog = ClassCatalog::numbered(2).unwrap();
        let m = Member {
            name: "only".into(),
            validation: pm(&[vec![0.9, 0.1], vec![0.4, 0.6], vec![0.3, 0.7]]),
            test: pm(&[vec![0.9, 0.1]]),
        };
        let set = MemberSet::new(catalog, vec![m]).unwrap();
        (set, LabelVector::new(vec![0, 0, 1], 2).unwrap())
    }

    #[test]
    fn single_member_search() {
        let (set, labels) = single_member_set();
        let result = search_weights(&set, &labels, &SearchConfig::default()).unwrap();
        assert_eq!(result.weights.as_slice(), &[1.0]);
        assert_eq!(result.validation_accuracy, 2.0 / 3.0);
        assert_eq!(result.per_member_validation_accuracy, vec![2.0 / 3.0]);
        assert_eq!(result.trial_index, 0);
    }

    #[test]
    fn search_rejects_misaligned_labels() {
        let (set, _) = single_member_set();
        let labels = LabelVector::new(vec![0, 1], 2).unwrap();
        assert!(matches!(
            search_weights(&set, &labels, &SearchConfig::default()),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn config_validation() {
        let bad_alpha = SearchConfig {
            alpha: 0.0,
            ..Default::default()
        };
        assert!(matches!(bad_alpha.validate(), Err(Error::InvalidAlpha(_))));
        let nothing = SearchConfig {
            trials: 0,
            include_vertices: false,
            ..Default::default()
        };
        assert!(nothing.validate().is_err());
        let vertices_only = SearchConfig {
            trials: 0,
            ..Default::default()
        };
        assert!(vertices_only.validate().is_ok());
    }

    #[test]
    fn repeated_runs_use_consecutive_seeds() {
        let (set, labels) = single_member_set();
        let test_labels = LabelVector::new(vec![0], 2).unwrap();
        let cfg = SearchConfig {
            seed: 40,
            trials: 10,
            ..Default::default()
        };
        let report = run_repeated(&set, &labels, &test_labels, &cfg, 3).unwrap();
        let seeds: Vec<u64> = report.runs.iter().map(|r| r.seed).collect();
        assert_eq!(seeds, vec![40, 41, 42]);
        assert_eq!(report.mean_accuracy, 1.0);
        assert_eq!(report.std_accuracy, 0.0);
        assert!(run_repeated(&set, &labels, &test_labels, &cfg, 0).is_err());
    }
}
