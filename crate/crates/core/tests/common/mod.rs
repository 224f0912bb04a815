//! Test-only oracles and fixture builders. The oracles are written
//! independently of the library's code paths (plain index loops).

#![allow(dead_code, clippy::needless_range_loop)]

use dirichlet_ensemble::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Random row-stochastic matrix with strictly positive entries.
pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> PredictionMatrix {
    let mut values = Vec::with_capacity(rows * cols);
    for _ in 0..rows {
        let raw: Vec<f64> = (0..cols).map(|_| rng.random::<f64>() + 1e-3).collect();
        let s: f64 = raw.iter().sum();
        values.extend(raw.iter().map(|v| v / s));
    }
    PredictionMatrix::validate(rows, cols, values, 1e-9).unwrap()
}

pub fn random_labels<R: Rng>(rng: &mut R, n: usize, c: usize) -> LabelVector {
    LabelVector::new((0..n).map(|_| rng.random_range(0..c)).collect(), c).unwrap()
}

pub fn random_weights<R: Rng>(rng: &mut R, k: usize) -> WeightVector {
    let raw: Vec<f64> = (0..k).map(|_| rng.random::<f64>() + 1e-6).collect();
    let s: f64 = raw.iter().sum();
    WeightVector::new(raw.iter().map(|v| v / s).collect()).unwrap()
}

/// Index of the first entry equal to the row maximum.
pub fn oracle_argmax(row: &[f64]) -> usize {
    let max = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    row.iter().position(|&v| v == max).unwrap()
}

/// `out[i][j] = Σ_k w[k] · m_k[i][j]`, accumulated member by member.
pub fn oracle_combine(members: &[&PredictionMatrix], weights: &[f64]) -> Vec<Vec<f64>> {
    let (n, c) = (members[0].rows(), members[0].cols());
    let mut out = vec![vec![0.0; c]; n];
    for i in 0..n {
        for j in 0..c {
            let mut acc = 0.0;
            for k in 0..members.len() {
                acc += weights[k] * members[k].get(i, j);
            }
            out[i][j] = acc;
        }
    }
    out
}

pub fn oracle_correct(rows: &[Vec<f64>], labels: &[usize]) -> usize {
    let mut correct = 0;
    for i in 0..rows.len() {
        if oracle_argmax(&rows[i]) == labels[i] {
            correct += 1;
        }
    }
    correct
}

pub fn oracle_confusion(rows: &[Vec<f64>], labels: &[usize], c: usize) -> Vec<Vec<u64>> {
    let mut cm = vec![vec![0u64; c]; c];
    for i in 0..rows.len() {
        cm[labels[i]][oracle_argmax(&rows[i])] += 1;
    }
    cm
}

pub fn oracle_cross_entropy(rows: &[Vec<f64>], labels: &[usize], eps: f64) -> f64 {
    let mut total = 0.0;
    for i in 0..rows.len() {
        let p = rows[i][labels[i]];
        total += -(if p > eps { p } else { eps }).ln();
    }
    total / rows.len() as f64
}

pub fn to_rows(m: &PredictionMatrix) -> Vec<Vec<f64>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j)).collect())
        .collect()
}

/// Best accuracy over the 0.01-step grid on the 1-simplex for two members.
pub fn grid_search_two(
    a: &PredictionMatrix,
    b: &PredictionMatrix,
    labels: &LabelVector,
) -> (f64, f64) {
    let mut best = (-1.0, 0.0);
    for step in 0..=100 {
        let w = step as f64 / 100.0;
        let rows = oracle_combine(&[a, b], &[w, 1.0 - w]);
        let acc = oracle_correct(&rows, labels.labels()) as f64 / labels.len() as f64;
        if acc > best.0 {
            best = (acc, w);
        }
    }
    best
}

/// A random synthetic member set with validation/test splits.
pub fn random_dataset<R: Rng>(rng: &mut R) -> Dataset {
    let k = rng.random_range(1..=5);
    let c = rng.random_range(2..=14);
    let n_val = rng.random_range(c.max(20)..=300);
    let n_test = rng.random_range(c.max(20)..=200);
    let labels_val = synth::gen_labels(n_val, c, rng.random()).unwrap();
    let labels_test = synth::gen_labels(n_test, c, rng.random()).unwrap();
    let members = (0..k)
        .map(|i| {
            let lo = 1.0 / c as f64;
            let mut spec = SynthMemberSpec::new(
                rng.random_range(0.0..=1.0),
                rng.random_range(lo + 0.01..=1.0),
            );
            if rng.random_bool(0.3) {
                spec = spec.in_group(rng.random_range(0..2));
            }
            Member {
                name: format!("member-{i}"),
                validation: synth::gen_member(&labels_val, &spec, rng.random()).unwrap(),
                test: synth::gen_member(&labels_test, &spec, rng.random()).unwrap(),
            }
        })
        .collect();
    let set = MemberSet::new(ClassCatalog::numbered(c).unwrap(), members).unwrap();
    Dataset::new(set, labels_val, labels_test).unwrap()
}

/// Four members with test accuracies near (0.76, 0.55, 0.96, 0.94). The two
/// weak members share an error group; the strong members err independently.
pub fn four_member_dataset(seed: u64) -> Dataset {
    let c = 14;
    let labels_val = synth::gen_labels(2520, c, seed).unwrap();
    let labels_test = synth::gen_labels(1400, c, seed + 1).unwrap();
    let specs = [
        ("mobilenet", SynthMemberSpec::new(0.76, 0.45).in_group(7)),
        ("mobilenet_v2", SynthMemberSpec::new(0.55, 0.40).in_group(7)),
        ("vgg16", SynthMemberSpec::new(0.96, 0.60)),
        ("vgg19", SynthMemberSpec::new(0.94, 0.55)),
    ];
    let members = specs
        .iter()
        .enumerate()
        .map(|(k, (name, spec))| Member {
            name: name.to_string(),
            validation: synth::gen_member(&labels_val, spec, seed * 31 + 2 * k as u64).unwrap(),
            test: synth::gen_member(&labels_test, spec, seed * 31 + 2 * k as u64 + 1).unwrap(),
        })
        .collect();
    let set = MemberSet::new(ClassCatalog::numbered(c).unwrap(), members).unwrap();
    Dataset::new(set, labels_val, labels_test).unwrap()
}
