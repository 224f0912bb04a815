//! Stratified train/validation/test splitting.
//!
//! For a class with `n` samples, `floor(n * test_fraction)` go to test,
//! then `floor(remaining * validation_fraction)` of the rest go to
//! validation, and everything left is train. With the defaults a class of
//! 1000 samples splits 720 / 180 / 100.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::LabelVector;
use crate::rng::stream_rng;

/// Absorbs representation error in `n * fraction` before flooring, so that
/// e.g. `100 * 0.29` counts as 29.
const FLOOR_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub test_fraction: f64,
    /// Fraction of the post-test remainder reserved for validation.
    pub validation_fraction: f64,
    pub seed: u64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        Self {
            test_fraction: 0.10,
            validation_fraction: 0.20,
            seed: 0,
        }
    }
}

impl SplitSpec {
    fn validate(&self) -> Result<()> {
        for (name, f) in [
            ("test fraction", self.test_fraction),
            ("validation fraction", self.validation_fraction),
        ] {
            if !(f > 0.0 && f < 1.0) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be in (0, 1), got {f}"
                )));
            }
        }
        Ok(())
    }

    /// `(train, validation, test)` counts for a class of `n` samples.
    pub fn class_counts(&self, n: usize) -> (usize, usize, usize) {
        let test = floor_fraction(n, self.test_fraction);
        let val = floor_fraction(n - test, self.validation_fraction);
        (n - test - val, val, test)
    }
}

fn floor_fraction(n: usize, fraction: f64) -> usize {
    ((n as f64 * fraction + FLOOR_SLACK).floor() as usize).min(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitTag {
    Train,
    Validation,
    Test,
}

impl SplitTag {
    pub fn as_str(self) -> &'static str {
        match self {
            SplitTag::Train => "train",
            SplitTag::Validation => "validation",
            SplitTag::Test => "test",
        }
    }
}

impl fmt::Display for SplitTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SplitTag {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "train" => Ok(SplitTag::Train),
            "validation" => Ok(SplitTag::Validation),
            "test" => Ok(SplitTag::Test),
            other => Err(format!("unknown split `{other}`")),
        }
    }
}

/// One tag per sample, indexed by sample id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitAssignment {
    tags: Vec<SplitTag>,
}

impl SplitAssignment {
    pub fn new(tags: Vec<SplitTag>) -> Self {
        Self { tags }
    }

    pub fn tags(&self) -> &[SplitTag] {
        &self.tags
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }

    /// Sample ids carrying `tag`, ascending.
    pub fn indices(&self, tag: SplitTag) -> Vec<usize> {
        self.tags
            .iter()
            .enumerate()
            .filter(|(_, &t)| t == tag)
            .map(|(i, _)| i)
            .collect()
    }

    /// `(train, validation, test)` totals.
    pub fn counts(&self) -> (usize, usize, usize) {
        self.tags.iter().fold((0, 0, 0), |(tr, va, te), t| match t {
            SplitTag::Train => (tr + 1, va, te),
            SplitTag::Validation => (tr, va + 1, te),
            SplitTag::Test => (tr, va, te + 1),
        })
    }
}

/// Per-class seeded split. Each class shuffles its sample ids with its own
/// stream of `spec.seed`, so adding a class leaves the others unchanged.
pub fn stratified_split(labels: &LabelVector, spec: &SplitSpec) -> Result<SplitAssignment> {
    spec.validate()?;
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); labels.classes()];
    for (i, &l) in labels.labels().iter().enumerate() {
        by_class[l].push(i);
    }

    let mut tags = vec![SplitTag::Train; labels.len()];
    for (class, mut ids) in by_class.into_iter().enumerate() {
        if ids.is_empty() {
            return Err(Error::EmptyClass { class });
        }
        let (train, val, test) = spec.class_counts(ids.len());
        if train == 0 {
            return Err(Error::DegenerateSplit { class });
        }
        ids.shuffle(&mut stream_rng(spec.seed, class as u64));
        for &i in &ids[..test] {
            tags[i] = SplitTag::Test;
        }
        for &i in &ids[test..test + val] {
            tags[i] = SplitTag::Validation;
        }
    }
    Ok(SplitAssignment { tags })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn balanced(classes: usize, per_class: usize) -> LabelVector {
        LabelVector::new(
            (0..classes * per_class).map(|i| i % classes).collect(),
            classes,
        )
        .unwrap()
    }

    #[test]
    fn paper_scale_totals() {
        let labels = balanced(14, 1000);
        let a = stratified_split(&labels, &SplitSpec::default()).unwrap();
        assert_eq!(a.counts(), (10080, 2520, 1400));
    }

    #[test]
    fn class_of_ten() {
        assert_eq!(SplitSpec::default().class_counts(10), (8, 1, 1));
        assert_eq!(SplitSpec::default().class_counts(1000), (720, 180, 100));
        assert_eq!(SplitSpec::default().class_counts(1), (1, 0, 0));
    }

    #[test]
    fn floor_absorbs_representation_error() {
        let spec = SplitSpec {
            test_fraction: 0.29,
            ..Default::default()
        };
        assert_eq!(spec.class_counts(100).2, 29);
    }

    #[test]
    fn empty_class_is_rejected() {
        let labels = LabelVector::new(vec![0, 0, 2, 2], 3).unwrap();
        assert!(matches!(
            stratified_split(&labels, &SplitSpec::default()),
            Err(Error::EmptyClass { class: 1 })
        ));
    }

    #[test]
    fn fractions_are_checked() {
        let labels = balanced(2, 10);
        for bad in [0.0, 1.0, -0.1, f64::NAN] {
            let spec = SplitSpec {
                test_fraction: bad,
                ..Default::default()
            };
            assert!(stratified_split(&labels, &spec).is_err());
        }
    }

    #[test]
    fn adding_a_class_keeps_other_assignments() {
        let two = LabelVector::new((0..40).map(|i| i % 2).collect(), 2).unwrap();
        let three = LabelVector::new((0..40).map(|i| i % 2).chain([2; 10]).collect(), 3).unwrap();
        let spec = SplitSpec {
            seed: 99,
            ..Default::default()
        };
        let a = stratified_split(&two, &spec).unwrap();
        let b = stratified_split(&three, &spec).unwrap();
        assert_eq!(a.tags(), &b.tags()[..40]);
    }

    #[test]
    fn tag_parsing() {
        for tag in [SplitTag::Train, SplitTag::Validation, SplitTag::Test] {
            assert_eq!(tag.as_str().parse::<SplitTag>().unwrap(), tag);
        }
        assert!("val".parse::<SplitTag>().is_err());
    }
}
