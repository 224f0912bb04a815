//! Report documents and their JSON / plain-text renderings.
//!
//! A report can carry per-member metrics on both splits, the chosen
//! ensemble weights next to each member's accuracy, the ensemble's test
//! metrics with its confusion matrix, and repeated-run statistics. The text
//! form prints accuracies as percentages with two decimals.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::ensemble::{
    evaluate_ensemble, EnsembleEvaluation, RepeatReport, SearchConfig, SearchResult,
};
use crate::error::Result;
use crate::io::Dataset;
use crate::metrics::{self, format_percent, per_class_summary, MetricSummary};
use crate::model::WeightVector;

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    /// Pretty-printed JSON.
    Structured,
    TableText,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberMetrics {
    pub name: String,
    pub validation: MetricSummary,
    pub test: MetricSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberWeight {
    pub name: String,
    pub weight: f64,
    pub validation_accuracy: f64,
    pub test_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSection {
    /// `None` when the weights were supplied rather than searched.
    pub trial_index: Option<usize>,
    pub validation_accuracy: f64,
    pub validation_loss: f64,
    pub members: Vec<MemberWeight>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    pub class: String,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSection {
    pub test: MetricSummary,
    /// Rows are true classes, columns predicted classes.
    pub confusion: Vec<Vec<u64>>,
    pub per_class: Vec<ClassReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub format_version: u32,
    pub classes: Vec<String>,
    pub config: Option<SearchConfig>,
    pub members: Vec<MemberMetrics>,
    pub search: Option<SearchSection>,
    pub ensemble: Option<EnsembleSection>,
    pub repeats: Option<RepeatReport>,
}

impl ReportDocument {
    /// Per-member metrics on both splits; no ensemble sections.
    pub fn evaluation(data: &Dataset, epsilon: f64) -> Result<Self> {
        let members = data
            .members
            .members()
            .iter()
            .map(|m| {
                Ok(MemberMetrics {
                    name: m.name.clone(),
                    validation: metrics::summarize(
                        &m.validation,
                        &data.labels_validation,
                        epsilon,
                    )?
                    .0,
                    test: metrics::summarize(&m.test, &data.labels_test, epsilon)?.0,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            format_version: REPORT_VERSION,
            classes: data.members.catalog().names().to_vec(),
            config: None,
            members,
            search: None,
            ensemble: None,
            repeats: None,
        })
    }

    /// Evaluation plus the searched weights and their test metrics.
    pub fn fit(data: &Dataset, cfg: &SearchConfig, found: &SearchResult) -> Result<Self> {
        let mut doc = Self::with_weights(data, &found.weights, cfg.epsilon)?;
        let search = doc.search.as_mut().expect("set by with_weights");
        search.trial_index = Some(found.trial_index);
        search.validation_accuracy = found.validation_accuracy;
        search.validation_loss = found.validation_loss;
        doc.config = Some(cfg.clone());
        Ok(doc)
    }

    /// Evaluation plus the given weights and their test metrics.
    pub fn with_weights(data: &Dataset, weights: &WeightVector, epsilon: f64) -> Result<Self> {
        let mut doc = Self::evaluation(data, epsilon)?;
        let combined_val = crate::ensemble::combine(&data.members.validation_matrices(), weights)?;
        let (val_summary, _) = metrics::summarize(&combined_val, &data.labels_validation, epsilon)?;
        let EnsembleEvaluation { summary, confusion } =
            evaluate_ensemble(&data.members, weights, &data.labels_test, epsilon)?;

        doc.search = Some(SearchSection {
            trial_index: None,
            validation_accuracy: val_summary.accuracy,
            validation_loss: val_summary.loss,
            members: doc
                .members
                .iter()
                .zip(weights.as_slice())
                .map(|(m, &weight)| MemberWeight {
                    name: m.name.clone(),
                    weight,
                    validation_accuracy: m.validation.accuracy,
                    test_accuracy: m.test.accuracy,
                })
                .collect(),
        });
        doc.ensemble = Some(EnsembleSection {
            test: summary,
            confusion: confusion.rows(),
            per_class: per_class_summary(&confusion)
                .into_iter()
                .zip(&doc.classes)
                .map(|(s, class)| ClassReport {
                    class: class.clone(),
                    precision: s.precision,
                    recall: s.recall,
                })
                .collect(),
        });
        Ok(doc)
    }

    /// Evaluation plus repeated-run statistics.
    pub fn repeated(data: &Dataset, cfg: &SearchConfig, repeats: RepeatReport) -> Result<Self> {
        let mut doc = Self::evaluation(data, cfg.epsilon)?;
        doc.config = Some(cfg.clone());
        doc.repeats = Some(repeats);
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_table_text(&self) -> String {
        let mut out = String::new();
        if !self.members.is_empty() {
            out.push_str("Member metrics\n");
            let rows: Vec<Vec<String>> = self
                .members
                .iter()
                .map(|m| {
                    vec![
                        m.name.clone(),
                        format!("{:.4}", m.validation.loss),
                        format_percent(m.validation.accuracy),
                        format!("{:.4}", m.test.loss),
                        format_percent(m.test.accuracy),
                    ]
                })
                .collect();
            render_table(
                &mut out,
                &[
                    "Model",
                    "Validation Loss",
                    "Validation Accuracy",
                    "Test Loss",
                    "Test Accuracy",
                ],
                &rows,
            );
        }

        if let Some(search) = &self.search {
            out.push('\n');
            match search.trial_index {
                Some(t) => {
                    writeln!(out, "Ensemble weights (validation search, candidate {t})").unwrap()
                }
                None => out.push_str("Ensemble weights (supplied)\n"),
            }
            let mut rows: Vec<Vec<String>> = search
                .members
                .iter()
                .map(|m| {
                    vec![
                        m.name.clone(),
                        format!("{:.5}", m.weight),
                        format_percent(m.test_accuracy),
                    ]
                })
                .collect();
            if let Some(ens) = &self.ensemble {
                let combo = (1..=search.members.len())
                    .map(|k| format!("M{k}"))
                    .collect::<Vec<_>>()
                    .join("+");
                rows.push(vec![
                    "Dirichlet Ensemble".into(),
                    combo,
                    format_percent(ens.test.accuracy),
                ]);
            }
            render_table(&mut out, &["Model", "Weight", "Test Accuracy"], &rows);
        }

        if let Some(ens) = &self.ensemble {
            out.push('\n');
            writeln!(
                out,
                "Ensemble test loss {:.4} over {} samples",
                ens.test.loss, ens.test.n_samples
            )
            .unwrap();
            out.push_str("\nConfusion matrix (rows: true class, columns: predicted class)\n");
            let mut header = vec![""];
            header.extend(self.classes.iter().map(String::as_str));
            let rows: Vec<Vec<String>> = ens
                .confusion
                .iter()
                .zip(&self.classes)
                .map(|(r, c)| {
                    std::iter::once(c.clone())
                        .chain(r.iter().map(u64::to_string))
                        .collect()
                })
                .collect();
            render_table(&mut out, &header, &rows);

            out.push_str("\nPer-class results\n");
            let na = |v: Option<f64>| v.map_or_else(|| "n/a".to_string(), format_percent);
            let rows: Vec<Vec<String>> = ens
                .per_class
                .iter()
                .map(|c| vec![c.class.clone(), na(c.precision), na(c.recall)])
                .collect();
            render_table(&mut out, &["Class", "Precision", "Recall"], &rows);
        }

        if let Some(rep) = &self.repeats {
            out.push('\n');
            writeln!(out, "Repeated runs ({})", rep.runs.len()).unwrap();
            let rows: Vec<Vec<String>> = rep
                .runs
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    vec![
                        (i + 1).to_string(),
                        r.seed.to_string(),
                        format_percent(r.validation_accuracy),
                        format_percent(r.test_accuracy),
                        format!("{:.4}", r.test_loss),
                    ]
                })
                .collect();
            render_table(
                &mut out,
                &[
                    "Run",
                    "Seed",
                    "Validation Accuracy",
                    "Test Accuracy",
                    "Test Loss",
                ],
                &rows,
            );
            writeln!(
                out,
                "Mean test accuracy {} (std {:.2} points)",
                format_percent(rep.mean_accuracy),
                rep.std_accuracy * 100.0
            )
            .unwrap();
        }
        out
    }
}

fn render_table(out: &mut String, header: &[&str], rows: &[Vec<String>]) {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |out: &mut String, cells: &mut dyn Iterator<Item = &str>| {
        let mut s = String::new();
        for (i, (cell, w)) in cells.zip(&widths).enumerate() {
            if i == 0 {
                write!(s, "{cell:<w$}").unwrap();
            } else {
                write!(s, "  {cell:>w$}").unwrap();
            }
        }
        out.push_str(s.trim_end());
        out.push('\n');
    };
    line(out, &mut header.iter().copied());
    for row in rows {
        line(out, &mut row.iter().map(String::as_str));
    }
}

/// Deterministic bytes for `report` in the requested format.
pub fn emit_report(report: &ReportDocument, format: ReportFormat) -> Vec<u8> {
    match format {
        ReportFormat::Structured => report.to_json().into_bytes(),
        ReportFormat::TableText => report.to_table_text().into_bytes(),
    }
}
