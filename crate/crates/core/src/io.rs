//! On-disk formats.
//!
//! * Prediction CSV: a header line of class names, then one row of `C`
//!   probabilities per sample. There are no sample ids: row order *is* the
//!   alignment with the label file, and must be identical across members.
//! * Label file: one class index per line.
//! * Assignment file: `<sample_id>,<train|validation|test>` per line.
//! * Weights file: `member,weight` header, then one line per member.
//! * Manifest: JSON naming the classes, the member prediction files and
//!   the label files. Relative paths resolve against the manifest's
//!   directory.
//!
//! Floats are written in Rust's shortest round-trip form, so reading a
//! written file gives back bit-identical values. Line numbers in errors are
//! 1-based.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    ClassCatalog, LabelVector, Member, MemberSet, PredictionMatrix, WeightVector,
    DEFAULT_ROW_TOLERANCE,
};
use crate::split::{SplitAssignment, SplitTag};

pub const MANIFEST_VERSION: u32 = 1;

fn read_text(path: &Path) -> Result<String> {
    if !path.exists() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Non-empty lines with their 1-based numbers. A blank line is only
/// allowed at the very end of the file.
fn data_lines<'a>(path: &Path, text: &'a str) -> Result<Vec<(usize, &'a str)>> {
    let lines: Vec<&str> = text.lines().map(|l| l.trim_end_matches('\r')).collect();
    let last = lines
        .iter()
        .rposition(|l| !l.trim().is_empty())
        .map_or(0, |i| i + 1);
    lines[..last]
        .iter()
        .enumerate()
        .map(|(i, l)| {
            if l.trim().is_empty() {
                Err(parse_error(path, i + 1, "blank line"))
            } else {
                Ok((i + 1, *l))
            }
        })
        .collect()
}

fn row_of(err: &Error) -> Option<usize> {
    match err {
        Error::NonFinite { row, .. }
        | Error::NegativeEntry { row, .. }
        | Error::RowSumOutOfTolerance { row, .. } => Some(*row),
        _ => None,
    }
}

/// Parsed prediction CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionFile {
    pub classes: Vec<String>,
    pub matrix: PredictionMatrix,
}

pub fn read_predictions(path: impl AsRef<Path>) -> Result<PredictionFile> {
    read_predictions_with_tolerance(path, DEFAULT_ROW_TOLERANCE)
}

pub fn read_predictions_with_tolerance(
    path: impl AsRef<Path>,
    tolerance: f64,
) -> Result<PredictionFile> {
    let path = path.as_ref();
    let text = read_text(path)?;
    let lines = data_lines(path, &text)?;
    let Some(&(_, header)) = lines.first() else {
        return Err(parse_error(path, 1, "missing header"));
    };
    let classes: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
    let cols = classes.len();

    let mut values = Vec::with_capacity((lines.len() - 1) * cols);
    for &(line, content) in &lines[1..] {
        let before = values.len();
        for field in content.split(',') {
            let v = field
                .trim()
                .parse::<f64>()
                .map_err(|_| parse_error(path, line, format!("bad number `{}`", field.trim())))?;
            values.push(v);
        }
        let found = values.len() - before;
        if found != cols {
            return Err(parse_error(
                path,
                line,
                format!("expected {cols} values, found {found}"),
            ));
        }
    }
    let rows = lines.len() - 1;
    let line_numbers: Vec<usize> = lines[1..].iter().map(|(l, _)| *l).collect();
    let matrix =
        PredictionMatrix::validate(rows, cols, values, tolerance).map_err(|e| {
            match row_of(&e) {
                Some(row) => e.at_line(path, line_numbers[row]),
                None => e.in_file(path),
            }
        })?;
    Ok(PredictionFile { classes, matrix })
}

fn check_csv_name(name: &str) -> Result<()> {
    if name.contains([',', '\n', '\r']) || name.trim() != name || name.is_empty() {
        return Err(Error::InvalidConfig(format!(
            "name `{name}` cannot be stored in a CSV header"
        )));
    }
    Ok(())
}

pub fn write_predictions(
    path: impl AsRef<Path>,
    classes: &[String],
    matrix: &PredictionMatrix,
) -> Result<()> {
    if classes.len() != matrix.cols() {
        return Err(Error::ShapeMismatch(format!(
            "{} class names for {} columns",
            classes.len(),
            matrix.cols()
        )));
    }
    for c in classes {
        check_csv_name(c)?;
    }
    let mut out = classes.join(",");
    out.push('\n');
    for row in matrix.iter_rows() {
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            write!(out, "{v}").unwrap();
        }
        out.push('\n');
    }
    write_text(path.as_ref(), &out)
}

pub fn read_labels(path: impl AsRef<Path>, classes: usize) -> Result<LabelVector> {
    let path = path.as_ref();
    let text = read_text(path)?;
    let mut labels = Vec::new();
    for (line, content) in data_lines(path, &text)? {
        let value: usize = content
            .trim()
            .parse()
            .map_err(|_| parse_error(path, line, format!("bad label `{}`", content.trim())))?;
        if value >= classes {
            return Err(Error::OutOfRange { value, classes }.at_line(path, line));
        }
        labels.push(value);
    }
    LabelVector::new(labels, classes).map_err(|e| e.in_file(path))
}

pub fn write_labels(path: impl AsRef<Path>, labels: &LabelVector) -> Result<()> {
    let mut out = String::with_capacity(labels.len() * 3);
    for l in labels.labels() {
        writeln!(out, "{l}").unwrap();
    }
    write_text(path.as_ref(), &out)
}

pub fn write_assignment(path: impl AsRef<Path>, assignment: &SplitAssignment) -> Result<()> {
    let mut out = String::new();
    for (i, tag) in assignment.tags().iter().enumerate() {
        writeln!(out, "{i},{tag}").unwrap();
    }
    write_text(path.as_ref(), &out)
}

/// Reads an assignment file. Sample ids must cover `0..N` exactly once, in
/// any order.
pub fn read_assignment(path: impl AsRef<Path>) -> Result<SplitAssignment> {
    let path = path.as_ref();
    let text = read_text(path)?;
    let lines = data_lines(path, &text)?;
    let mut tags: Vec<Option<SplitTag>> = vec![None; lines.len()];
    for (line, content) in lines {
        let (id, tag) = content
            .split_once(',')
            .ok_or_else(|| parse_error(path, line, "expected `<sample_id>,<split>`"))?;
        let id: usize = id
            .trim()
            .parse()
            .map_err(|_| parse_error(path, line, format!("bad sample id `{}`", id.trim())))?;
        let tag: SplitTag = tag
            .trim()
            .parse()
            .map_err(|m: String| parse_error(path, line, m))?;
        match tags.get_mut(id) {
            Some(slot @ None) => *slot = Some(tag),
            Some(Some(_)) => {
                return Err(parse_error(path, line, format!("duplicate sample id {id}")))
            }
            None => {
                return Err(parse_error(
                    path,
                    line,
                    format!("sample id {id} out of range"),
                ))
            }
        }
    }
    Ok(SplitAssignment::new(
        tags.into_iter()
            .map(|t| t.expect("every id seen"))
            .collect(),
    ))
}

pub fn write_weights(path: impl AsRef<Path>, names: &[&str], weights: &WeightVector) -> Result<()> {
    if names.len() != weights.len() {
        return Err(Error::WeightCountMismatch {
            weights: weights.len(),
            members: names.len(),
        });
    }
    let mut out = String::from("member,weight\n");
    for (name, w) in names.iter().zip(weights.as_slice()) {
        check_csv_name(name)?;
        writeln!(out, "{name},{w}").unwrap();
    }
    write_text(path.as_ref(), &out)
}

/// Reads a weights file and orders it by `names`. Every member must appear
/// exactly once.
pub fn read_weights(path: impl AsRef<Path>, names: &[&str]) -> Result<WeightVector> {
    let path = path.as_ref();
    let text = read_text(path)?;
    let lines = data_lines(path, &text)?;
    match lines.first() {
        Some((_, header)) if header.trim() == "member,weight" => {}
        _ => return Err(parse_error(path, 1, "expected header `member,weight`")),
    }
    let mut weights = vec![None; names.len()];
    for &(line, content) in &lines[1..] {
        let (name, w) = content
            .split_once(',')
            .ok_or_else(|| parse_error(path, line, "expected `<member>,<weight>`"))?;
        let w: f64 = w
            .trim()
            .parse()
            .map_err(|_| parse_error(path, line, format!("bad weight `{}`", w.trim())))?;
        let k = names
            .iter()
            .position(|n| *n == name.trim())
            .ok_or_else(|| parse_error(path, line, format!("unknown member `{}`", name.trim())))?;
        if weights[k].replace(w).is_some() {
            return Err(parse_error(
                path,
                line,
                format!("duplicate member `{}`", name.trim()),
            ));
        }
    }
    let weights = weights
        .into_iter()
        .zip(names)
        .map(|(w, n)| w.ok_or_else(|| Error::InvalidWeights(format!("no weight for member `{n}`"))))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| e.in_file(path))?;
    WeightVector::new(weights).map_err(|e| e.in_file(path))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestMember {
    pub name: String,
    pub validation: PathBuf,
    pub test: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestLabels {
    pub validation: PathBuf,
    pub test: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub format_version: u32,
    pub classes: Vec<String>,
    pub members: Vec<ManifestMember>,
    pub labels: ManifestLabels,
}

/// A fully loaded and cross-checked manifest.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub members: MemberSet,
    pub labels_validation: LabelVector,
    pub labels_test: LabelVector,
}

impl Dataset {
    pub fn new(
        members: MemberSet,
        labels_validation: LabelVector,
        labels_test: LabelVector,
    ) -> Result<Self> {
        let check = |labels: &LabelVector, rows: usize, split: &str| {
            if labels.len() != rows {
                return Err(Error::InconsistentShapes {
                    member: members.members()[0].name.clone(),
                    detail: format!("{rows} {split} rows but {} {split} labels", labels.len()),
                });
            }
            if labels.classes() != members.catalog().len() {
                return Err(Error::ShapeMismatch(format!(
                    "{split} labels cover {} classes, catalog has {}",
                    labels.classes(),
                    members.catalog().len()
                )));
            }
            Ok(())
        };
        check(&labels_validation, members.validation_rows(), "validation")?;
        check(&labels_test, members.test_rows(), "test")?;
        Ok(Self {
            members,
            labels_validation,
            labels_test,
        })
    }
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

pub fn read_manifest(path: impl AsRef<Path>) -> Result<Manifest> {
    let path = path.as_ref();
    let text = read_text(path)?;
    let manifest: Manifest = serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    if manifest.format_version != MANIFEST_VERSION {
        return Err(Error::UnsupportedVersion {
            found: manifest.format_version,
            expected: MANIFEST_VERSION,
        }
        .in_file(path));
    }
    Ok(manifest)
}

pub fn load_manifest(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let manifest = read_manifest(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let catalog = ClassCatalog::new(manifest.classes.clone()).map_err(|e| e.in_file(path))?;

    // Existence first, so a missing file is reported before any parse error.
    for m in &manifest.members {
        for p in [&m.validation, &m.test] {
            let full = resolve(base, p);
            if !full.exists() {
                return Err(Error::MissingFile(full));
            }
        }
    }

    let loaded: Vec<Result<Member>> = manifest
        .members
        .par_iter()
        .map(|m| {
            let load = |p: &Path| -> Result<PredictionMatrix> {
                let full = resolve(base, p);
                let file = read_predictions(&full)?;
                if file.classes != manifest.classes {
                    return Err(Error::InconsistentShapes {
                        member: m.name.clone(),
                        detail: format!(
                            "{} header {:?} does not match manifest classes",
                            full.display(),
                            file.classes
                        ),
                    });
                }
                Ok(file.matrix)
            };
            Ok(Member {
                name: m.name.clone(),
                validation: load(&m.validation)?,
                test: load(&m.test)?,
            })
        })
        .collect();
    let members = loaded.into_iter().collect::<Result<Vec<_>>>()?;
    let members = MemberSet::new(catalog.clone(), members)?;

    let labels_validation = read_labels(resolve(base, &manifest.labels.validation), catalog.len())?;
    let labels_test = read_labels(resolve(base, &manifest.labels.test), catalog.len())?;
    Dataset::new(members, labels_validation, labels_test)
}

fn file_stem(k: usize, name: &str) -> String {
    let clean: String = name
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect();
    format!("m{k}_{clean}")
}

/// Writes every prediction and label file of `data` into `dir` along with
/// a `manifest.json`, and returns the manifest path.
pub fn write_dataset(dir: impl AsRef<Path>, data: &Dataset) -> Result<PathBuf> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let classes = data.members.catalog().names();
    let mut members = Vec::with_capacity(data.members.len());
    for (k, m) in data.members.members().iter().enumerate() {
        let stem = file_stem(k, &m.name);
        let validation = PathBuf::from(format!("{stem}_validation.csv"));
        let test = PathBuf::from(format!("{stem}_test.csv"));
        write_predictions(dir.join(&validation), classes, &m.validation)?;
        write_predictions(dir.join(&test), classes, &m.test)?;
        members.push(ManifestMember {
            name: m.name.clone(),
            validation,
            test,
        });
    }
    let labels = ManifestLabels {
        validation: PathBuf::from("labels_validation.txt"),
        test: PathBuf::from("labels_test.txt"),
    };
    write_labels(dir.join(&labels.validation), &data.labels_validation)?;
    write_labels(dir.join(&labels.test), &data.labels_test)?;

    let manifest = Manifest {
        format_version: MANIFEST_VERSION,
        classes: classes.to_vec(),
        members,
        labels,
    };
    let path = dir.join("manifest.json");
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    text.push('\n');
    write_text(&path, &text)?;
    Ok(path)
}
