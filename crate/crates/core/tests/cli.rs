use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use dirichlet_ensemble::prelude::*;

fn dens(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dens"))
        .args(args)
        .current_dir(cwd)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn split_writes_assignment_file() {
    let dir = tempfile::tempdir().unwrap();
    let labels: String = (0..14_000).map(|i| format!("{}\n", i % 14)).collect();
    fs::write(dir.path().join("labels.txt"), labels).unwrap();
    let out = dens(
        &[
            "split",
            "--labels",
            "labels.txt",
            "--classes",
            "14",
            "--seed",
            "5",
            "--out",
            "assign.txt",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(stdout(&out), "train 10080\nvalidation 2520\ntest 1400\n");
    let assignment = io::read_assignment(dir.path().join("assign.txt")).unwrap();
    assert_eq!(assignment.counts(), (10080, 2520, 1400));
}

#[test]
fn synth_fit_report_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let out = dens(
        &[
            "synth",
            "--out",
            "set",
            "--classes",
            "5",
            "--validation-samples",
            "400",
            "--test-samples",
            "300",
            "--member",
            "a:0.8:0.5",
            "--member",
            "b:0.7:0.5:3",
            "--member",
            "c:0.6:0.4:3",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let data = io::load_manifest(dir.path().join("set/manifest.json")).unwrap();
    assert_eq!(data.members.len(), 3);
    assert_eq!(data.labels_validation.len(), 400);

    let eval = dens(
        &[
            "eval",
            "--manifest",
            "set/manifest.json",
            "--format",
            "json",
        ],
        dir.path(),
    );
    assert!(eval.status.success());
    let doc = ReportDocument::from_json(&stdout(&eval)).unwrap();
    let accs: Vec<f64> = doc.members.iter().map(|m| m.test.accuracy).collect();
    assert_eq!(accs, vec![0.8, 0.7, 0.6]);

    let fit = dens(
        &[
            "fit",
            "--manifest",
            "set/manifest.json",
            "--weights-out",
            "w.csv",
            "--trials",
            "200",
            "--seed",
            "3",
            "--format",
            "json",
            "--out",
            "fit.json",
        ],
        dir.path(),
    );
    assert!(
        fit.status.success(),
        "{}",
        String::from_utf8_lossy(&fit.stderr)
    );
    let fit_doc =
        ReportDocument::from_json(&fs::read_to_string(dir.path().join("fit.json")).unwrap())
            .unwrap();
    let weights = io::read_weights(dir.path().join("w.csv"), &["a", "b", "c"]).unwrap();
    let searched: Vec<f64> = fit_doc
        .search
        .as_ref()
        .unwrap()
        .members
        .iter()
        .map(|m| m.weight)
        .collect();
    assert_eq!(weights.as_slice(), searched.as_slice());

    let report = dens(
        &[
            "report",
            "--manifest",
            "set/manifest.json",
            "--weights",
            "w.csv",
            "--format",
            "json",
        ],
        dir.path(),
    );
    assert!(report.status.success());
    let report_doc = ReportDocument::from_json(&stdout(&report)).unwrap();
    assert_eq!(report_doc.ensemble, fit_doc.ensemble);

    let table = dens(
        &[
            "report",
            "--manifest",
            "set/manifest.json",
            "--weights",
            "w.csv",
        ],
        dir.path(),
    );
    assert!(stdout(&table).contains("Dirichlet Ensemble  M1+M2+M3"));
}

#[test]
fn pair_fixture_via_cli() {
    let dir = tempfile::tempdir().unwrap();
    let out = dens(
        &["synth", "--out", "pair", "--pair", "--classes", "4"],
        dir.path(),
    );
    assert!(out.status.success());
    let fit = dens(
        &[
            "fit",
            "--manifest",
            "pair/manifest.json",
            "--weights-out",
            "w.csv",
            "--format",
            "json",
        ],
        dir.path(),
    );
    let doc = ReportDocument::from_json(&stdout(&fit)).unwrap();
    assert!(doc.members.iter().all(|m| m.validation.accuracy == 0.5));
    assert!(doc.search.unwrap().validation_accuracy >= 0.99);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // Usage errors.
    assert_eq!(dens(&["fit"], dir.path()).status.code(), Some(2));
    assert_eq!(dens(&["frobnicate"], dir.path()).status.code(), Some(2));
    assert_eq!(
        dens(
            &[
                "report",
                "--manifest",
                "m.json",
                "--weights",
                "w",
                "--repeats",
                "3"
            ],
            dir.path()
        )
        .status
        .code(),
        Some(2)
    );

    // Parse / validation failures carry the path and line.
    fs::write(dir.path().join("labels.txt"), "0\n1\n14\n").unwrap();
    let out = dens(
        &[
            "split",
            "--labels",
            "labels.txt",
            "--classes",
            "14",
            "--out",
            "a.txt",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("labels.txt:3"), "{err}");

    let out = dens(&["eval", "--manifest", "missing.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.json"));
}
