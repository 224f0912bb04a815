//! Repeat search + test evaluation ten times with consecutive seeds and
//! report the mean and spread of the test accuracy.
//!
//! cargo run -p dirichlet-ensemble --example repeated_runs

use dirichlet_ensemble::prelude::*;

fn main() -> Result<()> {
    let labels_val = synth::gen_labels(600, 6, 1)?;
    let labels_test = synth::gen_labels(600, 6, 2)?;
    let specs = [
        SynthMemberSpec::new(0.85, 0.5),
        SynthMemberSpec::new(0.8, 0.45),
        SynthMemberSpec::new(0.7, 0.4),
    ];
    let members = specs
        .iter()
        .enumerate()
        .map(|(k, s)| {
            Ok(Member {
                name: format!("model-{}", k + 1),
                validation: synth::gen_member(&labels_val, s, 10 + k as u64)?,
                test: synth::gen_member(&labels_test, s, 20 + k as u64)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let members = MemberSet::new(ClassCatalog::numbered(6)?, members)?;

    let cfg = SearchConfig {
        trials: 300,
        seed: 1000,
        ..SearchConfig::default()
    };
    let report = ensemble::run_repeated(&members, &labels_val, &labels_test, &cfg, 10)?;
    for run in &report.runs {
        println!(
            "seed {}: weights {:.3?} test {}",
            run.seed,
            run.weights,
            metrics::format_percent(run.test_accuracy)
        );
    }
    println!(
        "mean {} (std {:.2} points)",
        metrics::format_percent(report.mean_accuracy),
        report.std_accuracy * 100.0
    );
    Ok(())
}
