//! Accuracy, cross-entropy, confusion matrix and per-class precision/recall
//! for one synthetic member.
//!
//! cargo run -p dirichlet-ensemble --example confusion_metrics

use dirichlet_ensemble::metrics::{format_percent, per_class_summary, summarize, DEFAULT_EPSILON};
use dirichlet_ensemble::prelude::*;

fn main() -> Result<()> {
    let labels = synth::gen_labels(300, 4, 5)?;
    let member = synth::gen_member(&labels, &SynthMemberSpec::new(0.8, 0.55), 6)?;

    let (summary, cm) = summarize(&member, &labels, DEFAULT_EPSILON)?;
    println!(
        "accuracy {} loss {:.4} over {} samples",
        format_percent(summary.accuracy),
        summary.loss,
        summary.n_samples
    );
    println!("confusion (rows true, columns predicted):");
    for row in cm.rows() {
        println!("  {row:?}");
    }
    for (c, stats) in per_class_summary(&cm).iter().enumerate() {
        println!(
            "class {c}: precision {:?} recall {:?}",
            stats.precision, stats.recall
        );
    }
    Ok(())
}
