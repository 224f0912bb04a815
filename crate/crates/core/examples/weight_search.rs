//! Randomized Dirichlet weight search on two members that are each right
//! on a different half of the data. Neither beats 50% alone; the searched
//! ensemble gets every sample right.
//!
//! cargo run -p dirichlet-ensemble --example weight_search

use dirichlet_ensemble::prelude::*;

fn main() -> Result<()> {
    let labels = synth::gen_labels(1000, 4, 1)?;
    let (a, b) = synth::gen_complementary_pair(&labels, 0.9, 0.4, 2)?;
    let members = MemberSet::new(
        ClassCatalog::numbered(4)?,
        vec![
            Member {
                name: "left".into(),
                validation: a.clone(),
                test: a,
            },
            Member {
                name: "right".into(),
                validation: b.clone(),
                test: b,
            },
        ],
    )?;

    for trials in [0, 10, 100, 1000] {
        let cfg = SearchConfig {
            trials,
            seed: 9,
            ..SearchConfig::default()
        };
        let found = ensemble::search_weights(&members, &labels, &cfg)?;
        println!(
            "trials {trials:>4}: weights {:.3?}  accuracy {}  loss {:.4}  (candidate {})",
            found.weights.as_slice(),
            metrics::format_percent(found.validation_accuracy),
            found.validation_loss,
            found.trial_index,
        );
    }
    Ok(())
}
