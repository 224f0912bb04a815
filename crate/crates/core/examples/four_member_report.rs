//! Four synthetic members shaped like a typical transfer-learning shortlist:
//! two weak learners with correlated errors and two strong ones with
//! independent errors. Searches weights on validation and prints the
//! weight/accuracy table for the test split.
//!
//! cargo run -p dirichlet-ensemble --example four_member_report

use dirichlet_ensemble::prelude::*;

fn main() -> Result<()> {
    let classes = 14;
    let labels_val = synth::gen_labels(2520, classes, 10)?;
    let labels_test = synth::gen_labels(1400, classes, 11)?;
    let specs = [
        ("mobilenet", SynthMemberSpec::new(0.76, 0.45).in_group(1)),
        ("mobilenet_v2", SynthMemberSpec::new(0.55, 0.40).in_group(1)),
        ("vgg16", SynthMemberSpec::new(0.96, 0.60)),
        ("vgg19", SynthMemberSpec::new(0.94, 0.55)),
    ];
    let members = specs
        .iter()
        .enumerate()
        .map(|(k, (name, spec))| {
            Ok(Member {
                name: name.to_string(),
                validation: synth::gen_member(&labels_val, spec, 100 + k as u64)?,
                test: synth::gen_member(&labels_test, spec, 200 + k as u64)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let data = Dataset::new(
        MemberSet::new(ClassCatalog::numbered(classes)?, members)?,
        labels_val,
        labels_test,
    )?;

    let cfg = SearchConfig {
        seed: 1,
        ..SearchConfig::default()
    };
    let found = ensemble::search_weights(&data.members, &data.labels_validation, &cfg)?;
    let doc = ReportDocument::fit(&data, &cfg, &found)?;
    print!("{}", doc.to_table_text());
    Ok(())
}
