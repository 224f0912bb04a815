//! Write a synthetic member set to disk as a manifest with prediction CSVs,
//! load it back, search weights and store them.
//!
//! cargo run -p dirichlet-ensemble --example manifest_pipeline

use dirichlet_ensemble::prelude::*;

fn main() -> Result<()> {
    let dir = std::env::temp_dir().join("dens_manifest_example");
    let labels_val = synth::gen_labels(200, 3, 1)?;
    let labels_test = synth::gen_labels(150, 3, 2)?;
    let (va, vb) = synth::gen_complementary_pair(&labels_val, 0.9, 0.5, 3)?;
    let (ta, tb) = synth::gen_complementary_pair(&labels_test, 0.9, 0.5, 4)?;
    let members = MemberSet::new(
        ClassCatalog::new(vec!["fist".into(), "palm".into(), "point".into()])?,
        vec![
            Member {
                name: "a".into(),
                validation: va,
                test: ta,
            },
            Member {
                name: "b".into(),
                validation: vb,
                test: tb,
            },
        ],
    )?;
    let manifest = io::write_dataset(&dir, &Dataset::new(members, labels_val, labels_test)?)?;
    println!("wrote {}", manifest.display());

    let data = io::load_manifest(&manifest)?;
    let cfg = SearchConfig::default();
    let found = ensemble::search_weights(&data.members, &data.labels_validation, &cfg)?;
    let names: Vec<&str> = data.members.names().collect();
    io::write_weights(dir.join("weights.csv"), &names, &found.weights)?;
    print!(
        "{}",
        ReportDocument::fit(&data, &cfg, &found)?.to_table_text()
    );
    Ok(())
}
