//! Split a 14-class, 1000-per-class label set: 10% of each class to test,
//! then 20% of the remainder to validation.
//!
//! cargo run -p dirichlet-ensemble --example stratified_split

use dirichlet_ensemble::prelude::*;

fn main() -> Result<()> {
    let labels = LabelVector::new((0..14_000).map(|i| i % 14).collect(), 14)?;
    let spec = SplitSpec {
        seed: 2023,
        ..SplitSpec::default()
    };
    let assignment = split::stratified_split(&labels, &spec)?;

    let (train, val, test) = assignment.counts();
    println!("train {train}, validation {val}, test {test}");
    println!(
        "per class (train, validation, test): {:?}",
        spec.class_counts(1000)
    );

    let out = std::env::temp_dir().join("dens_assignment.txt");
    io::write_assignment(&out, &assignment)?;
    println!("assignment written to {}", out.display());
    Ok(())
}
