//! Combine two members' probability outputs with fixed weights.
//!
//! cargo run -p dirichlet-ensemble --example weighted_combination

use dirichlet_ensemble::prelude::*;

fn main() -> Result<()> {
    let a = PredictionMatrix::from_rows(&[vec![0.8, 0.2], vec![0.4, 0.6]], 1e-6)?;
    let b = PredictionMatrix::from_rows(&[vec![0.0, 1.0], vec![0.9, 0.1]], 1e-6)?;
    let weights = WeightVector::new(vec![0.25, 0.75])?;

    let combined = ensemble::combine(&[&a, &b], &weights)?;
    for (i, row) in combined.iter_rows().enumerate() {
        println!("sample {i}: {row:?} -> class {}", argmax_class(row));
    }
    Ok(())
}
