//! Draw ensemble weights from symmetric Dirichlet distributions and show
//! how the concentration parameter spreads them over the simplex.
//!
//! cargo run -p dirichlet-ensemble --example dirichlet_sampling

use dirichlet_ensemble::ensemble::dirichlet_sample;
use dirichlet_ensemble::rng::stream_rng;
use dirichlet_ensemble::Result;

fn main() -> Result<()> {
    let k = 4;
    let n = 20_000;
    for alpha in [0.1, 1.0, 10.0, 1000.0] {
        let mut rng = stream_rng(42, 0);
        let mut mean = vec![0.0; k];
        let mut max_component = 0.0;
        for _ in 0..n {
            let w = dirichlet_sample(k, alpha, &mut rng)?;
            for (m, x) in mean.iter_mut().zip(w.as_slice()) {
                *m += x / n as f64;
            }
            max_component += w.as_slice().iter().cloned().fold(0.0, f64::max) / n as f64;
        }
        println!(
            "alpha {alpha:>7}: component means {mean:.3?}, mean largest weight {max_component:.3}"
        );
    }

    let mut rng = stream_rng(42, 1);
    println!("\nfive draws at alpha = 1:");
    for _ in 0..5 {
        println!("  {:.4?}", dirichlet_sample(k, 1.0, &mut rng)?.as_slice());
    }
    Ok(())
}
