//! Two-component PCA of correlated data.

use ermrer::experiment::{pca_fit, pca_project};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> ermrer::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let patterns: Vec<Vec<f64>> = (0..500)
        .map(|_| {
            let (a, b): (f64, f64) = (rng.random_range(-2.0..2.0), rng.random_range(-0.5..0.5));
            vec![a + b, a - b, 0.5 * a, rng.random_range(-0.1..0.1)]
        })
        .collect();
    let projection = pca_fit(&patterns)?;
    println!("eigenvalues: {:?}", projection.eigenvalues);
    println!("basis:{}", projection.basis);
    for p in patterns.iter().take(3) {
        println!("{p:.3?} -> {:.3?}", pca_project(&projection, p)?);
    }
    Ok(())
}
