//! Admissible factors and the inverse normalization function `K̄⁻¹`.

use ermrer::{classify_solvability, kbar_inverse, DiscreteMeasure, RiskProfile, SolvabilityReport};

fn main() -> ermrer::Result<()> {
    let q = DiscreteMeasure::uniform(4)?;
    let l = RiskProfile::new(vec![0.0, 1.0, 2.0, 3.0])?;
    // finite supports always have an atom at δ*, so every λ > 0 works
    println!("{:?}", classify_solvability(&q, &l));
    for beta in [0.01, 0.1, 1.0, 10.0] {
        println!("K̄⁻¹({beta}) = {:.6}", kbar_inverse(&q, &l, beta)?);
    }
    // a density reference measure whose divergence integral is 2
    println!("{:?}", SolvabilityReport::from_divergence_integral(2.0));
    Ok(())
}
