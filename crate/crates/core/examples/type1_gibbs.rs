//! Gibbs (Type-I) solution on a small model set, across several λ.

use ermrer::{log_partition, solve_type1, DiscreteMeasure, RiskProfile};

fn main() -> ermrer::Result<()> {
    let q = DiscreteMeasure::new(&[0.2, 0.3, 0.5])?;
    let l = RiskProfile::new(vec![0.1, 0.4, 1.2])?;
    for lambda in [0.01, 0.1, 1.0, 10.0] {
        let s = solve_type1(&q, &l, lambda)?;
        println!(
            "λ = {lambda:>5}: K(-1/λ) = {:>9.5}, dP/dQ = {:.5?}",
            s.log_partition,
            s.rn_derivative()
        );
    }
    // the log-partition stays finite where a naive sum would underflow
    println!("K(-1e4) = {}", log_partition(&q, &l, -1e4)?);
    Ok(())
}
