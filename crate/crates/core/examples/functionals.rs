//! Expected risk, divergences, and log-risk functionals of a Type-II solution.

use ermrer::analysis::{functional_report, log_sensitivity, sensitivity};
use ermrer::{solve_type2, DiscreteMeasure, RiskProfile, SolverConfig};

fn main() -> ermrer::Result<()> {
    let q = DiscreteMeasure::new(&[0.1, 0.2, 0.3, 0.4])?;
    let l = RiskProfile::new(vec![0.3, 0.1, 0.7, 1.0])?;
    let lambda = 0.5;
    let cfg = SolverConfig::default();
    let s = solve_type2(&q, &l, lambda, &cfg)?;
    let report = functional_report(&s.rn_derivative, &q, &l, &s)?;
    println!("{report:#?}");
    println!("λ - K̄(λ) = {}", lambda - s.beta);

    let reference = vec![1.0; 4];
    println!(
        "sensitivity(Q) = {}",
        sensitivity(&q, &l, lambda, &reference)?
    );
    println!(
        "log sensitivity(Q) = {} (equals the Jeffreys divergence {})",
        log_sensitivity(&q, &l, lambda, &reference, &cfg)?,
        report.jeffreys
    );
    Ok(())
}
