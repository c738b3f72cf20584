//! Type-II solution `dP/dQ = λ / (β + L)` and its normalization constant.

use ermrer::{risk_summary, solve_type2, DiscreteMeasure, RiskProfile, SolverConfig};

fn main() -> ermrer::Result<()> {
    let q = DiscreteMeasure::new(&[0.25, 0.25, 0.5])?;
    let l = RiskProfile::new(vec![0.0, 0.5, 2.0])?;
    let summary = risk_summary(&q, &l)?;
    println!(
        "δ* = {}, Q(L*) = {}, separable = {}",
        summary.delta_star,
        summary.lstar_mass(&q),
        summary.separable
    );
    let cfg = SolverConfig::default();
    for lambda in [1e-4, 0.1, 1.0, 100.0] {
        let s = solve_type2(&q, &l, lambda, &cfg)?;
        println!(
            "λ = {lambda:>6}: β = K̄(λ) = {:>12.8}, dP/dQ = {:.6?}, {} iterations",
            s.beta, s.rn_derivative, s.iterations
        );
    }
    Ok(())
}
