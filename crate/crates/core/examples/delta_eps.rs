//! Smallest halving of λ that puts `1 - ε` of the solution on `{L ≤ δ}`.

use ermrer::analysis::{find_lambda_delta_eps, solution_rashomon_mass};
use ermrer::{rashomon_mass, solve_type2, DiscreteMeasure, RiskProfile, SolverConfig};

fn main() -> ermrer::Result<()> {
    let q = DiscreteMeasure::new(&[0.05, 0.15, 0.3, 0.5])?;
    let l = RiskProfile::new(vec![0.1, 0.12, 0.5, 0.9])?;
    let cfg = SolverConfig::default();
    let delta = 0.2;
    println!(
        "Q-mass of {{L ≤ {delta}}} = {}",
        rashomon_mass(&q, &l, delta)?
    );
    for eps in [0.5, 0.1, 0.01, 1e-4] {
        let lambda = find_lambda_delta_eps(&q, &l, delta, eps, &cfg)?;
        let s = solve_type2(&q, &l, lambda, &cfg)?;
        println!(
            "ε = {eps:<6}: λ = {lambda:.3e}, mass = {:.6}",
            solution_rashomon_mass(&q, &l, &s, delta)
        );
    }
    Ok(())
}
