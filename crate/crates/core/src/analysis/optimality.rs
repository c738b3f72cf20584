use crate::error::{Error, Result};
use crate::measure::{DiscreteMeasure, RiskProfile};
use crate::normalization::{solve_type2, SolverConfig, Type2Solution};

/// Mass a Type-II solution puts on the Rashomon set `{L ≤ δ}`.
pub fn solution_rashomon_mass(
    measure: &DiscreteMeasure,
    risk: &RiskProfile,
    solution: &Type2Solution,
    delta: f64,
) -> f64 {
    measure.integrate(|i| {
        if risk.values()[i] <= delta {
            solution.rn_derivative[i]
        } else {
            0.0
        }
    })
}

/// Upper bound on halvings of `λ` before giving up.
const MAX_HALVINGS: usize = 1100;

/// Finds `λ` such that the Type-II solution is `(δ, ε)`-optimal, that is
/// `P̄_λ({L ≤ δ}) > 1 - ε`, by halving `λ` starting from 1.
///
/// Termination is guaranteed on finite supports because the solution
/// concentrates on the minimum-risk atoms as `λ → 0⁺`.
pub fn find_lambda_delta_eps(
    measure: &DiscreteMeasure,
    risk: &RiskProfile,
    delta: f64,
    eps: f64,
    cfg: &SolverConfig,
) -> Result<f64> {
    risk.check_aligned(measure)?;
    let delta_star = risk.min();
    if !(delta > delta_star) {
        return Err(Error::InvalidDelta { delta, delta_star });
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidEpsilon(eps));
    }
    let mut lambda = 1.0f64;
    let mut last = 0.0;
    for _ in 0..MAX_HALVINGS {
        let solution = solve_type2(measure, risk, lambda, cfg)?;
        last = solution_rashomon_mass(measure, risk, &solution, delta);
        if last > 1.0 - eps {
            return Ok(lambda);
        }
        lambda *= 0.5;
        if lambda == 0.0 {
            break;
        }
    }
    Err(Error::NoConvergence {
        iterations: MAX_HALVINGS,
        residual: 1.0 - eps - last,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::build_measure;

    fn inst(q: &[f64], l: &[f64]) -> (DiscreteMeasure, RiskProfile) {
        (
            build_measure(q).unwrap(),
            RiskProfile::new(l.to_vec()).unwrap(),
        )
    }

    #[test]
    fn two_atom_search() {
        let (q, l) = inst(&[0.5, 0.5], &[0.0, 1.0]);
        let cfg = SolverConfig::default();
        let lambda = find_lambda_delta_eps(&q, &l, 0.5, 0.1, &cfg).unwrap();
        let s = solve_type2(&q, &l, lambda, &cfg).unwrap();
        assert!(s.rn_derivative[0] * 0.5 > 0.9);
        // the previous candidate did not qualify
        let prev = solve_type2(&q, &l, 2.0 * lambda, &cfg).unwrap();
        assert!(prev.rn_derivative[0] * 0.5 <= 0.9);
    }

    #[test]
    fn weak_requirement_accepts_one() {
        let (q, l) = inst(&[0.5, 0.5], &[0.0, 1.0]);
        let cfg = SolverConfig::default();
        assert_eq!(
            find_lambda_delta_eps(&q, &l, 0.5, 0.999, &cfg).unwrap(),
            1.0
        );
    }

    #[test]
    fn nonseparable_accepts_one() {
        let (q, l) = inst(&[0.3, 0.7], &[0.2, 0.2]);
        let cfg = SolverConfig::default();
        assert_eq!(find_lambda_delta_eps(&q, &l, 0.5, 0.01, &cfg).unwrap(), 1.0);
    }

    #[test]
    fn rejects_bad_arguments() {
        let (q, l) = inst(&[0.5, 0.5], &[0.1, 1.0]);
        let cfg = SolverConfig::default();
        assert!(matches!(
            find_lambda_delta_eps(&q, &l, 0.1, 0.5, &cfg),
            Err(Error::InvalidDelta { .. })
        ));
        assert!(matches!(
            find_lambda_delta_eps(&q, &l, 0.5, 1.0, &cfg),
            Err(Error::InvalidEpsilon(_))
        ));
    }

    #[test]
    fn tiny_lstar_mass_still_terminates() {
        let (q, l) = inst(&[1e-6, 1.0 - 1e-6], &[0.0, 1.0]);
        let cfg = SolverConfig::default();
        let lambda = find_lambda_delta_eps(&q, &l, 0.5, 0.01, &cfg).unwrap();
        let s = solve_type2(&q, &l, lambda, &cfg).unwrap();
        assert!(solution_rashomon_mass(&q, &l, &s, 0.5) > 0.99);
    }
}
