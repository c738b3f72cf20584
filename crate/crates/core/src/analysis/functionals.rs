//! Expected risks and relative entropies of measures given by their density
//! with respect to the reference.
//!
//! Every functional takes a density vector `p_rn` (one entry per atom of `Q`)
//! so Type-I solutions, Type-II solutions and arbitrary perturbations share
//! the same code path.

use crate::error::{Error, Result};
use crate::gibbs::solve_type1;
use crate::measure::{DiscreteMeasure, RiskProfile};
use crate::normalization::{solve_type2, SolverConfig, Type2Solution};
use crate::numeric::compensated_sum;

/// A density must integrate to one against the reference within this.
pub const NORMALIZATION_SLACK: f64 = 1e-8;

fn check_density(p_rn: &[f64], measure: &DiscreteMeasure) -> Result<()> {
    if p_rn.len() != measure.len() {
        return Err(Error::LengthMismatch {
            expected: measure.len(),
            found: p_rn.len(),
        });
    }
    if let Some((index, &value)) = p_rn
        .iter()
        .enumerate()
        .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
    {
        return Err(Error::NegativeWeight { index, value });
    }
    let total = measure.integrate(|i| p_rn[i]);
    if (total - 1.0).abs() > NORMALIZATION_SLACK {
        return Err(Error::NotNormalized { total });
    }
    Ok(())
}

/// `R(P) = Σ_i L_i · p_i · q_i`.
pub fn expected_risk(p_rn: &[f64], measure: &DiscreteMeasure, risk: &RiskProfile) -> Result<f64> {
    risk.check_aligned(measure)?;
    check_density(p_rn, measure)?;
    Ok(measure.integrate(|i| p_rn[i] * risk.values()[i]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KlDirection {
    /// `KL(P‖Q) = Σ q p log p`.
    PToQ,
    /// `KL(Q‖P) = -Σ q log p`.
    QToP,
}

pub fn kl(p_rn: &[f64], measure: &DiscreteMeasure, direction: KlDirection) -> Result<f64> {
    check_density(p_rn, measure)?;
    match direction {
        KlDirection::PToQ => Ok(measure.integrate(|i| {
            let p = p_rn[i];
            if p == 0.0 || p == 1.0 {
                0.0
            } else {
                p * p.ln()
            }
        })),
        KlDirection::QToP => {
            if let Some(index) = p_rn.iter().position(|&p| p == 0.0) {
                return Err(Error::ZeroDerivativeEntry { index });
            }
            Ok(-measure.integrate(|i| p_rn[i].ln()))
        }
    }
}

/// `KL(P‖R)` for two measures given by densities against the same reference.
pub fn kl_between(p_rn: &[f64], r_rn: &[f64], measure: &DiscreteMeasure) -> Result<f64> {
    check_density(p_rn, measure)?;
    check_density(r_rn, measure)?;
    let mut terms = Vec::with_capacity(p_rn.len());
    for (i, (&p, &r)) in p_rn.iter().zip(r_rn).enumerate() {
        if p == 0.0 {
            continue;
        }
        if r == 0.0 {
            return Err(Error::ZeroDerivativeEntry { index: i });
        }
        terms.push(measure.weights()[i] * p * (p.ln() - r.ln()));
    }
    Ok(compensated_sum(terms))
}

/// Log-empirical risk `V_i = log(K̄(λ) + L_i)` taken from a solved Type-II
/// problem; evaluated as `log(shift + (L_i - δ*))` to keep the smallest
/// denominators exact.
pub fn log_risk_values(solution: &Type2Solution, risk: &RiskProfile) -> Vec<f64> {
    let delta_star = risk.min();
    risk.values()
        .iter()
        .map(|l| (solution.shift + (l - delta_star)).ln())
        .collect()
}

/// `R̄(P) = Σ_i q_i p_i log(K̄(λ) + L_i)` against an already solved `K̄(λ)`.
pub fn expected_log_risk_with(
    p_rn: &[f64],
    measure: &DiscreteMeasure,
    risk: &RiskProfile,
    solution: &Type2Solution,
) -> Result<f64> {
    risk.check_aligned(measure)?;
    check_density(p_rn, measure)?;
    let v = log_risk_values(solution, risk);
    Ok(measure.integrate(|i| p_rn[i] * v[i]))
}

/// `R̄(P)` at regularization factor `λ`, solving for `K̄(λ)` first.
pub fn expected_log_risk(
    p_rn: &[f64],
    measure: &DiscreteMeasure,
    risk: &RiskProfile,
    lambda: f64,
    cfg: &SolverConfig,
) -> Result<f64> {
    let solution = solve_type2(measure, risk, lambda, cfg)?;
    expected_log_risk_with(p_rn, measure, risk, &solution)
}

/// `R(P) - R(P_λ)` with `P_λ` the Type-I solution.
pub fn sensitivity(
    measure: &DiscreteMeasure,
    risk: &RiskProfile,
    lambda: f64,
    p_rn: &[f64],
) -> Result<f64> {
    let gibbs = solve_type1(measure, risk, lambda)?;
    Ok(expected_risk(p_rn, measure, risk)? - expected_risk(&gibbs.rn_derivative(), measure, risk)?)
}

/// `R̄(P) - R̄(P̄_λ)` with `P̄_λ` the Type-II solution.
pub fn log_sensitivity(
    measure: &DiscreteMeasure,
    risk: &RiskProfile,
    lambda: f64,
    p_rn: &[f64],
    cfg: &SolverConfig,
) -> Result<f64> {
    let solution = solve_type2(measure, risk, lambda, cfg)?;
    if let Some(index) = p_rn.iter().position(|&p| p == 0.0) {
        return Err(Error::ZeroDerivativeEntry { index });
    }
    Ok(expected_log_risk_with(p_rn, measure, risk, &solution)?
        - expected_log_risk_with(&solution.rn_derivative, measure, risk, &solution)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionalReport {
    pub expected_risk: f64,
    pub kl_p_q: f64,
    pub kl_q_p: f64,
    pub jeffreys: f64,
    pub expected_log_risk: f64,
}

/// All functionals of `P` at once; `solution` supplies `K̄(λ)` for the
/// log-empirical risk.
pub fn functional_report(
    p_rn: &[f64],
    measure: &DiscreteMeasure,
    risk: &RiskProfile,
    solution: &Type2Solution,
) -> Result<FunctionalReport> {
    let kl_p_q = kl(p_rn, measure, KlDirection::PToQ)?;
    let kl_q_p = kl(p_rn, measure, KlDirection::QToP)?;
    Ok(FunctionalReport {
        expected_risk: expected_risk(p_rn, measure, risk)?,
        kl_p_q,
        kl_q_p,
        jeffreys: kl_p_q + kl_q_p,
        expected_log_risk: expected_log_risk_with(p_rn, measure, risk, solution)?,
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
    fn expected_risk_examples() {
        let (q, l) = inst(&[0.5, 0.5], &[0.0, 1.0]);
        assert_eq!(expected_risk(&[1.0, 1.0], &q, &l).unwrap(), 0.5);
        assert_eq!(expected_risk(&[2.0, 0.0], &q, &l).unwrap(), 0.0);
    }

    #[test]
    fn expected_risk_errors() {
        let (q, l) = inst(&[0.5, 0.5], &[0.0, 1.0]);
        assert!(matches!(
            expected_risk(&[1.0], &q, &l),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            expected_risk(&[1.0, 0.9], &q, &l),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn kl_examples() {
        let (q, _) = inst(&[0.5, 0.5], &[0.0, 1.0]);
        assert_eq!(kl(&[1.0, 1.0], &q, KlDirection::PToQ).unwrap(), 0.0);
        assert_eq!(kl(&[1.0, 1.0], &q, KlDirection::QToP).unwrap(), 0.0);
        let direct = 0.5 * (1.5 * 1.5f64.ln() + 0.5 * 0.5f64.ln());
        let got = kl(&[1.5, 0.5], &q, KlDirection::PToQ).unwrap();
        assert!((got - direct).abs() < 1e-15);
        assert!((got - 0.13081).abs() < 1e-5);
        assert!(matches!(
            kl(&[2.0, 0.0], &q, KlDirection::QToP),
            Err(Error::ZeroDerivativeEntry { index: 1 })
        ));
        assert!(kl(&[2.0, 0.0], &q, KlDirection::PToQ).unwrap() > 0.0);
    }

    #[test]
    fn kl_between_matches_reference_directions() {
        let (q, _) = inst(&[0.25, 0.75], &[0.0, 1.0]);
        let p = [2.0, 2.0 / 3.0];
        let one = [1.0, 1.0];
        let a = kl_between(&p, &one, &q).unwrap();
        let b = kl(&p, &q, KlDirection::PToQ).unwrap();
        assert!((a - b).abs() < 1e-15);
        let a = kl_between(&one, &p, &q).unwrap();
        let b = kl(&p, &q, KlDirection::QToP).unwrap();
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn log_risk_collapses_for_constant_risk() {
        let (q, l) = inst(&[0.3, 0.7], &[1.25, 1.25]);
        let cfg = SolverConfig::default();
        let p = [0.5 / 0.3, 0.5 / 0.7];
        let v = expected_log_risk(&p, &q, &l, 3.0, &cfg).unwrap();
        assert!((v - 3.0f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn sensitivities_vanish_at_their_solutions() {
        let (q, l) = inst(&[0.2, 0.5, 0.3], &[0.0, 0.4, 2.0]);
        let cfg = SolverConfig::default();
        let gibbs = solve_type1(&q, &l, 0.7).unwrap();
        assert_eq!(
            sensitivity(&q, &l, 0.7, &gibbs.rn_derivative()).unwrap(),
            0.0
        );
        let t2 = solve_type2(&q, &l, 0.7, &cfg).unwrap();
        assert_eq!(
            log_sensitivity(&q, &l, 0.7, &t2.rn_derivative, &cfg).unwrap(),
            0.0
        );
    }

    #[test]
    fn report_is_consistent() {
        let (q, l) = inst(&[0.5, 0.5], &[0.0, 1.0]);
        let t2 = solve_type2(&q, &l, 1.0, &SolverConfig::default()).unwrap();
        let r = functional_report(&t2.rn_derivative, &q, &l, &t2).unwrap();
        assert_eq!(r.jeffreys, r.kl_p_q + r.kl_q_p);
        assert!(r.kl_p_q >= 0.0 && r.kl_q_p >= 0.0);
        assert!((r.expected_risk - (1.0 - t2.beta)).abs() < 1e-12);
    }
}
