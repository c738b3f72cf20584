//! Risk transforms that let each regularizer reproduce the other's solution.
//!
//! * `V_i = log(K̄(λ) + L_i)`: Type-I with risk `V` and factor 1 yields the
//!   Type-II solution at `λ`.
//! * `W_i = λ·exp(L_i/λ + K(-1/λ)) - K̄(λ)`: Type-II with risk `W` and factor
//!   `λ` yields the Type-I solution at `λ`, with normalization `K̄(λ)`.
//!
//! Neither transform is nonnegative in general. Both solutions are invariant
//! under translating the risk (Type-I exactly; Type-II after moving the
//! offset into `β`), so the round trips solve on `values - min(values)`.

use crate::error::Result;
use crate::gibbs::solve_type1;
use crate::measure::{DiscreteMeasure, RiskProfile};
use crate::normalization::{solve_type2, SolverConfig};

use super::functionals::log_risk_values;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformKind {
    V,
    W,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransformedRisk {
    pub values: Vec<f64>,
    pub kind: TransformKind,
    pub lambda: f64,
}

impl TransformedRisk {
    /// The values translated to start at zero, plus the offset removed.
    pub fn translated(&self) -> Result<(RiskProfile, f64)> {
        let offset = self.values.iter().copied().fold(f64::INFINITY, f64::min);
        let shifted = self.values.iter().map(|v| v - offset).collect();
        Ok((RiskProfile::new(shifted)?, offset))
    }
}

pub fn transform_risk(
    measure: &DiscreteMeasure,
    risk: &RiskProfile,
    lambda: f64,
    kind: TransformKind,
    cfg: &SolverConfig,
) -> Result<TransformedRisk> {
    let type2 = solve_type2(measure, risk, lambda, cfg)?;
    let values = match kind {
        TransformKind::V => log_risk_values(&type2, risk),
        TransformKind::W => {
            let type1 = solve_type1(measure, risk, lambda)?;
            type1
                .log_rn_derivative()
                .iter()
                .map(|log_rn| lambda * (-log_rn).exp() - type2.beta)
                .collect()
        }
    };
    Ok(TransformedRisk {
        values,
        kind,
        lambda,
    })
}

/// A solution recovered through a transformed risk.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundTrip {
    pub rn_derivative: Vec<f64>,
    /// `K_V(-1)` for the V path (equals `-log λ`), `K̄_W(λ)` for the W path
    /// (equals `K̄(λ)`).
    pub normalization: f64,
}

/// Type-I with risk `V` at factor 1; should match Type-II at `λ`.
pub fn type1_via_v(
    measure: &DiscreteMeasure,
    risk: &RiskProfile,
    lambda: f64,
    cfg: &SolverConfig,
) -> Result<RoundTrip> {
    let v = transform_risk(measure, risk, lambda, TransformKind::V, cfg)?;
    let (profile, offset) = v.translated()?;
    let solution = solve_type1(measure, &profile, 1.0)?;
    Ok(RoundTrip {
        rn_derivative: solution.rn_derivative(),
        // log Σ q exp(-(V' + offset)) = K_{V'}(-1) - offset
        normalization: solution.log_partition - offset,
    })
}

/// Type-II with risk `W` at factor `λ`; should match Type-I at `λ`.
pub fn type2_via_w(
    measure: &DiscreteMeasure,
    risk: &RiskProfile,
    lambda: f64,
    cfg: &SolverConfig,
) -> Result<RoundTrip> {
    let w = transform_risk(measure, risk, lambda, TransformKind::W, cfg)?;
    let (profile, offset) = w.translated()?;
    let solution = solve_type2(measure, &profile, lambda, cfg)?;
    Ok(RoundTrip {
        rn_derivative: solution.rn_derivative,
        // λ / (β' + W - offset) = λ / ((β' - offset) + W)
        normalization: solution.beta - offset,
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
    fn v_is_log_lambda_for_constant_risk() {
        let (q, l) = inst(&[0.4, 0.6], &[2.0, 2.0]);
        let v = transform_risk(&q, &l, 0.3, TransformKind::V, &SolverConfig::default()).unwrap();
        for x in v.values {
            assert!((x - 0.3f64.ln()).abs() < 1e-15);
        }
    }

    #[test]
    fn v_two_atom_closed_form() {
        let (q, l) = inst(&[0.5, 0.5], &[0.0, 1.0]);
        let v = transform_risk(&q, &l, 1.0, TransformKind::V, &SolverConfig::default()).unwrap();
        let beta = 0.5f64.sqrt();
        assert!((v.values[0] - beta.ln()).abs() < 1e-12);
        assert!((v.values[1] - (1.0 + beta).ln()).abs() < 1e-12);
        assert!((v.values[0] + 0.34657).abs() < 1e-5);
        assert!((v.values[1] - 0.53480).abs() < 1e-5);
    }

    #[test]
    fn w_matches_its_definition() {
        let (q, l) = inst(&[0.2, 0.3, 0.5], &[0.1, 0.7, 1.5]);
        let cfg = SolverConfig::default();
        let lambda = 0.8;
        let w = transform_risk(&q, &l, lambda, TransformKind::W, &cfg).unwrap();
        let k = crate::gibbs::log_partition(&q, &l, -1.0 / lambda).unwrap();
        let beta = solve_type2(&q, &l, lambda, &cfg).unwrap().beta;
        for (wi, li) in w.values.iter().zip(l.values()) {
            let want = lambda / (-li / lambda - k).exp() - beta;
            assert!((wi - want).abs() < 1e-12 * want.abs().max(1.0));
        }
    }

    #[test]
    fn round_trips_reproduce_the_other_solution() {
        let (q, l) = inst(&[0.1, 0.2, 0.3, 0.4], &[0.0, 0.5, 1.0, 3.0]);
        let cfg = SolverConfig::default();
        for lambda in [0.1, 1.0, 10.0] {
            let t2 = solve_type2(&q, &l, lambda, &cfg).unwrap();
            let via_v = type1_via_v(&q, &l, lambda, &cfg).unwrap();
            for (a, b) in via_v.rn_derivative.iter().zip(&t2.rn_derivative) {
                assert!((a - b).abs() < 1e-9);
            }
            assert!((via_v.normalization + lambda.ln()).abs() < 1e-9);

            let t1 = solve_type1(&q, &l, lambda).unwrap();
            let via_w = type2_via_w(&q, &l, lambda, &cfg).unwrap();
            for (a, b) in via_w.rn_derivative.iter().zip(t1.rn_derivative()) {
                assert!((a - b).abs() < 1e-9);
            }
            assert!((via_w.normalization - t2.beta).abs() < 1e-9 * lambda.max(1.0));
        }
    }
}
