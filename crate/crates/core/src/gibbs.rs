//! Type-I regularization: minimize `R(P) + λ·KL(P‖Q)`.
//!
//! The minimizer is the Gibbs measure with density
//! `exp(-K(-1/λ) - L(θ)/λ)` with respect to `Q`, where
//! `K(t) = log ∫ exp(t·L) dQ` is the log-partition function.

use crate::error::{Error, Result};
use crate::measure::{DiscreteMeasure, RiskProfile};
use crate::numeric::weighted_log_sum_exp;

/// `K(t) = log Σ_i q_i exp(t·L_i)`.
pub fn log_partition(measure: &DiscreteMeasure, risk: &RiskProfile, t: f64) -> Result<f64> {
    risk.check_aligned(measure)?;
    let exponents: Vec<f64> = risk.values().iter().map(|l| t * l).collect();
    Ok(weighted_log_sum_exp(measure.weights(), &exponents))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Type1Solution {
    pub lambda: f64,
    /// `K(-1/λ)`.
    pub log_partition: f64,
    log_rn: Vec<f64>,
}

impl Type1Solution {
    /// Log of the density with respect to the reference, per atom.
    pub fn log_rn_derivative(&self) -> &[f64] {
        &self.log_rn
    }

    pub fn rn_derivative(&self) -> Vec<f64> {
        self.log_rn.iter().map(|v| v.exp()).collect()
    }
}

pub fn solve_type1(
    measure: &DiscreteMeasure,
    risk: &RiskProfile,
    lambda: f64,
) -> Result<Type1Solution> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::NonPositiveLambda(lambda));
    }
    let k = log_partition(measure, risk, -1.0 / lambda)?;
    let log_rn = risk.values().iter().map(|l| -k - l / lambda).collect();
    Ok(Type1Solution {
        lambda,
        log_partition: k,
        log_rn,
    })
}
