//! Finitely supported reference measures and empirical-risk profiles.
//!
//! Every integral against a [`DiscreteMeasure`] is a weighted sum over its
//! atoms. Atoms always carry strictly positive weight, so the stored atoms
//! are exactly the support.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::compensated_sum;

/// Weights whose total is within this distance of one are kept as given.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;

/// Index of an atom within one measure (dense, `0..len`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ModelId(pub usize);

/// A probability measure on a finite set of models.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    weights: Vec<f64>,
    labels: Option<Vec<Vec<f64>>>,
    retained: Vec<usize>,
}

impl DiscreteMeasure {
    /// Builds a measure from nonnegative weights.
    ///
    /// Zero-weight atoms are dropped and the rest renormalized. Totals already
    /// within [`NORMALIZATION_TOLERANCE`] of one are left untouched, which makes
    /// rebuilding from [`DiscreteMeasure::weights`] reproduce the same bits.
    pub fn new(weights: &[f64]) -> Result<Self> {
        Self::build(weights, None)
    }

    /// Like [`DiscreteMeasure::new`], carrying a per-atom payload along.
    pub fn with_labels(weights: &[f64], labels: Vec<Vec<f64>>) -> Result<Self> {
        if labels.len() != weights.len() {
            return Err(Error::LengthMismatch {
                expected: weights.len(),
                found: labels.len(),
            });
        }
        Self::build(weights, Some(labels))
    }

    fn build(weights: &[f64], labels: Option<Vec<Vec<f64>>>) -> Result<Self> {
        if let Some((index, &value)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w >= 0.0))
        {
            return Err(Error::NegativeWeight { index, value });
        }
        let retained: Vec<usize> = (0..weights.len()).filter(|&i| weights[i] > 0.0).collect();
        if retained.is_empty() {
            return Err(Error::AllZeroWeights);
        }
        let kept: Vec<f64> = retained.iter().map(|&i| weights[i]).collect();
        let total = compensated_sum(kept.iter().copied());
        let kept = if (total - 1.0).abs() <= NORMALIZATION_TOLERANCE {
            kept
        } else {
            kept.into_iter().map(|w| w / total).collect()
        };
        let labels = labels.map(|mut all| {
            let mut out = Vec::with_capacity(retained.len());
            for &i in &retained {
                out.push(std::mem::take(&mut all[i]));
            }
            out
        });
        Ok(Self {
            weights: kept,
            labels,
            retained,
        })
    }

    /// Uniform measure on `n` atoms.
    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(&vec![1.0 / n as f64; n])
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, id: ModelId) -> f64 {
        self.weights[id.0]
    }

    pub fn labels(&self) -> Option<&[Vec<f64>]> {
        self.labels.as_deref()
    }

    /// Positions in the original input of the atoms that were kept.
    pub fn retained(&self) -> &[usize] {
        &self.retained
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = ModelId> {
        (0..self.len()).map(ModelId)
    }

    /// `Σ_i q_i f(i)` with compensated summation.
    pub fn integrate<F: Fn(usize) -> f64>(&self, f: F) -> f64 {
        compensated_sum(self.weights.iter().enumerate().map(|(i, q)| q * f(i)))
    }
}

/// Builds a measure, dropping zero atoms and renormalizing.
pub fn build_measure(weights: &[f64]) -> Result<DiscreteMeasure> {
    DiscreteMeasure::new(weights)
}

/// Per-atom empirical risk values, aligned with a measure's atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct RiskProfile {
    values: Vec<f64>,
}

impl RiskProfile {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some((index, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
        {
            return Err(Error::InvalidRisk { index, value });
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, id: ModelId) -> f64 {
        self.values[id.0]
    }

    /// Errors unless this profile has one value per atom of `measure`.
    pub fn check_aligned(&self, measure: &DiscreteMeasure) -> Result<()> {
        if self.len() != measure.len() {
            return Err(Error::LengthMismatch {
                expected: measure.len(),
                found: self.len(),
            });
        }
        Ok(())
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Minimum risk on the support, its level set, and separability.
#[derive(Debug, Clone, PartialEq)]
pub struct RiskSummary {
    pub delta_star: f64,
    pub lstar_ids: Vec<ModelId>,
    pub separable: bool,
}

impl RiskSummary {
    /// Reference mass of the minimum-risk level set.
    pub fn lstar_mass(&self, measure: &DiscreteMeasure) -> f64 {
        compensated_sum(self.lstar_ids.iter().map(|&id| measure.weight(id)))
    }
}

/// Computes `δ*`, the atoms attaining it, and whether the risk is separable.
pub fn risk_summary(measure: &DiscreteMeasure, risk: &RiskProfile) -> Result<RiskSummary> {
    risk.check_aligned(measure)?;
    let delta_star = risk.min();
    let lstar_ids = risk
        .values()
        .iter()
        .enumerate()
        .filter(|(_, &v)| v == delta_star)
        .map(|(i, _)| ModelId(i))
        .collect();
    Ok(RiskSummary {
        delta_star,
        lstar_ids,
        separable: risk.max() - delta_star > 0.0,
    })
}

/// Reference mass of the Rashomon set `{θ : L(θ) ≤ δ}`.
pub fn rashomon_mass(measure: &DiscreteMeasure, risk: &RiskProfile, delta: f64) -> Result<f64> {
    risk.check_aligned(measure)?;
    Ok(compensated_sum(
        measure
            .weights()
            .iter()
            .zip(risk.values())
            .filter(|(_, &l)| l <= delta)
            .map(|(q, _)| *q),
    ))
}

/// JSON fixture pairing a reference measure with a risk profile.
///
/// `{"weights": [...], "risks": [...], "labels": [...]}`; `labels` is optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fixture {
    pub weights: Vec<f64>,
    pub risks: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<Vec<f64>>>,
}

impl Fixture {
    pub fn from_parts(measure: &DiscreteMeasure, risk: &RiskProfile) -> Self {
        Self {
            weights: measure.weights().to_vec(),
            risks: risk.values().to_vec(),
            labels: measure.labels().map(<[_]>::to_vec),
        }
    }

    /// Builds the measure and the risk profile restricted to the support.
    pub fn into_parts(self) -> Result<(DiscreteMeasure, RiskProfile)> {
        if self.risks.len() != self.weights.len() {
            return Err(Error::LengthMismatch {
                expected: self.weights.len(),
                found: self.risks.len(),
            });
        }
        let measure = match self.labels {
            Some(labels) => DiscreteMeasure::with_labels(&self.weights, labels)?,
            None => DiscreteMeasure::new(&self.weights)?,
        };
        let risks = measure.retained().iter().map(|&i| self.risks[i]).collect();
        Ok((measure, RiskProfile::new(risks)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(v: &[f64]) -> RiskProfile {
        RiskProfile::new(v.to_vec()).unwrap()
    }

    #[test]
    fn build_keeps_normalized_weights() {
        let q = build_measure(&[0.5, 0.5]).unwrap();
        assert_eq!(q.weights(), &[0.5, 0.5]);
    }

    #[test]
    fn build_drops_zero_atoms_and_renormalizes() {
        let q = build_measure(&[1.0, 0.0, 3.0]).unwrap();
        assert_eq!(q.weights(), &[0.25, 0.75]);
        assert_eq!(q.retained(), &[0, 2]);
    }

    #[test]
    fn build_rejects_degenerate_input() {
        assert!(matches!(
            build_measure(&[0.0, 0.0]),
            Err(Error::AllZeroWeights)
        ));
        assert!(matches!(
            build_measure(&[0.5, -0.1]),
            Err(Error::NegativeWeight { index: 1, .. })
        ));
        assert!(matches!(build_measure(&[]), Err(Error::AllZeroWeights)));
    }

    #[test]
    fn labels_follow_retained_atoms() {
        let q =
            DiscreteMeasure::with_labels(&[1.0, 0.0, 1.0], vec![vec![0.0], vec![1.0], vec![2.0]])
                .unwrap();
        assert_eq!(q.labels().unwrap(), &[vec![0.0], vec![2.0]]);
    }

    #[test]
    fn summary_two_point() {
        let q = build_measure(&[0.5, 0.5]).unwrap();
        let s = risk_summary(&q, &profile(&[0.0, 1.0])).unwrap();
        assert_eq!(s.delta_star, 0.0);
        assert_eq!(s.lstar_ids, vec![ModelId(0)]);
        assert!(s.separable);
    }

    #[test]
    fn summary_constant_risk_is_nonseparable() {
        let q = build_measure(&[0.2, 0.3, 0.5]).unwrap();
        let s = risk_summary(&q, &profile(&[1.5, 1.5, 1.5])).unwrap();
        assert_eq!(s.delta_star, 1.5);
        assert_eq!(s.lstar_ids.len(), 3);
        assert!(!s.separable);
    }

    #[test]
    fn summary_tied_minimum() {
        let q = build_measure(&[0.3, 0.3, 0.4]).unwrap();
        let s = risk_summary(&q, &profile(&[2.0, 2.0, 5.0])).unwrap();
        assert_eq!(s.delta_star, 2.0);
        assert_eq!(s.lstar_ids, vec![ModelId(0), ModelId(1)]);
        assert!(s.separable);
        assert!((s.lstar_mass(&q) - 0.6).abs() < 1e-15);
    }

    #[test]
    fn summary_length_mismatch() {
        let q = build_measure(&[0.5, 0.5]).unwrap();
        assert!(matches!(
            risk_summary(&q, &profile(&[1.0])),
            Err(Error::LengthMismatch {
                expected: 2,
                found: 1
            })
        ));
    }

    #[test]
    fn rashomon_examples() {
        let q = build_measure(&[0.5, 0.5]).unwrap();
        let l = profile(&[0.0, 1.0]);
        assert_eq!(rashomon_mass(&q, &l, 0.0).unwrap(), 0.5);
        assert_eq!(rashomon_mass(&q, &l, 2.0).unwrap(), 1.0);

        let q = build_measure(&[0.2, 0.3, 0.5]).unwrap();
        let l = profile(&[0.1, 0.4, 0.9]);
        // atoms 0 and 1 qualify: 0.2 + 0.3
        let direct: f64 = [0.2, 0.3, 0.5]
            .iter()
            .zip([0.1, 0.4, 0.9])
            .filter(|(_, l)| *l <= 0.5)
            .map(|(q, _)| q)
            .sum();
        assert!((rashomon_mass(&q, &l, 0.5).unwrap() - direct).abs() < 1e-15);
        assert!((direct - 0.5).abs() < 1e-15);
    }

    #[test]
    fn risk_profile_rejects_bad_values() {
        assert!(RiskProfile::new(vec![0.0, -1.0]).is_err());
        assert!(RiskProfile::new(vec![f64::NAN]).is_err());
        assert!(RiskProfile::new(vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn fixture_round_trip_filters_risks() {
        let json = r#"{"weights":[0.5,0.0,0.5],"risks":[0.0,7.0,1.0]}"#;
        let fx: Fixture = serde_json::from_str(json).unwrap();
        let (q, l) = fx.into_parts().unwrap();
        assert_eq!(q.weights(), &[0.5, 0.5]);
        assert_eq!(l.values(), &[0.0, 1.0]);
        let back = serde_json::to_string(&Fixture::from_parts(&q, &l)).unwrap();
        assert_eq!(back, r#"{"weights":[0.5,0.5],"risks":[0.0,1.0]}"#);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn instance() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
            (1usize..30).prop_flat_map(|n| {
                (
                    prop::collection::vec(0.0f64..10.0, n),
                    prop::collection::vec(0.0f64..5.0, n),
                )
            })
        }

        proptest! {
            #[test]
            fn rebuild_is_bitwise_idempotent(w in prop::collection::vec(0.0f64..1e3, 1..50)) {
                prop_assume!(w.iter().any(|&x| x > 0.0));
                let q = build_measure(&w).unwrap();
                let again = build_measure(q.weights()).unwrap();
                prop_assert_eq!(q.weights(), again.weights());
                let total: f64 = compensated_sum(q.weights().iter().copied());
                prop_assert!((total - 1.0).abs() <= NORMALIZATION_TOLERANCE);
            }

            #[test]
            fn rashomon_mass_is_monotone((w, l) in instance(), d1 in 0.0f64..6.0, d2 in 0.0f64..6.0) {
                prop_assume!(w.iter().any(|&x| x > 0.0));
                let fx = Fixture { weights: w, risks: l, labels: None };
                let (q, l) = fx.into_parts().unwrap();
                let (lo, hi) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
                prop_assert!(rashomon_mass(&q, &l, lo).unwrap() <= rashomon_mass(&q, &l, hi).unwrap());
                prop_assert!((rashomon_mass(&q, &l, l.max()).unwrap() - 1.0).abs() < 1e-12);
                let s = risk_summary(&q, &l).unwrap();
                prop_assert_eq!(rashomon_mass(&q, &l, s.delta_star).unwrap(), s.lstar_mass(&q));
            }
        }
    }
}
