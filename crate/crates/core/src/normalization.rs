//! Type-II regularization: minimize `R(P) + λ·KL(Q‖P)`.
//!
//! The minimizer has density `λ / (β + L(θ))` with respect to `Q`, where the
//! normalization constant `β = K̄(λ)` is the unique value with
//! `∫ λ / (β + L) dQ = 1` and `β > -δ*`. `K̄` has no closed form, but its
//! inverse does:
//!
//! ```text
//! K̄⁻¹(β) = 1 / ∫ 1 / (β + L) dQ
//! ```
//!
//! `K̄⁻¹` is increasing with derivative at least one, so `β` is found by
//! Newton's method on `K̄⁻¹(β) - λ`, kept inside a bisection bracket.
//!
//! Internally the solver works with the shift `s = β + δ*` and the gaps
//! `L_i - δ*`, so that atoms on the minimum-risk level set see the
//! denominator `s` exactly even when `λ` (and hence `s`) is tiny.

use crate::error::{Error, Result};
use crate::measure::{risk_summary, DiscreteMeasure, RiskProfile};
use crate::numeric::compensated_sum;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Tolerance on `|K̄⁻¹(β) - λ|`, relative to `λ`.
    pub abs_tol: f64,
    pub max_iter: usize,
    /// Factor by which the upper end of the bracket grows while searching.
    pub bracket_growth: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            max_iter: 200,
            bracket_growth: 2.0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::InvalidSolverConfig("abs_tol must be positive"));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidSolverConfig("max_iter must be positive"));
        }
        if !(self.bracket_growth > 1.0 && self.bracket_growth.is_finite()) {
            return Err(Error::InvalidSolverConfig("bracket_growth must exceed 1"));
        }
        Ok(())
    }

    /// Convergence threshold for a given regularization factor.
    pub fn tolerance(&self, lambda: f64) -> f64 {
        self.abs_tol * lambda
    }
}

fn harmonic_sums(measure: &DiscreteMeasure, gaps: &[f64], shift: f64) -> (f64, f64) {
    let first = compensated_sum(
        measure
            .weights()
            .iter()
            .zip(gaps)
            .map(|(q, g)| q / (shift + g)),
    );
    let second = compensated_sum(measure.weights().iter().zip(gaps).map(|(q, g)| {
        let d = shift + g;
        q / (d * d)
    }));
    (first, second)
}

fn gaps(risk: &RiskProfile, delta_star: f64) -> Vec<f64> {
    risk.values().iter().map(|l| l - delta_star).collect()
}

fn check_domain(risk: &RiskProfile, beta: f64) -> Result<f64> {
    let delta_star = risk.min();
    if !(beta > -delta_star) || !beta.is_finite() {
        return Err(Error::BetaOutOfDomain {
            beta,
            lower: -delta_star,
        });
    }
    Ok(delta_star)
}

/// `K̄⁻¹(β) = 1 / Σ_i q_i / (β + L_i)`, defined for `β > -δ*`.
pub fn kbar_inverse(measure: &DiscreteMeasure, risk: &RiskProfile, beta: f64) -> Result<f64> {
    risk.check_aligned(measure)?;
    check_domain(risk, beta)?;
    let (first, _) = harmonic_sums(measure, risk.values(), beta);
    Ok(1.0 / first)
}

/// Derivative of `K̄⁻¹` at `β`: `Σ q/(β+L)² / (Σ q/(β+L))²`.
///
/// Always at least one, with equality exactly when `L` is constant on the
/// support.
pub fn kbar_inverse_derivative(
    measure: &DiscreteMeasure,
    risk: &RiskProfile,
    beta: f64,
) -> Result<f64> {
    risk.check_aligned(measure)?;
    check_domain(risk, beta)?;
    let (first, second) = harmonic_sums(measure, risk.values(), beta);
    Ok(second / (first * first))
}

/// Outcome of the bracketed Newton iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootOutcome {
    pub shift: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Solves `h(s) = target` for `s > 0`, where `h` is increasing, `h(s) → 0` as
/// `s → 0⁺` and `h(s) ≥ s`.
///
/// `h` returns the value and its derivative. Works for any representation of
/// the reference measure, which lets the quadrature checks reuse it.
pub fn solve_shift<H>(h: H, target: f64, start_hi: f64, cfg: &SolverConfig) -> Result<RootOutcome>
where
    H: Fn(f64) -> (f64, f64),
{
    cfg.validate()?;
    let tol = cfg.tolerance(target);
    let mut iterations = 0usize;
    let budget = |iterations: &mut usize, residual: f64| -> Result<()> {
        *iterations += 1;
        if *iterations > cfg.max_iter {
            return Err(Error::NoConvergence {
                iterations: cfg.max_iter,
                residual,
            });
        }
        Ok(())
    };

    let mut lo = f64::max(1e-300, 1e-12 * start_hi.max(1.0));
    while h(lo).0 >= target {
        budget(&mut iterations, f64::NAN)?;
        if lo <= f64::MIN_POSITIVE {
            return Err(Error::NoConvergence {
                iterations,
                residual: h(lo).0 - target,
            });
        }
        lo = (lo * 1e-16).max(f64::MIN_POSITIVE);
    }
    let mut hi = start_hi.max(1.0);
    while h(hi).0 < target {
        budget(&mut iterations, f64::NAN)?;
        lo = hi;
        hi *= cfg.bracket_growth;
    }

    let mut x = hi;
    let mut best = (f64::INFINITY, x);
    loop {
        let (value, slope) = h(x);
        let r = value - target;
        if r.abs() < best.0 {
            best = (r.abs(), x);
        }
        if r.abs() <= tol {
            return Ok(RootOutcome {
                shift: x,
                residual: r.abs(),
                iterations,
            });
        }
        budget(&mut iterations, best.0)?;
        if r < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            // bracket exhausted at floating-point resolution
            return if best.0 <= tol {
                Ok(RootOutcome {
                    shift: best.1,
                    residual: best.0,
                    iterations,
                })
            } else {
                Err(Error::NoConvergence {
                    iterations,
                    residual: best.0,
                })
            };
        }
        let newton = x - r / slope;
        x = if newton > lo && newton < hi && newton.is_finite() {
            newton
        } else if hi > 1e3 * lo {
            (lo * hi).sqrt()
        } else {
            0.5 * (lo + hi)
        };
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Type2Solution {
    pub lambda: f64,
    /// `K̄(λ)`.
    pub beta: f64,
    /// `β + δ*`, the smallest denominator.
    pub shift: f64,
    /// `λ / (β + L_i)` per atom.
    pub rn_derivative: Vec<f64>,
    /// `|K̄⁻¹(β) - λ|` at the returned `β`.
    pub residual: f64,
    pub iterations: usize,
}

impl Type2Solution {
    /// Largest density value, `λ / (δ* + β)`, attained on the minimum-risk atoms.
    pub fn rn_bound(&self) -> f64 {
        self.lambda / self.shift
    }
}

pub fn solve_type2(
    measure: &DiscreteMeasure,
    risk: &RiskProfile,
    lambda: f64,
    cfg: &SolverConfig,
) -> Result<Type2Solution> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::NonPositiveLambda(lambda));
    }
    cfg.validate()?;
    let summary = risk_summary(measure, risk)?;
    let delta_star = summary.delta_star;
    if !summary.separable {
        return Ok(Type2Solution {
            lambda,
            beta: lambda - delta_star,
            shift: lambda,
            rn_derivative: vec![1.0; measure.len()],
            residual: 0.0,
            iterations: 0,
        });
    }
    let gaps = gaps(risk, delta_star);
    let h = |s: f64| {
        let (first, second) = harmonic_sums(measure, &gaps, s);
        (1.0 / first, second / (first * first))
    };
    let start_hi = f64::max(1.0, 1.0 + delta_star);
    let out = solve_shift(h, lambda, start_hi, cfg)?;
    let rn_derivative = gaps.iter().map(|g| lambda / (out.shift + g)).collect();
    Ok(Type2Solution {
        lambda,
        beta: out.shift - delta_star,
        shift: out.shift,
        rn_derivative,
        residual: out.residual,
        iterations: out.iterations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdmissibleSet {
    /// `λ ∈ (0, ∞)`.
    OpenFromZero,
    /// `λ ∈ [λ*, ∞)` with `λ* = K̄⁻¹(-δ*)`.
    ClosedFromLambdaStar,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolvabilityReport {
    pub a_set_kind: AdmissibleSet,
    pub lambda_star: f64,
    /// Whether `-δ*` is excluded from the codomain of `K̄`.
    pub c_lower_open: bool,
    /// `∫ 1 / (L - δ*) dQ`, possibly infinite.
    pub divergence_integral: f64,
}

impl SolvabilityReport {
    /// Classifies the admissible sets from the value of `∫ 1/(L - δ*) dQ`.
    pub fn from_divergence_integral(integral: f64) -> Self {
        if integral.is_finite() {
            Self {
                a_set_kind: AdmissibleSet::ClosedFromLambdaStar,
                lambda_star: 1.0 / integral,
                c_lower_open: false,
                divergence_integral: integral,
            }
        } else {
            Self {
                a_set_kind: AdmissibleSet::OpenFromZero,
                lambda_star: 0.0,
                c_lower_open: true,
                divergence_integral: f64::INFINITY,
            }
        }
    }
}

/// For a finite support some atom always attains `δ*`, so the integral
/// diverges and every `λ > 0` is admissible.
pub fn classify_solvability(measure: &DiscreteMeasure, risk: &RiskProfile) -> SolvabilityReport {
    let delta_star = risk.min();
    let integral = if risk.len() != measure.len() || risk.is_empty() {
        f64::INFINITY
    } else {
        let terms = measure.weights().iter().zip(risk.values()).map(|(q, l)| {
            let gap = l - delta_star;
            if gap == 0.0 {
                f64::INFINITY
            } else {
                q / gap
            }
        });
        compensated_sum(terms)
    };
    SolvabilityReport::from_divergence_integral(if integral.is_nan() {
        f64::INFINITY
    } else {
        integral
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{build_measure, ModelId};

    fn inst(q: &[f64], l: &[f64]) -> (DiscreteMeasure, RiskProfile) {
        (
            build_measure(q).unwrap(),
            RiskProfile::new(l.to_vec()).unwrap(),
        )
    }

    fn two_atom_beta(c: f64, eps: f64, lambda: f64) -> f64 {
        let h = (c - lambda) / 2.0;
        -h + (h * h + lambda * c * eps).sqrt()
    }

    #[test]
    fn kbar_inverse_examples() {
        let (q, l) = inst(&[0.2, 0.8], &[1.5, 1.5]);
        assert!((kbar_inverse(&q, &l, 0.7).unwrap() - 2.2).abs() < 1e-14);

        let (q, l) = inst(&[0.5, 0.5], &[0.0, 1.0]);
        let direct = 1.0 / (0.5 / 1.0 + 0.5 / 2.0);
        assert!((kbar_inverse(&q, &l, 1.0).unwrap() - direct).abs() < 1e-15);
        assert!((direct - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn kbar_inverse_rejects_out_of_domain() {
        let (q, l) = inst(&[0.5, 0.5], &[0.3, 1.0]);
        assert!(matches!(
            kbar_inverse(&q, &l, -0.3),
            Err(Error::BetaOutOfDomain { .. })
        ));
        assert!(matches!(
            kbar_inverse_derivative(&q, &l, -1.0),
            Err(Error::BetaOutOfDomain { .. })
        ));
        assert!(kbar_inverse(&q, &l, -0.29).is_ok());
    }

    #[test]
    fn derivative_examples() {
        let (q, l) = inst(&[0.3, 0.7], &[2.0, 2.0]);
        assert_eq!(kbar_inverse_derivative(&q, &l, 0.5).unwrap(), 1.0);

        let (q, l) = inst(&[0.5, 0.5], &[0.0, 1.0]);
        let direct = (0.5 / 1.0 + 0.5 / 4.0) / (0.75f64 * 0.75);
        let got = kbar_inverse_derivative(&q, &l, 1.0).unwrap();
        assert!((got - direct).abs() < 1e-15);
        assert!((got - 10.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let (q, l) = inst(&[0.1, 0.4, 0.5], &[0.2, 0.9, 3.0]);
        for beta in [-0.1, 0.0, 0.5, 4.0] {
            let h = 1e-6;
            let fd = (kbar_inverse(&q, &l, beta + h).unwrap()
                - kbar_inverse(&q, &l, beta - h).unwrap())
                / (2.0 * h);
            let d = kbar_inverse_derivative(&q, &l, beta).unwrap();
            assert!((fd - d).abs() < 1e-7, "beta={beta}: {fd} vs {d}");
            assert!(d > 1.0);
        }
    }

    #[test]
    fn nonseparable_fast_path() {
        let (q, l) = inst(&[0.25, 0.75], &[0.4, 0.4]);
        let s = solve_type2(&q, &l, 2.0, &SolverConfig::default()).unwrap();
        assert_eq!(s.rn_derivative, vec![1.0, 1.0]);
        assert_eq!(s.beta, 2.0 - 0.4);
        assert_eq!(s.iterations, 0);
    }

    #[test]
    fn two_atom_closed_form() {
        let (q, l) = inst(&[0.5, 0.5], &[0.0, 1.0]);
        let s = solve_type2(&q, &l, 1.0, &SolverConfig::default()).unwrap();
        let beta = two_atom_beta(1.0, 0.5, 1.0);
        assert!((beta - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((s.beta - beta).abs() < 1e-12);
        assert!((s.rn_derivative[0] - 1.0 / beta).abs() < 1e-11);
        assert!((s.rn_derivative[0] - std::f64::consts::SQRT_2).abs() < 1e-5);
        assert!((s.rn_derivative[1] - 0.58579).abs() < 1e-5);
    }

    #[test]
    fn closed_form_grid_with_shifted_risk() {
        // L = {0, c} with Q(L = 0) = eps
        for c in [0.5, 1.0, 2.0] {
            for eps in [0.1, 0.5, 0.9] {
                for lambda in [0.01, 0.1, 1.0, 10.0] {
                    let (q, l) = inst(&[eps, 1.0 - eps], &[0.0, c]);
                    let s = solve_type2(&q, &l, lambda, &SolverConfig::default()).unwrap();
                    let want = two_atom_beta(c, eps, lambda);
                    assert!((s.beta - want).abs() < 1e-10, "{c} {eps} {lambda}");
                }
            }
        }
    }

    #[test]
    fn rn_bound_attained_on_minimizers() {
        let (q, l) = inst(&[0.2, 0.3, 0.1, 0.4], &[1.0, 0.25, 0.25, 2.0]);
        let s = solve_type2(&q, &l, 0.3, &SolverConfig::default()).unwrap();
        let summary = risk_summary(&q, &l).unwrap();
        assert_eq!(summary.lstar_ids, vec![ModelId(1), ModelId(2)]);
        let max = s.rn_derivative.iter().copied().fold(f64::MIN, f64::max);
        assert_eq!(max, s.rn_bound());
        for id in q.ids() {
            let on = summary.lstar_ids.contains(&id);
            assert_eq!(s.rn_derivative[id.0] == max, on);
        }
        let stated_bound = s.lambda / (summary.delta_star + s.beta);
        assert!((max - stated_bound).abs() <= 1e-12 * max);
    }

    #[test]
    fn tiny_lambda_concentrates_on_minimizers() {
        let (q, l) = inst(&[0.2, 0.3, 0.5], &[3.7, 4.0, 9.0]);
        let s = solve_type2(&q, &l, 1e-9, &SolverConfig::default()).unwrap();
        let total: f64 = q
            .weights()
            .iter()
            .zip(&s.rn_derivative)
            .map(|(a, b)| a * b)
            .sum();
        assert!((total - 1.0).abs() < 1e-10);
        assert!((s.rn_derivative[0] - 5.0).abs() < 1e-6);
    }

    #[test]
    fn rejects_bad_arguments() {
        let (q, l) = inst(&[0.5, 0.5], &[0.0, 1.0]);
        let cfg = SolverConfig::default();
        assert!(matches!(
            solve_type2(&q, &l, 0.0, &cfg),
            Err(Error::NonPositiveLambda(_))
        ));
        let bad = SolverConfig {
            bracket_growth: 1.0,
            ..cfg
        };
        assert!(matches!(
            solve_type2(&q, &l, 1.0, &bad),
            Err(Error::InvalidSolverConfig(_))
        ));
    }

    #[test]
    fn iteration_budget_is_enforced() {
        let (q, l) = inst(&[0.3, 0.3, 0.4], &[0.0, 1.0, 7.0]);
        let cfg = SolverConfig {
            max_iter: 1,
            ..SolverConfig::default()
        };
        assert!(matches!(
            solve_type2(&q, &l, 1e-4, &cfg),
            Err(Error::NoConvergence { .. })
        ));
    }

    #[test]
    fn finite_support_is_open_from_zero() {
        let (q, l) = inst(&[0.5, 0.5], &[0.0, 1.0]);
        let r = classify_solvability(&q, &l);
        assert_eq!(r.a_set_kind, AdmissibleSet::OpenFromZero);
        assert_eq!(r.lambda_star, 0.0);
        assert!(r.c_lower_open);
        assert!(r.divergence_integral.is_infinite());

        let (q, l) = inst(&[0.5, 0.5], &[2.0, 2.0]);
        assert_eq!(
            classify_solvability(&q, &l).a_set_kind,
            AdmissibleSet::OpenFromZero
        );
    }

    #[test]
    fn finite_integral_gives_closed_set() {
        let r = SolvabilityReport::from_divergence_integral(4.0);
        assert_eq!(r.a_set_kind, AdmissibleSet::ClosedFromLambdaStar);
        assert_eq!(r.lambda_star, 0.25);
        assert!(!r.c_lower_open);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(128))]
            #[test]
            fn solution_invariants(
                pairs in prop::collection::vec((0.01f64..1.0, 0.0f64..10.0), 2..100),
                log_lambda in -3.0f64..3.0,
            ) {
                let (w, l): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
                let (q, l) = inst(&w, &l);
                let lambda = 10f64.powf(log_lambda);
                let cfg = SolverConfig::default();
                let s = solve_type2(&q, &l, lambda, &cfg).unwrap();
                prop_assert!(s.beta > -l.min());
                prop_assert!(s.residual <= cfg.tolerance(lambda));
                let total = q.integrate(|i| s.rn_derivative[i]);
                prop_assert!((total - 1.0).abs() < 1e-10);
                let lv = l.values();
                for i in 0..lv.len() {
                    prop_assert!(s.rn_derivative[i] > 0.0 && s.rn_derivative[i].is_finite());
                    for j in 0..lv.len() {
                        if lv[i] < lv[j] {
                            prop_assert!(s.rn_derivative[i] > s.rn_derivative[j]);
                        }
                    }
                }
                // K̄ is strictly increasing and bounded by λ
                let s2 = solve_type2(&q, &l, lambda * 1.5, &cfg).unwrap();
                prop_assert!(s2.beta > s.beta);
                prop_assert!(s.beta <= lambda * (1.0 + 1e-12));
            }
        }
    }
}
