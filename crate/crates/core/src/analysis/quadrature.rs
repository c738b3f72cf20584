//! Numerical checks against reference measures with a density, where the
//! normalization integrals have known closed forms.
//!
//! Example 1: `dQ = 4θ²e^{-2θ} dθ` on `[0, ∞)` with `L = θ²`, so `δ* = 0` and
//! `∫ 1/L dQ = ∫ 4e^{-2θ} dθ = 2`. The integral is finite, hence `K̄⁻¹(-δ*) =
//! 1/2` and `K̄(1/2) = 0`.
//!
//! Example 2: same `Q` with `L = (θ - 1)²`. Near `θ = 1` the integrand of
//! `∫ 1/L dQ` behaves like `4e^{-2}/(θ - 1)²`, so the integral diverges.
//!
//! Example 3: two atoms with risks `{0, c}` and mass `ε` on the zero-risk atom,
//! where `K̄(λ)` solves a quadratic.

use serde::Serialize;

use crate::measure::{build_measure, RiskProfile};
use crate::normalization::{solve_type2, AdmissibleSet, SolvabilityReport, SolverConfig};

/// Absolute tolerance per panel, scaled up by the panel's own magnitude when
/// that exceeds one.
pub const PANEL_TOLERANCE: f64 = 1e-8;
/// Refined estimates above this that keep growing are declared divergent.
pub const DIVERGENCE_THRESHOLD: f64 = 1e6;
/// Upper end of the truncated domain; the tail beyond it is below `1e-30`.
pub const DOMAIN_END: f64 = 40.0;

const MAX_DEPTH: u32 = 40;

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    fa: f64,
    m: f64,
    fm: f64,
    b: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson's rule on `[a, b]`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let tol = tol * whole.abs().max(1.0);
    simpson_step(f, a, fa, m, fm, b, fb, whole, tol, MAX_DEPTH)
}

/// Sums adaptive Simpson over consecutive panels `[breaks[k], breaks[k+1]]`.
pub fn integrate_panels<F: Fn(f64) -> f64>(f: &F, breaks: &[f64]) -> f64 {
    breaks
        .windows(2)
        .map(|w| adaptive_simpson(f, w[0], w[1], PANEL_TOLERANCE))
        .sum()
}

/// Breakpoints on `[a, b]`: every integer, plus points at distances
/// `h, 10h, 100h, ...` from each entry of `focus`.
fn breakpoints(a: f64, b: f64, focus: &[(f64, f64)]) -> Vec<f64> {
    let mut pts = vec![a, b];
    let mut x = a.ceil();
    while x < b {
        pts.push(x);
        x += 1.0;
    }
    for &(center, h) in focus.iter().filter(|(_, h)| *h > 0.0) {
        let mut d = h;
        while d < 1.0 {
            for p in [center - d, center + d] {
                if p > a && p < b {
                    pts.push(p);
                }
            }
            d *= 10.0;
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Integral with a neighbourhood `(s - h, s + h)` of a suspected singular
/// point excised, for a decreasing sequence of `h`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Refinement {
    pub excision_radii: Vec<f64>,
    pub estimates: Vec<f64>,
    pub divergent: bool,
}

impl Refinement {
    pub fn value(&self) -> f64 {
        if self.divergent {
            f64::INFINITY
        } else {
            *self.estimates.last().unwrap_or(&f64::NAN)
        }
    }
}

pub fn refine_near<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, singular: f64) -> Refinement {
    let mut radii = Vec::new();
    let mut estimates = Vec::new();
    for k in 1..=10 {
        let h = 10f64.powi(-k);
        let left = breakpoints(a, (singular - h).min(b), &[(singular, h)]);
        let right = breakpoints((singular + h).max(a), b, &[(singular, h)]);
        let mut total = 0.0;
        if singular - h > a {
            total += integrate_panels(f, &left);
        }
        if singular + h < b {
            total += integrate_panels(f, &right);
        }
        radii.push(h);
        estimates.push(total);
    }
    let n = estimates.len();
    let growing = estimates.windows(2).skip(n - 4).all(|w| w[1] > w[0]) && {
        let last = estimates[n - 1] - estimates[n - 2];
        let prev = estimates[n - 2] - estimates[n - 3];
        last >= 0.5 * prev
    };
    Refinement {
        excision_radii: radii,
        estimates: estimates.clone(),
        divergent: estimates[n - 1] > DIVERGENCE_THRESHOLD && growing,
    }
}

fn density(theta: f64) -> f64 {
    4.0 * theta * theta * (-2.0 * theta).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OracleExample {
    Ex1,
    Ex2,
    Ex3,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub example: OracleExample,
    /// `∫ 1/(L - δ*) dQ`; infinite when divergent (serialized as null).
    pub divergence_integral: Option<f64>,
    pub divergent: bool,
    pub refinement: Option<Refinement>,
    pub admissible_set: Option<String>,
    pub lambda_star: Option<f64>,
    /// `K̄(λ*)`, expected to equal `-δ*`.
    pub kbar_at_lambda_star: Option<f64>,
    /// Largest `|β - closed form|` over the two-atom grid.
    pub max_error: Option<f64>,
}

impl OracleReport {
    fn empty(example: OracleExample) -> Self {
        Self {
            example,
            divergence_integral: None,
            divergent: false,
            refinement: None,
            admissible_set: None,
            lambda_star: None,
            kbar_at_lambda_star: None,
            max_error: None,
        }
    }
}

fn describe(report: &SolvabilityReport) -> String {
    match report.a_set_kind {
        AdmissibleSet::OpenFromZero => "OpenFromZero".into(),
        AdmissibleSet::ClosedFromLambdaStar => "ClosedFromLambdaStar".into(),
    }
}

/// `K̄⁻¹(s)` for Example 1 by quadrature, with `δ* = 0` so `β = s`.
fn ex1_kbar_inverse(s: f64) -> f64 {
    let f = |t: f64| density(t) / (s + t * t);
    let breaks = breakpoints(0.0, DOMAIN_END, &[(0.0, s.sqrt() * 1e-2)]);
    1.0 / integrate_panels(&f, &breaks)
}

/// Solves `K̄⁻¹(β) = λ` for Example 1 by bisection on `β ∈ (0, 1]`, which is
/// independent of the discrete solver.
fn ex1_kbar(lambda: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while ex1_kbar_inverse(hi) < lambda {
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if ex1_kbar_inverse(mid) < lambda {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Closed-form `K̄(λ)` for risks `{0, c}` with mass `ε` on the zero-risk atom.
pub fn two_atom_beta(c: f64, eps: f64, lambda: f64) -> f64 {
    let half = 0.5 * (c - lambda);
    -half + (half * half + lambda * c * eps).sqrt()
}

pub const EX3_C: [f64; 3] = [0.5, 1.0, 2.0];
pub const EX3_EPS: [f64; 3] = [0.1, 0.5, 0.9];
pub const EX3_LAMBDA: [f64; 4] = [0.01, 0.1, 1.0, 10.0];

pub fn quadrature_oracle_example(which: OracleExample) -> OracleReport {
    let mut report = OracleReport::empty(which);
    match which {
        OracleExample::Ex1 => {
            let f = |t: f64| density(t) / (t * t);
            let refinement = refine_near(&f, 0.0, DOMAIN_END, 0.0);
            let integral = refinement.value();
            let solvability = SolvabilityReport::from_divergence_integral(integral);
            report.divergence_integral = Some(integral);
            report.divergent = refinement.divergent;
            report.admissible_set = Some(describe(&solvability));
            report.lambda_star = Some(solvability.lambda_star);
            if integral.is_finite() {
                report.kbar_at_lambda_star = Some(ex1_kbar(solvability.lambda_star));
            }
            report.refinement = Some(refinement);
        }
        OracleExample::Ex2 => {
            let f = |t: f64| density(t) / ((t - 1.0) * (t - 1.0));
            let refinement = refine_near(&f, 0.0, DOMAIN_END, 1.0);
            let solvability = SolvabilityReport::from_divergence_integral(refinement.value());
            report.divergence_integral = Some(refinement.value());
            report.divergent = refinement.divergent;
            report.admissible_set = Some(describe(&solvability));
            report.lambda_star = Some(solvability.lambda_star);
            report.refinement = Some(refinement);
        }
        OracleExample::Ex3 => {
            let cfg = SolverConfig::default();
            let mut worst = 0.0f64;
            for c in EX3_C {
                for eps in EX3_EPS {
                    let q = build_measure(&[eps, 1.0 - eps]).expect("valid weights");
                    let l = RiskProfile::new(vec![0.0, c]).expect("valid risks");
                    for lambda in EX3_LAMBDA {
                        let err = match solve_type2(&q, &l, lambda, &cfg) {
                            Ok(s) => (s.beta - two_atom_beta(c, eps, lambda)).abs(),
                            Err(_) => f64::INFINITY,
                        };
                        worst = worst.max(err);
                    }
                }
            }
            report.max_error = Some(worst);
        }
    }
    report
}
