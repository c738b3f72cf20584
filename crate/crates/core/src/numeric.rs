//! Small floating-point helpers shared by the solvers.

/// Neumaier-compensated sum.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0_f64;
    let mut carry = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

/// `log Σ w_i exp(x_i)` for positive weights, with max-subtraction.
///
/// Returns `-inf` for an empty input.
pub fn weighted_log_sum_exp(weights: &[f64], exponents: &[f64]) -> f64 {
    debug_assert_eq!(weights.len(), exponents.len());
    let max = exponents.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    let s = compensated_sum(
        weights
            .iter()
            .zip(exponents)
            .map(|(w, x)| w * (x - max).exp()),
    );
    max + s.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let v = [1.0, 1e-16, 1e-16, 1e-16, 1e-16, -1.0];
        assert!((compensated_sum(v) - 4e-16).abs() < 1e-30);
    }

    #[test]
    fn log_sum_exp_survives_large_exponents() {
        let got = weighted_log_sum_exp(&[0.5, 0.5], &[1000.0, 1000.0]);
        assert!((got - 1000.0).abs() < 1e-12);
        let got = weighted_log_sum_exp(&[0.5, 0.5], &[-1000.0, -1001.0]);
        let want = -1000.0 + (0.5 + 0.5 * (-1.0f64).exp()).ln();
        assert!((got - want).abs() < 1e-12);
    }
}
