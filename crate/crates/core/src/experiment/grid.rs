use crate::error::{Error, Result};
use crate::measure::{DiscreteMeasure, RiskProfile};

use super::config::ExperimentConfig;
use super::data::Dataset;

/// Uniform measure on an `n × n` grid over `[-h, h]²`; each atom's label is
/// its coordinate pair `θ`.
pub fn build_model_grid(cfg: &ExperimentConfig) -> Result<DiscreteMeasure> {
    cfg.validate()?;
    let n = cfg.grid_points_per_axis;
    let h = cfg.grid_half_width;
    // symmetric and exact at the origin
    let axis: Vec<f64> = (0..n)
        .map(|k| h * (2.0 * k as f64 - (n - 1) as f64) / (n - 1) as f64)
        .collect();
    let mut labels = Vec::with_capacity(n * n);
    for &a in &axis {
        for &b in &axis {
            labels.push(vec![a, b]);
        }
    }
    let w = 1.0 / (n * n) as f64;
    DiscreteMeasure::with_labels(&vec![w; n * n], labels)
}

/// Whether the linear classifier `θ` predicts the second label for `x`.
pub fn predicts_second(theta: &[f64], x: &[f64]) -> bool {
    theta.iter().zip(x).map(|(t, v)| t * v).sum::<f64>() > 0.0
}

/// 0-1 empirical risk of every model on the grid.
pub fn empirical_risk_profile(grid: &DiscreteMeasure, data: &Dataset) -> Result<RiskProfile> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let thetas = grid
        .labels()
        .ok_or_else(|| Error::InvalidConfig("model grid carries no coordinates".into()))?;
    let dim = thetas.first().map_or(0, Vec::len);
    if data.dim() != dim {
        return Err(Error::DimensionMismatch {
            index: 0,
            expected: dim,
            found: data.dim(),
        });
    }
    let second: Vec<bool> = data
        .labels
        .iter()
        .map(|y| *y == data.label_pair[1])
        .collect();
    let n = data.len() as f64;
    let values = thetas
        .iter()
        .map(|theta| {
            let wrong = data
                .patterns
                .iter()
                .zip(&second)
                .filter(|(x, is_second)| predicts_second(theta, x) != **is_second)
                .count();
            wrong as f64 / n
        })
        .collect();
    RiskProfile::new(values)
}
