use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters of the λ-sweep. Every field has a default, so a JSON config
/// only needs the fields it changes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Models tile `[-h, h]²`.
    pub grid_half_width: f64,
    /// Odd, so the origin is a grid point.
    pub grid_points_per_axis: usize,
    pub lambda_grid: Vec<f64>,
    pub train_size: usize,
    pub test_size: usize,
    pub repetitions: usize,
    pub rng_seed: u64,
}

/// `count` points evenly spaced in log scale over `[lo, hi]`.
pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.log10(), hi.log10());
    (0..count)
        .map(|k| 10f64.powf(a + (b - a) * k as f64 / (count - 1) as f64))
        .collect()
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            grid_half_width: 50.0,
            grid_points_per_axis: 201,
            lambda_grid: log_spaced(1e-3, 10.0, 40),
            train_size: 2000,
            test_size: 500,
            repetitions: 5,
            rng_seed: 0,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if !(self.grid_half_width > 0.0 && self.grid_half_width.is_finite()) {
            return fail("grid_half_width must be positive");
        }
        if self.grid_points_per_axis < 3 || self.grid_points_per_axis.is_multiple_of(2) {
            return fail("grid_points_per_axis must be odd and at least 3");
        }
        if self.lambda_grid.is_empty() {
            return fail("lambda_grid must not be empty");
        }
        if self
            .lambda_grid
            .iter()
            .any(|l| !(*l > 0.0 && l.is_finite()))
        {
            return fail("every lambda must be positive and finite");
        }
        if self.train_size == 0 || self.test_size == 0 {
            return fail("train_size and test_size must be at least 1");
        }
        if self.repetitions == 0 {
            return fail("repetitions must be at least 1");
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self =
            serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// λ values sorted ascending with duplicates removed.
    pub fn sorted_lambdas(&self) -> Vec<f64> {
        let mut l = self.lambda_grid.clone();
        l.sort_by(f64::total_cmp);
        l.dedup();
        l
    }
}
