//! Two-component principal component analysis.
//!
//! The covariance is taken about the mean with `1/(n-1)` scaling, but
//! patterns are projected as they are, without subtracting the mean, so the
//! projected coordinates differ from the centered ones by a constant offset.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    /// Top two eigenvectors as columns, `d × 2`.
    pub basis: DMatrix<f64>,
    pub eigenvalues: [f64; 2],
    pub mean: Vec<f64>,
}

impl Projection {
    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }
}

fn validate(patterns: &[Vec<f64>]) -> Result<usize> {
    let n = patterns.len();
    if n < 3 {
        return Err(Error::TooFewPatterns {
            needed: 3,
            found: n,
        });
    }
    let d = patterns[0].len();
    if let Some((index, p)) = patterns.iter().enumerate().find(|(_, p)| p.len() != d) {
        return Err(Error::DimensionMismatch {
            index,
            expected: d,
            found: p.len(),
        });
    }
    Ok(d)
}

/// Patterns minus their mean, one per row, and the mean.
fn centered(patterns: &[Vec<f64>], d: usize) -> (DMatrix<f64>, Vec<f64>) {
    let n = patterns.len();
    let mut mean = vec![0.0; d];
    for p in patterns {
        for (m, x) in mean.iter_mut().zip(p) {
            *m += x;
        }
    }
    for m in &mut mean {
        *m /= n as f64;
    }
    (
        DMatrix::from_fn(n, d, |r, c| patterns[r][c] - mean[c]),
        mean,
    )
}

/// Sample covariance `Σ (x - μ)(x - μ)ᵀ / (n - 1)` and the mean `μ`.
pub fn covariance(patterns: &[Vec<f64>]) -> Result<(DMatrix<f64>, Vec<f64>)> {
    let d = validate(patterns)?;
    let (xc, mean) = centered(patterns, d);
    let cov = xc.transpose() * &xc / (patterns.len() as f64 - 1.0);
    Ok((cov, mean))
}

/// Eigenpairs sorted by decreasing eigenvalue: `(values, vectors as columns)`.
fn sorted_eigen(m: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(eig.eigenvectors.nrows(), order.len(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    (values, vectors)
}

/// Fits the two leading principal directions.
///
/// With fewer patterns than dimensions the `n × n` Gram matrix of the
/// centered patterns is decomposed instead of the `d × d` covariance; both
/// share their nonzero eigenvalues, and `Xᵀu / sqrt((n-1)μ)` maps a Gram
/// eigenvector `u` to the covariance eigenvector.
pub fn pca_fit(patterns: &[Vec<f64>]) -> Result<Projection> {
    let d = validate(patterns)?;
    let n = patterns.len();
    let (xc, mean) = centered(patterns, d);
    let scale = n as f64 - 1.0;
    let (values, vectors) = if n < d {
        let (values, u) = sorted_eigen(&xc * xc.transpose() / scale);
        let mut v = DMatrix::zeros(d, values.len().min(2));
        for (c, &value) in values.iter().enumerate().take(v.ncols()) {
            if value > 0.0 {
                let col = xc.transpose() * u.column(c) / (scale * value).sqrt();
                v.set_column(c, &col);
            }
        }
        (values, v)
    } else {
        sorted_eigen(xc.transpose() * &xc / scale)
    };
    let top = values[0].max(0.0);
    let floor = 1e-12 * top.max(f64::MIN_POSITIVE);
    let positive = values.iter().filter(|&&v| v > floor).count();
    if positive < 2 {
        return Err(Error::DegenerateCovariance { positive });
    }
    let mut basis = DMatrix::zeros(d, 2);
    for c in 0..2 {
        let mut v = vectors.column(c).normalize();
        // fix the sign: largest-magnitude component positive
        let lead = v.iamax();
        if v[lead] < 0.0 {
            v = -v;
        }
        basis.set_column(c, &v);
    }
    Ok(Projection {
        basis,
        eigenvalues: [values[0], values[1]],
        mean,
    })
}

/// `Wᵀ x` for a raw (uncentered) pattern.
pub fn pca_project(projection: &Projection, pattern: &[f64]) -> Result<[f64; 2]> {
    if pattern.len() != projection.dim() {
        return Err(Error::DimensionMismatch {
            index: 0,
            expected: projection.dim(),
            found: pattern.len(),
        });
    }
    let mut out = [0.0; 2];
    for (c, o) in out.iter_mut().enumerate() {
        *o = projection
            .basis
            .column(c)
            .iter()
            .zip(pattern)
            .map(|(w, x)| w * x)
            .sum();
    }
    Ok(out)
}
