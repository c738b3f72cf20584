use rand::seq::index::sample;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

use super::hog::{hog, ImageMatrix};
use super::pca::{pca_fit, pca_project, Projection};

/// Labelled patterns for binary classification.
///
/// `label_pair` orders the two labels: a positive score predicts the second,
/// anything else (ties included) the first.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub patterns: Vec<Vec<f64>>,
    pub labels: Vec<u8>,
    pub label_pair: [u8; 2],
    pub projection: Option<Projection>,
}

impl Dataset {
    pub fn new(patterns: Vec<Vec<f64>>, labels: Vec<u8>, label_pair: [u8; 2]) -> Result<Self> {
        if patterns.len() != labels.len() {
            return Err(Error::LengthMismatch {
                expected: patterns.len(),
                found: labels.len(),
            });
        }
        if let Some(d) = patterns.first().map(Vec::len) {
            if let Some((index, p)) = patterns.iter().enumerate().find(|(_, p)| p.len() != d) {
                return Err(Error::DimensionMismatch {
                    index,
                    expected: d,
                    found: p.len(),
                });
            }
        }
        if let Some(y) = labels.iter().find(|y| !label_pair.contains(y)) {
            return Err(Error::InvalidConfig(format!(
                "label {y} is not one of {label_pair:?}"
            )));
        }
        Ok(Self {
            patterns,
            labels,
            label_pair,
            projection: None,
        })
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.patterns.first().map_or(0, Vec::len)
    }

    /// `n` records drawn without replacement (all of them when `n` is at
    /// least the size), kept in their original order.
    pub fn subsample<R: Rng>(&self, n: usize, rng: &mut R) -> Self {
        let mut idx = if n >= self.len() {
            (0..self.len()).collect()
        } else {
            sample(rng, self.len(), n).into_vec()
        };
        idx.sort_unstable();
        Self {
            patterns: idx.iter().map(|&i| self.patterns[i].clone()).collect(),
            labels: idx.iter().map(|&i| self.labels[i]).collect(),
            label_pair: self.label_pair,
            projection: self.projection.clone(),
        }
    }

    /// Projects every pattern to two dimensions.
    pub fn project(&self, projection: &Projection) -> Result<Self> {
        let patterns = self
            .patterns
            .iter()
            .map(|p| pca_project(projection, p).map(|x| x.to_vec()))
            .collect::<Result<_>>()?;
        Ok(Self {
            patterns,
            labels: self.labels.clone(),
            label_pair: self.label_pair,
            projection: Some(projection.clone()),
        })
    }
}

/// Two Gaussian clusters with means `-(1, 1)` (label 0) and `(1, 1)`
/// (label 1), unit covariance, labels drawn with probability one half.
pub fn synthetic_gaussian<R: Rng>(n: usize, rng: &mut R) -> Dataset {
    let mut patterns = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let y = u8::from(rng.random_bool(0.5));
        let mean = if y == 1 { 1.0 } else { -1.0 };
        let x: f64 = rng.sample(StandardNormal);
        let z: f64 = rng.sample(StandardNormal);
        patterns.push(vec![mean + x, mean + z]);
        labels.push(y);
    }
    Dataset::new(patterns, labels, [0, 1]).expect("consistent by construction")
}

/// HOG features of labelled images, then PCA fitted on `train` and applied
/// to both sets.
pub fn images_to_datasets(
    train: &[(ImageMatrix, u8)],
    test: &[(ImageMatrix, u8)],
    label_pair: [u8; 2],
) -> Result<(Dataset, Dataset)> {
    let featurize = |records: &[(ImageMatrix, u8)]| {
        Dataset::new(
            records.iter().map(|(img, _)| hog(img)).collect(),
            records.iter().map(|(_, y)| *y).collect(),
            label_pair,
        )
    };
    let train = featurize(train)?;
    let test = featurize(test)?;
    let projection = pca_fit(&train.patterns)?;
    Ok((train.project(&projection)?, test.project(&projection)?))
}
