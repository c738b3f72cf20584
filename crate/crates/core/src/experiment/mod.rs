//! A λ-sweep of both solutions on a binary classification task.
//!
//! Models are linear classifiers `x ↦ sign(⟨x, θ⟩)` with `θ` on a uniform
//! grid over a square, data are two-dimensional (either synthetic or HOG
//! features of images reduced by PCA), and the risk is the 0-1 loss.

pub mod config;
pub mod data;
pub mod grid;
pub mod hog;
pub mod idx;
pub mod pca;
pub mod sweep;

pub use config::ExperimentConfig;
pub use data::{images_to_datasets, synthetic_gaussian, Dataset};
pub use grid::{build_model_grid, empirical_risk_profile};
pub use hog::{hog, ImageMatrix, HOG_LEN};
pub use idx::{ingest_idx, read_idx_images, read_idx_labels, write_idx_images, write_idx_labels};
pub use pca::{pca_fit, pca_project, Projection};
pub use sweep::{
    build_pools, repetition_data, run_experiment, run_sweep, to_csv, write_csv, DataSource,
    SolutionType, SweepRow, SweepSummary, CSV_HEADER,
};
