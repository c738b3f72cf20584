//! Relative-entropy-regularized empirical risk minimization over finite
//! model sets.
//!
//! Two regularizers are supported for a reference measure `Q` on models and
//! an empirical risk `L`:
//!
//! * Type-I, `min_P R(P) + λ·KL(P‖Q)`, solved by the Gibbs measure
//!   ([`gibbs::solve_type1`]);
//! * Type-II, `min_P R(P) + λ·KL(Q‖P)`, solved by `dP/dQ = λ / (β + L)`
//!   with `β` found by root-finding on the explicit inverse of the
//!   normalization function ([`normalization::solve_type2`]).
//!
//! [`analysis`] evaluates the functionals, divergences, and risk transforms
//! that relate the two solutions, and [`experiment`] runs a λ-sweep of both
//! on a small binary classification task with a grid of linear models.

// `!(x > y)` is used on purpose so that NaN inputs fail validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod error;
pub mod experiment;
pub mod gibbs;
pub mod measure;
pub mod normalization;
pub mod numeric;

pub use error::{Error, Result};
pub use gibbs::{log_partition, solve_type1, Type1Solution};
pub use measure::{
    build_measure, rashomon_mass, risk_summary, DiscreteMeasure, Fixture, ModelId, RiskProfile,
    RiskSummary,
};
pub use normalization::{
    classify_solvability, kbar_inverse, kbar_inverse_derivative, solve_type2, AdmissibleSet,
    SolvabilityReport, SolverConfig, Type2Solution,
};
