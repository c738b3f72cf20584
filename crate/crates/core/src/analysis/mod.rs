//! Functionals of the solutions and the identities that relate them.

pub mod functionals;
pub mod optimality;
pub mod properties;
pub mod quadrature;
pub mod transform;

pub use functionals::{
    expected_log_risk, expected_log_risk_with, expected_risk, functional_report, kl, kl_between,
    log_risk_values, log_sensitivity, sensitivity, FunctionalReport, KlDirection,
};
pub use optimality::{find_lambda_delta_eps, solution_rashomon_mass};
pub use properties::{run_verify, Property, PropertyResult, VerifyConfig, VerifyReport};
pub use quadrature::{quadrature_oracle_example, OracleExample, OracleReport};
pub use transform::{
    transform_risk, type1_via_v, type2_via_w, RoundTrip, TransformKind, TransformedRisk,
};
