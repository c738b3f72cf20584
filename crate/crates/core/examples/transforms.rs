//! Each regularizer reproduces the other under a transformed risk.

use ermrer::analysis::{transform_risk, type1_via_v, type2_via_w, TransformKind};
use ermrer::{solve_type1, solve_type2, DiscreteMeasure, RiskProfile, SolverConfig};

fn main() -> ermrer::Result<()> {
    let q = DiscreteMeasure::new(&[0.5, 0.3, 0.2])?;
    let l = RiskProfile::new(vec![0.0, 0.6, 1.5])?;
    let cfg = SolverConfig::default();
    let lambda = 0.4;

    let v = transform_risk(&q, &l, lambda, TransformKind::V, &cfg)?;
    println!("V = {:.6?}", v.values);
    let via_v = type1_via_v(&q, &l, lambda, &cfg)?;
    let type2 = solve_type2(&q, &l, lambda, &cfg)?;
    println!("Type-I on V:   {:.10?}", via_v.rn_derivative);
    println!("Type-II on L:  {:.10?}", type2.rn_derivative);

    let w = transform_risk(&q, &l, lambda, TransformKind::W, &cfg)?;
    println!("W = {:.6?}", w.values);
    let via_w = type2_via_w(&q, &l, lambda, &cfg)?;
    let type1 = solve_type1(&q, &l, lambda)?;
    println!("Type-II on W:  {:.10?}", via_w.rn_derivative);
    println!("Type-I on L:   {:.10?}", type1.rn_derivative());
    Ok(())
}
