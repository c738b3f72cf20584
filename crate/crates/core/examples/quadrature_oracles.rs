//! Reference problems with known answers: a convergent and a divergent
//! normalization integral, and a two-atom closed form.

use ermrer::analysis::{quadrature_oracle_example, OracleExample};

fn main() {
    for which in [OracleExample::Ex1, OracleExample::Ex2, OracleExample::Ex3] {
        let r = quadrature_oracle_example(which);
        println!(
            "{which:?}: integral = {:?}, divergent = {}, admissible = {:?}, λ* = {:?}, \
             K̄(λ*) = {:?}, max error = {:?}",
            r.divergence_integral,
            r.divergent,
            r.admissible_set,
            r.lambda_star,
            r.kbar_at_lambda_star,
            r.max_error
        );
        if let Some(refinement) = r.refinement {
            for (radius, estimate) in refinement.excision_radii.iter().zip(&refinement.estimates) {
                println!("    excising {radius:.0e}: {estimate:.6e}");
            }
        }
    }
}
