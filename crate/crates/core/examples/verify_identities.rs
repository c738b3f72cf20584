//! Checks every solver property on a batch of random instances.

use ermrer::analysis::{run_verify, VerifyConfig};

fn main() -> ermrer::Result<()> {
    let cfg = VerifyConfig {
        instances: 20,
        ..VerifyConfig::default()
    };
    let report = run_verify(&cfg)?;
    print!("{report}");
    println!("all passed: {}", report.all_passed());
    Ok(())
}
