//! A reduced λ-sweep on synthetic data, printed as CSV.

use ermrer::experiment::config::log_spaced;
use ermrer::experiment::{run_experiment, to_csv, DataSource, ExperimentConfig, SweepSummary};

fn main() -> ermrer::Result<()> {
    let cfg = ExperimentConfig {
        grid_points_per_axis: 51,
        lambda_grid: log_spaced(1e-3, 10.0, 8),
        train_size: 400,
        test_size: 100,
        repetitions: 2,
        ..ExperimentConfig::default()
    };
    let rows = run_experiment(&cfg, &DataSource::Synthetic)?;
    print!("{}", to_csv(&rows));
    eprintln!("{}", SweepSummary::from_rows(&rows));
    Ok(())
}
