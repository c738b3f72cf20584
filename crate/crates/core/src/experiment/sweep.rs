//! The λ-sweep: for each repetition, subsample training and test data, build
//! both risk profiles over the model grid, and evaluate the Type-I and
//! Type-II solutions fitted on the training profile against both.

use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analysis::expected_risk;
use crate::error::Result;
use crate::gibbs::solve_type1;
use crate::measure::DiscreteMeasure;
use crate::normalization::{solve_type2, SolverConfig};

use super::config::ExperimentConfig;
use super::data::{images_to_datasets, synthetic_gaussian, Dataset};
use super::grid::{build_model_grid, empirical_risk_profile};
use super::idx::ingest_idx;

/// Synthetic pools hold this many times the requested sample sizes.
pub const POOL_FACTOR: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolutionType {
    I,
    II,
}

impl fmt::Display for SolutionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolutionType::I => "I",
            SolutionType::II => "II",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub repetition: usize,
    pub lambda: f64,
    pub kind: SolutionType,
    pub train_risk: f64,
    pub test_risk: f64,
    pub gap: f64,
}

pub const CSV_HEADER: &str = "repetition,lambda,type,train_risk,test_risk,gap";

/// Twelve significant digits.
fn num(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn write_csv<W: Write>(rows: &[SweepRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.repetition,
            num(r.lambda),
            r.kind,
            num(r.train_risk),
            num(r.test_risk),
            num(r.gap)
        )?;
    }
    Ok(())
}

pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

/// Training and test samples of one repetition, drawn without replacement
/// from the pools with seed `rng_seed + repetition`.
pub fn repetition_data(
    cfg: &ExperimentConfig,
    train_pool: &Dataset,
    test_pool: &Dataset,
    repetition: usize,
) -> (Dataset, Dataset) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed.wrapping_add(repetition as u64));
    let train = train_pool.subsample(cfg.train_size, &mut rng);
    let test = test_pool.subsample(cfg.test_size, &mut rng);
    (train, test)
}

fn sweep_repetition(
    cfg: &ExperimentConfig,
    grid: &DiscreteMeasure,
    train_pool: &Dataset,
    test_pool: &Dataset,
    repetition: usize,
) -> Result<Vec<SweepRow>> {
    let (train, test) = repetition_data(cfg, train_pool, test_pool, repetition);
    let l_train = empirical_risk_profile(grid, &train)?;
    let l_test = empirical_risk_profile(grid, &test)?;
    let solver = SolverConfig::default();
    let mut rows = Vec::new();
    for lambda in cfg.sorted_lambdas() {
        let type1 = solve_type1(grid, &l_train, lambda)?.rn_derivative();
        let type2 = solve_type2(grid, &l_train, lambda, &solver)?.rn_derivative;
        for (kind, rn) in [(SolutionType::I, &type1), (SolutionType::II, &type2)] {
            let train_risk = expected_risk(rn, grid, &l_train)?;
            let test_risk = expected_risk(rn, grid, &l_test)?;
            rows.push(SweepRow {
                repetition,
                lambda,
                kind,
                train_risk,
                test_risk,
                gap: test_risk - train_risk,
            });
        }
    }
    Ok(rows)
}

/// Runs every repetition (in parallel) and returns rows ordered by
/// repetition, then λ ascending, then Type-I before Type-II.
pub fn run_sweep(
    cfg: &ExperimentConfig,
    train_pool: &Dataset,
    test_pool: &Dataset,
) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let grid = build_model_grid(cfg)?;
    let per_rep: Vec<Result<Vec<SweepRow>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..cfg.repetitions)
            .map(|rep| {
                let grid = &grid;
                scope.spawn(move || sweep_repetition(cfg, grid, train_pool, test_pool, rep))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });
    let mut rows = Vec::new();
    for r in per_rep {
        rows.extend(r?);
    }
    Ok(rows)
}

/// Where the sweep's data comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    /// Two Gaussian clusters; pools of `POOL_FACTOR` times the sample sizes.
    Synthetic,
    /// IDX files, filtered to two labels, featurized by HOG and PCA.
    Images {
        images: PathBuf,
        labels: PathBuf,
        keep: [u8; 2],
    },
}

/// Builds the training and test pools for a source.
///
/// Image records are shuffled with the configured seed and split in the
/// proportion `train_size : test_size`; PCA is fitted on the training part.
pub fn build_pools(cfg: &ExperimentConfig, source: &DataSource) -> Result<(Dataset, Dataset)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    rng.set_stream(1);
    match source {
        DataSource::Synthetic => Ok((
            synthetic_gaussian(POOL_FACTOR * cfg.train_size, &mut rng),
            synthetic_gaussian(POOL_FACTOR * cfg.test_size, &mut rng),
        )),
        DataSource::Images {
            images,
            labels,
            keep,
        } => {
            let mut records = ingest_idx(images, labels, *keep)?;
            records.shuffle(&mut rng);
            let share = cfg.train_size as f64 / (cfg.train_size + cfg.test_size) as f64;
            let cut = ((records.len() as f64 * share).round() as usize).min(records.len());
            let (train, test) = records.split_at(cut);
            images_to_datasets(train, test, *keep)
        }
    }
}

pub fn run_experiment(cfg: &ExperimentConfig, source: &DataSource) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let (train, test) = build_pools(cfg, source)?;
    run_sweep(cfg, &train, &test)
}

/// Mean generalization gap per λ for both solution types.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSummary {
    pub lambdas: Vec<f64>,
    pub mean_gap_type1: Vec<f64>,
    pub mean_gap_type2: Vec<f64>,
}

impl SweepSummary {
    pub fn from_rows(rows: &[SweepRow]) -> Self {
        let mut lambdas: Vec<f64> = rows.iter().map(|r| r.lambda).collect();
        lambdas.sort_by(f64::total_cmp);
        lambdas.dedup();
        let mean = |lambda: f64, kind: SolutionType| {
            let gaps: Vec<f64> = rows
                .iter()
                .filter(|r| r.lambda == lambda && r.kind == kind)
                .map(|r| r.gap)
                .collect();
            gaps.iter().sum::<f64>() / gaps.len().max(1) as f64
        };
        Self {
            mean_gap_type1: lambdas.iter().map(|&l| mean(l, SolutionType::I)).collect(),
            mean_gap_type2: lambdas.iter().map(|&l| mean(l, SolutionType::II)).collect(),
            lambdas,
        }
    }

    /// Maximal runs of consecutive grid values where Type-II has the strictly
    /// lower mean gap, as `(first λ, last λ)`.
    pub fn type2_lower_gap_ranges(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        let mut start = None;
        for k in 0..self.lambdas.len() {
            let lower = self.mean_gap_type2[k] < self.mean_gap_type1[k];
            match (lower, start) {
                (true, None) => start = Some(k),
                (false, Some(s)) => {
                    out.push((self.lambdas[s], self.lambdas[k - 1]));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            out.push((self.lambdas[s], *self.lambdas.last().unwrap()));
        }
        out
    }
}

impl fmt::Display for SweepSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ranges = self.type2_lower_gap_ranges();
        if ranges.is_empty() {
            return write!(f, "Type-II mean generalization gap is never below Type-I");
        }
        write!(
            f,
            "Type-II mean generalization gap below Type-I for lambda in"
        )?;
        for (k, (a, b)) in ranges.iter().enumerate() {
            let sep = if k == 0 { " " } else { ", " };
            write!(f, "{sep}[{a:.4e}, {b:.4e}]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::risk_summary;

    fn small() -> ExperimentConfig {
        ExperimentConfig {
            grid_points_per_axis: 21,
            grid_half_width: 5.0,
            lambda_grid: vec![1e-6, 1e-2, 0.1, 1.0, 1e6],
            train_size: 60,
            test_size: 30,
            repetitions: 2,
            rng_seed: 4,
        }
    }

    #[test]
    fn rows_are_ordered_and_consistent() {
        let cfg = small();
        let rows = run_experiment(&cfg, &DataSource::Synthetic).unwrap();
        assert_eq!(rows.len(), 2 * 5 * 2);
        for (k, r) in rows.iter().enumerate() {
            assert_eq!(r.repetition, k / 10);
            assert_eq!(
                r.kind,
                if k % 2 == 0 {
                    SolutionType::I
                } else {
                    SolutionType::II
                }
            );
            assert_eq!(r.gap, r.test_risk - r.train_risk);
            assert!((0.0..=1.0).contains(&r.train_risk));
        }
    }

    #[test]
    fn limits_of_the_sweep() {
        let cfg = small();
        let (train_pool, test_pool) = build_pools(&cfg, &DataSource::Synthetic).unwrap();
        let rows = run_sweep(&cfg, &train_pool, &test_pool).unwrap();
        let grid = build_model_grid(&cfg).unwrap();
        for rep in 0..cfg.repetitions {
            let (train, _) = repetition_data(&cfg, &train_pool, &test_pool, rep);
            let l = empirical_risk_profile(&grid, &train).unwrap();
            let reference = grid.integrate(|i| l.values()[i]);
            let delta_star = risk_summary(&grid, &l).unwrap().delta_star;
            for r in rows.iter().filter(|r| r.repetition == rep) {
                if r.lambda == 1e6 {
                    assert!((r.train_risk - reference).abs() < 1e-3);
                }
                if r.lambda == 1e-6 && r.kind == SolutionType::II {
                    assert!((r.train_risk - delta_star).abs() < 1e-3);
                }
            }
        }
    }

    #[test]
    fn csv_format() {
        let rows = [SweepRow {
            repetition: 0,
            lambda: 0.001,
            kind: SolutionType::II,
            train_risk: 0.25,
            test_risk: 0.5,
            gap: 0.25,
        }];
        let csv = to_csv(&rows);
        assert_eq!(
            csv,
            "repetition,lambda,type,train_risk,test_risk,gap\n\
             0,1.00000000000e-3,II,2.50000000000e-1,5.00000000000e-1,2.50000000000e-1\n"
        );
    }

    #[test]
    fn summary_ranges() {
        let s = SweepSummary {
            lambdas: vec![1.0, 2.0, 3.0, 4.0],
            mean_gap_type1: vec![0.1, 0.1, 0.1, 0.1],
            mean_gap_type2: vec![0.05, 0.2, 0.05, 0.05],
        };
        assert_eq!(s.type2_lower_gap_ranges(), vec![(1.0, 1.0), (3.0, 4.0)]);
        assert!(s.to_string().contains("[1.0000e0, 1.0000e0]"));
    }
}
