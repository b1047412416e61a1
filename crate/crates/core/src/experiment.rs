//! Grid sweeps and bootstrap resampling over a weight distribution.
//!
//! Work items run in parallel, but every result depends only on its own
//! inputs and seed, and rows are emitted in a fixed order.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::distribution::WeightDistribution;
use crate::error::{Error, Result};
use crate::problem::{ProblemKind, ProblemSpec};
use crate::rational::Rational;
use crate::solver::{solve, SolveMode};

/// One problem instance per `(low, high)` pair; see [`ProblemSpec`] for
/// what `low` and `high` mean per kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridConfig {
    pub kind: ProblemKind,
    pub points: Vec<(Rational, Rational)>,
    pub mode: SolveMode,
}

impl GridConfig {
    /// `high ∈ {0.10, 0.15, …, 0.95}` and `low = f·high` for
    /// `f ∈ {0.1, 0.2, …, 0.9}`.
    pub fn default_points() -> Vec<(Rational, Rational)> {
        let mut points = Vec::new();
        for h in (10..100).step_by(5) {
            let high = Rational::new(h, 100);
            for f in 1..10 {
                points.push((&high * &Rational::new(f, 10), high.clone()));
            }
        }
        points
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BootstrapConfig {
    pub problem: ProblemSpec,
    pub mode: SolveMode,
    pub samples: usize,
    pub sizes: Vec<usize>,
    pub seed: u64,
}

/// Builds a problem of the given kind from its `(low, high)` pair.
pub fn problem_from_pair(kind: ProblemKind, low: Rational, high: Rational) -> Result<ProblemSpec> {
    match kind {
        ProblemKind::Restriction => ProblemSpec::restriction(low, high),
        ProblemKind::Qualification => ProblemSpec::qualification(high, low),
        ProblemKind::Separation => ProblemSpec::separation(low, high),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MetricsRow {
    pub problem: ProblemKind,
    pub low: Rational,
    pub high: Rational,
    pub n: usize,
    pub mode: SolveMode,
    /// `ok` or `rejected-spec`.
    pub status: &'static str,
    pub total_tickets: Option<u64>,
    pub max_tickets: Option<u64>,
    pub holders: Option<usize>,
    pub elapsed_ms: Option<u128>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BootstrapRow {
    pub problem: ProblemKind,
    pub low: Rational,
    pub high: Rational,
    pub n: usize,
    pub mode: SolveMode,
    pub samples: usize,
    /// Samples whose resampled total weight was positive.
    pub samples_used: usize,
    pub avg_total_tickets: String,
    pub avg_max_tickets: String,
    pub avg_holders: String,
    pub elapsed_ms: Option<u128>,
}

/// Solves every grid point on `dist`; points with `low ≥ high` or outside
/// `(0, 1)` produce `rejected-spec` rows.
pub fn run_grid(dist: &WeightDistribution, config: &GridConfig, timings: bool) -> Result<Vec<MetricsRow>> {
    if config.points.is_empty() {
        return Err(Error::Config("the grid has no points".into()));
    }
    config
        .points
        .par_iter()
        .map(|(low, high)| {
            let mut row = MetricsRow {
                problem: config.kind,
                low: low.clone(),
                high: high.clone(),
                n: dist.len(),
                mode: config.mode,
                status: "rejected-spec",
                total_tickets: None,
                max_tickets: None,
                holders: None,
                elapsed_ms: None,
            };
            let Ok(problem) = problem_from_pair(config.kind, low.clone(), high.clone()) else {
                return Ok(row);
            };
            let start = Instant::now();
            let report = solve(&problem, dist, config.mode)?;
            row.status = "ok";
            row.total_tickets = Some(report.total);
            row.max_tickets = Some(report.stats.max_tickets);
            row.holders = Some(report.stats.holders);
            row.elapsed_ms = timings.then(|| start.elapsed().as_millis());
            Ok(row)
        })
        .collect()
}

/// Generator for one bootstrap sample: ChaCha8 keyed by the little-endian
/// bytes of `(seed, size, sample)`.
pub fn sample_rng(seed: u64, size: usize, sample: usize) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(size as u64).to_le_bytes());
    key[16..24].copy_from_slice(&(sample as u64).to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// Party indices drawn uniformly with replacement for one sample.
pub fn resample_indices(seed: u64, size: usize, sample: usize, parties: usize) -> Vec<usize> {
    let mut rng = sample_rng(seed, size, sample);
    (0..size).map(|_| rng.gen_range(0..parties)).collect()
}

/// Draws a resampled distribution; `None` when every drawn weight is zero.
/// Party `k` of the sample is named `"{id}#{k}"`.
pub fn resample(dist: &WeightDistribution, seed: u64, size: usize, sample: usize) -> Option<WeightDistribution> {
    let indices = resample_indices(seed, size, sample, dist.len());
    let parties = indices
        .into_iter()
        .enumerate()
        .map(|(k, i)| (format!("{}#{k}", dist.id(i)), dist.weight(i).clone()));
    WeightDistribution::new(parties).ok()
}

struct SampleMetrics {
    total: u64,
    max: u64,
    holders: usize,
}

/// Averages solve metrics over `samples` resamples for each size.
pub fn run_bootstrap(
    dist: &WeightDistribution,
    config: &BootstrapConfig,
    timings: bool,
) -> Result<Vec<BootstrapRow>> {
    if config.samples == 0 {
        return Err(Error::Config("bootstrap needs at least one sample".into()));
    }
    if config.sizes.is_empty() || config.sizes.contains(&0) {
        return Err(Error::Config("bootstrap sizes must be a non-empty list of positive integers".into()));
    }
    let mut rows = Vec::with_capacity(config.sizes.len());
    for &size in &config.sizes {
        let start = Instant::now();
        let metrics: Vec<Option<SampleMetrics>> = (0..config.samples)
            .into_par_iter()
            .map(|j| {
                let Some(sample) = resample(dist, config.seed, size, j) else {
                    return Ok(None);
                };
                let report = solve(&config.problem, &sample, config.mode)?;
                Ok(Some(SampleMetrics {
                    total: report.total,
                    max: report.stats.max_tickets,
                    holders: report.stats.holders,
                }))
            })
            .collect::<Result<_>>()?;
        let used: Vec<&SampleMetrics> = metrics.iter().flatten().collect();
        let average = |f: &dyn Fn(&SampleMetrics) -> u64| {
            if used.is_empty() {
                return String::new();
            }
            let sum: u64 = used.iter().map(|m| f(m)).sum();
            Rational::new(sum, used.len() as u64).to_decimal_string(3)
        };
        rows.push(BootstrapRow {
            problem: config.problem.kind(),
            low: config.problem.low().clone(),
            high: config.problem.high().clone(),
            n: size,
            mode: config.mode,
            samples: config.samples,
            samples_used: used.len(),
            avg_total_tickets: average(&|m| m.total),
            avg_max_tickets: average(&|m| m.max),
            avg_holders: average(&|m| m.holders as u64),
            elapsed_ms: timings.then(|| start.elapsed().as_millis()),
        });
    }
    Ok(rows)
}

/// Writes rows as CSV with a header line and `\n` terminators.
pub fn write_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for row in rows {
        writer
            .serialize(row)
            .map_err(|e| Error::Config(format!("cannot encode row: {e}")))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::Config(format!("cannot encode rows: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn dist() -> WeightDistribution {
        WeightDistribution::from_integers([5u64, 3, 3, 2, 1, 1, 0, 8]).unwrap()
    }

    #[test]
    fn default_grid_shape() {
        let points = GridConfig::default_points();
        assert_eq!(points.len(), 18 * 9);
        assert!(points.iter().all(|(l, h)| l < h));
        assert_eq!(points[0], (q(1, 100), q(1, 10)));
    }

    #[test]
    fn grid_rows_and_rejections() {
        let config = GridConfig {
            kind: ProblemKind::Restriction,
            points: vec![(q(1, 3), q(1, 2)), (q(1, 2), q(1, 3))],
            mode: SolveMode::Full,
        };
        let rows = run_grid(&dist(), &config, false).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].status, "ok");
        assert_eq!(rows[1].status, "rejected-spec");
        assert_eq!(rows[1].total_tickets, None);
        let csv = write_csv(&rows).unwrap();
        assert_eq!(
            csv.lines().next().unwrap(),
            "problem,low,high,n,mode,status,total_tickets,max_tickets,holders,elapsed_ms"
        );
        assert!(csv.lines().nth(2).unwrap().starts_with("wr,1/2,1/3,8,full,rejected-spec,,,,"));
    }

    #[test]
    fn resampling_is_reproducible() {
        assert_eq!(resample_indices(7, 50, 3, 10), resample_indices(7, 50, 3, 10));
        assert_ne!(resample_indices(7, 50, 3, 10), resample_indices(7, 50, 4, 10));
        assert_ne!(resample_indices(7, 50, 3, 10), resample_indices(8, 50, 3, 10));
        let config = BootstrapConfig {
            problem: ProblemSpec::restriction(q(1, 3), q(1, 2)).unwrap(),
            mode: SolveMode::Full,
            samples: 5,
            sizes: vec![4, 12],
            seed: 11,
        };
        let a = run_bootstrap(&dist(), &config, false).unwrap();
        let b = run_bootstrap(&dist(), &config, false).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 2);
        assert!(a.iter().all(|r| r.samples_used <= 5));
    }

    #[test]
    fn bootstrap_config_errors() {
        let mut config = BootstrapConfig {
            problem: ProblemSpec::restriction(q(1, 3), q(1, 2)).unwrap(),
            mode: SolveMode::Full,
            samples: 0,
            sizes: vec![4],
            seed: 0,
        };
        assert!(run_bootstrap(&dist(), &config, false).is_err());
        config.samples = 1;
        config.sizes = vec![];
        assert!(run_bootstrap(&dist(), &config, false).is_err());
    }
}
