//! Poisson log-distance null model.
//!
//! A homogeneous Poisson process on the positive half-line with intensity
//! `lambda`, conditioned to contain the origin. Distances to the origin are
//! the points themselves: cumulative sums of unit exponential gaps `S_i`,
//! kept while `S_i <= lambda * R`, reported as `S_i / lambda`. Scaling
//! `lambda` therefore only rescales the same underlying stream.

use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use serde::Serialize;

use crate::distances::DistanceMultiset;
use crate::entropy::{full_pipeline, EntropyReport};
use crate::error::{Error, Result};
use crate::rng;

/// Largest tolerated fraction of degenerate replicates in an estimate.
pub const MAX_DEGENERATE_FRACTION: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoissonConfig {
    pub lambda: f64,
    #[serde(rename = "R")]
    pub radius: f64,
    pub seed: u64,
}

impl PoissonConfig {
    pub fn new(lambda: f64, radius: f64, seed: u64) -> Result<Self> {
        let cfg = Self { lambda, radius, seed };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "intensity must be positive, got {}",
                self.lambda
            )));
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "radius must be positive, got {}",
                self.radius
            )));
        }
        Ok(())
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..*self }
    }

    pub fn with_radius(&self, radius: f64) -> Self {
        Self { radius, ..*self }
    }
}

/// Points of one realization in `(0, R]`, ascending.
pub fn simulate_poisson_distances(config: &PoissonConfig) -> Result<DistanceMultiset> {
    config.validate()?;
    let mut rng = rng::stream(config.seed);
    let horizon = config.lambda * config.radius;
    let mut values = Vec::with_capacity((horizon + 4.0 * horizon.sqrt() + 8.0) as usize);
    let mut s = 0.0f64;
    loop {
        let gap: f64 = Exp1.sample(&mut rng);
        s += gap;
        if s > horizon {
            break;
        }
        let x = s / config.lambda;
        if x > 0.0 && x <= config.radius {
            values.push(x);
        }
    }
    DistanceMultiset::from_values(values, config.radius, vec![0.0])
}

pub fn null_entropy_once(config: &PoissonConfig, m: usize) -> Result<EntropyReport> {
    let distances = simulate_poisson_distances(config)?;
    let mut report = full_pipeline(&distances, m)?;
    report.provenance.model = "poisson".into();
    report.provenance.seed = Some(config.seed);
    report.provenance.lambda = Some(config.lambda);
    report.provenance.base_points.clear();
    Ok(report)
}

/// Sample mean and standard error (`sd / sqrt(n)`), summed in index order.
pub fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NullEstimate {
    #[serde(rename = "M")]
    pub m: usize,
    pub mean_h: f64,
    pub std_error: f64,
    pub replicates: usize,
    /// Replicates dropped because the realization could not be binned.
    pub degenerate: usize,
    pub per_replicate_h: Vec<f64>,
    pub lambda: f64,
    #[serde(rename = "R")]
    pub radius: f64,
    pub seed: u64,
}

/// Runs `replicates` independent realizations; replicate `i` uses
/// `rng::sub_seed(config.seed, i)`. Output does not depend on the thread
/// pool size.
pub fn estimate_null_entropy(m: usize, config: &PoissonConfig, replicates: usize) -> Result<NullEstimate> {
    config.validate()?;
    crate::binning::check_resolution(m)?;
    if replicates < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 replicates for a standard error, got {replicates}"
        )));
    }
    let outcomes: Vec<Result<f64>> = (0..replicates as u64)
        .into_par_iter()
        .map(|i| null_entropy_once(&config.with_seed(rng::sub_seed(config.seed, i)), m).map(|r| r.h))
        .collect();

    let mut values = Vec::with_capacity(replicates);
    let mut degenerate = 0;
    for outcome in outcomes {
        match outcome {
            Ok(h) => values.push(h),
            Err(e) if e.is_degenerate_realization() => degenerate += 1,
            Err(e) => return Err(e),
        }
    }
    if degenerate as f64 > MAX_DEGENERATE_FRACTION * replicates as f64 {
        return Err(Error::Configuration(format!(
            "{degenerate} of {replicates} realizations were degenerate; lambda * R = {} is too small",
            config.lambda * config.radius
        )));
    }
    if values.len() < 2 {
        return Err(Error::Configuration("fewer than 2 usable replicates".into()));
    }
    let (mean_h, std_error) = mean_and_stderr(&values);
    Ok(NullEstimate {
        m,
        mean_h,
        std_error,
        replicates: values.len(),
        degenerate,
        per_replicate_h: values,
        lambda: config.lambda,
        radius: config.radius,
        seed: config.seed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilizationRow {
    #[serde(rename = "R")]
    pub radius: f64,
    /// Mean of `|ln d_max - ln R|`.
    pub mean_abs_log_dmax_gap: f64,
    pub mean_log_dmin: f64,
    pub mean_dmin: f64,
    pub stderr_dmin: f64,
    pub replicates: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilizationReport {
    pub lambda: f64,
    pub seed: u64,
    pub rows: Vec<StabilizationRow>,
    /// Whether `mean_abs_log_dmax_gap` strictly decreases along the grid.
    pub dmax_gap_decreasing: bool,
    /// Whether every `mean_dmin` is within 3 standard errors of `1 / lambda`.
    pub dmin_matches_exponential: bool,
}

/// Extremes `(d_min, d_max)` of each replicate realization at one radius.
pub fn replicate_extremes(config: &PoissonConfig, replicates: usize) -> Result<Vec<(f64, f64)>> {
    (0..replicates as u64)
        .into_par_iter()
        .map(|i| {
            let d = simulate_poisson_distances(&config.with_seed(rng::sub_seed(config.seed, i)))?;
            match (d.min(), d.max()) {
                (Some(lo), Some(hi)) => Ok((lo, hi)),
                _ => Err(Error::EmptyInput),
            }
        })
        .collect()
}

/// Empirical probe of the stabilization of the log-bin range: for each radius
/// `ln d_max` should approach `ln R` while `d_min` stays exponential. Grid
/// point `j` draws its replicates from `rng::sub_seed(seed, j)`.
pub fn check_bin_stabilization(
    lambda: f64,
    radii: &[f64],
    replicates: usize,
    seed: u64,
) -> Result<StabilizationReport> {
    if replicates < 2 {
        return Err(Error::InvalidArgument("need at least 2 replicates".into()));
    }
    if radii.is_empty() || radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("radius grid must be nonempty and strictly increasing".into()));
    }
    let mut rows = Vec::with_capacity(radii.len());
    for (j, &radius) in radii.iter().enumerate() {
        let config = PoissonConfig::new(lambda, radius, rng::sub_seed(seed, j as u64))?;
        let extremes = replicate_extremes(&config, replicates)?;
        let gaps: Vec<f64> = extremes.iter().map(|(_, hi)| (hi.ln() - radius.ln()).abs()).collect();
        let log_mins: Vec<f64> = extremes.iter().map(|(lo, _)| lo.ln()).collect();
        let mins: Vec<f64> = extremes.iter().map(|(lo, _)| *lo).collect();
        let (mean_dmin, stderr_dmin) = mean_and_stderr(&mins);
        rows.push(StabilizationRow {
            radius,
            mean_abs_log_dmax_gap: mean_and_stderr(&gaps).0,
            mean_log_dmin: mean_and_stderr(&log_mins).0,
            mean_dmin,
            stderr_dmin,
            replicates,
        });
    }
    let dmax_gap_decreasing = rows
        .windows(2)
        .all(|w| w[1].mean_abs_log_dmax_gap < w[0].mean_abs_log_dmax_gap);
    let dmin_matches_exponential = rows
        .iter()
        .all(|r| (r.mean_dmin - 1.0 / lambda).abs() <= 3.0 * r.stderr_dmin);
    Ok(StabilizationReport {
        lambda,
        seed,
        rows,
        dmax_gap_decreasing,
        dmin_matches_exponential,
    })
}
