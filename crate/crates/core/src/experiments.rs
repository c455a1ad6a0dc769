//! Finite-scale probes of the stability, deviation, and ensemble questions.
//!
//! Nothing here asserts a limit; every result is a snapshot at the requested
//! radii and sample sizes.

use rand::seq::index;
use rayon::prelude::*;
use serde::Serialize;

use crate::distances::{aggregate_distances, truncated_distances};
use crate::entropy::full_pipeline;
use crate::error::{Error, Result};
use crate::nullmodel::{estimate_null_entropy, PoissonConfig};
use crate::primes::PrimeTable;
use crate::rng;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityProfile {
    pub base_point: u64,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "R_grid")]
    pub radii: Vec<f64>,
    #[serde(rename = "H_values")]
    pub h_values: Vec<f64>,
    /// `envelope[i] = max |H_a - H_b|` over grid points `a, b >= i`.
    pub envelope: Vec<f64>,
}

/// Tail envelopes of a sequence: spread (max minus min) of every suffix.
pub fn tail_envelope(values: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; values.len()];
    let mut hi = f64::NEG_INFINITY;
    let mut lo = f64::INFINITY;
    for (i, &v) in values.iter().enumerate().rev() {
        hi = hi.max(v);
        lo = lo.min(v);
        out[i] = hi - lo;
    }
    out
}

pub fn stability_profile(p: u64, m: usize, radii: &[f64], table: &PrimeTable) -> Result<StabilityProfile> {
    if radii.is_empty() || radii.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument("radius grid must be nonempty and non-decreasing".into()));
    }
    let h_values = radii
        .par_iter()
        .map(|&r| full_pipeline(&truncated_distances(p, table, r)?, m).map(|rep| rep.h))
        .collect::<Result<Vec<f64>>>()?;
    Ok(StabilityProfile {
        base_point: p,
        m,
        radii: radii.to_vec(),
        envelope: tail_envelope(&h_values),
        h_values,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeviationProfile {
    pub base_point: u64,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "R")]
    pub radius: f64,
    #[serde(rename = "H_prime")]
    pub h_prime: f64,
    pub null_mean: f64,
    pub null_stderr: f64,
    pub delta: f64,
    /// `delta / null_stderr`; absent when the standard error is zero.
    pub z_score: Option<f64>,
    pub lambda: f64,
    pub replicates: usize,
    pub seed: u64,
}

/// Intensity matched to the prime density near `p`.
pub fn matched_intensity(p: u64) -> f64 {
    1.0 / (p as f64).ln()
}

/// Deviation of a prime configuration's entropy from the null model run at
/// the same `R` and `M`, with `lambda = 1 / ln p` unless overridden.
pub fn deviation_profile(
    p: u64,
    m: usize,
    radius: f64,
    table: &PrimeTable,
    null_seed: u64,
    replicates: usize,
    lambda: Option<f64>,
) -> Result<DeviationProfile> {
    if p < 2 && lambda.is_none() {
        return Err(Error::InvalidArgument(
            "base point must be >= 2 to match the null intensity; pass lambda explicitly".into(),
        ));
    }
    let h_prime = full_pipeline(&truncated_distances(p, table, radius)?, m)?.h;
    let lambda = lambda.unwrap_or_else(|| matched_intensity(p));
    let null = estimate_null_entropy(m, &PoissonConfig::new(lambda, radius, null_seed)?, replicates)?;
    Ok(deviation_from(p, m, radius, h_prime, null.mean_h, null.std_error, lambda, null.replicates, null_seed))
}

#[allow(clippy::too_many_arguments)]
pub fn deviation_from(
    p: u64,
    m: usize,
    radius: f64,
    h_prime: f64,
    null_mean: f64,
    null_stderr: f64,
    lambda: f64,
    replicates: usize,
    seed: u64,
) -> DeviationProfile {
    let delta = h_prime - null_mean;
    let z_score = (null_stderr > 0.0 && null_stderr.is_finite()).then(|| delta / null_stderr);
    DeviationProfile {
        base_point: p,
        m,
        radius,
        h_prime,
        null_mean,
        null_stderr,
        delta,
        z_score,
        lambda,
        replicates,
        seed,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
}

impl Histogram {
    /// Fixed-width histogram over `[min, max]` of the data; the top edge is
    /// closed. Constant data lands in the first bin.
    pub fn fixed_width(values: &[f64], bins: usize) -> Self {
        let bins = bins.max(1);
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut counts = vec![0u64; bins];
        let width = (hi - lo) / bins as f64;
        for &v in values {
            let j = if width > 0.0 { ((v - lo) / width).floor() as usize } else { 0 };
            counts[j.min(bins - 1)] += 1;
        }
        Self { lo, hi, counts }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Linear-interpolation quantile of sorted data (the "type 7" rule).
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    if n == 0 {
        return f64::NAN;
    }
    let h = (n - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub const QUANTILE_LEVELS: [f64; 5] = [0.05, 0.25, 0.5, 0.75, 0.95];
pub const HISTOGRAM_BINS: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleParams {
    /// Number of primes per multiset.
    pub size: usize,
    pub sample_count: usize,
    /// Closed interval the primes are drawn from.
    pub prime_range: (u64, u64),
    pub radius: f64,
    pub m: usize,
    pub seed: u64,
    /// Global offset subtracted from every sample, when centering.
    pub center: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleDistribution {
    pub m_size: usize,
    #[serde(rename = "M")]
    pub resolution: usize,
    #[serde(rename = "R")]
    pub radius: f64,
    pub prime_range: (u64, u64),
    pub seed: u64,
    pub samples: Vec<f64>,
    pub draws: Vec<Vec<u64>>,
    pub histogram: Histogram,
    pub quantile_levels: [f64; 5],
    pub quantiles: [f64; 5],
    pub centered: bool,
    pub center_offset: f64,
}

impl EnsembleDistribution {
    pub fn iqr(&self) -> f64 {
        self.quantiles[3] - self.quantiles[1]
    }
}

/// Summary quantiles and histogram of arbitrary samples.
pub fn summarize(values: &[f64]) -> ([f64; 5], Histogram) {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let q = QUANTILE_LEVELS.map(|l| quantile_sorted(&sorted, l));
    (q, Histogram::fixed_width(values, HISTOGRAM_BINS))
}

/// Seeded uniform m-subsets (without replacement) of the primes in a range,
/// with the entropy of each aggregated distance measure. Sample `i` draws
/// from `rng::sub_seed(seed, i)`.
pub fn ensemble_distribution(params: &EnsembleParams, table: &PrimeTable) -> Result<EnsembleDistribution> {
    let (lo, hi) = params.prime_range;
    if params.size == 0 || params.sample_count == 0 {
        return Err(Error::InvalidArgument("multiset size and sample count must be >= 1".into()));
    }
    if lo > hi {
        return Err(Error::InvalidArgument(format!("empty prime range [{lo}, {hi}]")));
    }
    let candidates = table.range(lo, hi);
    if candidates.len() < params.size {
        return Err(Error::InvalidArgument(format!(
            "range [{lo}, {hi}] holds {} primes, fewer than m = {}",
            candidates.len(),
            params.size
        )));
    }
    ensemble_from_candidates(params, candidates, table)
}

/// Same as [`ensemble_distribution`] but drawing from an explicit candidate
/// list; draws index into the list, so its order matters for a given seed.
pub fn ensemble_from_candidates(
    params: &EnsembleParams,
    candidates: &[u64],
    table: &PrimeTable,
) -> Result<EnsembleDistribution> {
    if params.size == 0 || params.sample_count == 0 || candidates.len() < params.size {
        return Err(Error::InvalidArgument(format!(
            "cannot draw {} of {} candidates",
            params.size,
            candidates.len()
        )));
    }
    let results = (0..params.sample_count as u64)
        .into_par_iter()
        .map(|i| {
            let mut stream = rng::stream(rng::sub_seed(params.seed, i));
            let points: Vec<u64> = index::sample(&mut stream, candidates.len(), params.size)
                .into_iter()
                .map(|j| candidates[j])
                .collect();
            let h = full_pipeline(&aggregate_distances(&points, table, params.radius)?, params.m)?.h;
            Ok((points, h))
        })
        .collect::<Result<Vec<_>>>()?;

    let offset = params.center.unwrap_or(0.0);
    let (draws, raw): (Vec<Vec<u64>>, Vec<f64>) = results.into_iter().unzip();
    let samples: Vec<f64> = raw.iter().map(|h| h - offset).collect();
    let (quantiles, histogram) = summarize(&samples);
    Ok(EnsembleDistribution {
        m_size: params.size,
        resolution: params.m,
        radius: params.radius,
        prime_range: params.prime_range,
        seed: params.seed,
        samples,
        draws,
        histogram,
        quantile_levels: QUANTILE_LEVELS,
        quantiles,
        centered: params.center.is_some(),
        center_offset: offset,
    })
}
