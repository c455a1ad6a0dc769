//! Cramér's random model of the primes.
//!
//! Each integer `n` in `[3, N]` is included independently with probability
//! `1 / ln n`. The uniform draw for `n` is the `n`-th 64-bit output of a
//! ChaCha8 stream keyed by the seed, read by seeking the stream to word
//! position `2n`. Any window of the set can therefore be simulated on its own
//! and agrees exactly with the corresponding slice of the full set.

use rand::RngCore;
use rayon::prelude::*;
use serde::Serialize;

use crate::distances::{DistanceMultiset, PointSet};
use crate::entropy::{full_pipeline, EntropyReport};
use crate::error::{Error, Result};
use crate::nullmodel::mean_and_stderr;
use crate::rng;

/// Smallest integer of the model; `1 / ln n` is not a probability below 3.
pub const FIRST: u64 = 3;

/// How distances are rescaled by the local mean gap before binning.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RescaleMode {
    #[default]
    None,
    /// Every distance from base point `b` is divided by `ln b`.
    PerBasePoint,
    /// The distance from `b` to `q` is divided by `ln q`.
    PerGap,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CramerConfig {
    #[serde(rename = "N")]
    pub n_max: u64,
    pub seed: u64,
    pub rescale: RescaleMode,
}

impl CramerConfig {
    pub fn new(n_max: u64, seed: u64, rescale: RescaleMode) -> Result<Self> {
        if n_max < FIRST {
            return Err(Error::InvalidArgument(format!("N must be >= 3, got {n_max}")));
        }
        Ok(Self { n_max, seed, rescale })
    }
}

/// Members of the simulated set inside `[lo, hi]` (clipped to `[3, N]`).
pub fn simulate_cramer_window(config: &CramerConfig, lo: u64, hi: u64) -> Vec<u64> {
    let lo = lo.max(FIRST);
    let hi = hi.min(config.n_max);
    if lo > hi {
        return Vec::new();
    }
    let mut stream = rng::stream(config.seed);
    stream.set_word_pos(2 * lo as u128);
    let mut out = Vec::with_capacity(((hi - lo + 1) as f64 / (lo as f64).ln()) as usize + 16);
    for n in lo..=hi {
        let u = rng::unit_f64(stream.next_u64());
        if u < 1.0 / (n as f64).ln() {
            out.push(n);
        }
    }
    out
}

/// The whole simulated set in `[3, N]`, ascending.
pub fn simulate_cramer_set(config: &CramerConfig) -> Vec<u64> {
    simulate_cramer_window(config, FIRST, config.n_max)
}

/// Measure sum of the (rescaled) distance multisets of `bases` within a
/// sorted point window. Rescaling is applied per base point before the sum.
pub fn rescaled_distances(
    window: &[u64],
    covered_up_to: u64,
    bases: &[u64],
    radius: f64,
    mode: RescaleMode,
) -> Result<DistanceMultiset> {
    let set = PointSet::with_coverage(window.iter().map(|&v| v as f64).collect(), covered_up_to as f64)?;
    let mut acc: Option<DistanceMultiset> = None;
    for &b in bases {
        let raw = set.truncated_distances(b as f64, radius)?;
        let part = match mode {
            RescaleMode::None => raw,
            RescaleMode::PerBasePoint => raw.scaled(1.0 / (b as f64).ln())?,
            RescaleMode::PerGap => {
                let lo = b.saturating_sub(radius.floor() as u64);
                let hi = b.saturating_add(radius.floor() as u64);
                let start = window.partition_point(|&q| q < lo);
                let end = window.partition_point(|&q| q <= hi);
                let values: Vec<f64> = window[start..end]
                    .iter()
                    .filter(|&&q| q != b)
                    .map(|&q| q.abs_diff(b) as f64 / (q as f64).ln())
                    .collect();
                let bound = radius / (lo.max(FIRST) as f64).ln();
                DistanceMultiset::from_values(values, bound, vec![b as f64])?
            }
        };
        acc = Some(match acc {
            Some(a) => a.sum(&part),
            None => part,
        });
    }
    acc.ok_or_else(|| Error::InvalidArgument("no base points".into()))
}

/// Entropy of the truncated distance multiset around the simulated point
/// nearest to `target`.
pub fn cramer_entropy(config: &CramerConfig, target: u64, radius: f64, m: usize) -> Result<EntropyReport> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
    }
    let r = radius.floor() as u64;
    let window = simulate_cramer_window(config, target.saturating_sub(2 * r), target.saturating_add(2 * r));
    let set = PointSet::from_integers(&window)?;
    let base = set
        .nearest(target as f64)
        .filter(|b| (b - target as f64).abs() <= radius)
        .ok_or_else(|| {
            Error::Configuration(format!("no simulated point within {radius} of {target}"))
        })? as u64;

    let distances = rescaled_distances(&window, config.n_max, &[base], radius, config.rescale)?;
    let mut report = full_pipeline(&distances, m)?;
    report.provenance.model = "cramer".into();
    report.provenance.seed = Some(config.seed);
    report.provenance.radius = Some(radius);
    report.provenance.note = Some(format!(
        "N={}, target={target}, rescale={}",
        config.n_max,
        serde_json::to_value(config.rescale).expect("enum serializes").as_str().unwrap_or("?")
    ));
    Ok(report)
}

/// Intensity of the two-sided point count around `base` (`2 / ln base`).
pub fn effective_intensity(base: f64) -> f64 {
    2.0 / base.ln()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CramerEnsemble {
    #[serde(rename = "N")]
    pub n_max: u64,
    pub target: u64,
    #[serde(rename = "R")]
    pub radius: f64,
    #[serde(rename = "M")]
    pub m: usize,
    pub seed: u64,
    pub rescale: RescaleMode,
    pub mean_h: f64,
    pub std_error: f64,
    pub per_replicate_h: Vec<f64>,
    pub base_points: Vec<f64>,
}

/// `replicates` independent Cramér sets (seeds `rng::sub_seed(seed, i)`),
/// one entropy per set around the point nearest `target`.
pub fn cramer_ensemble(
    n_max: u64,
    seed: u64,
    replicates: usize,
    target: u64,
    radius: f64,
    m: usize,
    rescale: RescaleMode,
) -> Result<CramerEnsemble> {
    if replicates < 2 {
        return Err(Error::InvalidArgument("need at least 2 replicates".into()));
    }
    let reports: Vec<EntropyReport> = (0..replicates as u64)
        .into_par_iter()
        .map(|i| {
            let cfg = CramerConfig::new(n_max, rng::sub_seed(seed, i), rescale)?;
            cramer_entropy(&cfg, target, radius, m)
        })
        .collect::<Result<_>>()?;
    let per_replicate_h: Vec<f64> = reports.iter().map(|r| r.h).collect();
    let (mean_h, std_error) = mean_and_stderr(&per_replicate_h);
    Ok(CramerEnsemble {
        n_max,
        target,
        radius,
        m,
        seed,
        rescale,
        mean_h,
        std_error,
        per_replicate_h,
        base_points: reports.iter().flat_map(|r| r.provenance.base_points.clone()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_agrees_with_full_set() {
        let cfg = CramerConfig::new(50_000, 11, RescaleMode::None).unwrap();
        let full = simulate_cramer_set(&cfg);
        assert!(full.windows(2).all(|w| w[0] < w[1]));
        assert!(full.iter().all(|&n| (3..=50_000).contains(&n)));
        for (lo, hi) in [(3, 10), (1001, 1001), (12_345, 20_000), (49_990, 60_000)] {
            let w = simulate_cramer_window(&cfg, lo, hi);
            let expected: Vec<u64> = full.iter().copied().filter(|&n| n >= lo && n <= hi).collect();
            assert_eq!(w, expected, "[{lo}, {hi}]");
        }
    }

    #[test]
    fn n3_is_a_single_bernoulli() {
        let mut hits = 0;
        for seed in 0..4000 {
            let s = simulate_cramer_set(&CramerConfig::new(3, seed, RescaleMode::None).unwrap());
            assert!(s.is_empty() || s == [3]);
            hits += s.len();
        }
        let p = 1.0 / 3f64.ln();
        let sd = (4000.0 * p * (1.0 - p)).sqrt();
        assert!((hits as f64 - 4000.0 * p).abs() < 4.0 * sd);
    }

    #[test]
    fn rejects_small_n() {
        assert!(CramerConfig::new(2, 0, RescaleMode::None).is_err());
    }

    #[test]
    fn per_base_point_rescale_does_not_change_entropy() {
        let plain = CramerConfig::new(200_000, 5, RescaleMode::None).unwrap();
        let scaled = CramerConfig { rescale: RescaleMode::PerBasePoint, ..plain };
        let a = cramer_entropy(&plain, 100_000, 5_000.0, 50).unwrap();
        let b = cramer_entropy(&scaled, 100_000, 5_000.0, 50).unwrap();
        assert!((a.h - b.h).abs() < 1e-12, "{} vs {}", a.h, b.h);
        assert_eq!(a.provenance.base_points, b.provenance.base_points);
        let gap = CramerConfig { rescale: RescaleMode::PerGap, ..plain };
        let c = cramer_entropy(&gap, 100_000, 5_000.0, 50).unwrap();
        assert!(crate::entropy::within_bounds(c.h, 50));
    }

    #[test]
    fn aggregate_rescaling_is_per_base_point() {
        let window: Vec<u64> = vec![3, 5, 7, 11, 13, 17, 19, 23, 29, 31];
        let d = rescaled_distances(&window, 31, &[7, 13], 6.0, RescaleMode::PerBasePoint).unwrap();
        let mut expected: Vec<f64> = [4.0, 2.0, 4.0, 6.0]
            .iter()
            .map(|v| v * (1.0 / 7f64.ln()))
            .chain([6.0, 2.0, 4.0, 6.0].iter().map(|v| v * (1.0 / 13f64.ln())))
            .collect();
        expected.sort_by(f64::total_cmp);
        assert_eq!(d.values(), &expected[..]);
    }

    #[test]
    fn missing_base_point_is_reported() {
        let cfg = CramerConfig::new(1_000, 1, RescaleMode::None).unwrap();
        assert!(cramer_entropy(&cfg, 5_000_000, 10.0, 8).is_err());
    }
}
