//! Spectral entropy: Shannon entropy (nats) of the normalised spectrum
//! magnitudes, summed over strictly positive weights only.

use std::sync::atomic::{AtomicU64, Ordering};

use serde::Serialize;

use crate::binning::LogBinning;
use crate::distances::DistanceMultiset;
use crate::error::{Error, Result};
use crate::spectrum::{log_spectrum, Spectrum};

/// Floating-point slack for the `0 <= H <= ln M` bound.
pub const BOUND_TOLERANCE: f64 = 1e-12;

static EVALUATED: AtomicU64 = AtomicU64::new(0);
static VIOLATIONS: AtomicU64 = AtomicU64::new(0);

/// Process-wide tally of entropy evaluations and bound violations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundsAudit {
    pub evaluated: u64,
    pub violations: u64,
}

pub fn bounds_audit() -> BoundsAudit {
    BoundsAudit {
        evaluated: EVALUATED.load(Ordering::Relaxed),
        violations: VIOLATIONS.load(Ordering::Relaxed),
    }
}

pub fn within_bounds(h: f64, m: usize) -> bool {
    h >= -BOUND_TOLERANCE && h <= (m as f64).ln() + BOUND_TOLERANCE
}

/// How spectrum magnitudes are turned into weights.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightMode {
    /// `w_k ∝ |mu(k)|`.
    #[default]
    Linear,
    /// `w_k ∝ |mu(k)|^2`. Exploratory only.
    Squared,
}

/// Where a report came from. Fields that do not apply are omitted from JSON.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Provenance {
    pub model: String,
    #[serde(rename = "R", skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub base_points: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distances: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight_mode: Option<WeightMode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Provenance {
    pub fn model(model: impl Into<String>) -> Self {
        Self {
            model: model.into(),
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyReport {
    #[serde(rename = "H")]
    pub h: f64,
    pub weights: Vec<f64>,
    #[serde(rename = "M")]
    pub m: usize,
    pub provenance: Provenance,
}

/// Entropy of `magnitudes` after normalising them to weights.
pub fn entropy_of_magnitudes(magnitudes: &[f64]) -> Result<(f64, Vec<f64>)> {
    if magnitudes.is_empty() {
        return Err(Error::InvalidArgument("empty spectrum".into()));
    }
    let total: f64 = magnitudes.iter().sum();
    if !(total > 0.0) || !total.is_finite() {
        return Err(Error::DegenerateSpectrum);
    }
    let weights: Vec<f64> = magnitudes.iter().map(|a| a / total).collect();
    let h = -weights
        .iter()
        .filter(|&&w| w > 0.0)
        .map(|&w| w * w.ln())
        .sum::<f64>();
    // -0.0 from a single unit weight.
    let h = if h == 0.0 { 0.0 } else { h };

    let m = magnitudes.len();
    EVALUATED.fetch_add(1, Ordering::Relaxed);
    if !within_bounds(h, m) {
        VIOLATIONS.fetch_add(1, Ordering::Relaxed);
    }
    Ok((h, weights))
}

pub fn spectral_entropy_with(spectrum: &Spectrum, mode: WeightMode) -> Result<EntropyReport> {
    let mut mags = spectrum.magnitudes();
    if mode == WeightMode::Squared {
        mags.iter_mut().for_each(|a| *a *= *a);
    }
    let (h, weights) = entropy_of_magnitudes(&mags)?;
    let provenance = match mode {
        WeightMode::Linear => Provenance::default(),
        WeightMode::Squared => Provenance {
            weight_mode: Some(mode),
            ..Provenance::default()
        },
    };
    Ok(EntropyReport {
        h,
        weights,
        m: spectrum.len(),
        provenance,
    })
}

pub fn spectral_entropy(spectrum: &Spectrum) -> Result<EntropyReport> {
    spectral_entropy_with(spectrum, WeightMode::Linear)
}

/// Bin, transform, and compress: the single entry point for every model.
pub fn full_pipeline(distances: &DistanceMultiset, m: usize) -> Result<EntropyReport> {
    full_pipeline_with(distances, m, WeightMode::Linear)
}

pub fn full_pipeline_with(
    distances: &DistanceMultiset,
    m: usize,
    mode: WeightMode,
) -> Result<EntropyReport> {
    let binning = LogBinning::new(distances.values(), m)?;
    let spectrum = log_spectrum(&binning)?;
    let mut report = spectral_entropy_with(&spectrum, mode)?;
    report.provenance.radius = Some(distances.radius());
    report.provenance.base_points = distances.base_points().to_vec();
    report.provenance.distances = Some(distances.len());
    Ok(report)
}
