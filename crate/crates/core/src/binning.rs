//! Fixed-resolution logarithmic binning.
//!
//! Edges are equally spaced in log-distance between the smallest and largest
//! distance, bins are half-open except the last one which is closed. Bin
//! assignment is done by index arithmetic in log space,
//! `j = floor(M * (ln d - l0) / (lM - l0))` clamped to `M - 1` (0-based).

use serde::Serialize;

use crate::error::{Error, Result};

/// Log-binned probability vector together with its bin geometry.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogBinning {
    #[serde(rename = "M")]
    m: usize,
    log_edges: Vec<f64>,
    #[serde(skip)]
    edges: Vec<f64>,
    counts: Vec<u64>,
    probs: Vec<f64>,
    centers: Vec<f64>,
}

pub(crate) fn check_resolution(m: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!(
            "resolution M must be >= 2, got {m}"
        )));
    }
    Ok(())
}

/// Log-space extent `(l0, lM)` of a nonempty set of positive distances.
fn log_extent(distances: &[f64]) -> Result<(f64, f64)> {
    if distances.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut dmin = f64::INFINITY;
    let mut dmax = f64::NEG_INFINITY;
    for &d in distances {
        if !(d > 0.0 && d.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "distances must be positive and finite, got {d}"
            )));
        }
        dmin = dmin.min(d);
        dmax = dmax.max(d);
    }
    if dmin == dmax {
        return Err(Error::DegenerateRange(dmin));
    }
    Ok((dmin.ln(), dmax.ln()))
}

/// Fractional bin coordinate `M * (ln d - l0) / (lM - l0)`, in `[0, M]`.
#[inline]
fn bin_coordinate(d: f64, l0: f64, span: f64, m: usize) -> f64 {
    ((d.ln() - l0) / span) * m as f64
}

impl LogBinning {
    /// Bins `distances` (any order, all positive) at resolution `m`.
    pub fn new(distances: &[f64], m: usize) -> Result<Self> {
        check_resolution(m)?;
        let (l0, lm) = log_extent(distances)?;
        let span = lm - l0;
        let step = span / m as f64;

        let mut log_edges: Vec<f64> = (0..=m).map(|j| l0 + j as f64 * step).collect();
        log_edges[m] = lm;
        let edges = log_edges.iter().map(|l| l.exp()).collect();
        let centers: Vec<f64> = log_edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();

        let mut counts = vec![0u64; m];
        for &d in distances {
            let t = bin_coordinate(d, l0, span, m);
            let j = (t.floor().max(0.0) as usize).min(m - 1);
            counts[j] += 1;
        }
        let total = distances.len() as f64;
        let probs = counts.iter().map(|&c| c as f64 / total).collect();

        Ok(Self {
            m,
            log_edges,
            edges,
            counts,
            probs,
            centers,
        })
    }

    pub fn resolution(&self) -> usize {
        self.m
    }

    /// `l_0, ..., l_M` (natural-log units).
    pub fn log_edges(&self) -> &[f64] {
        &self.log_edges
    }

    /// `b_j = exp(l_j)`.
    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    /// Bin midpoints on the log axis.
    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Bins a distance multiset. See [`LogBinning::new`].
pub fn log_bin(distances: &crate::distances::DistanceMultiset, m: usize) -> Result<LogBinning> {
    LogBinning::new(distances.values(), m)
}

/// Smallest distance, in bin-coordinate units, between any value and an
/// interior bin edge. Values within floating-point noise of an edge can land
/// on either side of it, so scale-invariance comparisons must skip inputs
/// where this margin is tiny.
pub fn interior_edge_margin(distances: &[f64], m: usize) -> Result<f64> {
    check_resolution(m)?;
    let (l0, lm) = log_extent(distances)?;
    let span = lm - l0;
    let mut margin = f64::INFINITY;
    for &d in distances {
        let t = bin_coordinate(d, l0, span, m);
        let nearest = t.round();
        if nearest >= 1.0 && nearest <= (m - 1) as f64 {
            margin = margin.min((t - nearest).abs());
        }
    }
    Ok(margin)
}

/// Whether `c * distances` has the same probability vector as `distances`
/// (per entry within `1e-12`).
pub fn rescale_invariance_check(distances: &[f64], c: f64, m: usize) -> Result<bool> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "scale factor must be positive and finite, got {c}"
        )));
    }
    let base = LogBinning::new(distances, m)?;
    let scaled: Vec<f64> = distances.iter().map(|d| d * c).collect();
    let other = LogBinning::new(&scaled, m)?;
    Ok(base
        .probs()
        .iter()
        .zip(other.probs())
        .all(|(a, b)| (a - b).abs() <= 1e-12))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn three_point_hand_example() {
        let b = LogBinning::new(&[1.0, E, E * E], 2).unwrap();
        assert_eq!(b.log_edges(), &[0.0, 1.0, 2.0]);
        assert_eq!(b.counts(), &[1, 2]);
        assert!((b.probs()[0] - 1.0 / 3.0).abs() < 1e-15);
        assert!((b.probs()[1] - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(b.centers(), &[0.5, 1.5]);
    }

    #[test]
    fn last_bin_is_closed() {
        let b = LogBinning::new(&[1.0, E * E], 2).unwrap();
        assert_eq!(b.counts(), &[1, 1]);
    }

    #[test]
    fn errors() {
        assert!(matches!(LogBinning::new(&[], 4), Err(Error::EmptyInput)));
        assert_eq!(Error::EmptyInput.to_string(), "No distances available");
        assert!(matches!(LogBinning::new(&[3.0, 3.0], 4), Err(Error::DegenerateRange(_))));
        assert!(matches!(LogBinning::new(&[3.0], 4), Err(Error::DegenerateRange(_))));
        assert!(matches!(LogBinning::new(&[1.0, 2.0], 1), Err(Error::InvalidArgument(_))));
        assert!(matches!(LogBinning::new(&[1.0, -2.0], 2), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn edges_and_centers_are_consistent() {
        let d: Vec<f64> = (1..200).map(|i| i as f64 * 1.7).collect();
        let b = LogBinning::new(&d, 16).unwrap();
        assert!(b.log_edges().windows(2).all(|w| w[0] < w[1]));
        assert!(b.edges().windows(2).all(|w| w[0] < w[1]));
        assert!(b.edges()[0] > 0.0);
        let step = (b.log_edges()[16] - b.log_edges()[0]) / 16.0;
        for w in b.centers().windows(2) {
            assert!((w[1] - w[0] - step).abs() < 1e-12);
        }
        assert_eq!(b.total(), d.len() as u64);
        assert!(b.counts()[0] >= 1 && b.counts()[15] >= 1);
    }

    #[test]
    fn identity_and_exact_shift() {
        let d = [1.0, E, E * E];
        assert!(rescale_invariance_check(&d, 1.0, 2).unwrap());
        assert!(rescale_invariance_check(&d, 7.0, 2).unwrap());
        assert!(rescale_invariance_check(&d, 0.0, 2).is_err());
    }

    #[test]
    fn edge_margin_detects_collisions() {
        // sqrt(10) sits exactly on the middle edge of [1, 10] at M = 2.
        let d = [1.0, 10f64.sqrt(), 10.0];
        assert!(interior_edge_margin(&d, 2).unwrap() < 1e-12);
        let d = [1.0, 2.0, 10.0];
        assert!(interior_edge_margin(&d, 2).unwrap() > 0.1);
    }
}
