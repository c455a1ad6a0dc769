//! Discrete log-frequency spectrum of a binned probability vector.
//!
//! `mu(k) = sum_j p_j exp(-2 pi i (k-1) (x_j - x_1) / (x_M - x_1))` for
//! `k = 1..M`, evaluated by direct summation. With equally spaced centers the
//! normalised phase is `(j-1)/(M-1)`, so this is not a length-M DFT and a
//! stock FFT cannot be substituted.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::binning::LogBinning;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    amplitudes: Vec<Complex64>,
    centers: Vec<f64>,
}

impl Spectrum {
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Log-axis bin centers the phases were computed from.
    pub fn source_centers(&self) -> &[f64] {
        &self.centers
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|z| z.norm()).collect()
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }
}

struct Pairs<'a>(&'a [Complex64]);

impl Serialize for Pairs<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for z in self.0 {
            seq.serialize_element(&[z.re, z.im])?;
        }
        seq.end()
    }
}

impl Serialize for Spectrum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Spectrum", 2)?;
        st.serialize_field("amplitudes", &Pairs(&self.amplitudes))?;
        st.serialize_field("centers", &self.centers)?;
        st.end()
    }
}

/// Spectrum of an arbitrary probability vector with the given log centers.
///
/// Phases are taken from the centers, not the indices, so unequally spaced
/// centers are handled as well.
pub fn spectrum_from_parts(probs: &[f64], centers: &[f64]) -> Result<Spectrum> {
    let m = probs.len();
    if m < 2 {
        return Err(Error::InvalidArgument(format!(
            "spectrum needs at least two bins, got {m}"
        )));
    }
    if centers.len() != m {
        return Err(Error::InvalidArgument(format!(
            "length mismatch: {m} probabilities, {} centers",
            centers.len()
        )));
    }
    let x1 = centers[0];
    let denom = centers[m - 1] - x1;
    if !(denom != 0.0 && denom.is_finite()) {
        return Err(Error::DegenerateCenters);
    }
    let fractions: Vec<f64> = centers.iter().map(|x| (x - x1) / denom).collect();
    Ok(from_fractions(probs, &fractions, centers))
}

fn from_fractions(probs: &[f64], fractions: &[f64], centers: &[f64]) -> Spectrum {
    let amplitudes = (0..probs.len())
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (&p, &f) in probs.iter().zip(fractions) {
                if p == 0.0 {
                    continue;
                }
                // Reduce to a fraction of a turn first so whole turns are exact.
                let turns = (k as f64 * f).rem_euclid(1.0);
                let (sin, cos) = (-TAU * turns).sin_cos();
                acc += Complex64::new(p * cos, p * sin);
            }
            acc
        })
        .collect();
    Spectrum {
        amplitudes,
        centers: centers.to_vec(),
    }
}

/// Spectrum of a log binning. Its centers are equally spaced, so the phase
/// fractions are exactly `j / (M - 1)`; this keeps the result bitwise
/// unchanged when all distances are rescaled and the counts do not move.
pub fn log_spectrum(binning: &LogBinning) -> Result<Spectrum> {
    let m = binning.resolution();
    let centers = binning.centers();
    if !(centers[m - 1] - centers[0]).is_normal() {
        return Err(Error::DegenerateCenters);
    }
    let fractions: Vec<f64> = (0..m).map(|j| j as f64 / (m - 1) as f64).collect();
    Ok(from_fractions(binning.probs(), &fractions, centers))
}
