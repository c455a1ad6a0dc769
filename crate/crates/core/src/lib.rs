//! Scale-invariant spectral entropy of distance distributions.
//!
//! The pipeline takes a truncated distance multiset anchored at one or more
//! base points, bins it on a logarithmic axis at a fixed resolution `M`,
//! evaluates a discrete log-frequency spectrum over the bin centers, and
//! compresses the normalised spectrum magnitudes to a Shannon entropy.
//!
//! ```
//! use logspec::{entropy::full_pipeline, distances::truncated_distances, primes::first_n_primes};
//!
//! let table = first_n_primes(10_000).unwrap();
//! let d = truncated_distances(101, &table, 5000.0).unwrap();
//! let report = full_pipeline(&d, 50).unwrap();
//! assert!(report.h > 0.0 && report.h <= 50f64.ln());
//! ```
//!
//! Null models live in [`nullmodel`] (Poisson process conditioned on the
//! origin) and [`cramer`] (Cramér's random primes); [`experiments`] holds the
//! stability, deviation, and ensemble probes.

pub mod baseline;
pub mod binning;
pub mod cramer;
pub mod distances;
pub mod entropy;
pub mod error;
pub mod experiments;
pub mod nullmodel;
pub mod primes;
pub mod rng;
pub mod spectrum;

pub use error::{Error, Result};
