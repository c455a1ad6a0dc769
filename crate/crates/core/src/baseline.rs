//! Versioned table of Monte Carlo estimates of the Poisson null entropy.
//!
//! The shipped table is compiled in from `data/null_baseline.json`. Setting
//! `LOGSPEC_BASELINE` to a file path replaces it at run time.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nullmodel::NullEstimate;

pub const BASELINE_ENV: &str = "LOGSPEC_BASELINE";
pub const FORMAT_VERSION: u32 = 1;

const SHIPPED: &str = include_str!("../data/null_baseline.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineEntry {
    #[serde(rename = "M")]
    pub m: usize,
    pub mean: f64,
    pub stderr: f64,
    pub lambda: f64,
    #[serde(rename = "R")]
    pub radius: f64,
    pub replicates: usize,
    pub seed: u64,
}

impl From<&NullEstimate> for BaselineEntry {
    fn from(e: &NullEstimate) -> Self {
        Self {
            m: e.m,
            mean: e.mean_h,
            stderr: e.std_error,
            lambda: e.lambda,
            radius: e.radius,
            replicates: e.replicates,
            seed: e.seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineTable {
    pub version: u32,
    pub entries: Vec<BaselineEntry>,
}

impl BaselineTable {
    pub fn parse(text: &str) -> Result<Self> {
        let table: BaselineTable = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        if table.version != FORMAT_VERSION {
            return Err(Error::Configuration(format!(
                "unsupported baseline table version {} (expected {FORMAT_VERSION})",
                table.version
            )));
        }
        Ok(table)
    }

    pub fn shipped() -> Self {
        Self::parse(SHIPPED).expect("shipped baseline table is valid")
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// The table named by `LOGSPEC_BASELINE`, or the shipped one.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(BASELINE_ENV) {
            Some(path) => Self::load(Path::new(&path)),
            None => Ok(Self::shipped()),
        }
    }

    /// Reference entry for resolution `m`: the one with the largest `lambda * R`.
    pub fn reference(&self, m: usize) -> Result<&BaselineEntry> {
        self.entries
            .iter()
            .filter(|e| e.m == m)
            .max_by(|a, b| (a.lambda * a.radius).total_cmp(&(b.lambda * b.radius)))
            .ok_or_else(|| {
                Error::Configuration(format!(
                    "no null baseline for M = {m}; generate one with `logspec baseline --M {m}` and point {BASELINE_ENV} at it"
                ))
            })
    }

    /// Replaces any entry with the same `(M, lambda, R)` and appends otherwise.
    pub fn upsert(&mut self, entry: BaselineEntry) {
        self.entries
            .retain(|e| !(e.m == entry.m && e.lambda == entry.lambda && e.radius == entry.radius));
        self.entries.push(entry);
        self.entries.sort_by(|a, b| a.m.cmp(&b.m).then(a.radius.total_cmp(&b.radius)));
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }
}
