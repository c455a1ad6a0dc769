//! Prime generation by a segmented sieve of Eratosthenes.
//!
//! Only odd numbers are sieved; each segment covers `SEGMENT_ODDS` odd
//! candidates, so working memory stays bounded by the segment buffer plus the
//! base primes up to `sqrt(limit)` regardless of the limit itself.

use serde::Serialize;

use crate::error::{Error, Result};

const SEGMENT_ODDS: u64 = 1 << 17;
const MAX_LIMIT: u64 = 1 << 63;

/// All primes up to an inclusive bound, in increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    /// Inclusive bound up to which the table is known to be complete.
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn last(&self) -> Option<u64> {
        self.primes.last().copied()
    }

    /// Primes in the closed interval `[lo, hi]`.
    pub fn range(&self, lo: u64, hi: u64) -> &[u64] {
        let start = self.primes.partition_point(|&q| q < lo);
        let end = self.primes.partition_point(|&q| q <= hi);
        &self.primes[start..end.max(start)]
    }
}

/// Integer square root (floor).
fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

/// Plain sieve for the base primes `<= limit` (limit is at most ~3e9 here).
fn small_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// Every prime `<= limit`, ascending.
pub fn sieve_up_to(limit: u64) -> Result<PrimeTable> {
    if limit < 2 {
        return Err(Error::InvalidArgument(format!(
            "sieve limit must be >= 2, got {limit}"
        )));
    }
    if limit > MAX_LIMIT {
        return Err(Error::Overflow(format!(
            "sieve limit {limit} exceeds 2^63"
        )));
    }

    let base = small_primes(isqrt(limit));
    let mut primes = vec![2];
    // Odd candidate 2i+1 has index i; index 0 (the number 1) is skipped.
    let last_index = (limit - 1) / 2;
    let mut segment = vec![false; SEGMENT_ODDS as usize];
    let mut lo = 1u64;
    while lo <= last_index {
        let hi = (lo + SEGMENT_ODDS - 1).min(last_index);
        let len = (hi - lo + 1) as usize;
        segment[..len].fill(false);
        let seg_start = 2 * lo + 1;
        let seg_end = 2 * hi + 1;
        for &p in base.iter().skip(1) {
            let sq = p * p;
            if sq > seg_end {
                break;
            }
            // First odd multiple of p that is >= max(p^2, seg_start).
            let mut m = if sq >= seg_start {
                sq
            } else {
                let r = seg_start.div_ceil(p) * p;
                if r % 2 == 0 {
                    r + p
                } else {
                    r
                }
            };
            while m <= seg_end {
                segment[((m - 1) / 2 - lo) as usize] = true;
                m += 2 * p;
            }
        }
        primes.extend(
            segment[..len]
                .iter()
                .enumerate()
                .filter(|(_, &c)| !c)
                .map(|(i, _)| 2 * (lo + i as u64) + 1),
        );
        lo = hi + 1;
    }

    Ok(PrimeTable { limit, primes })
}

/// Upper bound on the n-th prime (Rosser–Schoenfeld for n >= 6).
fn nth_prime_upper_bound(n: u64) -> u64 {
    if n < 6 {
        return 13;
    }
    let x = n as f64;
    (x * (x.ln() + x.ln().ln())).ceil() as u64 + 3
}

/// The `n` smallest primes. The table's limit is the largest of them.
pub fn first_n_primes(n: u64) -> Result<PrimeTable> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "number of primes must be >= 1".into(),
        ));
    }
    let bound = nth_prime_upper_bound(n);
    let mut table = sieve_up_to(bound)?;
    table.primes.truncate(n as usize);
    debug_assert_eq!(table.primes.len() as u64, n);
    table.limit = *table.primes.last().expect("n >= 1");
    Ok(table)
}
