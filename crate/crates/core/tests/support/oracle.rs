//! Straight-line reference implementations used as test oracles. Nothing here
//! calls into the library: primes by trial division, distances by a full
//! double loop, bins by scanning the exponentiated edges, and the spectrum
//! with literal center-based phases and plain `cos`/`sin`.
#![allow(dead_code)]

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&k| is_prime(k)).collect()
}

pub fn first_primes(n: usize) -> Vec<u64> {
    (2..).filter(|&k| is_prime(k)).take(n).collect()
}

/// `{ |p - q| : q in points, q != p, |p - q| <= r }`, sorted.
pub fn distances(p: u64, points: &[u64], r: f64) -> Vec<f64> {
    let mut out: Vec<f64> = points
        .iter()
        .filter(|&&q| q != p)
        .map(|&q| (p as f64 - q as f64).abs())
        .filter(|&d| d <= r)
        .collect();
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

pub struct Binned {
    pub log_edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub probs: Vec<f64>,
    pub centers: Vec<f64>,
}

/// Bins by scanning `[b_{j-1}, b_j)` with the last bin closed. The maximum
/// always belongs to the last bin even if `exp(ln d_max)` rounds below it.
pub fn log_bin(d: &[f64], m: usize) -> Binned {
    let dmin = d.iter().cloned().fold(f64::INFINITY, f64::min);
    let dmax = d.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let (lmin, lmax) = (dmin.ln(), dmax.ln());
    let log_edges: Vec<f64> = (0..=m)
        .map(|j| lmin + (j as f64 / m as f64) * (lmax - lmin))
        .collect();
    let b: Vec<f64> = log_edges.iter().map(|l| l.exp()).collect();
    let mut counts = vec![0u64; m];
    for &v in d {
        let mut placed = false;
        for j in 0..m {
            let inside = if j == m - 1 {
                v >= b[j] && (v <= b[j + 1] || v == dmax)
            } else {
                v >= b[j] && v < b[j + 1]
            };
            if inside || (j == 0 && v == dmin) {
                counts[j] += 1;
                placed = true;
                break;
            }
        }
        assert!(placed, "value {v} fell outside every bin");
    }
    let total: u64 = counts.iter().sum();
    let probs = counts.iter().map(|&c| c as f64 / total as f64).collect();
    let centers = (1..=m).map(|j| (log_edges[j - 1] + log_edges[j]) / 2.0).collect();
    Binned {
        log_edges,
        counts,
        probs,
        centers,
    }
}

/// `(re, im)` of `sum_j p_j exp(-2 pi i (k-1) (x_j - x_1) / (x_M - x_1))`.
pub fn spectrum(p: &[f64], x: &[f64]) -> Vec<(f64, f64)> {
    let m = p.len();
    let denom = x[m - 1] - x[0];
    (1..=m)
        .map(|k| {
            let mut re = 0.0;
            let mut im = 0.0;
            for j in 0..m {
                let theta = -2.0 * std::f64::consts::PI * (k as f64 - 1.0) * (x[j] - x[0]) / denom;
                re += p[j] * theta.cos();
                im += p[j] * theta.sin();
            }
            (re, im)
        })
        .collect()
}

/// Entropy over strictly positive weights only (no additive epsilon).
pub fn entropy(spec: &[(f64, f64)]) -> f64 {
    let mags: Vec<f64> = spec.iter().map(|(re, im)| (re * re + im * im).sqrt()).collect();
    let total: f64 = mags.iter().sum();
    let mut h = 0.0;
    for a in mags {
        let w = a / total;
        if w > 0.0 {
            h -= w * w.ln();
        }
    }
    h
}

pub fn pipeline(d: &[f64], m: usize) -> f64 {
    let b = log_bin(d, m);
    entropy(&spectrum(&b.probs, &b.centers))
}
