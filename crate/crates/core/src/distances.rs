//! Truncated distance multisets anchored at base points, and their sums as
//! counting measures.

use std::io::{BufRead, Write};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::primes::PrimeTable;

/// Sorted multiset of positive distances, all within the truncation radius.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceMultiset {
    values: Vec<f64>,
    radius: f64,
    base_points: Vec<f64>,
}

fn check_radius(radius: f64) -> Result<()> {
    if radius.is_finite() && radius > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "truncation radius must be positive and finite, got {radius}"
        )))
    }
}

impl DistanceMultiset {
    /// Builds a multiset from arbitrary values, sorting them and checking
    /// `0 < v <= radius` for each.
    pub fn from_values(mut values: Vec<f64>, radius: f64, base_points: Vec<f64>) -> Result<Self> {
        check_radius(radius)?;
        if let Some(bad) = values.iter().find(|&&v| !(v > 0.0 && v <= radius)) {
            return Err(Error::InvalidArgument(format!(
                "distance {bad} outside (0, {radius}]"
            )));
        }
        values.sort_unstable_by(f64::total_cmp);
        Ok(Self {
            values,
            radius,
            base_points,
        })
    }

    pub fn empty(radius: f64, base_points: Vec<f64>) -> Self {
        Self {
            values: Vec::new(),
            radius,
            base_points,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn base_points(&self) -> &[f64] {
        &self.base_points
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> Option<f64> {
        self.values.first().copied()
    }

    pub fn max(&self) -> Option<f64> {
        self.values.last().copied()
    }

    /// Measure addition: multiplicities add, base points are concatenated.
    /// The radius of the sum is the larger of the two radii.
    pub fn sum(&self, other: &DistanceMultiset) -> DistanceMultiset {
        let values = merge_sorted(&self.values, &other.values);
        let mut base_points = self.base_points.clone();
        base_points.extend_from_slice(&other.base_points);
        DistanceMultiset {
            values,
            radius: self.radius.max(other.radius),
            base_points,
        }
    }

    /// Multiplies every distance (and the radius) by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<DistanceMultiset> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "scale factor must be positive and finite, got {c}"
            )));
        }
        Ok(DistanceMultiset {
            values: self.values.iter().map(|v| v * c).collect(),
            radius: self.radius * c,
            base_points: self.base_points.clone(),
        })
    }

    /// Writes one distance per line. Integral values are written without a
    /// fractional part; everything else round-trips through `f64` parsing.
    pub fn write_lines<W: Write>(&self, mut out: W) -> Result<()> {
        for v in &self.values {
            writeln!(out, "{v}")?;
        }
        Ok(())
    }

    /// Reads the one-distance-per-line format. Blank lines and lines starting
    /// with `#` are ignored.
    pub fn read_lines<R: BufRead>(input: R, radius: f64) -> Result<DistanceMultiset> {
        let values = read_values(input)?;
        DistanceMultiset::from_values(values, radius, Vec::new())
    }
}

pub(crate) fn read_values<R: BufRead>(input: R) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let v: f64 = t.parse().map_err(|_| Error::Parse {
            line: i + 1,
            message: format!("not a number: {t:?}"),
        })?;
        if !v.is_finite() {
            return Err(Error::Parse {
                line: i + 1,
                message: format!("non-finite value {t:?}"),
            });
        }
        values.push(v);
    }
    Ok(values)
}

fn merge_sorted(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Distances from `base` to the points of a sorted slice, within `radius`,
/// excluding points equal to `base`. `left` and `right` must be the points
/// below and above `base` respectively.
fn window_distances<T: Copy>(
    base: f64,
    left: &[T],
    right: &[T],
    radius: f64,
    to_f64: impl Fn(T) -> f64,
) -> Vec<f64> {
    // Left side read backwards is already ascending in distance.
    let lhs: Vec<f64> = left
        .iter()
        .rev()
        .map(|&q| base - to_f64(q))
        .filter(|&d| d > 0.0 && d <= radius)
        .collect();
    let rhs: Vec<f64> = right
        .iter()
        .map(|&q| to_f64(q) - base)
        .filter(|&d| d > 0.0 && d <= radius)
        .collect();
    merge_sorted(&lhs, &rhs)
}

/// `{ |p - q| : q prime, q != p, |p - q| <= R }`, sorted ascending.
///
/// `p` need not be prime. The table must be complete up to `p + R`.
pub fn truncated_distances(p: u64, table: &PrimeTable, radius: f64) -> Result<DistanceMultiset> {
    check_radius(radius)?;
    let reach = p as f64 + radius;
    if (table.limit() as f64) < reach.floor() {
        return Err(Error::Coverage {
            needed: reach,
            covered: table.limit() as f64,
        });
    }
    let r = radius.floor() as u64;
    let lo = p.saturating_sub(r);
    let hi = p.saturating_add(r);
    let primes = table.primes();
    let start = primes.partition_point(|&q| q < lo);
    let mid = primes.partition_point(|&q| q < p);
    let end = primes.partition_point(|&q| q <= hi);
    let values = window_distances(p as f64, &primes[start..mid], &primes[mid..end], radius, |q| {
        q as f64
    });
    Ok(DistanceMultiset {
        values,
        radius,
        base_points: vec![p as f64],
    })
}

/// Sum of the truncated distance measures of every base point (with
/// multiplicity).
pub fn aggregate_distances(points: &[u64], table: &PrimeTable, radius: f64) -> Result<DistanceMultiset> {
    check_radius(radius)?;
    let mut acc = DistanceMultiset::empty(radius, Vec::new());
    for &p in points {
        acc = acc.sum(&truncated_distances(p, table, radius)?);
    }
    Ok(acc)
}

/// A sorted configuration of real points, treated like a prime table: it is
/// assumed complete from its first point up to `upper`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Vec<f64>,
    upper: f64,
}

impl PointSet {
    /// Sorts the points; coverage extends to the largest point.
    pub fn new(mut points: Vec<f64>) -> Result<Self> {
        if points.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("point set contains non-finite values".into()));
        }
        points.sort_unstable_by(f64::total_cmp);
        let upper = points.last().copied().unwrap_or(f64::NEG_INFINITY);
        Ok(Self { points, upper })
    }

    /// Like [`PointSet::new`] but with an explicit upper coverage bound.
    pub fn with_coverage(points: Vec<f64>, upper: f64) -> Result<Self> {
        let mut set = Self::new(points)?;
        set.upper = upper;
        Ok(set)
    }

    pub fn from_integers(points: &[u64]) -> Result<Self> {
        Self::new(points.iter().map(|&v| v as f64).collect())
    }

    pub fn read_lines<R: BufRead>(input: R) -> Result<Self> {
        Self::new(read_values(input)?)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    /// The member closest to `target`; ties go to the smaller point.
    pub fn nearest(&self, target: f64) -> Option<f64> {
        let i = self.points.partition_point(|&q| q < target);
        let below = i.checked_sub(1).map(|j| self.points[j]);
        let above = self.points.get(i).copied();
        match (below, above) {
            (Some(b), Some(a)) => Some(if target - b <= a - target { b } else { a }),
            (b, a) => b.or(a),
        }
    }

    pub fn truncated_distances(&self, base: f64, radius: f64) -> Result<DistanceMultiset> {
        check_radius(radius)?;
        if self.upper < base + radius {
            return Err(Error::Coverage {
                needed: base + radius,
                covered: self.upper,
            });
        }
        let start = self.points.partition_point(|&q| q < base - radius);
        let mid = self.points.partition_point(|&q| q < base);
        let end = self.points.partition_point(|&q| q <= base + radius);
        let values = window_distances(base, &self.points[start..mid], &self.points[mid..end], radius, |q| q);
        Ok(DistanceMultiset {
            values,
            radius,
            base_points: vec![base],
        })
    }

    pub fn aggregate_distances(&self, bases: &[f64], radius: f64) -> Result<DistanceMultiset> {
        check_radius(radius)?;
        let mut acc = DistanceMultiset::empty(radius, Vec::new());
        for &b in bases {
            acc = acc.sum(&self.truncated_distances(b, radius)?);
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::sieve_up_to;

    #[test]
    fn enumerated_small_cases() {
        let t = sieve_up_to(20).unwrap();
        assert_eq!(truncated_distances(5, &t, 4.0).unwrap().values(), &[2.0, 2.0, 3.0]);
        assert!(truncated_distances(2, &t, 0.5).unwrap().is_empty());
        let agg = aggregate_distances(&[3, 5], &t, 2.0).unwrap();
        // 3 -> {2, 5}, 5 -> {3, 7}
        assert_eq!(agg.values(), &[1.0, 2.0, 2.0, 2.0]);
        assert_eq!(agg.base_points(), &[3.0, 5.0]);
    }

    #[test]
    fn singleton_and_doubled_aggregates() {
        let t = sieve_up_to(200).unwrap();
        let single = truncated_distances(5, &t, 4.0).unwrap();
        assert_eq!(aggregate_distances(&[5], &t, 4.0).unwrap().values(), single.values());
        let one = truncated_distances(97, &t, 60.0).unwrap();
        let two = aggregate_distances(&[97, 97], &t, 60.0).unwrap();
        let doubled: Vec<f64> = one.values().iter().flat_map(|&v| [v, v]).collect();
        assert_eq!(two.values(), &doubled[..]);
    }

    #[test]
    fn non_prime_base_point() {
        let t = sieve_up_to(20).unwrap();
        // 9: primes 7, 11, 5, 13 within 4.
        assert_eq!(truncated_distances(9, &t, 4.0).unwrap().values(), &[2.0, 2.0, 4.0, 4.0]);
    }

    #[test]
    fn coverage_is_enforced() {
        let t = sieve_up_to(100).unwrap();
        assert!(matches!(truncated_distances(90, &t, 20.0), Err(Error::Coverage { .. })));
        assert!(truncated_distances(90, &t, 10.0).is_ok());
        assert!(matches!(truncated_distances(5, &t, 0.0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn fractional_radius() {
        let t = sieve_up_to(20).unwrap();
        assert_eq!(truncated_distances(5, &t, 2.5).unwrap().values(), &[2.0, 2.0]);
    }

    #[test]
    fn point_set_matches_prime_table() {
        let t = sieve_up_to(1000).unwrap();
        let set = PointSet::from_integers(t.primes()).unwrap();
        for p in [2u64, 101, 500, 877] {
            let a = truncated_distances(p, &t, 100.0).unwrap();
            let b = set.truncated_distances(p as f64, 100.0).unwrap();
            assert_eq!(a.values(), b.values());
        }
        assert_eq!(set.nearest(100.0), Some(101.0));
        assert_eq!(set.nearest(0.0), Some(2.0));
        assert_eq!(set.nearest(5000.0), Some(997.0));
    }

    #[test]
    fn lines_roundtrip() {
        let t = sieve_up_to(100).unwrap();
        let d = truncated_distances(50, &t, 30.0).unwrap();
        let mut buf = Vec::new();
        d.write_lines(&mut buf).unwrap();
        let back = DistanceMultiset::read_lines(&buf[..], 30.0).unwrap();
        assert_eq!(back.values(), d.values());
        assert!(matches!(
            DistanceMultiset::read_lines(&b"1\nx\n"[..], 3.0),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn from_values_validates() {
        assert!(DistanceMultiset::from_values(vec![0.0], 1.0, vec![]).is_err());
        assert!(DistanceMultiset::from_values(vec![2.0], 1.0, vec![]).is_err());
        let d = DistanceMultiset::from_values(vec![3.0, 1.0, 2.0], 3.0, vec![]).unwrap();
        assert_eq!(d.values(), &[1.0, 2.0, 3.0]);
    }
}
