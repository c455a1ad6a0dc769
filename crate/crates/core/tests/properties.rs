//! Property tests for the structural invariants of each pipeline stage.

mod support;

use logspec::binning::{interior_edge_margin, LogBinning};
use logspec::distances::{aggregate_distances, truncated_distances, DistanceMultiset};
use logspec::entropy::{full_pipeline, spectral_entropy, within_bounds};
use logspec::primes::{first_n_primes, sieve_up_to};
use logspec::spectrum::spectrum_from_parts;
use proptest::prelude::*;
use support::oracle;

fn log_uniform_values(len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..6.0, len).prop_map(|v| v.into_iter().map(|e| 10f64.powf(e)).collect())
}

fn probability_vector(m: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, m).prop_filter_map("nonzero mass", |w| {
        let s: f64 = w.iter().sum();
        (s > 0.0).then(|| w.iter().map(|x| x / s).collect())
    })
}

fn equally_spaced(m: usize, start: f64, step: f64) -> Vec<f64> {
    (0..m).map(|j| start + step * (j as f64 + 0.5)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sieve_output_is_prime_and_complete(limit in 2u64..5000) {
        let t = sieve_up_to(limit).unwrap();
        prop_assert!(t.primes().windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(t.primes(), &oracle::primes_up_to(limit)[..]);
    }

    #[test]
    fn first_n_prefix(n in 1u64..2000) {
        let a = first_n_primes(n).unwrap();
        let b = first_n_primes(n + 1).unwrap();
        prop_assert_eq!(a.primes(), &b.primes()[..n as usize]);
    }

    #[test]
    fn distances_are_monotone_in_radius(p in 0u64..3000, r1 in 1.0f64..800.0, extra in 0.0f64..800.0) {
        let t = sieve_up_to(5000).unwrap();
        let small = truncated_distances(p, &t, r1).unwrap();
        let large = truncated_distances(p, &t, r1 + extra).unwrap();
        prop_assert!(small.values().iter().all(|&v| v > 0.0 && v <= r1));
        // Sub-multiset: the small list is a prefix of the large one.
        prop_assert_eq!(small.values(), &large.values()[..small.len()]);
    }

    #[test]
    fn aggregation_is_additive(a in prop::collection::vec(2u64..3000, 0..6), b in prop::collection::vec(2u64..3000, 0..6), r in 1.0f64..500.0) {
        let t = sieve_up_to(5000).unwrap();
        let da = aggregate_distances(&a, &t, r).unwrap();
        let db = aggregate_distances(&b, &t, r).unwrap();
        let both: Vec<u64> = a.iter().chain(&b).copied().collect();
        let dab = aggregate_distances(&both, &t, r).unwrap();
        prop_assert_eq!(dab.len(), da.len() + db.len());
        let summed = da.sum(&db);
        prop_assert_eq!(dab.values(), summed.values());
    }

    #[test]
    fn binning_is_a_probability_vector(d in log_uniform_values(2..400), m in 2usize..80) {
        prop_assume!(d.iter().any(|&v| v != d[0]));
        let b = LogBinning::new(&d, m).unwrap();
        prop_assert_eq!(b.total(), d.len() as u64);
        prop_assert!((b.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(b.probs().iter().all(|&p| p >= 0.0));
        prop_assert!(b.counts()[0] >= 1 && b.counts()[m - 1] >= 1);
        prop_assert!(b.log_edges().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn refinement_is_nested(d in log_uniform_values(2..400), m in 2usize..60) {
        prop_assume!(d.iter().any(|&v| v != d[0]));
        let coarse = LogBinning::new(&d, m).unwrap();
        let fine = LogBinning::new(&d, 2 * m).unwrap();
        let paired: Vec<u64> = fine.counts().chunks(2).map(|c| c[0] + c[1]).collect();
        prop_assert_eq!(coarse.counts(), &paired[..]);
    }

    #[test]
    fn rescaling_preserves_probabilities(d in log_uniform_values(200..201), c in prop::sample::select(vec![1e-3, 7.0, 1e3])) {
        prop_assume!(d.iter().any(|&v| v != d[0]));
        let scaled: Vec<f64> = d.iter().map(|v| v * c).collect();
        prop_assume!(interior_edge_margin(&d, 32).unwrap() > 1e-9);
        prop_assume!(interior_edge_margin(&scaled, 32).unwrap() > 1e-9);
        prop_assert!(logspec::binning::rescale_invariance_check(&d, c, 32).unwrap());
        let a = LogBinning::new(&d, 32).unwrap();
        let b = LogBinning::new(&scaled, 32).unwrap();
        prop_assert_eq!(a.counts(), b.counts());
    }

    #[test]
    fn spectrum_invariants(p in (2usize..65).prop_flat_map(probability_vector), start in -5.0f64..5.0, step in 0.01f64..2.0) {
        let m = p.len();
        let x = equally_spaced(m, start, step);
        let s = spectrum_from_parts(&p, &x).unwrap();
        let mu = s.amplitudes();
        prop_assert!((mu[0].re - 1.0).abs() < 1e-12 && mu[0].im.abs() < 1e-12);
        prop_assert!(mu.iter().all(|z| z.norm() <= 1.0 + 1e-12));
        // Conjugate pairing with period M - 1.
        for r in 1..m.saturating_sub(1) {
            let a = mu[r];
            let b = mu[m - 1 - r].conj();
            prop_assert!((a - b).norm() < 1e-12, "r={} {} vs {}", r, a, b);
        }
    }

    #[test]
    fn spectrum_matches_oracle(p in (2usize..257).prop_flat_map(probability_vector), start in -3.0f64..3.0, step in 0.01f64..1.0) {
        let x = equally_spaced(p.len(), start, step);
        let s = spectrum_from_parts(&p, &x).unwrap();
        for (z, (re, im)) in s.amplitudes().iter().zip(oracle::spectrum(&p, &x)) {
            prop_assert!((z.re - re).abs() < 1e-12 && (z.im - im).abs() < 1e-12);
        }
    }

    #[test]
    fn entropy_is_bounded(d in log_uniform_values(2..500), m in 2usize..100) {
        prop_assume!(d.iter().any(|&v| v != d[0]));
        let ms = DistanceMultiset::from_values(d.clone(), 1e7, vec![]).unwrap();
        let r = full_pipeline(&ms, m).unwrap();
        prop_assert!(within_bounds(r.h, m), "H={} M={}", r.h, m);
        prop_assert!((r.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(r.weights.iter().all(|&w| w >= 0.0));
        prop_assert!((r.h - oracle::pipeline(&d, m)).abs() < 1e-10);
    }
}

#[test]
fn entropy_is_not_permutation_invariant() {
    let x = equally_spaced(6, 0.0, 1.0);
    let p = [0.5, 0.3, 0.1, 0.05, 0.05, 0.0];
    let mut q = p;
    q.swap(1, 4);
    let hp = spectral_entropy(&spectrum_from_parts(&p, &x).unwrap()).unwrap().h;
    let hq = spectral_entropy(&spectrum_from_parts(&q, &x).unwrap()).unwrap().h;
    assert!((hp - hq).abs() > 1e-3, "{hp} {hq}");
}

#[test]
fn point_masses_are_flat() {
    for m in [2usize, 3, 8, 50, 256] {
        for j in 0..m {
            let mut p = vec![0.0; m];
            p[j] = 1.0;
            let x = equally_spaced(m, 1.3, 0.2);
            let r = spectral_entropy(&spectrum_from_parts(&p, &x).unwrap()).unwrap();
            assert!((r.h - (m as f64).ln()).abs() < 1e-12, "M={m} j={j}");
        }
    }
}
