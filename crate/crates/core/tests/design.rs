use kriging_ego::design::{
    euclidean_distance, lhs, min_distance, sample_lengthscales, BenchmarkFunction, BenchmarkKind,
    BoxDomain,
};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn min_distance_matches_naive_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let n = rng.random_range(1..30);
        let d = rng.random_range(1..6);
        let x = DMatrix::from_fn(n, d, |_, _| rng.random_range(-5.0..5.0));
        let p: Vec<f64> = (0..d).map(|_| rng.random_range(-5.0..5.0)).collect();
        let naive = (0..n)
            .map(|i| (0..d).map(|j| (x[(i, j)] - p[j]).powi(2)).sum::<f64>().sqrt())
            .fold(f64::INFINITY, f64::min);
        assert!((min_distance(&p, &x) - naive).abs() <= 1e-12);
    }
}

proptest! {
    #[test]
    fn lhs_is_stratified(seed in 0u64..10_000, n in 1usize..40, d in 1usize..6) {
        let domain = BoxDomain::cube(d, -5.0, 5.0).unwrap();
        let x = lhs(n, &domain, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(x.shape(), (n, d));
        for j in 0..d {
            let mut strata: Vec<usize> =
                (0..n).map(|i| (((x[(i, j)] + 5.0) / 10.0 * n as f64) as usize).min(n - 1)).collect();
            strata.sort_unstable();
            prop_assert_eq!(strata, (0..n).collect::<Vec<_>>());
        }
    }

    #[test]
    fn lengthscales_cover_log_strata(seed in 0u64..10_000, q in 1usize..12) {
        let t = sample_lengthscales(q, (-2.0, 1.0), &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(t.len(), q);
        prop_assert!(t.windows(2).all(|w| w[0] <= w[1]));
        for (k, v) in t.iter().enumerate() {
            let stratum = ((v.log10() + 2.0) / 3.0 * q as f64).floor() as usize;
            prop_assert_eq!(stratum.min(q - 1), k);
        }
    }

    #[test]
    fn benchmarks_are_nonnegative(x in prop::collection::vec(-5.0..5.0f64, 1..8)) {
        for kind in BenchmarkKind::ALL {
            let f = BenchmarkFunction::new(kind, x.len());
            prop_assert!(f.evaluate(&x).unwrap() >= 0.0);
        }
    }

    #[test]
    fn distance_is_symmetric(
        a in prop::collection::vec(-5.0..5.0f64, 3),
        b in prop::collection::vec(-5.0..5.0f64, 3),
    ) {
        prop_assert_eq!(euclidean_distance(&a, &b), euclidean_distance(&b, &a));
        prop_assert_eq!(euclidean_distance(&a, &a), 0.0);
    }
}
