use featnom_core::gmm_nominate::gmm_fit;
use featnom_core::rng::stream_rng;
use featnom_core::spectral::{ase, diag_augment, pass_to_ranks, procrustes, WeightedAdjacency};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::Rng;
use rand_distr::StandardNormal;

fn random_weighted(n: usize, seed: u64) -> WeightedAdjacency {
    let mut rng = stream_rng(seed, 0);
    let mut a = DMatrix::zeros(n, n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(0.4) {
                // Few distinct values so ties are common.
                let w = f64::from(rng.random_range(1..6u32)) * 0.5;
                a[(u, v)] = w;
                a[(v, u)] = w;
            }
        }
    }
    WeightedAdjacency::new(a).unwrap()
}

fn gaussian(rows: usize, cols: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = stream_rng(seed, 1);
    DMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

fn random_rotation(d: usize, seed: u64) -> DMatrix<f64> {
    gaussian(d, d, seed).qr().q()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn pass_to_ranks_has_mean_one(n in 3usize..30, seed in any::<u64>()) {
        let a = random_weighted(n, seed);
        let p = pass_to_ranks(&a);
        let values: Vec<f64> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .map(|(u, v)| p.matrix()[(u, v)])
            .filter(|&w| w != 0.0)
            .collect();
        prop_assume!(!values.is_empty());
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        prop_assert!((mean - 1.0).abs() <= 1e-12);
        prop_assert!(values.iter().all(|&w| w > 0.0 && w <= 2.0));
        prop_assert!(p.matrix() == &p.matrix().transpose());
    }

    #[test]
    fn diagonal_augmentation_is_the_row_mean(n in 2usize..20, seed in any::<u64>()) {
        let a = random_weighted(n, seed);
        let d = diag_augment(&a).unwrap();
        for i in 0..n {
            let mean = a.matrix().row(i).sum() / (n - 1) as f64;
            prop_assert!((d.matrix()[(i, i)] - mean).abs() <= 1e-12);
        }
    }

    #[test]
    fn ase_reconstructs_low_rank_matrices(n in 4usize..40, d in 1usize..4, seed in any::<u64>()) {
        prop_assume!(d < n);
        let x = gaussian(n, d, seed).map(|v| v.abs() + 0.1);
        let p = &x * x.transpose();
        let a = WeightedAdjacency::new(p.clone()).unwrap();
        let z = ase(&a, d).unwrap();
        let err = (z.matrix() * z.matrix().transpose() - &p).norm() / p.norm();
        prop_assert!(err <= 1e-8, "relative error {}", err);
    }

    #[test]
    fn procrustes_recovers_planted_rotations(n in 5usize..40, d in 1usize..6, seed in any::<u64>()) {
        let x = gaussian(n, d, seed);
        let q = random_rotation(d, seed ^ 0x5eed);
        let y = &x * &q;
        let found = procrustes(&x, &y).unwrap();
        prop_assert!((&x * &found - &y).norm() <= 1e-8);
        prop_assert!((found.transpose() * &found - DMatrix::identity(d, d)).norm() <= 1e-10);
    }
}

#[test]
fn em_log_likelihood_is_monotone_on_random_fits() {
    for fit in 0..50u64 {
        let mut rng = stream_rng(fit, 2);
        let rows = rng.random_range(20..80usize);
        let d = rng.random_range(1..4usize);
        let k = rng.random_range(1..5usize);
        let z = gaussian(rows, d, fit).map(|v| v + if rng.random_bool(0.5) { 3.0 } else { 0.0 });
        let m = gmm_fit(&z, k, fit).unwrap();
        for trace in [m.log_likelihood_trace(), m.objective_trace()] {
            assert!(trace.windows(2).all(|w| w[1] >= w[0] - 1e-9 * w[0].abs()), "fit {fit}: {trace:?}");
        }
    }
}
