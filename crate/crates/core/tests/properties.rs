use std::f64::consts::PI;

use infodist::campaign::{run_campaign, Trial};
use infodist::divergence::{quantum_divergence, DivergenceKind};
use infodist::fisher::quantum_fisher;
use infodist::linalg::{eigh, max_abs, HermitianMatrix};
use infodist::measurement::{random_channel, random_measurement};
use infodist::models::{evaluate, random_model};
use infodist::random::{gaussian_hermitian, random_density_matrix, rng};
use infodist::tradeoff::{check_separating_at, check_tradeoff_at, monotonicity_gap_at};
use infodist::{Measurement, MonotoneMetric};
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 64,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn eigh_reconstructs(seed in any::<u64>(), dim in 2usize..6) {
        let h = gaussian_hermitian(&mut rng(seed), dim);
        let spec = eigh(&h);
        prop_assert!(spec.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(max_abs(&(spec.reconstruct() - h.as_matrix())) < 1e-10);
        let u = &spec.eigenvectors;
        let gram = u.adjoint() * u;
        prop_assert!(max_abs(&(gram - infodist::linalg::ComplexMatrix::identity(dim, dim))) < 1e-10);
    }

    #[test]
    fn purification_preserves_povm(seed in any::<u64>(), dim in 2usize..4, n in 2usize..4, ops in 1usize..4) {
        let meas = random_measurement(dim, n, ops, seed).unwrap();
        let povm = meas.povm();
        let pure = povm.purify();
        prop_assert!(pure.is_pure());
        for (a, b) in povm.elements().iter().zip(pure.povm().elements()) {
            prop_assert!(max_abs(&(a.as_matrix() - b.as_matrix())) < 1e-10);
        }
    }

    #[test]
    fn gap_is_definitional_and_psd(seed in any::<u64>(), dim in 2usize..4, m in 1usize..3, n in 2usize..4, ops in 1usize..3) {
        let model = random_model(dim, m, seed).unwrap();
        let meas = random_measurement(dim, n, ops, seed ^ 0x55).unwrap();
        let theta: Vec<f64> = (0..m).map(|a| ((seed >> (8 * a)) % 600) as f64 / 100.0 - 3.0).collect();
        let point = evaluate(&model, &theta).unwrap();
        for metric in MonotoneMetric::presets() {
            let r = check_tradeoff_at(&point, &meas, &metric).unwrap();
            prop_assert!(max_abs(&(&r.gap - (&r.delta - &r.j_classical.matrix))) <= 1e-12);
            prop_assert!(r.min_gap_eigenvalue >= -1e-8, "{} {}", metric.name(), r.min_gap_eigenvalue);
            prop_assert!(r.j_classical.is_psd(1e-10));
            prop_assert!(check_separating_at(&point, &meas, &metric).unwrap().residual <= 1e-7);
        }
    }

    #[test]
    fn fisher_is_hermitian_psd(seed in any::<u64>(), dim in 2usize..5, m in 1usize..4) {
        let model = random_model(dim, m, seed).unwrap();
        let theta = vec![0.3; m];
        let point = evaluate(&model, &theta).unwrap();
        for metric in MonotoneMetric::presets() {
            let j = quantum_fisher(&point, &metric).unwrap();
            prop_assert!(max_abs(&(&j.matrix - j.matrix.adjoint())) < 1e-10);
            prop_assert!(j.is_psd(1e-10));
            if metric.is_symmetric() {
                prop_assert!(j.max_imaginary() < 1e-10);
            }
        }
    }

    #[test]
    fn monotone_under_channels(seed in any::<u64>(), k in 1usize..5) {
        let model = random_model(2, 1, seed).unwrap();
        let point = evaluate(&model, &[1.0]).unwrap();
        let channel = random_channel(2, k, seed ^ 7).unwrap();
        for metric in MonotoneMetric::presets() {
            let gap = monotonicity_gap_at(&point, &channel, &metric).unwrap();
            prop_assert!(gap.min_eigenvalue() >= -1e-8);
        }
    }

    #[test]
    fn divergences_nonnegative_and_ordered(seed in any::<u64>(), dim in 2usize..4) {
        let mut r = rng(seed);
        let rho = random_density_matrix(&mut r, dim);
        let sigma = random_density_matrix(&mut r, dim);
        let sq = quantum_divergence(DivergenceKind::QuantumRelative, &rho, &sigma).unwrap().as_f64().unwrap();
        let sbs = quantum_divergence(DivergenceKind::BelavkinStaszewski, &rho, &sigma).unwrap().as_f64().unwrap();
        prop_assert!(sq >= 0.0);
        prop_assert!(sbs >= sq - 1e-8);
    }

    #[test]
    fn refinement_is_invisible(seed in any::<u64>()) {
        let model = random_model(2, 1, seed).unwrap();
        let meas = random_measurement(2, 2, 1, seed ^ 3).unwrap();
        let split = Measurement::new(vec![
            vec![meas.outcomes()[0][0].scale(std::f64::consts::FRAC_1_SQRT_2)],
            vec![meas.outcomes()[0][0].scale(std::f64::consts::FRAC_1_SQRT_2)],
            vec![meas.outcomes()[1][0].clone()],
        ]).unwrap();
        let point = evaluate(&model, &[PI / 3.0]).unwrap();
        for metric in MonotoneMetric::presets() {
            let a = check_separating_at(&point, &meas, &metric).unwrap();
            let b = check_separating_at(&point, &split, &metric).unwrap();
            prop_assert!(max_abs(&(&a.channel_fisher.matrix - &b.channel_fisher.matrix)) < 1e-9);
            let ta = check_tradeoff_at(&point, &meas, &metric).unwrap();
            let tb = check_tradeoff_at(&point, &split, &metric).unwrap();
            prop_assert_eq!(ta.psd_verdict, tb.psd_verdict);
        }
    }

    #[test]
    fn campaign_bookkeeping(n in 0usize..40, threshold in 0.0f64..1.0, seed in any::<u64>()) {
        let s = run_campaign("p", seed, n, |k, _| Ok(Trial::at_most(k as f64 / 40.0, threshold)));
        prop_assert!(s.n_pass <= s.n_trials);
        prop_assert_eq!(s.failing_seeds.len(), s.n_trials - s.n_pass);
    }

    #[test]
    fn hermitize_is_idempotent(seed in any::<u64>(), dim in 1usize..5) {
        let a = infodist::random::gaussian_matrix(&mut rng(seed), dim, dim);
        let h = HermitianMatrix::hermitize(&a);
        let hh = HermitianMatrix::hermitize(h.as_matrix());
        prop_assert!(max_abs(&(h.as_matrix() - hh.as_matrix())) < 1e-15);
    }
}
