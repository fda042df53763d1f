use std::f64::consts::PI;

use num_complex::Complex64;
use qpurify_core::channel::{contract_kraus, kraus_superoperator, propagator, zero_t_kraus};
use qpurify_core::extraction::{
    alpha_analytic, analyze, contracted_map, f_up, maximally_mixed, pure_eigenstate_criterion, trajectory,
    MeasurementSpec, PureStateSpec,
};
use qpurify_core::linalg::{apply, devectorize, eig, frobenius_norm, hermitian_eigenvalues};
use qpurify_core::{ComplexMatrix, ModelParams};
use rand::{rngs::StdRng, Rng, SeedableRng};

fn random_density(rng: &mut StdRng, n: usize) -> ComplexMatrix {
    let a = ComplexMatrix::from_fn(n, n, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let rho = &a * a.adjoint();
    let tr = rho.trace();
    rho / tr
}

fn random_params(rng: &mut StdRng) -> ModelParams {
    ModelParams::from_ratios(
        rng.gen_range(1.5..20.0),
        rng.gen_range(0.0..1.0),
        rng.gen_range(0.1..3.0),
        rng.gen_range(0.0..5.0),
    )
    .unwrap()
}

#[test]
fn propagator_keeps_states_physical() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..100 {
        let p = random_params(&mut rng);
        let tau = rng.gen_range(0.0..10.0);
        let m = propagator(&p, tau).unwrap();
        let rho = random_density(&mut rng, 4);
        let out = apply(&m, &rho).unwrap();
        assert!((out.trace() - Complex64::from(1.0)).norm() < 1e-10);
        assert!(frobenius_norm(&(&out - out.adjoint())) < 1e-10);
        let min = hermitian_eigenvalues(&out).unwrap()[0];
        assert!(min > -1e-10, "{min}");
    }
}

#[test]
fn zero_temperature_kraus_matches_generator_on_grid() {
    for g2 in [0.01, 0.1, 0.5] {
        for g1_over_g2 in [0.5, 0.95, 1.0] {
            for tau in [0.3, 1.0, 5.0] {
                let p = ModelParams::from_ratios(10.0, g2, g1_over_g2, 0.0).unwrap();
                let want = propagator(&p, tau).unwrap();
                let got = kraus_superoperator(&zero_t_kraus(&p, tau).unwrap()).unwrap();
                let err = frobenius_norm(&(got - want));
                assert!(err < 1e-7, "g2 {g2} ratio {g1_over_g2} tau {tau}: {err}");
            }
        }
    }
}

#[test]
fn ideal_extraction_is_pure() {
    let p = ModelParams::from_ratios(10.0, 0.0, 1.0, 0.0).unwrap();
    let mut checked = 0;
    for i in 0..10 {
        for j in 0..10 {
            for k in 0..10 {
                let theta = PI * (i as f64 + 0.5) / 10.0;
                let chi = 2.0 * PI * j as f64 / 10.0;
                let tau = 0.2 + 9.8 * k as f64 / 9.0;
                let res = analyze(&contracted_map(&p, &MeasurementSpec::new(theta, chi, tau).unwrap()).unwrap()).unwrap();
                if res.degenerate {
                    continue;
                }
                assert!((res.purity - 1.0).abs() < 1e-8, "theta {theta} chi {chi} tau {tau}: {}", res.purity);
                checked += 1;
            }
        }
    }
    assert!(checked > 900);
}

#[test]
fn normalized_iterates_converge_at_spectral_rate() {
    let mut rng = StdRng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 10 {
        let p = random_params(&mut rng);
        let m = MeasurementSpec::new(rng.gen_range(0.0..PI), rng.gen_range(0.0..6.0), rng.gen_range(0.2..10.0)).unwrap();
        let map = contracted_map(&p, &m).unwrap();
        let res = analyze(&map).unwrap();
        let ratio = res.lambda1().norm() / res.lambda0().norm();
        if res.degenerate || ratio > 0.9 {
            continue;
        }
        let traj = trajectory(&map, &maximally_mixed(), 200).unwrap();
        let mut rho = maximally_mixed();
        for pt in traj.points.iter().skip(1) {
            rho = apply(&map, &rho).unwrap();
            rho /= rho.trace();
            let dist = frobenius_norm(&(&rho - &res.extracted_state));
            // Constant absorbs the initial overlap and eigenvector conditioning.
            let bound = 50.0 * ratio.powi(pt.n as i32) + 1e-9;
            assert!(dist <= bound, "n {}: {dist} > {bound}", pt.n);
        }
        checked += 1;
    }
}

#[test]
fn case_boundary_follows_coherence_sign() {
    let p = ModelParams::from_ratios(10.0, 0.5, 0.95, 0.0).unwrap();
    let mut flips = 0;
    let mut prev_case_two = None;
    for i in 0..2000 {
        let tau = 0.01 + 20.0 * i as f64 / 1999.0;
        let margin = (-0.5 * p.gamma2 * tau).exp() - f_up(&p, tau).norm();
        if margin.abs() < 1e-6 {
            continue;
        }
        let res = analyze(&contracted_map(&p, &MeasurementSpec::new(0.0, 0.0, tau).unwrap()).unwrap()).unwrap();
        // Case II: the upper population e^{-gamma2 tau} dominates |f_up|^2.
        let l0 = res.lambda0();
        let upper = (-p.gamma2 * tau).exp();
        let case_two = (l0 - upper).norm() < (l0 - f_up(&p, tau).norm_sqr()).norm();
        assert_eq!(case_two, margin > 0.0, "tau {tau}");
        if case_two {
            let a = alpha_analytic(&p, tau).unwrap();
            let want = (1.0 + a * a) / (1.0 + a).powi(2);
            assert!((res.purity - want).abs() < 1e-10, "tau {tau}");
        } else {
            assert!((res.extracted_state[(1, 1)].re - 1.0).abs() < 1e-10);
        }
        if prev_case_two.is_some_and(|p| p != case_two) {
            flips += 1;
        }
        prev_case_two = Some(case_two);
    }
    assert!(flips >= 2, "{flips}");
}

#[test]
fn success_probability_never_increases() {
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..20 {
        let p = random_params(&mut rng);
        let m = MeasurementSpec::new(rng.gen_range(0.0..PI), rng.gen_range(0.0..6.0), rng.gen_range(0.2..10.0)).unwrap();
        let map = contracted_map(&p, &m).unwrap();
        let rho = random_density(&mut rng, 2);
        let traj = trajectory(&map, &rho, 50).unwrap();
        for w in traj.points.windows(2) {
            assert!(w[1].success_probability <= w[0].success_probability * (1.0 + 1e-12));
        }
        assert!(traj.points[1].success_probability <= 1.0 + 1e-12);
    }
}

#[test]
fn criterion_and_pure_eigenvectors_coincide() {
    let mut rng = StdRng::seed_from_u64(19);
    let mut pure_found = 0;
    for _ in 0..60 {
        let g2 = if rng.gen_bool(0.3) { 0.0 } else { rng.gen_range(0.01..0.5) };
        let p = ModelParams::from_ratios(10.0, g2, rng.gen_range(0.5..2.0), 0.0).unwrap();
        let theta = match rng.gen_range(0..3) {
            0 => 0.0,
            1 => PI,
            _ => rng.gen_range(0.1..3.0),
        };
        let m = MeasurementSpec::new(theta, rng.gen_range(0.0..6.0), rng.gen_range(0.2..8.0)).unwrap();
        let vs = contract_kraus(&zero_t_kraus(&p, m.tau).unwrap(), &m).unwrap();
        let map = contracted_map(&p, &m).unwrap();

        // Criterion passes => eigenvector of the map.
        for eta in [0.0, PI, rng.gen_range(0.1..3.0)] {
            let cand = PureStateSpec::new(eta, rng.gen_range(0.0..6.0));
            let v = pure_eigenstate_criterion(&vs, &cand, 1e-10);
            if let Some(lambda) = v.lambda_phi {
                let rho = cand.density();
                let image = apply(&map, &rho).unwrap();
                assert!(frobenius_norm(&(image - rho * Complex64::from(lambda))) < 1e-9);
            }
        }

        // Pure eigenvectors of the map => criterion passes.
        let es = eig(&map).unwrap();
        for k in 0..4 {
            let sigma = devectorize(&es.right.column(k).into_owned(), 2, 2).unwrap();
            let tr = sigma.trace();
            if tr.norm() < 1e-8 {
                continue;
            }
            let rho = &sigma / tr;
            let herm = frobenius_norm(&(&rho - rho.adjoint()));
            let evs = hermitian_eigenvalues(&rho).unwrap();
            if herm > 1e-9 || evs[0].abs() > 1e-9 {
                continue;
            }
            // Rank one: rho = |phi><phi| with phi the top eigenvector.
            let col = if rho[(0, 0)].re >= rho[(1, 1)].re { 0 } else { 1 };
            let phi = rho.column(col).into_owned();
            let cand = PureStateSpec::from_ket(&phi).unwrap();
            let v = pure_eigenstate_criterion(&vs, &cand, 1e-7);
            assert!(v.holds, "theta {theta}, k {k}: {}", v.worst_residual);
            assert!((v.lambda_phi.unwrap() - es.eigenvalues[k].re).abs() < 1e-9);
            pure_found += 1;
        }
    }
    assert!(pure_found > 10, "{pure_found}");
}
