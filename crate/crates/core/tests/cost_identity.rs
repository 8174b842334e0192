use cvlqr::linalg::c;
use cvlqr::random::{antilinear_suite, complex_matrix, complex_suite, rng};
use cvlqr::{
    adaptive_cost, closed_loop, cross_validate_antilinear, lqr_complex, AdaptiveHorizon, Bimatrix, CVec, FeedbackGain,
    SolverOptions,
};

fn random_x0(r: &mut cvlqr::random::Rand, n: usize) -> CVec {
    complex_matrix(r, n, 1).column(0).into_owned()
}

#[test]
fn complex_suite_costs_match_riccati_forms() {
    let mut r = rng(99);
    for (i, (sys, w)) in complex_suite(4, 20, 4, 2).unwrap().into_iter().enumerate() {
        let res = lqr_complex(&sys, &w, &SolverOptions::default()).unwrap();
        for _ in 0..20 {
            let x0 = random_x0(&mut r, sys.n());
            let sim = adaptive_cost(&sys, &res.gain, &w, &x0, AdaptiveHorizon::default()).unwrap();
            let j = res.jmin(&x0).unwrap();
            assert!(sim.converged, "#{i}");
            assert!(
                (sim.cost - j).abs() <= 1e-6 * j,
                "#{i}: simulated {} vs {}",
                sim.cost,
                j
            );
        }
    }
}

#[test]
fn antilinear_suite_costs_match_all_routes() {
    let mut r = rng(100);
    for (i, (sys, w)) in antilinear_suite(5, 50, 4, 2).unwrap().into_iter().enumerate() {
        let cv = cross_validate_antilinear(&sys, &w, &SolverOptions::default()).unwrap();
        let lifted = sys.to_complex();
        for _ in 0..20 {
            let x0 = random_x0(&mut r, sys.n());
            for route in [&cv.anti, &cv.normal] {
                let sim = adaptive_cost(&lifted, &route.gain(), &w, &x0, AdaptiveHorizon::default()).unwrap();
                let j = route.jmin(&x0).unwrap();
                assert!(
                    (sim.cost - j).abs() <= 1e-6 * j,
                    "#{i} {}: {} vs {}",
                    route.method.name(),
                    sim.cost,
                    j
                );
            }
            let sim = adaptive_cost(&lifted, &cv.bimatrix.gain, &w, &x0, AdaptiveHorizon::default()).unwrap();
            let j = cv.bimatrix.jmin(&x0).unwrap();
            assert!((sim.cost - j).abs() <= 1e-6 * j, "#{i} bimatrix");
        }
    }
}

#[test]
fn perturbed_gains_cost_more() {
    let mut r = rng(7);
    for (sys, w) in complex_suite(8, 10, 3, 2).unwrap() {
        let res = lqr_complex(&sys, &w, &SolverOptions::default()).unwrap();
        let x0 = random_x0(&mut r, sys.n());
        let jmin = res.jmin(&x0).unwrap();
        for scale in [1e-1, 1e-2, 1e-3] {
            let d = Bimatrix::new(
                complex_matrix(&mut r, sys.m(), sys.n()) * c(scale, 0.0),
                complex_matrix(&mut r, sys.m(), sys.n()) * c(scale, 0.0),
            )
            .unwrap();
            let gain = FeedbackGain::new(res.gain.k().add(&d).unwrap());
            if closed_loop(&sys, &gain).unwrap().spectral_radius() >= 1.0 {
                continue;
            }
            let sim = adaptive_cost(&sys, &gain, &w, &x0, AdaptiveHorizon::default()).unwrap();
            assert!(
                sim.cost >= jmin * (1.0 - 1e-9),
                "perturbation {scale}: {} < {}",
                sim.cost,
                jmin
            );
        }
    }
}
