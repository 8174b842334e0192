mod common;

use common::{embedded_dare, rel};
use cvlqr::linalg::{c, symmetric_part};
use cvlqr::random::{complex_matrix, complex_suite, hermitian_pd, rng};
use cvlqr::riccati::solve_bimatrix_riccati_observed;
use cvlqr::{BimatrixRiccatiIteration, HermitianBimatrix, SolverOptions};
use proptest::prelude::*;

#[test]
fn bimatrix_solution_matches_embedded_dare() {
    for (i, (sys, w)) in complex_suite(11, 20, 4, 2).unwrap().into_iter().enumerate() {
        let sol = cvlqr::solve_bimatrix_riccati(&sys, &w, &SolverOptions::default()).unwrap();
        let oracle = embedded_dare(&sys, &w);
        let gap = rel(&sol.p.embed(), &oracle);
        assert!(gap < 1e-8, "instance {i}: relative gap {gap:e}");
    }
}

#[test]
fn iterates_form_a_monotone_chain() {
    for (i, (sys, w)) in complex_suite(4, 20, 4, 2).unwrap().into_iter().enumerate() {
        let mut iterates: Vec<HermitianBimatrix> = Vec::new();
        let mut worst_correction: f64 = 0.0;
        let sol = solve_bimatrix_riccati_observed(&sys, &w, &SolverOptions::default(), |_, p| {
            worst_correction = worst_correction.max(p.correction());
            iterates.push(p.clone());
        })
        .unwrap();
        assert!(
            worst_correction < 1e-10,
            "instance {i}: structure drift {worst_correction:e}"
        );
        let q = HermitianBimatrix::linear(w.q().clone()).unwrap();
        assert!(q.psd_leq_tol(&iterates[1], 1e-9), "instance {i}: Q <= P(1)");
        for (k, pair) in iterates.windows(2).enumerate() {
            assert!(
                pair[0].psd_leq_tol(&pair[1], 1e-9),
                "instance {i}: P({k}) <= P({})",
                k + 1
            );
        }
        for (k, p) in iterates.iter().enumerate() {
            assert!(p.psd_leq_tol(&sol.p, 1e-9), "instance {i}: P({k}) <= P*");
        }
        assert!(sol.residual <= 100.0 * 1e-12 * sol.p.bnorm());
    }
}

fn random_pd_iterate(seed: u64, n: usize) -> HermitianBimatrix {
    let mut r = rng(seed);
    let p1 = hermitian_pd(&mut r, n) * c(4.0, 0.0);
    let p2 = symmetric_part(&complex_matrix(&mut r, n, n)) * c(0.3 / n as f64, 0.0);
    HermitianBimatrix::new(p1, p2).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn compact_and_gain_forms_agree(seed in any::<u64>(), n in 1usize..5, m in 1usize..3) {
        let (sys, w) = complex_suite(seed, 1, n, m).unwrap().pop().unwrap();
        let it = BimatrixRiccatiIteration::new(&sys, &w).unwrap();
        let p = random_pd_iterate(seed ^ 0x5eed, sys.n());
        prop_assume!(p.is_positive_definite());
        let a = it.step(&p).unwrap();
        let b = it.step_compact(&p).unwrap();
        let gap = a.sub(&b).unwrap().bnorm() / a.bnorm();
        prop_assert!(gap < 1e-10, "relative gap {gap:e}");
    }

    #[test]
    fn one_step_preserves_structure(seed in any::<u64>(), n in 1usize..5) {
        let (sys, w) = complex_suite(seed, 1, n, 2).unwrap().pop().unwrap();
        let it = BimatrixRiccatiIteration::new(&sys, &w).unwrap();
        let p = random_pd_iterate(seed.wrapping_add(1), sys.n());
        prop_assume!(p.is_positive_definite());
        let next = it.step(&p).unwrap();
        prop_assert!(next.correction() < 1e-10);
        prop_assert!(next.is_positive_definite());
    }
}
