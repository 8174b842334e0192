//! Rank tests for stabilizability.
//!
//! The "for all |λ| ≥ 1" rank conditions only need checking at eigenvalues of
//! the state matrix, since the rank of `[λI − A, B]` cannot drop anywhere else.

use num_complex::Complex64;

use crate::linalg::{self, conj, hstack, CMat};
use crate::system::{AntilinearSystem, ComplexLinearSystem};

/// Eigenvalues with `|λ| ≥ 1 − BOUNDARY_TOL` are checked.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Singular values below `RANK_TOL · σ_max` count as zero.
pub const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct PbhReport {
    pub stabilizable: bool,
    /// Eigenvalues on or outside the unit circle where the rank condition fails.
    pub offending: Vec<Complex64>,
}

/// Rank of `[λI − A, B]` must equal `A.nrows()` at every eigenvalue of `A`
/// with modulus at least `1 − BOUNDARY_TOL`.
pub fn pbh(a: &CMat, b: &CMat) -> PbhReport {
    let n = a.nrows();
    let mut offending = Vec::new();
    for lambda in linalg::eigenvalues(a) {
        if lambda.norm() < 1.0 - BOUNDARY_TOL {
            continue;
        }
        let shifted = CMat::identity(n, n) * lambda - a;
        if linalg::rank(&hstack(&shifted, b), RANK_TOL) < n {
            offending.push(lambda);
        }
    }
    PbhReport {
        stabilizable: offending.is_empty(),
        offending,
    }
}

/// Rank test on the embedding `[λI − embed(A), embed(B)]`.
pub fn check_complex(sys: &ComplexLinearSystem) -> PbhReport {
    pbh(&sys.a().embed(), &sys.b().embed())
}

pub fn is_stabilizable_complex(sys: &ComplexLinearSystem) -> bool {
    check_complex(sys).stabilizable
}

/// Rank test on the normal pair `(A2 A2^#, [B2, A2 B2^#])`.
pub fn check_antilinear(sys: &AntilinearSystem) -> PbhReport {
    let a2 = sys.a2();
    let b2 = sys.b2();
    let a = a2 * conj(a2);
    let b = hstack(b2, &(a2 * conj(b2)));
    pbh(&a, &b)
}

pub fn is_stabilizable_antilinear(sys: &AntilinearSystem) -> bool {
    check_antilinear(sys).stabilizable
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bimatrix::Bimatrix;
    use crate::linalg::c;

    fn sc(re: f64, im: f64) -> CMat {
        CMat::from_element(1, 1, c(re, im))
    }

    #[test]
    fn stable_system_without_input() {
        let a1 = CMat::from_row_slice(2, 2, &[c(0.5, 0.1), c(1.0, 0.0), c(0.0, 0.0), c(-0.3, 0.2)]);
        let sys = ComplexLinearSystem::new(Bimatrix::linear(a1), Bimatrix::zeros(2, 1)).unwrap();
        assert!(is_stabilizable_complex(&sys));
    }

    #[test]
    fn unstable_without_input() {
        let sys = ComplexLinearSystem::new(Bimatrix::linear(sc(2.0, 0.0)), Bimatrix::zeros(1, 1)).unwrap();
        let rep = check_complex(&sys);
        assert!(!rep.stabilizable);
        assert!(rep.offending.iter().all(|l| (l - c(2.0, 0.0)).norm() < 1e-12));
    }

    #[test]
    fn antilinear_scalars() {
        let s = |a: f64, b: f64| AntilinearSystem::new(sc(a, 0.0), sc(b, 0.0)).unwrap();
        assert!(is_stabilizable_antilinear(&s(2.0, 1.0)));
        let rep = check_antilinear(&s(2.0, 0.0));
        assert!(!rep.stabilizable);
        assert_eq!(rep.offending.len(), 1);
        assert!((rep.offending[0] - c(4.0, 0.0)).norm() < 1e-12);
        assert!(is_stabilizable_antilinear(&s(0.5, 0.0)));
    }

    #[test]
    fn unit_circle_eigenvalue_is_checked() {
        let sys = ComplexLinearSystem::new(Bimatrix::linear(sc(0.0, 1.0)), Bimatrix::zeros(1, 1)).unwrap();
        assert!(!is_stabilizable_complex(&sys));
        let sys = AntilinearSystem::new(sc(0.6, 0.8), sc(0.0, 0.0)).unwrap();
        assert!(!is_stabilizable_antilinear(&sys));
    }

    #[test]
    fn antilinear_scalar_agrees_with_lifting() {
        for (a, b) in [(2.0, 1.0), (2.0, 0.0), (0.5, 0.0), (1.0, 0.0), (0.999, 0.0)] {
            let s = AntilinearSystem::new(sc(a, 0.3 * a), sc(b, 0.0)).unwrap();
            assert_eq!(
                is_stabilizable_antilinear(&s),
                is_stabilizable_complex(&s.to_complex()),
                "a2={a}, b2={b}"
            );
        }
    }
}
