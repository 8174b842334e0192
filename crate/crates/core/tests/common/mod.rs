#![allow(dead_code)]

use cvlqr::linalg::{block2x2, conj};
use cvlqr::{CMat, ComplexLinearSystem, CostWeights};
use num_complex::Complex64;

pub fn sc(x: f64) -> CMat {
    CMat::from_element(1, 1, Complex64::new(x, 0.0))
}

pub fn unit(n: usize, m: usize) -> CostWeights {
    CostWeights::new(CMat::identity(n, n), CMat::identity(m, m)).unwrap()
}

/// Plain discrete Riccati iteration on the embedded system
/// `(embed(A), embed(B), diag(Q, Q^#), diag(R, R^#))`, written out
/// independently of the bimatrix code. Its fixed point is `embed(P)`.
pub fn embedded_dare(sys: &ComplexLinearSystem, w: &CostWeights) -> CMat {
    let a = sys.a().embed();
    let b = sys.b().embed();
    let (n, m) = (w.n(), w.m());
    let q = block2x2(w.q(), &CMat::zeros(n, n), &CMat::zeros(n, n), &conj(w.q()));
    let r = block2x2(w.r(), &CMat::zeros(m, m), &CMat::zeros(m, m), &conj(w.r()));
    let mut p = q.clone();
    let mut best = f64::INFINITY;
    let mut stalled = 0;
    for _ in 0..20_000 {
        let pa = &p * &a;
        let s = &r + b.adjoint() * &p * &b;
        let bpa = b.adjoint() * &pa;
        let s_inv = s.try_inverse().expect("S invertible");
        let next = &q + a.adjoint() * &pa - bpa.adjoint() * s_inv * bpa;
        let next = (&next + next.adjoint()) * Complex64::new(0.5, 0.0);
        let step = (&next - &p).norm();
        p = next;
        if step <= 1e-14 * p.norm() {
            break;
        }
        // roundoff floor: no new minimum for a while
        if step < best {
            best = step;
            stalled = 0;
        } else {
            stalled += 1;
            if stalled > 50 {
                break;
            }
        }
    }
    p
}

pub fn rel(a: &CMat, b: &CMat) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(f64::MIN_POSITIVE)
}
