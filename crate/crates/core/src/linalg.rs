//! Dense complex helpers shared by the solvers.
//!
//! Everything here works on dynamically sized `nalgebra` matrices over
//! `Complex64`; the problem sizes of interest are small (n up to a few dozen),
//! so plain SVD/Schur calls are used for rank and spectrum queries.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;
pub type RMat = DMatrix<f64>;
pub type RVec = DVector<f64>;

/// Relative rank tolerance used when inverting: sigma_min < RANK_TOL * sigma_max is singular.
pub const RANK_TOL: f64 = 1e-12;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn conj(m: &CMat) -> CMat {
    m.map(|z| z.conj())
}

pub fn to_complex(m: &RMat) -> CMat {
    m.map(|x| Complex64::new(x, 0.0))
}

pub fn real_part(m: &CMat) -> RMat {
    m.map(|z| z.re)
}

pub fn imag_part(m: &CMat) -> RMat {
    m.map(|z| z.im)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn frobenius(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `‖m − mᴴ‖_F / max(1, ‖m‖_F)`.
pub fn hermitian_deviation(m: &CMat) -> f64 {
    frobenius(&(m - m.adjoint())) / frobenius(m).max(1.0)
}

/// `‖m − mᵀ‖_F / max(1, ‖m‖_F)`.
pub fn symmetric_deviation(m: &CMat) -> f64 {
    frobenius(&(m - m.transpose())) / frobenius(m).max(1.0)
}

pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

pub fn symmetric_part(m: &CMat) -> CMat {
    (m + m.transpose()).scale(0.5)
}

/// Singular values in descending order.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let sv = m.clone().svd(false, false).singular_values;
    let mut out: Vec<f64> = sv.iter().copied().collect();
    out.sort_by(|a, b| b.total_cmp(a));
    out
}

/// Numerical rank with threshold `rel_tol * sigma_max`.
pub fn rank(m: &CMat, rel_tol: f64) -> usize {
    let sv = singular_values(m);
    let Some(&smax) = sv.first() else {
        return 0;
    };
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * smax).count()
}

/// Inverse of a square matrix, rejecting it when the smallest singular value
/// falls below `RANK_TOL` times the largest.
pub fn inverse(m: &CMat, context: &'static str) -> Result<CMat> {
    if !m.is_square() {
        return Err(Error::dims(
            context,
            "square matrix",
            format!("{}x{}", m.nrows(), m.ncols()),
        ));
    }
    let sv = singular_values(m);
    let smax = sv.first().copied().unwrap_or(0.0);
    let smin = sv.last().copied().unwrap_or(0.0);
    if smax == 0.0 || smin < RANK_TOL * smax {
        return Err(Error::SingularMatrix(context));
    }
    m.clone().lu().try_inverse().ok_or(Error::SingularMatrix(context))
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let h = hermitian_part(m);
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

pub fn min_hermitian_eigenvalue(m: &CMat) -> f64 {
    hermitian_eigenvalues(m).first().copied().unwrap_or(f64::INFINITY)
}

/// Hermitian positive definiteness with threshold `rel_tol * max(‖m‖_F, tiny)`.
pub fn is_hermitian_pd(m: &CMat, rel_tol: f64) -> bool {
    m.is_square() && min_hermitian_eigenvalue(m) > rel_tol * frobenius(m)
}

/// Eigenvalues of a general complex square matrix, read off its Schur form.
pub fn eigenvalues(m: &CMat) -> Vec<Complex64> {
    let n = m.nrows();
    match n {
        0 => return Vec::new(),
        1 => return vec![m[(0, 0)]],
        _ => {}
    }
    let (_, t) = m.clone().schur().unpack();
    let scale = frobenius(&t).max(f64::MIN_POSITIVE);
    let mut out = Vec::with_capacity(n);
    let mut i = 0;
    while i < n {
        if i + 1 < n && t[(i + 1, i)].norm() > 1e-14 * scale {
            let (l1, l2) = eig2x2(t[(i, i)], t[(i, i + 1)], t[(i + 1, i)], t[(i + 1, i + 1)]);
            out.push(l1);
            out.push(l2);
            i += 2;
        } else {
            out.push(t[(i, i)]);
            i += 1;
        }
    }
    out
}

fn eig2x2(a: Complex64, b: Complex64, cc: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let half_tr = (a + d) * 0.5;
    let disc = ((a - d) * 0.5).powi(2) + b * cc;
    let root = disc.sqrt();
    (half_tr + root, half_tr - root)
}

pub fn spectral_radius(m: &CMat) -> f64 {
    eigenvalues(m).into_iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Principal square root of a Hermitian positive definite matrix.
pub fn hermitian_sqrt(m: &CMat, what: &'static str) -> Result<CMat> {
    let eig = hermitian_part(m).symmetric_eigen();
    if eig.eigenvalues.iter().any(|&l| l <= 0.0) {
        return Err(Error::NotPositiveDefinite(what));
    }
    let v = &eig.eigenvectors;
    let d = CMat::from_diagonal(&eig.eigenvalues.map(|l| Complex64::new(l.sqrt(), 0.0)));
    Ok(hermitian_part(&(v * d * v.adjoint())))
}

/// Principal square root of a real symmetric positive definite matrix.
pub fn real_spd_sqrt(m: &RMat, what: &'static str) -> Result<RMat> {
    let sym = (m + m.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    if eig.eigenvalues.iter().any(|&l| l <= 0.0) {
        return Err(Error::NotPositiveDefinite(what));
    }
    let v = &eig.eigenvectors;
    let d = RMat::from_diagonal(&eig.eigenvalues.map(f64::sqrt));
    let s = v * d * v.transpose();
    Ok((&s + s.transpose()) * 0.5)
}

pub fn real_inverse(m: &RMat, context: &'static str) -> Result<RMat> {
    inverse(&to_complex(m), context).map(|inv| real_part(&inv))
}

/// `x^H m x`.
pub fn quad(m: &CMat, x: &CVec) -> Complex64 {
    x.dotc(&(m * x))
}

/// Block matrix `[[a, b], [c, d]]`.
pub fn block2x2(a: &CMat, b: &CMat, cc: &CMat, d: &CMat) -> CMat {
    let (r1, c1) = a.shape();
    let (r2, c2) = d.shape();
    let mut out = CMat::zeros(r1 + r2, c1 + c2);
    out.view_mut((0, 0), (r1, c1)).copy_from(a);
    out.view_mut((0, c1), (r1, c2)).copy_from(b);
    out.view_mut((r1, 0), (r2, c1)).copy_from(cc);
    out.view_mut((r1, c1), (r2, c2)).copy_from(d);
    out
}

pub fn hstack(a: &CMat, b: &CMat) -> CMat {
    let mut out = CMat::zeros(a.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((0, a.ncols()), b.shape()).copy_from(b);
    out
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
