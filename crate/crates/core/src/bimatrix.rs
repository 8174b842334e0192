//! Bimatrix algebra.
//!
//! A bimatrix `{M1, M2}` is the real-linear map `x ↦ M1·x + M2^#·x^#`, where
//! `^#` is elementwise conjugation. Composition, adjoint and inverse are
//! closed over bimatrices, and the map
//!
//! ```text
//! embed({M1, M2}) = [[M1, M2^#], [M2, M1^#]]
//! ```
//!
//! is a faithful representation: it turns every bimatrix operation into the
//! ordinary matrix operation on the `2n × 2p` embedding acting on `[x; x^#]`.
//! Products and adjoints are computed blockwise; inverses and definiteness go
//! through the embedding.

use crate::error::{Error, Result};
use crate::linalg::{
    self, block2x2, conj, frobenius, hermitian_deviation, hermitian_part, symmetric_deviation, symmetric_part, CMat,
    CVec, RANK_TOL,
};

/// Relative deviation from Hermitian/symmetric structure tolerated by
/// [`HermitianBimatrix::new`] before re-symmetrizing.
pub const STRUCTURE_TOL: f64 = 1e-10;

/// Relative threshold on the smallest embedding eigenvalue for positive definiteness.
pub const PD_TOL: f64 = 1e-10;

/// Default absolute (scaled by `max(1, bnorm)`) tolerance of [`HermitianBimatrix::psd_leq`].
pub const PSD_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Bimatrix {
    m1: CMat,
    m2: CMat,
}

impl Bimatrix {
    pub fn new(m1: CMat, m2: CMat) -> Result<Self> {
        if m1.shape() != m2.shape() {
            return Err(Error::dims(
                "bimatrix blocks",
                format!("{}x{}", m1.nrows(), m1.ncols()),
                format!("{}x{}", m2.nrows(), m2.ncols()),
            ));
        }
        Ok(Self { m1, m2 })
    }

    /// `{m1, 0}`: an ordinary complex-linear map.
    pub fn linear(m1: CMat) -> Self {
        let m2 = CMat::zeros(m1.nrows(), m1.ncols());
        Self { m1, m2 }
    }

    /// `{0, m2}`: a purely antilinear map `x ↦ m2^# x^#`.
    pub fn antilinear(m2: CMat) -> Self {
        let m1 = CMat::zeros(m2.nrows(), m2.ncols());
        Self { m1, m2 }
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            m1: CMat::zeros(nrows, ncols),
            m2: CMat::zeros(nrows, ncols),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::linear(CMat::identity(n, n))
    }

    pub fn nrows(&self) -> usize {
        self.m1.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.m1.ncols()
    }

    pub fn m1(&self) -> &CMat {
        &self.m1
    }

    pub fn m2(&self) -> &CMat {
        &self.m2
    }

    pub fn into_parts(self) -> (CMat, CMat) {
        (self.m1, self.m2)
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols()
    }

    pub fn embed(&self) -> CMat {
        block2x2(&self.m1, &conj(&self.m2), &self.m2, &conj(&self.m1))
    }

    /// Inverse of [`Bimatrix::embed`]. Fails when `e` does not have the
    /// `[[X, Y^#], [Y, X^#]]` block pattern (relative tolerance `STRUCTURE_TOL`).
    pub fn from_embedding(e: &CMat) -> Result<Self> {
        let (r, c) = e.shape();
        if r % 2 != 0 || c % 2 != 0 {
            return Err(Error::dims("embedding", "even dimensions", format!("{r}x{c}")));
        }
        let (n, p) = (r / 2, c / 2);
        let m1: CMat = e.view((0, 0), (n, p)).into_owned();
        let m2: CMat = e.view((n, 0), (n, p)).into_owned();
        let rebuilt = Self {
            m1: m1.clone(),
            m2: m2.clone(),
        }
        .embed();
        let dev = frobenius(&(e - rebuilt)) / frobenius(e).max(1.0);
        if dev > STRUCTURE_TOL {
            return Err(Error::StructureViolation {
                what: "bimatrix embedding",
                deviation: dev,
            });
        }
        Ok(Self { m1, m2 })
    }

    /// `m1·x + m2^#·x^#`.
    pub fn apply(&self, x: &CVec) -> Result<CVec> {
        if x.len() != self.ncols() {
            return Err(Error::dims("bimatrix apply", self.ncols(), x.len()));
        }
        Ok(&self.m1 * x + conj(&self.m2) * x.map(|z| z.conj()))
    }

    /// Composition `self ∘ other`.
    pub fn multiply(&self, other: &Bimatrix) -> Result<Bimatrix> {
        if self.ncols() != other.nrows() {
            return Err(Error::dims("bimatrix multiply", self.ncols(), other.nrows()));
        }
        let m1 = &self.m1 * &other.m1 + conj(&self.m2) * &other.m2;
        let m2 = conj(&self.m1) * &other.m2 + &self.m2 * &other.m1;
        Ok(Self { m1, m2 })
    }

    pub fn add(&self, other: &Bimatrix) -> Result<Bimatrix> {
        self.same_shape(other, "bimatrix add")?;
        Ok(Self {
            m1: &self.m1 + &other.m1,
            m2: &self.m2 + &other.m2,
        })
    }

    pub fn sub(&self, other: &Bimatrix) -> Result<Bimatrix> {
        self.same_shape(other, "bimatrix sub")?;
        Ok(Self {
            m1: &self.m1 - &other.m1,
            m2: &self.m2 - &other.m2,
        })
    }

    /// Multiplication by a real scalar (complex scalars do not commute with the antilinear part).
    pub fn scale(&self, s: f64) -> Bimatrix {
        Self {
            m1: self.m1.scale(s),
            m2: self.m2.scale(s),
        }
    }

    pub fn neg(&self) -> Bimatrix {
        self.scale(-1.0)
    }

    /// `{m1^H, m2^T}`, the adjoint with respect to `Re⟨·,·⟩`.
    pub fn conj_transpose(&self) -> Bimatrix {
        Self {
            m1: self.m1.adjoint(),
            m2: self.m2.transpose(),
        }
    }

    pub fn inverse(&self) -> Result<Bimatrix> {
        if !self.is_square() {
            return Err(Error::dims(
                "bimatrix inverse",
                "square bimatrix",
                format!("{}x{}", self.nrows(), self.ncols()),
            ));
        }
        let e = self.embed();
        let sv = linalg::singular_values(&e);
        let smax = sv.first().copied().unwrap_or(0.0);
        let smin = sv.last().copied().unwrap_or(0.0);
        if smax == 0.0 || smin < RANK_TOL * smax {
            return Err(Error::SingularBimatrix { sigma_min: smin });
        }
        let inv = e
            .lu()
            .try_inverse()
            .ok_or(Error::SingularBimatrix { sigma_min: smin })?;
        let n = self.nrows();
        Ok(Self {
            m1: inv.view((0, 0), (n, n)).into_owned(),
            m2: inv.view((n, 0), (n, n)).into_owned(),
        })
    }

    /// Frobenius norm of the embedding, `sqrt(2(‖m1‖² + ‖m2‖²))`.
    pub fn bnorm(&self) -> f64 {
        (2.0 * (self.m1.norm_squared() + self.m2.norm_squared())).sqrt()
    }

    /// Largest eigenvalue modulus of the embedding.
    pub fn spectral_radius(&self) -> f64 {
        linalg::spectral_radius(&self.embed())
    }

    fn same_shape(&self, other: &Bimatrix, context: &'static str) -> Result<()> {
        if self.m1.shape() != other.m1.shape() {
            return Err(Error::dims(
                context,
                format!("{}x{}", self.nrows(), self.ncols()),
                format!("{}x{}", other.nrows(), other.ncols()),
            ));
        }
        Ok(())
    }
}

/// A self-adjoint bimatrix `{P1, P2}` with `P1 = P1^H` and `P2 = P2^T`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianBimatrix {
    inner: Bimatrix,
    correction: f64,
}

impl HermitianBimatrix {
    /// Re-symmetrizes `p1 ← (p1 + p1^H)/2`, `p2 ← (p2 + p2^T)/2` and records the
    /// relative correction; rejects inputs whose deviation exceeds `STRUCTURE_TOL`.
    pub fn new(p1: CMat, p2: CMat) -> Result<Self> {
        if !p1.is_square() || p1.shape() != p2.shape() {
            return Err(Error::dims(
                "hermitian bimatrix",
                format!("square {}x{} blocks", p1.nrows(), p1.nrows()),
                format!("{}x{} and {}x{}", p1.nrows(), p1.ncols(), p2.nrows(), p2.ncols()),
            ));
        }
        let d1 = hermitian_deviation(&p1);
        let d2 = symmetric_deviation(&p2);
        if d1 > STRUCTURE_TOL {
            return Err(Error::StructureViolation {
                what: "P1 (must be Hermitian)",
                deviation: d1,
            });
        }
        if d2 > STRUCTURE_TOL {
            return Err(Error::StructureViolation {
                what: "P2 (must be complex symmetric)",
                deviation: d2,
            });
        }
        Ok(Self {
            inner: Bimatrix {
                m1: hermitian_part(&p1),
                m2: symmetric_part(&p2),
            },
            correction: d1.max(d2),
        })
    }

    pub fn from_bimatrix(b: Bimatrix) -> Result<Self> {
        let (m1, m2) = b.into_parts();
        Self::new(m1, m2)
    }

    /// `{p1, 0}` for a Hermitian `p1`.
    pub fn linear(p1: CMat) -> Result<Self> {
        let n = p1.nrows();
        Self::new(p1, CMat::zeros(n, n))
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn p1(&self) -> &CMat {
        &self.inner.m1
    }

    pub fn p2(&self) -> &CMat {
        &self.inner.m2
    }

    pub fn as_bimatrix(&self) -> &Bimatrix {
        &self.inner
    }

    pub fn into_bimatrix(self) -> Bimatrix {
        self.inner
    }

    /// Relative structural deviation removed at construction.
    pub fn correction(&self) -> f64 {
        self.correction
    }

    pub fn embed(&self) -> CMat {
        self.inner.embed()
    }

    pub fn bnorm(&self) -> f64 {
        self.inner.bnorm()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        linalg::min_hermitian_eigenvalue(&self.embed())
    }

    pub fn is_positive_definite(&self) -> bool {
        self.min_eigenvalue() > PD_TOL * self.bnorm()
    }

    /// `self ≤ other` in the Loewner order of the embeddings, with the default tolerance.
    pub fn psd_leq(&self, other: &HermitianBimatrix) -> bool {
        self.psd_leq_tol(other, PSD_TOL)
    }

    /// `λ_min(embed(other) − embed(self)) ≥ −tol · max(1, ‖self‖, ‖other‖)`.
    pub fn psd_leq_tol(&self, other: &HermitianBimatrix, tol: f64) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let diff = other.embed() - self.embed();
        let scale = 1f64.max(self.bnorm()).max(other.bnorm());
        linalg::min_hermitian_eigenvalue(&diff) >= -tol * scale
    }

    /// `Re(x^H {P1, P2} x) = Re(x^H P1 x + x^H P2^# x^#)`.
    pub fn quadratic_form(&self, x: &CVec) -> Result<f64> {
        let y = self.inner.apply(x)?;
        Ok(x.dotc(&y).re)
    }

    pub fn sub(&self, other: &HermitianBimatrix) -> Result<Bimatrix> {
        self.inner.sub(&other.inner)
    }
}

/// Largest entrywise modulus of `a − b` over both blocks.
pub fn max_abs_diff(a: &Bimatrix, b: &Bimatrix) -> f64 {
    linalg::max_abs_diff(a.m1(), b.m1()).max(linalg::max_abs_diff(a.m2(), b.m2()))
}

#[cfg(test)]
pub(crate) fn scalar(z: num_complex::Complex64) -> CMat {
    CMat::from_element(1, 1, z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use proptest::prelude::*;

    fn sc(re: f64, im: f64) -> CMat {
        scalar(c(re, im))
    }

    #[test]
    fn embed_identity_is_identity() {
        let e = Bimatrix::identity(2).embed();
        assert_eq!(e, CMat::identity(4, 4));
    }

    #[test]
    fn embed_scalar_antilinear() {
        let a = c(1.5, -2.0);
        let e = Bimatrix::antilinear(scalar(a)).embed();
        assert_eq!(e, CMat::from_row_slice(2, 2, &[c(0.0, 0.0), a.conj(), a, c(0.0, 0.0)]));
    }

    #[test]
    fn apply_conjugation_map() {
        let x = CVec::from_element(1, c(1.0, 1.0));
        let y = Bimatrix::antilinear(sc(1.0, 0.0)).apply(&x).unwrap();
        assert_eq!(y[0], c(1.0, -1.0));
        let id = Bimatrix::identity(1).apply(&x).unwrap();
        assert_eq!(id, x);
    }

    #[test]
    fn apply_rejects_wrong_length() {
        let x = CVec::zeros(3);
        assert!(matches!(
            Bimatrix::identity(2).apply(&x),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn two_antilinear_maps_compose_to_linear() {
        let (a, b) = (c(1.0, 2.0), c(-0.5, 0.25));
        let p = Bimatrix::antilinear(scalar(a))
            .multiply(&Bimatrix::antilinear(scalar(b)))
            .unwrap();
        assert_eq!(p.m1()[(0, 0)], a.conj() * b);
        assert_eq!(p.m2()[(0, 0)], c(0.0, 0.0));
    }

    #[test]
    fn identity_is_left_unit() {
        let b = Bimatrix::new(
            CMat::from_row_slice(2, 1, &[c(1.0, 2.0), c(3.0, -1.0)]),
            CMat::from_row_slice(2, 1, &[c(0.0, 1.0), c(2.0, 2.0)]),
        )
        .unwrap();
        assert_eq!(Bimatrix::identity(2).multiply(&b).unwrap(), b);
    }

    #[test]
    fn conj_transpose_scalar() {
        let (a, b) = (c(1.0, 2.0), c(3.0, -4.0));
        let t = Bimatrix::new(scalar(a), scalar(b)).unwrap().conj_transpose();
        assert_eq!(t.m1()[(0, 0)], a.conj());
        assert_eq!(t.m2()[(0, 0)], b);
        assert_eq!(Bimatrix::identity(3).conj_transpose(), Bimatrix::identity(3));
    }

    #[test]
    fn inverse_of_scalar_antilinear() {
        // y = (2j)^# x^#  =>  x = (-0.5j) y^#, i.e. the bimatrix {0, 0.5j}
        let inv = Bimatrix::antilinear(sc(0.0, 2.0)).inverse().unwrap();
        assert!((inv.m1()[(0, 0)]).norm() < 1e-15);
        assert!((inv.m2()[(0, 0)] - c(0.0, 0.5)).norm() < 1e-15);
        let prod = Bimatrix::antilinear(sc(0.0, 2.0)).multiply(&inv).unwrap();
        assert!(max_abs_diff(&prod, &Bimatrix::identity(1)) < 1e-15);
    }

    #[test]
    fn inverse_of_linear_block() {
        let a = CMat::from_row_slice(2, 2, &[c(2.0, 0.0), c(1.0, 1.0), c(0.0, 0.0), c(0.5, -1.0)]);
        let inv = Bimatrix::linear(a.clone()).inverse().unwrap();
        let want = a.try_inverse().unwrap();
        assert!(crate::linalg::max_abs_diff(inv.m1(), &want) < 1e-14);
        assert!(inv.m2().norm() < 1e-14);
    }

    #[test]
    fn inverse_singular() {
        let b = Bimatrix::new(sc(1.0, 0.0), sc(1.0, 0.0)).unwrap();
        assert!(matches!(b.inverse(), Err(Error::SingularBimatrix { .. })));
    }

    #[test]
    fn positive_definiteness() {
        assert!(HermitianBimatrix::linear(CMat::identity(3, 3))
            .unwrap()
            .is_positive_definite());
        // embedding [[2,1],[1,2]] has eigenvalues {1, 3}
        let p = HermitianBimatrix::new(sc(2.0, 0.0), sc(1.0, 0.0)).unwrap();
        assert!(p.is_positive_definite());
        assert!((p.min_eigenvalue() - 1.0).abs() < 1e-14);
        let q = HermitianBimatrix::new(sc(1.0, 0.0), sc(1.0, 0.0)).unwrap();
        assert!(!q.is_positive_definite());
    }

    #[test]
    fn structure_violation_rejected() {
        let p1 = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let err = HermitianBimatrix::new(p1, CMat::zeros(2, 2)).unwrap_err();
        assert!(matches!(err, Error::StructureViolation { .. }));
        let p2 = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)]);
        let err = HermitianBimatrix::new(CMat::identity(2, 2), p2).unwrap_err();
        assert!(matches!(err, Error::StructureViolation { .. }));
    }

    #[test]
    fn tiny_asymmetry_is_repaired() {
        let p1 = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.5, 1e-13), c(0.5, 0.0), c(1.0, 0.0)]);
        let p = HermitianBimatrix::linear(p1).unwrap();
        assert!(p.correction() > 0.0 && p.correction() < 1e-12);
        assert_eq!(p.p1(), &p.p1().adjoint());
    }

    #[test]
    fn psd_order_examples() {
        let x = HermitianBimatrix::linear(CMat::identity(2, 2)).unwrap();
        let y = HermitianBimatrix::linear(CMat::identity(2, 2).scale(2.0)).unwrap();
        assert!(x.psd_leq(&x));
        assert!(x.psd_leq(&y));
        assert!(!y.psd_leq(&x));
        let a = HermitianBimatrix::new(sc(1.0, 0.0), sc(0.0, 0.0)).unwrap();
        let b = HermitianBimatrix::new(sc(2.0, 0.0), sc(1.0, 0.0)).unwrap();
        // embed(b) - embed(a) = [[1,1],[1,1]], eigenvalues {0, 2}
        assert!(a.psd_leq(&b));
    }

    #[test]
    fn quadratic_form_examples() {
        let x = CVec::from_vec(vec![c(1.0, 2.0), c(-3.0, 0.5)]);
        let id = HermitianBimatrix::linear(CMat::identity(2, 2)).unwrap();
        assert!((id.quadratic_form(&x).unwrap() - x.norm_squared()).abs() < 1e-12);
        let p = HermitianBimatrix::new(sc(0.0, 0.0), sc(1.0, 0.0)).unwrap();
        let v = CVec::from_element(1, c(1.0, 1.0));
        assert!(p.quadratic_form(&v).unwrap().abs() < 1e-15);
        let p = HermitianBimatrix::new(sc(2.0, 0.0), sc(1.0, 0.0)).unwrap();
        let v = CVec::from_element(1, c(1.0, 0.0));
        assert!((p.quadratic_form(&v).unwrap() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn bnorm_examples() {
        assert_eq!(Bimatrix::zeros(3, 2).bnorm(), 0.0);
        assert!((Bimatrix::identity(2).bnorm() - 2.0).abs() < 1e-15);
        let b = Bimatrix::new(sc(3.0, 0.0), sc(4.0, 0.0)).unwrap();
        assert!((b.bnorm() - 50f64.sqrt()).abs() < 1e-14);
        assert!((b.bnorm() - frobenius(&b.embed())).abs() < 1e-14);
    }

    #[test]
    fn spectral_radius_examples() {
        let a = CMat::from_row_slice(2, 2, &[c(0.5, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, -0.8)]);
        assert!((Bimatrix::linear(a).spectral_radius() - 0.8).abs() < 1e-12);
        let z = c(0.6, -0.8) * 1.5;
        assert!((Bimatrix::antilinear(scalar(z)).spectral_radius() - 1.5).abs() < 1e-12);
        assert_eq!(Bimatrix::zeros(2, 2).spectral_radius(), 0.0);
    }

    #[test]
    fn from_embedding_roundtrip_and_rejection() {
        let b = Bimatrix::new(sc(1.0, 2.0), sc(-1.0, 0.5)).unwrap();
        assert_eq!(Bimatrix::from_embedding(&b.embed()).unwrap(), b);
        let bad = CMat::identity(2, 2).scale(1.0)
            + CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(Bimatrix::from_embedding(&bad).is_err());
    }

    // -- property tests against the embedding oracle --------------------------

    fn cmat(rows: usize, cols: usize) -> impl Strategy<Value = CMat> {
        proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0), rows * cols)
            .prop_map(move |v| CMat::from_iterator(rows, cols, v.into_iter().map(|(r, i)| c(r, i))))
    }

    fn bimat(rows: usize, cols: usize) -> impl Strategy<Value = Bimatrix> {
        (cmat(rows, cols), cmat(rows, cols)).prop_map(|(a, b)| Bimatrix::new(a, b).unwrap())
    }

    fn cvec(n: usize) -> impl Strategy<Value = CVec> {
        cmat(n, 1).prop_map(|m| m.column(0).into_owned())
    }

    fn triple() -> impl Strategy<Value = (Bimatrix, Bimatrix, CVec)> {
        (1usize..=5, 1usize..=5, 1usize..=5).prop_flat_map(|(n, k, p)| (bimat(n, k), bimat(k, p), cvec(p)))
    }

    fn rel(a: &CMat, b: &CMat) -> f64 {
        frobenius(&(a - b)) / frobenius(b).max(1.0)
    }

    proptest! {
        #[test]
        fn embedding_is_homomorphism((x, y, v) in triple()) {
            let xy = x.multiply(&y).unwrap();
            prop_assert!(rel(&xy.embed(), &(x.embed() * y.embed())) < 1e-11);
            prop_assert!(rel(&x.conj_transpose().embed(), &x.embed().adjoint()) < 1e-14);
            let x2 = x.add(&x.scale(0.5)).unwrap();
            prop_assert!(rel(&x2.embed(), &(x.embed() + x.embed().scale(0.5))) < 1e-14);
            // action consistency
            let lhs = xy.apply(&v).unwrap();
            let rhs = x.apply(&y.apply(&v).unwrap()).unwrap();
            prop_assert!((&lhs - &rhs).norm() / rhs.norm().max(1.0) < 1e-11);
            // apply equals the top half of embed · [v; v^#]
            let mut stacked = CVec::zeros(2 * v.len());
            stacked.rows_mut(0, v.len()).copy_from(&v);
            stacked.rows_mut(v.len(), v.len()).copy_from(&v.map(|z| z.conj()));
            let full = y.embed() * stacked;
            let top = full.rows(0, y.nrows()).into_owned();
            prop_assert!((y.apply(&v).unwrap() - top).norm() < 1e-12);
        }

        #[test]
        fn inverse_matches_embedding_inverse(x in (1usize..=5).prop_flat_map(|n| bimat(n, n))) {
            let e = x.embed();
            let sv = linalg::singular_values(&e);
            prop_assume!(sv.last().unwrap() > &(1e-3 * sv[0]));
            let inv = x.inverse().unwrap();
            let direct = e.try_inverse().unwrap();
            prop_assert!(rel(&inv.embed(), &direct) < 1e-11);
            let prod = x.multiply(&inv).unwrap();
            prop_assert!(max_abs_diff(&prod, &Bimatrix::identity(x.nrows())) < 1e-10);
        }

        #[test]
        fn quadratic_form_is_half_embedding_form(
            (m, s, v) in (1usize..=5).prop_flat_map(|n| (cmat(n, n), cmat(n, n), cvec(n)))
        ) {
            let p = HermitianBimatrix::new(hermitian_part(&m), symmetric_part(&s)).unwrap();
            let mut stacked = CVec::zeros(2 * v.len());
            stacked.rows_mut(0, v.len()).copy_from(&v);
            stacked.rows_mut(v.len(), v.len()).copy_from(&v.map(|z| z.conj()));
            let half = stacked.dotc(&(p.embed() * &stacked)) * 0.5;
            let qf = p.quadratic_form(&v).unwrap();
            prop_assert!(half.im.abs() < 1e-12 * half.re.abs().max(1.0));
            prop_assert!((qf - half.re).abs() < 1e-12 * qf.abs().max(1.0));
        }

        #[test]
        fn psd_order_is_partial_order(
            (a, b, c2) in (1usize..=4).prop_flat_map(|n| (cmat(n, n), cmat(n, n), cmat(n, n)))
        ) {
            // chain x ≤ y ≤ z built from Gram increments
            let n = a.nrows();
            let x = HermitianBimatrix::new(hermitian_part(&a), CMat::zeros(n, n)).unwrap();
            let inc1 = Bimatrix::new(b.clone(), c2.clone()).unwrap();
            let g1 = inc1.conj_transpose().multiply(&inc1).unwrap();
            let y = HermitianBimatrix::from_bimatrix(x.as_bimatrix().add(&g1).unwrap()).unwrap();
            let inc2 = Bimatrix::new(c2, b).unwrap();
            let g2 = inc2.conj_transpose().multiply(&inc2).unwrap();
            let z = HermitianBimatrix::from_bimatrix(y.as_bimatrix().add(&g2).unwrap()).unwrap();
            prop_assert!(x.psd_leq(&x));
            prop_assert!(x.psd_leq(&y) && y.psd_leq(&z) && x.psd_leq(&z));
            if y.psd_leq(&x) {
                // antisymmetry: both directions only when equal up to tolerance
                prop_assert!(y.sub(&x).unwrap().bnorm() < 1e-6 * y.bnorm().max(1.0));
            }
        }
    }
}
