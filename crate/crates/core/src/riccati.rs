//! Fixed-point solvers for the three Riccati equations of the complex-valued
//! LQR problem.
//!
//! * the bimatrix equation, iterated as
//!   `P ← {Q,0} + A^H (P^{-1} + {R1,R2})^{-1} A` with `{R1,R2} = B {R,0}^{-1} B^H`;
//! * the anti-Riccati equation of an antilinear system, iterated as
//!   `P ← Q + A2^H (P^{-#} + B2 R^{-1} B2^H)^{-1} A2`;
//! * the normal Riccati equation in the data `(A_N, B_N, Q_N, R_N)` built from
//!   an antilinear system.
//!
//! All three start from the state weight and increase monotonically to the
//! unique positive definite solution when the system is stabilizable; unbounded
//! growth is reported as [`Error::Diverged`].

use crate::bimatrix::{Bimatrix, HermitianBimatrix};
use crate::error::{Error, Result};
use crate::linalg::{
    self, conj, frobenius, hermitian_deviation, hermitian_part, hermitian_sqrt, hstack, inverse, CMat,
};
use crate::system::{AntilinearSystem, ComplexLinearSystem, CostWeights};

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    /// Relative step tolerance: stop once `‖P(k) − P(k−1)‖ < tol · ‖P(k)‖`.
    pub tol: f64,
    pub max_iter: usize,
    /// Keep iterating at least this long even when the tolerance is met.
    pub min_iter: usize,
    /// Absolute bound on `‖P(k)‖`; `None` means `1e12 · ‖P(0)‖`.
    pub divergence_bound: Option<f64>,
    pub record_trace: bool,
    /// Converged iterates must also satisfy `residual ≤ residual_factor · tol · ‖P‖`.
    pub residual_factor: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 100_000,
            min_iter: 0,
            divergence_bound: None,
            record_trace: false,
            residual_factor: 100.0,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidOptions(format!("tol must be > 0, got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidOptions("max_iter must be >= 1".into()));
        }
        if self.min_iter > self.max_iter {
            return Err(Error::InvalidOptions(format!(
                "min_iter {} exceeds max_iter {}",
                self.min_iter, self.max_iter
            )));
        }
        if let Some(b) = self.divergence_bound {
            if !(b > 0.0) {
                return Err(Error::InvalidOptions(format!("divergence_bound must be > 0, got {b}")));
            }
        }
        if !(self.residual_factor > 0.0) {
            return Err(Error::InvalidOptions("residual_factor must be > 0".into()));
        }
        Ok(())
    }

    pub fn with_trace(mut self) -> Self {
        self.record_trace = true;
        self
    }
}

/// One row of the convergence trace: the residual of iterate `k` and the
/// size of the step that produced it (`0` for the initial iterate).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub iteration: usize,
    pub residual: f64,
    pub step: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RiccatiSolution {
    /// Converged solution; the matrix solvers store theirs as `{P, 0}`.
    pub p: HermitianBimatrix,
    /// `{R,0} + B^H P B` (or the matrix analogue of the respective equation).
    pub s: HermitianBimatrix,
    /// The gain-free term `B R^{-1} B^H` of the respective iteration.
    pub gramian: HermitianBimatrix,
    pub iterations: usize,
    pub residual: f64,
    pub trace: Option<Vec<TraceRow>>,
}

// -- generic fixed-point driver -------------------------------------------------

pub(crate) trait FixedPointMap {
    type Iterate;
    fn initial(&self) -> Self::Iterate;
    fn apply(&self, p: &Self::Iterate) -> Result<Self::Iterate>;
    fn norm(p: &Self::Iterate) -> f64;
    fn distance(a: &Self::Iterate, b: &Self::Iterate) -> f64;
}

pub(crate) struct Converged<T> {
    pub p: T,
    pub iterations: usize,
    pub residual: f64,
    pub trace: Option<Vec<TraceRow>>,
}

pub(crate) fn run_fixed_point<M, F>(map: &M, opts: &SolverOptions, mut observer: F) -> Result<Converged<M::Iterate>>
where
    M: FixedPointMap,
    F: FnMut(usize, &M::Iterate),
{
    opts.validate()?;
    let mut p = map.initial();
    let bound = opts
        .divergence_bound
        .unwrap_or_else(|| 1e12 * M::norm(&p).max(f64::MIN_POSITIVE));
    let mut trace = opts.record_trace.then(Vec::new);

    let mut next = map.apply(&p)?;
    let mut residual = M::distance(&next, &p);
    observer(0, &p);
    if let Some(t) = trace.as_mut() {
        t.push(TraceRow {
            iteration: 0,
            residual,
            step: 0.0,
        });
    }

    for k in 1..=opts.max_iter {
        p = next;
        let step = residual;
        let norm = M::norm(&p);
        if !norm.is_finite() || norm > bound {
            return Err(Error::Diverged {
                iteration: k,
                norm,
                bound,
            });
        }
        next = map.apply(&p)?;
        residual = M::distance(&next, &p);
        observer(k, &p);
        if let Some(t) = trace.as_mut() {
            t.push(TraceRow {
                iteration: k,
                residual,
                step,
            });
        }
        if k >= opts.min_iter && step < opts.tol * norm && residual <= opts.residual_factor * opts.tol * norm {
            return Ok(Converged {
                p,
                iterations: k,
                residual,
                trace,
            });
        }
    }
    Err(Error::NotConvergent {
        iterations: opts.max_iter,
        step: residual,
    })
}

// -- bimatrix Riccati -----------------------------------------------------------

/// The bimatrix Riccati map for a fixed system and weights.
#[derive(Debug, Clone)]
pub struct BimatrixRiccatiIteration {
    a: Bimatrix,
    a_h: Bimatrix,
    b: Bimatrix,
    b_h: Bimatrix,
    q: HermitianBimatrix,
    r: Bimatrix,
    gramian: HermitianBimatrix,
}

impl BimatrixRiccatiIteration {
    pub fn new(sys: &ComplexLinearSystem, w: &CostWeights) -> Result<Self> {
        w.check_conforms(sys.n(), sys.m())?;
        let r = Bimatrix::linear(w.r().clone());
        let b_h = sys.b().conj_transpose();
        let gramian = sys.b().multiply(&r.inverse()?)?.multiply(&b_h)?;
        Ok(Self {
            a: sys.a().clone(),
            a_h: sys.a().conj_transpose(),
            b: sys.b().clone(),
            b_h,
            q: HermitianBimatrix::linear(w.q().clone())?,
            r,
            gramian: HermitianBimatrix::from_bimatrix(gramian)?,
        })
    }

    /// `{Q, 0}`, the starting iterate.
    pub fn initial(&self) -> HermitianBimatrix {
        self.q.clone()
    }

    /// `{R1, R2} = B {R,0}^{-1} B^H`.
    pub fn gramian(&self) -> &HermitianBimatrix {
        &self.gramian
    }

    /// One iteration step,
    /// `{Q,0} + A^H P A − A^H P B S^{-1} B^H P A` with `S = {R,0} + B^H P B`.
    pub fn step(&self, p: &HermitianBimatrix) -> Result<HermitianBimatrix> {
        let pb = p.as_bimatrix();
        let pa = pb.multiply(&self.a)?;
        let a_h_p_a = self.a_h.multiply(&pa)?;
        let s = self.r.add(&self.b_h.multiply(&pb.multiply(&self.b)?)?)?;
        let b_h_p_a = self.b_h.multiply(&pa)?;
        let correction = b_h_p_a.conj_transpose().multiply(&s.inverse()?)?.multiply(&b_h_p_a)?;
        let raw = self.q.as_bimatrix().add(&a_h_p_a.sub(&correction)?)?;
        HermitianBimatrix::from_bimatrix(raw)
    }

    /// `{Q,0} + A^H (P^{-1} + {R1,R2})^{-1} A`, evaluated as
    /// `{Q,0} + A^H (I + P{R1,R2})^{-1} P A` so only one bimatrix is inverted.
    /// Same map as [`Self::step`] but with a higher roundoff floor when `P` is large.
    pub fn step_compact(&self, p: &HermitianBimatrix) -> Result<HermitianBimatrix> {
        let n = p.dim();
        let pb = p.as_bimatrix();
        let inner = Bimatrix::identity(n).add(&pb.multiply(self.gramian.as_bimatrix())?)?;
        let middle = inner.inverse()?.multiply(pb)?;
        let raw = self
            .q
            .as_bimatrix()
            .add(&self.a_h.multiply(&middle)?.multiply(&self.a)?)?;
        HermitianBimatrix::from_bimatrix(raw)
    }

    /// `{R,0} + B^H P B`.
    pub fn s(&self, p: &HermitianBimatrix) -> Result<HermitianBimatrix> {
        let s = self.r.add(&self.b_h.multiply(&p.as_bimatrix().multiply(&self.b)?)?)?;
        HermitianBimatrix::from_bimatrix(s)
    }

    /// `bnorm(step(P) − P)`.
    pub fn residual(&self, p: &HermitianBimatrix) -> Result<f64> {
        Ok(self.step(p)?.sub(p)?.bnorm())
    }

    /// `P(0), P(1), …` without any stopping rule.
    pub fn iterates(&self) -> impl Iterator<Item = Result<HermitianBimatrix>> + '_ {
        let mut current = Some(Ok(self.initial()));
        std::iter::from_fn(move || {
            let out = current.take()?;
            if let Ok(p) = &out {
                current = Some(self.step(p));
            }
            Some(out)
        })
    }
}

impl FixedPointMap for BimatrixRiccatiIteration {
    type Iterate = HermitianBimatrix;

    fn initial(&self) -> HermitianBimatrix {
        self.q.clone()
    }

    fn apply(&self, p: &HermitianBimatrix) -> Result<HermitianBimatrix> {
        self.step(p)
    }

    fn norm(p: &HermitianBimatrix) -> f64 {
        p.bnorm()
    }

    fn distance(a: &HermitianBimatrix, b: &HermitianBimatrix) -> f64 {
        a.sub(b).map(|d| d.bnorm()).unwrap_or(f64::INFINITY)
    }
}

pub fn solve_bimatrix_riccati(
    sys: &ComplexLinearSystem,
    w: &CostWeights,
    opts: &SolverOptions,
) -> Result<RiccatiSolution> {
    solve_bimatrix_riccati_observed(sys, w, opts, |_, _| {})
}

/// As [`solve_bimatrix_riccati`], calling `observer(k, P(k))` for every iterate.
pub fn solve_bimatrix_riccati_observed<F>(
    sys: &ComplexLinearSystem,
    w: &CostWeights,
    opts: &SolverOptions,
    observer: F,
) -> Result<RiccatiSolution>
where
    F: FnMut(usize, &HermitianBimatrix),
{
    let it = BimatrixRiccatiIteration::new(sys, w)?;
    let done = run_fixed_point(&it, opts, observer)?;
    if !done.p.is_positive_definite() {
        return Err(Error::NotPositiveDefinite("bimatrix Riccati solution"));
    }
    Ok(RiccatiSolution {
        s: it.s(&done.p)?,
        gramian: it.gramian.clone(),
        p: done.p,
        iterations: done.iterations,
        residual: done.residual,
        trace: done.trace,
    })
}

/// `bnorm(A^H (P^{-1} + {R1,R2})^{-1} A + {Q,0} − P)`.
pub fn bimatrix_riccati_residual(p: &HermitianBimatrix, sys: &ComplexLinearSystem, w: &CostWeights) -> Result<f64> {
    if p.dim() != sys.n() {
        return Err(Error::dims("Riccati iterate", sys.n(), p.dim()));
    }
    let it = BimatrixRiccatiIteration::new(sys, w)?;
    let r = it.gramian.as_bimatrix();
    let inner = p.as_bimatrix().inverse()?.add(r)?.inverse()?;
    let value = it
        .a_h
        .multiply(&inner)?
        .multiply(&it.a)?
        .add(it.q.as_bimatrix())?
        .sub(p.as_bimatrix())?;
    Ok(value.bnorm())
}

// -- anti-Riccati ---------------------------------------------------------------

struct AntiRiccatiMap {
    a2: CMat,
    a2_h: CMat,
    b2: CMat,
    q: CMat,
    r: CMat,
    gramian: CMat,
}

impl AntiRiccatiMap {
    fn new(sys: &AntilinearSystem, w: &CostWeights) -> Result<Self> {
        w.check_conforms(sys.n(), sys.m())?;
        let r_inv = inverse(w.r(), "R")?;
        let b2 = sys.b2();
        Ok(Self {
            a2: sys.a2().clone(),
            a2_h: sys.a2().adjoint(),
            b2: b2.clone(),
            q: w.q().clone(),
            r: w.r().clone(),
            gramian: hermitian_part(&(b2 * r_inv * b2.adjoint())),
        })
    }
}

impl FixedPointMap for AntiRiccatiMap {
    type Iterate = CMat;

    fn initial(&self) -> CMat {
        self.q.clone()
    }

    // Q + A2^H (P^{-#} + B2 R^{-1} B2^H)^{-1} A2, with the inner inverse
    // expanded as P^# − P^# B2 (R + B2^H P^# B2)^{-1} B2^H P^#
    fn apply(&self, p: &CMat) -> Result<CMat> {
        let pc = conj(p);
        let pa = &pc * &self.a2;
        let bpa = self.b2.adjoint() * &pa;
        let s = &self.r + self.b2.adjoint() * &pc * &self.b2;
        let raw = &self.q + &self.a2_h * pa - bpa.adjoint() * inverse(&s, "R + B2^H P^# B2")? * bpa;
        Ok(hermitian_part(&raw))
    }

    fn norm(p: &CMat) -> f64 {
        frobenius(p)
    }

    fn distance(a: &CMat, b: &CMat) -> f64 {
        frobenius(&(a - b))
    }
}

pub fn solve_anti_riccati(sys: &AntilinearSystem, w: &CostWeights, opts: &SolverOptions) -> Result<RiccatiSolution> {
    solve_anti_riccati_observed(sys, w, opts, |_, _| {})
}

pub fn solve_anti_riccati_observed<F>(
    sys: &AntilinearSystem,
    w: &CostWeights,
    opts: &SolverOptions,
    observer: F,
) -> Result<RiccatiSolution>
where
    F: FnMut(usize, &CMat),
{
    let map = AntiRiccatiMap::new(sys, w)?;
    let done = run_fixed_point(&map, opts, observer)?;
    let p_a = done.p;
    let residual = anti_riccati_residual(&p_a, sys, w)?;
    if !linalg::is_hermitian_pd(&p_a, 1e-10) {
        return Err(Error::NotPositiveDefinite("anti-Riccati solution"));
    }
    let b2 = sys.b2();
    let s = w.r() + b2.adjoint() * conj(&p_a) * b2;
    Ok(RiccatiSolution {
        p: HermitianBimatrix::linear(p_a)?,
        s: HermitianBimatrix::linear(hermitian_part(&s))?,
        gramian: HermitianBimatrix::linear(map.gramian)?,
        iterations: done.iterations,
        residual,
        trace: done.trace,
    })
}

/// `‖A2^H P^# A2 − A2^H P^# B2 (R + B2^H P^# B2)^{-1} B2^H P^# A2 − P + Q‖_F`.
pub fn anti_riccati_residual(p_a: &CMat, sys: &AntilinearSystem, w: &CostWeights) -> Result<f64> {
    w.check_conforms(sys.n(), sys.m())?;
    if p_a.shape() != (sys.n(), sys.n()) {
        return Err(Error::dims("P_A", sys.n(), p_a.nrows()));
    }
    let (a2, b2) = (sys.a2(), sys.b2());
    let pc = conj(p_a);
    let pa = &pc * a2;
    let s = w.r() + b2.adjoint() * &pc * b2;
    let bpa = b2.adjoint() * &pa;
    let value = a2.adjoint() * &pa - bpa.adjoint() * inverse(&s, "R + B2^H P_A^# B2")? * &bpa - p_a + w.q();
    Ok(frobenius(&value))
}

// -- normal Riccati -------------------------------------------------------------

/// Data `(A_N, B_N, Q_N, R_N)` of the normal Riccati equation of an antilinear system.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalData {
    pub a_n: CMat,
    pub b_n: CMat,
    pub q_n: CMat,
    pub r_n: CMat,
}

impl NormalData {
    pub fn new(a_n: CMat, b_n: CMat, q_n: CMat, r_n: CMat) -> Result<Self> {
        let n = a_n.nrows();
        if !a_n.is_square() || b_n.nrows() != n || q_n.shape() != (n, n) {
            return Err(Error::dims(
                "normal Riccati data",
                format!("A_N, Q_N {n}x{n}; B_N {n}xk"),
                format!(
                    "A_N {}x{}, B_N {}x{}, Q_N {}x{}",
                    a_n.nrows(),
                    a_n.ncols(),
                    b_n.nrows(),
                    b_n.ncols(),
                    q_n.nrows(),
                    q_n.ncols()
                ),
            ));
        }
        if r_n.shape() != (b_n.ncols(), b_n.ncols()) {
            return Err(Error::dims("R_N", b_n.ncols(), r_n.nrows()));
        }
        let checked = |m: CMat, name: &'static str| -> Result<CMat> {
            if hermitian_deviation(&m) > crate::bimatrix::STRUCTURE_TOL {
                return Err(Error::InvalidWeights(format!("{name} is not Hermitian")));
            }
            let m = hermitian_part(&m);
            if !linalg::is_hermitian_pd(&m, 1e-10) {
                return Err(Error::InvalidWeights(format!("{name} is not positive definite")));
            }
            Ok(m)
        };
        let q_n = checked(q_n, "Q_N")?;
        let r_n = checked(r_n, "R_N")?;
        Ok(Self { a_n, b_n, q_n, r_n })
    }

    pub fn n(&self) -> usize {
        self.a_n.nrows()
    }
}

/// ```text
/// A_N = A2^# (I − B2 (R + B2^H Q^# B2)^{-1} B2^H Q^#) A2
/// B_N = [B2^#, A2^# B2]
/// Q_N = Q + A2^H (Q^{-#} + B2 R^{-1} B2^H)^{-1} A2
/// R_N = diag(R^#, R + B2^H Q^# B2)
/// ```
pub fn build_normal_data(sys: &AntilinearSystem, w: &CostWeights) -> Result<NormalData> {
    w.check_conforms(sys.n(), sys.m())?;
    let (n, m) = (sys.n(), sys.m());
    let (a2, b2, q, r) = (sys.a2(), sys.b2(), w.q(), w.r());
    let qc = conj(q);
    let s0 = hermitian_part(&(r + b2.adjoint() * &qc * b2));
    let s0_inv = inverse(&s0, "R + B2^H Q^# B2")?;
    let a_n = conj(a2) * (CMat::identity(n, n) - b2 * &s0_inv * b2.adjoint() * &qc) * a2;
    let b_n = hstack(&conj(b2), &(conj(a2) * b2));
    let inner = inverse(&qc, "Q")? + b2 * inverse(r, "R")? * b2.adjoint();
    let q_n = hermitian_part(&(q + a2.adjoint() * inverse(&inner, "Q^{-#} + B2 R^{-1} B2^H")? * a2));
    let r_n = linalg::block2x2(&conj(r), &CMat::zeros(m, m), &CMat::zeros(m, m), &s0);
    Ok(NormalData { a_n, b_n, q_n, r_n })
}

struct NormalRiccatiMap {
    a_n: CMat,
    a_n_h: CMat,
    b_n: CMat,
    q_n: CMat,
    r_n: CMat,
    gramian: CMat,
}

impl NormalRiccatiMap {
    fn new(nd: &NormalData) -> Result<Self> {
        let r_inv = inverse(&nd.r_n, "R_N")?;
        Ok(Self {
            a_n: nd.a_n.clone(),
            a_n_h: nd.a_n.adjoint(),
            b_n: nd.b_n.clone(),
            q_n: nd.q_n.clone(),
            r_n: nd.r_n.clone(),
            gramian: hermitian_part(&(&nd.b_n * r_inv * nd.b_n.adjoint())),
        })
    }
}

impl FixedPointMap for NormalRiccatiMap {
    type Iterate = CMat;

    fn initial(&self) -> CMat {
        self.q_n.clone()
    }

    // Q_N + A_N^H (P^{-1} + B_N R_N^{-1} B_N^H)^{-1} A_N in gain form
    fn apply(&self, p: &CMat) -> Result<CMat> {
        let pa = p * &self.a_n;
        let bpa = self.b_n.adjoint() * &pa;
        let s = &self.r_n + self.b_n.adjoint() * p * &self.b_n;
        let raw = &self.q_n + &self.a_n_h * pa - bpa.adjoint() * inverse(&s, "R_N + B_N^H P B_N")? * bpa;
        Ok(hermitian_part(&raw))
    }

    fn norm(p: &CMat) -> f64 {
        frobenius(p)
    }

    fn distance(a: &CMat, b: &CMat) -> f64 {
        frobenius(&(a - b))
    }
}

pub fn solve_normal_riccati(nd: &NormalData, opts: &SolverOptions) -> Result<RiccatiSolution> {
    solve_normal_riccati_observed(nd, opts, |_, _| {})
}

pub fn solve_normal_riccati_observed<F>(nd: &NormalData, opts: &SolverOptions, observer: F) -> Result<RiccatiSolution>
where
    F: FnMut(usize, &CMat),
{
    let map = NormalRiccatiMap::new(nd)?;
    let done = run_fixed_point(&map, opts, observer)?;
    let p_n = done.p;
    let residual = normal_riccati_residual(&p_n, nd)?;
    if !linalg::is_hermitian_pd(&p_n, 1e-10) {
        return Err(Error::NotPositiveDefinite("normal Riccati solution"));
    }
    let s = &nd.r_n + nd.b_n.adjoint() * &p_n * &nd.b_n;
    Ok(RiccatiSolution {
        p: HermitianBimatrix::linear(p_n)?,
        s: HermitianBimatrix::linear(hermitian_part(&s))?,
        gramian: HermitianBimatrix::linear(map.gramian)?,
        iterations: done.iterations,
        residual,
        trace: done.trace,
    })
}

/// `‖A_N^H P A_N − P − A_N^H P B_N (R_N + B_N^H P B_N)^{-1} B_N^H P A_N + Q_N‖_F`.
pub fn normal_riccati_residual(p_n: &CMat, nd: &NormalData) -> Result<f64> {
    if p_n.shape() != (nd.n(), nd.n()) {
        return Err(Error::dims("P_N", nd.n(), p_n.nrows()));
    }
    let pa = p_n * &nd.a_n;
    let s = &nd.r_n + nd.b_n.adjoint() * p_n * &nd.b_n;
    let bpa = nd.b_n.adjoint() * &pa;
    let value = nd.a_n.adjoint() * &pa - p_n - bpa.adjoint() * inverse(&s, "R_N + B_N^H P_N B_N")? * &bpa + &nd.q_n;
    Ok(frobenius(&value))
}

// -- nonlinear matrix equation bridge -------------------------------------------

/// Data of `X + A^H X^{-#} A = I` obtained from an anti-Riccati solution.
#[derive(Debug, Clone, PartialEq)]
pub struct NmeTransform {
    pub q0: CMat,
    pub a: CMat,
    pub x: CMat,
    /// `‖X + A^H X^{-#} A − I‖_F`.
    pub residual: f64,
}

/// ```text
/// Q0 = Q^{-1} + (A2 Q^{-1} A2^H)^# + (B2 R^{-1} B2^H)^#
/// A  = Q0^{-#/2} A2 Q^{-1} Q0^{-1/2}
/// X  = Q0^{-1/2} (P_A^{-1} + (A2 Q^{-1} A2^H)^# + (B2 R^{-1} B2^H)^#) Q0^{-1/2}
/// ```
pub fn nme_transform(sys: &AntilinearSystem, w: &CostWeights, p_a: &CMat) -> Result<NmeTransform> {
    w.check_conforms(sys.n(), sys.m())?;
    if p_a.shape() != (sys.n(), sys.n()) {
        return Err(Error::dims("P_A", sys.n(), p_a.nrows()));
    }
    let n = sys.n();
    let (a2, b2) = (sys.a2(), sys.b2());
    let q_inv = inverse(w.q(), "Q")?;
    let t_a = conj(&(a2 * &q_inv * a2.adjoint()));
    let t_b = conj(&(b2 * inverse(w.r(), "R")? * b2.adjoint()));
    let q0 = hermitian_part(&(&q_inv + &t_a + &t_b));
    if !linalg::is_hermitian_pd(&q0, 1e-10) {
        return Err(Error::NotPositiveDefinite("Q0"));
    }
    let q0_inv_sqrt = hermitian_part(&inverse(&hermitian_sqrt(&q0, "Q0")?, "Q0^{1/2}")?);
    let a = conj(&q0_inv_sqrt) * a2 * &q_inv * &q0_inv_sqrt;
    let core = inverse(p_a, "P_A")? + &t_a + &t_b;
    let x = hermitian_part(&(&q0_inv_sqrt * core * &q0_inv_sqrt));
    if !linalg::is_hermitian_pd(&x, 1e-10) {
        return Err(Error::NotPositiveDefinite("X"));
    }
    let lhs = &x + a.adjoint() * inverse(&conj(&x), "X^#")? * &a;
    let residual = frobenius(&(lhs - CMat::identity(n, n)));
    Ok(NmeTransform { q0, a, x, residual })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IterationCounts {
    pub anti: usize,
    pub normal: usize,
}

/// Iterations the anti-Riccati and normal Riccati iterations need for the same tolerance.
pub fn compare_iteration_counts(
    sys: &AntilinearSystem,
    w: &CostWeights,
    opts: &SolverOptions,
) -> Result<IterationCounts> {
    let anti = solve_anti_riccati(sys, w, opts)?.iterations;
    let normal = solve_normal_riccati(&build_normal_data(sys, w)?, opts)?.iterations;
    Ok(IterationCounts { anti, normal })
}
