//! Optimal state feedback from the Riccati solutions.

use crate::bimatrix::{Bimatrix, HermitianBimatrix};
use crate::error::{Error, Result};
use crate::linalg::{self, conj, frobenius, inverse, CMat, CVec};
use crate::riccati::{
    build_normal_data, solve_anti_riccati, solve_bimatrix_riccati, solve_bimatrix_riccati_observed,
    solve_normal_riccati, NormalData, RiccatiSolution, SolverOptions,
};
use crate::system::{closed_loop, AntilinearSystem, ComplexLinearSystem, CostWeights, FeedbackGain};

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexLqr {
    pub gain: FeedbackGain,
    pub solution: RiccatiSolution,
    /// Spectral radius of the closed-loop embedding.
    pub closed_loop_radius: f64,
}

impl ComplexLqr {
    /// Optimal cost `Re(x0^H P x0)`.
    pub fn jmin(&self, x0: &CVec) -> Result<f64> {
        self.solution.p.quadratic_form(x0)
    }

    pub fn p(&self) -> &HermitianBimatrix {
        &self.solution.p
    }
}

/// `K = −S^{-1} B^H P A` with `S = {R,0} + B^H P B`.
pub fn gain_from_solution(
    sys: &ComplexLinearSystem,
    p: &HermitianBimatrix,
    s: &HermitianBimatrix,
) -> Result<FeedbackGain> {
    let bpa = sys.b().conj_transpose().multiply(p.as_bimatrix())?.multiply(sys.a())?;
    let k = s.as_bimatrix().inverse()?.multiply(&bpa)?.neg();
    Ok(FeedbackGain::new(k))
}

pub fn lqr_complex(sys: &ComplexLinearSystem, w: &CostWeights, opts: &SolverOptions) -> Result<ComplexLqr> {
    let solution = solve_bimatrix_riccati(sys, w, opts)?;
    finish_complex(sys, solution)
}

/// As [`lqr_complex`], calling `observer(k, P(k))` for every Riccati iterate.
pub fn lqr_complex_observed<F>(
    sys: &ComplexLinearSystem,
    w: &CostWeights,
    opts: &SolverOptions,
    observer: F,
) -> Result<ComplexLqr>
where
    F: FnMut(usize, &HermitianBimatrix),
{
    let solution = solve_bimatrix_riccati_observed(sys, w, opts, observer)?;
    finish_complex(sys, solution)
}

fn finish_complex(sys: &ComplexLinearSystem, solution: RiccatiSolution) -> Result<ComplexLqr> {
    let gain = gain_from_solution(sys, &solution.p, &solution.s)?;
    let closed_loop_radius = closed_loop(sys, &gain)?.spectral_radius();
    Ok(ComplexLqr {
        gain,
        solution,
        closed_loop_radius,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AntilinearMethod {
    Bimatrix,
    Anti,
    Normal,
}

impl AntilinearMethod {
    pub fn name(self) -> &'static str {
        match self {
            Self::Bimatrix => "bimatrix",
            Self::Anti => "anti",
            Self::Normal => "normal",
        }
    }
}

/// Linear feedback `u = K1 x` for an antilinear system together with the
/// Hermitian matrix `P` of the optimal cost `x0^H P x0`.
#[derive(Debug, Clone, PartialEq)]
pub struct AntilinearLqr {
    pub method: AntilinearMethod,
    pub k1: CMat,
    /// `P_A` for the anti route, `P_N` for the normal route, `P1` for the bimatrix route.
    pub p: CMat,
    pub solution: RiccatiSolution,
    pub closed_loop_radius: f64,
}

impl AntilinearLqr {
    pub fn gain(&self) -> FeedbackGain {
        FeedbackGain::linear(self.k1.clone())
    }

    pub fn jmin(&self, x0: &CVec) -> Result<f64> {
        if x0.len() != self.p.nrows() {
            return Err(Error::dims("initial state", self.p.nrows(), x0.len()));
        }
        Ok(linalg::quad(&self.p, x0).re)
    }
}

fn antilinear_radius(sys: &AntilinearSystem, k1: &CMat) -> Result<f64> {
    let complex = sys.to_complex();
    Ok(closed_loop(&complex, &FeedbackGain::linear(k1.clone()))?.spectral_radius())
}

/// `K1 = −(R + B2^H P_A^# B2)^{-1} B2^H P_A^# A2`.
pub fn lqr_antilinear_anti(sys: &AntilinearSystem, w: &CostWeights, opts: &SolverOptions) -> Result<AntilinearLqr> {
    let solution = solve_anti_riccati(sys, w, opts)?;
    let p = solution.p.p1().clone();
    let pc = conj(&p);
    let (a2, b2) = (sys.a2(), sys.b2());
    let s = solution.s.p1();
    let k1 = -(inverse(s, "R + B2^H P_A^# B2")? * b2.adjoint() * &pc * a2);
    let closed_loop_radius = antilinear_radius(sys, &k1)?;
    Ok(AntilinearLqr {
        method: AntilinearMethod::Anti,
        k1,
        p,
        solution,
        closed_loop_radius,
    })
}

/// `K1 = −(S0^{-1} B2^H Q^# A2 + [0 I] (R_N + B_N^H P_N B_N)^{-1} B_N^H P_N A_N)`
/// with `S0 = R + B2^H Q^# B2`.
pub fn lqr_antilinear_normal(sys: &AntilinearSystem, w: &CostWeights, opts: &SolverOptions) -> Result<AntilinearLqr> {
    let nd = build_normal_data(sys, w)?;
    let solution = solve_normal_riccati(&nd, opts)?;
    let p = solution.p.p1().clone();
    let k1 = normal_gain(sys, w, &nd, &p, solution.s.p1())?;
    let closed_loop_radius = antilinear_radius(sys, &k1)?;
    Ok(AntilinearLqr {
        method: AntilinearMethod::Normal,
        k1,
        p,
        solution,
        closed_loop_radius,
    })
}

fn normal_gain(sys: &AntilinearSystem, w: &CostWeights, nd: &NormalData, p_n: &CMat, s_n: &CMat) -> Result<CMat> {
    let m = sys.m();
    let (a2, b2) = (sys.a2(), sys.b2());
    let qc = conj(w.q());
    let s0 = w.r() + b2.adjoint() * &qc * b2;
    let direct = inverse(&s0, "R + B2^H Q^# B2")? * b2.adjoint() * &qc * a2;
    let full = inverse(s_n, "R_N + B_N^H P_N B_N")? * nd.b_n.adjoint() * p_n * &nd.a_n;
    let lower = full.rows(m, m).into_owned();
    Ok(-(direct + lower))
}

/// Antilinear system solved through its bimatrix lifting; `k1` is the linear
/// part of the bimatrix gain and `p` the `P1` block.
pub fn lqr_antilinear_bimatrix(
    sys: &AntilinearSystem,
    w: &CostWeights,
    opts: &SolverOptions,
) -> Result<(AntilinearLqr, ComplexLqr)> {
    let lifted = sys.to_complex();
    let full = lqr_complex(&lifted, w, opts)?;
    let out = AntilinearLqr {
        method: AntilinearMethod::Bimatrix,
        k1: full.gain.k1().clone(),
        p: full.solution.p.p1().clone(),
        solution: full.solution.clone(),
        closed_loop_radius: full.closed_loop_radius,
    };
    Ok((out, full))
}

pub fn lqr_antilinear(
    sys: &AntilinearSystem,
    w: &CostWeights,
    opts: &SolverOptions,
    method: AntilinearMethod,
) -> Result<AntilinearLqr> {
    match method {
        AntilinearMethod::Bimatrix => lqr_antilinear_bimatrix(sys, w, opts).map(|(a, _)| a),
        AntilinearMethod::Anti => lqr_antilinear_anti(sys, w, opts),
        AntilinearMethod::Normal => lqr_antilinear_normal(sys, w, opts),
    }
}

/// `‖a − b‖_F / max(‖a‖_F, ‖b‖_F)`, zero when both vanish.
pub fn relative_difference(a: &CMat, b: &CMat) -> f64 {
    let scale = frobenius(a).max(frobenius(b));
    if scale == 0.0 {
        0.0
    } else {
        frobenius(&(a - b)) / scale
    }
}

/// Worst relative gap of the optimal costs over all initial states:
/// `max|λ(Pa − Pb)| / max(max|λ(Pa)|, max|λ(Pb)|)`.
pub fn cost_discrepancy(pa: &CMat, pb: &CMat) -> f64 {
    let spectral = |m: &CMat| {
        linalg::hermitian_eigenvalues(m)
            .into_iter()
            .map(f64::abs)
            .fold(0.0, f64::max)
    };
    let scale = spectral(pa).max(spectral(pb));
    if scale == 0.0 {
        0.0
    } else {
        spectral(&(pa - pb)) / scale
    }
}

/// All three solution routes of an antilinear problem side by side.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossValidation {
    pub bimatrix: ComplexLqr,
    pub anti: AntilinearLqr,
    pub normal: AntilinearLqr,
    /// Relative Frobenius gaps between `P1`, `P_A` and `P_N`.
    pub p1_vs_anti: f64,
    pub p1_vs_normal: f64,
    pub anti_vs_normal: f64,
    /// `‖P2‖_F / ‖P1‖_F` of the bimatrix solution.
    pub p2_relative: f64,
    /// Relative gap of `{K1, K2}` against `{K_anti, 0}`.
    pub gain_bimatrix_vs_anti: f64,
    pub gain_anti_vs_normal: f64,
    pub gain_bimatrix_vs_normal: f64,
    /// See [`cost_discrepancy`].
    pub jmin_anti_vs_normal: f64,
    pub jmin_bimatrix_vs_anti: f64,
}

impl CrossValidation {
    pub fn max_p_gap(&self) -> f64 {
        self.p1_vs_anti.max(self.p1_vs_normal).max(self.anti_vs_normal)
    }

    pub fn max_gain_gap(&self) -> f64 {
        self.gain_bimatrix_vs_anti
            .max(self.gain_anti_vs_normal)
            .max(self.gain_bimatrix_vs_normal)
    }
}

pub fn cross_validate_antilinear(
    sys: &AntilinearSystem,
    w: &CostWeights,
    opts: &SolverOptions,
) -> Result<CrossValidation> {
    let (_, bimatrix) = lqr_antilinear_bimatrix(sys, w, opts)?;
    let anti = lqr_antilinear_anti(sys, w, opts)?;
    let normal = lqr_antilinear_normal(sys, w, opts)?;
    let p1 = bimatrix.solution.p.p1();
    let p2 = bimatrix.solution.p.p2();
    let gain_gap = |k: &Bimatrix, k1: &CMat| {
        let reference = Bimatrix::linear(k1.clone());
        let scale = k.bnorm().max(reference.bnorm());
        if scale == 0.0 {
            0.0
        } else {
            k.sub(&reference).map(|d| d.bnorm() / scale).unwrap_or(f64::INFINITY)
        }
    };
    Ok(CrossValidation {
        p1_vs_anti: relative_difference(p1, &anti.p),
        p1_vs_normal: relative_difference(p1, &normal.p),
        anti_vs_normal: relative_difference(&anti.p, &normal.p),
        p2_relative: frobenius(p2) / frobenius(p1).max(f64::MIN_POSITIVE),
        gain_bimatrix_vs_anti: gain_gap(bimatrix.gain.k(), &anti.k1),
        gain_anti_vs_normal: relative_difference(&anti.k1, &normal.k1),
        gain_bimatrix_vs_normal: gain_gap(bimatrix.gain.k(), &normal.k1),
        jmin_anti_vs_normal: cost_discrepancy(&anti.p, &normal.p),
        jmin_bimatrix_vs_anti: cost_discrepancy(p1, &anti.p),
        bimatrix,
        anti,
        normal,
    })
}
