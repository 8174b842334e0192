//! System containers, closed-loop construction, simulation and truncated costs.

use crate::bimatrix::Bimatrix;
use crate::error::{Error, Result};
use crate::linalg::{self, hermitian_deviation, hermitian_part, quad, CMat, CVec};

/// `x(k+1) = {A1, A2} x(k) + {B1, B2} u(k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexLinearSystem {
    a: Bimatrix,
    b: Bimatrix,
}

impl ComplexLinearSystem {
    pub fn new(a: Bimatrix, b: Bimatrix) -> Result<Self> {
        if !a.is_square() || a.nrows() == 0 {
            return Err(Error::dims(
                "state bimatrix A",
                "square, n >= 1",
                format!("{}x{}", a.nrows(), a.ncols()),
            ));
        }
        if b.nrows() != a.nrows() || b.ncols() == 0 {
            return Err(Error::dims(
                "input bimatrix B",
                format!("{}xm with m >= 1", a.nrows()),
                format!("{}x{}", b.nrows(), b.ncols()),
            ));
        }
        Ok(Self { a, b })
    }

    pub fn from_parts(a1: CMat, a2: CMat, b1: CMat, b2: CMat) -> Result<Self> {
        Self::new(Bimatrix::new(a1, a2)?, Bimatrix::new(b1, b2)?)
    }

    pub fn a(&self) -> &Bimatrix {
        &self.a
    }

    pub fn b(&self) -> &Bimatrix {
        &self.b
    }

    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    pub fn m(&self) -> usize {
        self.b.ncols()
    }
}

/// `x(k+1) = A2^# x^#(k) + B2^# u^#(k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AntilinearSystem {
    a2: CMat,
    b2: CMat,
}

impl AntilinearSystem {
    pub fn new(a2: CMat, b2: CMat) -> Result<Self> {
        if !a2.is_square() || a2.nrows() == 0 {
            return Err(Error::dims(
                "A2",
                "square, n >= 1",
                format!("{}x{}", a2.nrows(), a2.ncols()),
            ));
        }
        if b2.nrows() != a2.nrows() || b2.ncols() == 0 {
            return Err(Error::dims(
                "B2",
                format!("{}xm with m >= 1", a2.nrows()),
                format!("{}x{}", b2.nrows(), b2.ncols()),
            ));
        }
        Ok(Self { a2, b2 })
    }

    pub fn a2(&self) -> &CMat {
        &self.a2
    }

    pub fn b2(&self) -> &CMat {
        &self.b2
    }

    pub fn n(&self) -> usize {
        self.a2.nrows()
    }

    pub fn m(&self) -> usize {
        self.b2.ncols()
    }

    /// The same dynamics as a general system with `A1 = 0`, `B1 = 0`.
    pub fn to_complex(&self) -> ComplexLinearSystem {
        ComplexLinearSystem {
            a: Bimatrix::antilinear(self.a2.clone()),
            b: Bimatrix::antilinear(self.b2.clone()),
        }
    }
}

/// Hermitian positive definite weights of `Σ x^H Q x + u^H R u`.
#[derive(Debug, Clone, PartialEq)]
pub struct CostWeights {
    q: CMat,
    r: CMat,
}

impl CostWeights {
    pub fn new(q: CMat, r: CMat) -> Result<Self> {
        let q = validate_weight(q, "Q")?;
        let r = validate_weight(r, "R")?;
        Ok(Self { q, r })
    }

    pub fn q(&self) -> &CMat {
        &self.q
    }

    pub fn r(&self) -> &CMat {
        &self.r
    }

    pub fn n(&self) -> usize {
        self.q.nrows()
    }

    pub fn m(&self) -> usize {
        self.r.nrows()
    }

    pub(crate) fn check_conforms(&self, n: usize, m: usize) -> Result<()> {
        if self.n() != n || self.m() != m {
            return Err(Error::dims(
                "cost weights",
                format!("Q {n}x{n}, R {m}x{m}"),
                format!("Q {0}x{0}, R {1}x{1}", self.n(), self.m()),
            ));
        }
        Ok(())
    }
}

fn validate_weight(w: CMat, name: &str) -> Result<CMat> {
    if !w.is_square() || w.nrows() == 0 {
        return Err(Error::InvalidWeights(format!(
            "{name} must be square and non-empty, got {}x{}",
            w.nrows(),
            w.ncols()
        )));
    }
    let dev = hermitian_deviation(&w);
    if dev > crate::bimatrix::STRUCTURE_TOL {
        return Err(Error::InvalidWeights(format!(
            "{name} is not Hermitian (deviation {dev:e})"
        )));
    }
    let w = hermitian_part(&w);
    if !linalg::is_hermitian_pd(&w, 1e-10) {
        return Err(Error::InvalidWeights(format!("{name} is not positive definite")));
    }
    Ok(w)
}

/// `u(k) = {K1, K2} x(k)`; `K2 = 0` is ordinary linear feedback.
#[derive(Debug, Clone, PartialEq)]
pub struct FeedbackGain {
    k: Bimatrix,
}

impl FeedbackGain {
    pub fn new(k: Bimatrix) -> Self {
        Self { k }
    }

    pub fn linear(k1: CMat) -> Self {
        Self {
            k: Bimatrix::linear(k1),
        }
    }

    pub fn zeros(m: usize, n: usize) -> Self {
        Self {
            k: Bimatrix::zeros(m, n),
        }
    }

    pub fn k(&self) -> &Bimatrix {
        &self.k
    }

    pub fn k1(&self) -> &CMat {
        self.k.m1()
    }

    pub fn k2(&self) -> &CMat {
        self.k.m2()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// `horizon + 1` states, starting at `x0`.
    pub states: Vec<CVec>,
    /// `horizon` inputs.
    pub inputs: Vec<CVec>,
}

impl Trajectory {
    pub fn horizon(&self) -> usize {
        self.inputs.len()
    }
}

/// `A + B·K`.
pub fn closed_loop(sys: &ComplexLinearSystem, gain: &FeedbackGain) -> Result<Bimatrix> {
    if gain.k.nrows() != sys.m() || gain.k.ncols() != sys.n() {
        return Err(Error::dims(
            "feedback gain",
            format!("{}x{}", sys.m(), sys.n()),
            format!("{}x{}", gain.k.nrows(), gain.k.ncols()),
        ));
    }
    sys.a.add(&sys.b.multiply(&gain.k)?)
}

pub fn simulate(sys: &ComplexLinearSystem, gain: &FeedbackGain, x0: &CVec, horizon: usize) -> Result<Trajectory> {
    let acl = closed_loop(sys, gain)?;
    if x0.len() != sys.n() {
        return Err(Error::dims("initial state", sys.n(), x0.len()));
    }
    let mut states = Vec::with_capacity(horizon + 1);
    let mut inputs = Vec::with_capacity(horizon);
    states.push(x0.clone());
    for k in 0..horizon {
        let x = &states[k];
        inputs.push(gain.k.apply(x)?);
        let next = acl.apply(x)?;
        states.push(next);
    }
    Ok(Trajectory { states, inputs })
}

fn stage_cost(x: &CVec, u: &CVec, w: &CostWeights) -> f64 {
    quad(&w.q, x).re + quad(&w.r, u).re
}

/// `Σ_{k < horizon} x^H Q x + u^H R u` along a trajectory.
pub fn cost_truncated(traj: &Trajectory, w: &CostWeights) -> Result<f64> {
    let mut total = 0.0;
    for (x, u) in traj.states.iter().zip(&traj.inputs) {
        if x.len() != w.n() || u.len() != w.m() {
            return Err(Error::dims(
                "trajectory vs weights",
                format!("states {}, inputs {}", w.n(), w.m()),
                format!("states {}, inputs {}", x.len(), u.len()),
            ));
        }
        total += stage_cost(x, u, w);
    }
    Ok(total)
}

/// Stopping rule for [`adaptive_cost`]: the horizon doubles until the cost
/// added by the latest doubling drops below `rel_tol` times the running sum.
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveHorizon {
    pub rel_tol: f64,
    pub initial: usize,
    pub max_horizon: usize,
}

impl Default for AdaptiveHorizon {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            initial: 16,
            max_horizon: 100_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveCost {
    pub cost: f64,
    pub horizon: usize,
    pub converged: bool,
}

/// Closed-loop cost from `x0`, truncated at an adaptively chosen horizon.
pub fn adaptive_cost(
    sys: &ComplexLinearSystem,
    gain: &FeedbackGain,
    w: &CostWeights,
    x0: &CVec,
    rule: AdaptiveHorizon,
) -> Result<AdaptiveCost> {
    w.check_conforms(sys.n(), sys.m())?;
    let acl = closed_loop(sys, gain)?;
    if x0.len() != sys.n() {
        return Err(Error::dims("initial state", sys.n(), x0.len()));
    }
    let mut x = x0.clone();
    let mut total = 0.0;
    let mut k = 0usize;
    let mut block_end = rule.initial.max(1);
    loop {
        let before = total;
        while k < block_end {
            let u = gain.k.apply(&x)?;
            total += stage_cost(&x, &u, w);
            x = acl.apply(&x)?;
            k += 1;
        }
        let increment = total - before;
        if increment <= rule.rel_tol * total {
            return Ok(AdaptiveCost {
                cost: total,
                horizon: k,
                converged: true,
            });
        }
        if k >= rule.max_horizon || !total.is_finite() {
            return Ok(AdaptiveCost {
                cost: total,
                horizon: k,
                converged: false,
            });
        }
        block_end = (2 * k).min(rule.max_horizon);
    }
}
