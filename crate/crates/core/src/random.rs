//! Seeded random problem instances for tests and benchmarks.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::bimatrix::Bimatrix;
use crate::error::Result;
use crate::linalg::{c, CMat, RMat};
use crate::stabilizability::{is_stabilizable_antilinear, is_stabilizable_complex};
use crate::system::{AntilinearSystem, ComplexLinearSystem, CostWeights};
use crate::timedelay::DelaySystem;

pub type Rand = ChaCha8Rng;

pub fn rng(seed: u64) -> Rand {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn real_matrix(rng: &mut Rand, rows: usize, cols: usize) -> RMat {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

/// Entries with independent standard normal real and imaginary parts.
pub fn complex_matrix(rng: &mut Rand, rows: usize, cols: usize) -> CMat {
    DMatrix::from_fn(rows, cols, |_, _| {
        c(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// `X X^H / n + I/2`.
pub fn hermitian_pd(rng: &mut Rand, n: usize) -> CMat {
    let x = complex_matrix(rng, n, n);
    let h = &x * x.adjoint() / c(n.max(1) as f64, 0.0) + CMat::identity(n, n) * c(0.5, 0.0);
    crate::linalg::hermitian_part(&h)
}

pub fn real_spd(rng: &mut Rand, n: usize) -> RMat {
    let x = real_matrix(rng, n, n);
    let h = &x * x.transpose() / n.max(1) as f64 + RMat::identity(n, n) * 0.5;
    (&h + h.transpose()) * 0.5
}

pub fn weights(rng: &mut Rand, n: usize, m: usize) -> Result<CostWeights> {
    CostWeights::new(hermitian_pd(rng, n), hermitian_pd(rng, m))
}

/// State matrices scaled by `scale / sqrt(n)`, so `scale` near 1 mixes stable
/// and unstable modes.
pub fn complex_system(rng: &mut Rand, n: usize, m: usize, scale: f64) -> Result<ComplexLinearSystem> {
    let s = c(scale / (n.max(1) as f64).sqrt(), 0.0);
    let a = Bimatrix::new(complex_matrix(rng, n, n) * s, complex_matrix(rng, n, n) * s)?;
    let b = Bimatrix::new(complex_matrix(rng, n, m), complex_matrix(rng, n, m))?;
    ComplexLinearSystem::new(a, b)
}

pub fn antilinear_system(rng: &mut Rand, n: usize, m: usize, scale: f64) -> Result<AntilinearSystem> {
    let s = c(scale / (n.max(1) as f64).sqrt(), 0.0);
    AntilinearSystem::new(complex_matrix(rng, n, n) * s, complex_matrix(rng, n, m))
}

/// Draws until the system passes the stabilizability test (at most `tries` draws).
pub fn stabilizable_complex(
    rng: &mut Rand,
    n: usize,
    m: usize,
    scale: f64,
    tries: usize,
) -> Result<Option<ComplexLinearSystem>> {
    for _ in 0..tries {
        let sys = complex_system(rng, n, m, scale)?;
        if is_stabilizable_complex(&sys) {
            return Ok(Some(sys));
        }
    }
    Ok(None)
}

pub fn stabilizable_antilinear(
    rng: &mut Rand,
    n: usize,
    m: usize,
    scale: f64,
    tries: usize,
) -> Result<Option<AntilinearSystem>> {
    for _ in 0..tries {
        let sys = antilinear_system(rng, n, m, scale)?;
        if is_stabilizable_antilinear(&sys) {
            return Ok(Some(sys));
        }
    }
    Ok(None)
}

/// Delay system with unnormalized (dense) `R0`.
pub fn delay_system(rng: &mut Rand, n: usize, p: usize, scale: f64) -> Result<DelaySystem> {
    let s = scale / (n.max(1) as f64).sqrt();
    DelaySystem::new(
        real_matrix(rng, n, n) * s,
        real_matrix(rng, n, n) * (0.5 * s),
        real_matrix(rng, n, p),
        real_spd(rng, n),
        real_spd(rng, p),
    )
}

/// `count` stabilizable complex systems with `n ≤ max_n`, `m ≤ max_m` and random weights.
pub fn complex_suite(
    seed: u64,
    count: usize,
    max_n: usize,
    max_m: usize,
) -> Result<Vec<(ComplexLinearSystem, CostWeights)>> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = r.random_range(1..=max_n);
        let m = r.random_range(1..=max_m);
        if let Some(sys) = stabilizable_complex(&mut r, n, m, 1.2, 16)? {
            out.push((sys, weights(&mut r, n, m)?));
        }
    }
    Ok(out)
}

pub fn antilinear_suite(
    seed: u64,
    count: usize,
    max_n: usize,
    max_m: usize,
) -> Result<Vec<(AntilinearSystem, CostWeights)>> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = r.random_range(1..=max_n);
        let m = r.random_range(1..=max_m);
        if let Some(sys) = stabilizable_antilinear(&mut r, n, m, 1.2, 16)? {
            out.push((sys, weights(&mut r, n, m)?));
        }
    }
    Ok(out)
}

/// Delay systems whose lifting passes the stabilizability test.
pub fn delay_suite(seed: u64, count: usize, max_n: usize, max_p: usize) -> Result<Vec<DelaySystem>> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = r.random_range(1..=max_n);
        let p = r.random_range(1..=max_p);
        let ds = delay_system(&mut r, n, p, 1.0)?;
        let padded = ds.pad_odd_input();
        let m = padded.p() / 2;
        // weight normalization does not change stabilizability, a unit R0 suffices here
        let probe = DelaySystem {
            r0: RMat::identity(2 * m, 2 * m),
            ..padded
        };
        let (sys, _) = crate::timedelay::to_complex_system(&probe)?;
        if is_stabilizable_complex(&sys) {
            out.push(ds);
        }
    }
    Ok(out)
}
