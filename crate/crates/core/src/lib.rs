//! Linear quadratic regulation for discrete-time complex-valued linear systems
//! `x(k+1) = A1 x + A2^# x^# + B1 u + B2^# u^#`.
//!
//! Pairs `{M1, M2}` acting as `x ↦ M1 x + M2^# x^#` are represented by
//! [`Bimatrix`]; the optimal gain comes from a fixed-point iteration on the
//! bimatrix Riccati equation. Antilinear systems (`A1 = B1 = 0`) can also be
//! solved through the anti-Riccati or normal Riccati equations, and real
//! systems with a one-step state delay are handled by a complex lifting.

pub mod bimatrix;
pub mod error;
pub mod linalg;
pub mod lqr;
pub mod random;
pub mod riccati;
pub mod stabilizability;
pub mod system;
pub mod timedelay;

pub use bimatrix::{Bimatrix, HermitianBimatrix};
pub use error::{Error, Result};
pub use linalg::{CMat, CVec, RMat, RVec};
pub use lqr::{
    cross_validate_antilinear, lqr_antilinear, lqr_antilinear_anti, lqr_antilinear_normal, lqr_complex,
    lqr_complex_observed, AntilinearLqr, AntilinearMethod, ComplexLqr, CrossValidation,
};
pub use riccati::{
    anti_riccati_residual, bimatrix_riccati_residual, build_normal_data, compare_iteration_counts, nme_transform,
    normal_riccati_residual, solve_anti_riccati, solve_bimatrix_riccati, solve_normal_riccati,
    BimatrixRiccatiIteration, IterationCounts, NmeTransform, NormalData, RiccatiSolution, SolverOptions, TraceRow,
};
pub use stabilizability::{
    check_antilinear, check_complex, is_stabilizable_antilinear, is_stabilizable_complex, PbhReport,
};
pub use system::{
    adaptive_cost, closed_loop, cost_truncated, simulate, AdaptiveCost, AdaptiveHorizon, AntilinearSystem,
    ComplexLinearSystem, CostWeights, FeedbackGain, Trajectory,
};
pub use timedelay::{
    lift_problem, realize_gain, simulate_delay, solve_delay_lqr, solve_delay_lqr_observed, DelayInitialCondition,
    DelayLqr, DelaySystem, LiftedDelay, RealFeedback,
};
