//! Realization of Stieltjes-like functions by rigged canonical systems with a
//! half-line Schrödinger main operator.
//!
//! Given a spectral measure `σ` and a real free term `γ`, the crate classifies
//! `V(z) = γ + ∫ dσ(t)/(t - z)`, decides accretivity and sectoriality of the
//! associated operator `T_h`, restores the boundary parameter `h` and the
//! extension parameter `μ`, and checks the result against the forward
//! transfer/impedance model built on a numerically computed Weyl function.
//!
//! Everything is generic over [`Scalar`] (`f32`, `f64`); the `*F64` aliases
//! below cover the common case.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod measure;
pub mod ode;
pub mod quadrature;
pub mod restore;
pub mod scalar;
pub mod stieltjes;
pub mod system;
pub mod weyl;

pub use error::{Error, ErrorKind, Result};
pub use measure::{Atom, DensityKind, DensityPiece, Kernel, MeasureSpec, Moments, PowerTail, SpectralMeasure};
pub use restore::{
    accretivity, gamma_admissible, h_locus, max_sectoriality, mu_locus, quasi_kernel_eta, restore_h, restore_mu,
    restore_system, sectoriality_angle, sweep, ClassTag, FunctionClass, GammaRange, GammaSet, RestoredSystem,
    Sectoriality, SweepRow,
};
pub use scalar::{Extended, Scalar};
pub use stieltjes::{default_grid, log_polar_grid, verification_grid, StieltjesLikeFunction};
pub use system::{
    cayley_v_from_w, cayley_w_from_v, impedance_v, transfer_w, verify_realization, vh_functional, SystemParams,
    VerificationReport, VhInputs, VhReport,
};
pub use weyl::{
    boundary_trace_constant, solve_cauchy, ConstantPotentialM, HalfLinePotential, MFunction, OperatorData,
    PotentialKind, WeylEvaluator,
};

pub type SpectralMeasureF64 = SpectralMeasure<f64>;
pub type MeasureSpecF64 = MeasureSpec<f64>;
pub type StieltjesLikeFunctionF64 = StieltjesLikeFunction<f64>;
pub type RestoredSystemF64 = RestoredSystem<f64>;
pub type OperatorDataF64 = OperatorData<f64>;
pub type HalfLinePotentialF64 = HalfLinePotential<f64>;
pub type WeylEvaluatorF64 = WeylEvaluator<f64>;
pub type ExtendedF64 = Extended<f64>;
pub type Complex64 = num_complex::Complex<f64>;
