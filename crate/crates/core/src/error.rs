use thiserror::Error;

/// Broad failure category, used by front-ends to pick an exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    /// Input data violates a documented invariant or precondition.
    Validation,
    /// A numerical procedure failed to converge or hit a singularity.
    Numerical,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("measure: invalid spectral measure: {0}")]
    InvalidMeasure(String),

    #[error("measure: integral of dsigma(t)/(1+t) diverges: {0}")]
    NonIntegrable(String),

    #[error("measure: atom at t = 0 leaves the integral of dsigma(t)/t undefined")]
    DivergentAtOrigin,

    #[error("{module}: z = {re} + {im}i lies on the support [0, +inf)")]
    PoleOnSupport { module: &'static str, re: f64, im: f64 },

    #[error("measure: adaptive quadrature stopped with error estimate {error:e} above tolerance {tol:e}")]
    QuadratureNotConverged { error: f64, tol: f64 },

    #[error("measure: class SL0 requires declared infinite total mass with a tail exponent s <= 1")]
    NotSL0,

    #[error("stieltjes: grid point {re} + {im}i is not in the open upper half-plane")]
    InvalidGrid { re: f64, im: f64 },

    #[error("weyl: invalid potential: {0}")]
    InvalidPotential(String),

    #[error("weyl: ODE integration failed near x = {x}: {reason}")]
    OdeStepFailure { x: f64, reason: String },

    #[error("weyl: doubling the truncation length changed m by {change:e} (allowed {allowed:e})")]
    TruncationDominates { change: f64, allowed: f64 },

    #[error("weyl: decaying solution vanishes at the endpoint (|y(a)| = {value:e}); lambda is an eigenvalue")]
    NodeAtEndpoint { value: f64 },

    #[error("weyl: lambda = {re} + {im}i lies on the continuous spectrum [{q_inf}, +inf)")]
    OnSpectrum { re: f64, im: f64, q_inf: f64 },

    #[error("weyl: extrapolation of m(-0) did not settle (spread {spread:e})")]
    NonConvergent { spread: f64 },

    #[error("weyl: unsupported: {0}")]
    Unsupported(String),

    #[error("restore: Im h would be {value}, but the restored boundary parameter needs Im h > 0")]
    DegenerateImaginaryPart { value: f64 },

    #[error("restore: xi (or boundary trace constant c) is required when the 1/t moment is infinite")]
    MissingXi,

    #[error("restore: theta = {theta} must equal -m = {neg_m} when the 1/t moment is infinite")]
    ThetaMismatch { theta: f64, neg_m: f64 },

    #[error("restore: theta is required when the 1/t moment is finite")]
    MissingTheta,

    #[error("restore: {0}")]
    OutOfRange(String),

    #[error("system: invalid parameters: {0}")]
    InvalidParams(String),

    #[error("system: transfer function has a pole (m + h = {value:e})")]
    PoleOfW { value: f64 },

    #[error("system: impedance function has a pole (denominator {value:e})")]
    PoleOfV { value: f64 },

    #[error("system: Cayley transform undefined (denominator {value:e})")]
    CayleyPole { value: f64 },

    #[error("system: side condition b - gamma > 0 violated (b - gamma = {value})")]
    SideConditionViolated { value: f64 },
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            QuadratureNotConverged { .. }
            | OdeStepFailure { .. }
            | TruncationDominates { .. }
            | NodeAtEndpoint { .. }
            | NonConvergent { .. }
            | PoleOfW { .. }
            | PoleOfV { .. }
            | CayleyPole { .. } => ErrorKind::Numerical,
            _ => ErrorKind::Validation,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
