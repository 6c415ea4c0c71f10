//! Weyl–Titchmarsh function of `-y'' + q(x) y` on the half-line `[a, +∞)`.
//!
//! Normalization: `φ₁(a) = 0, φ₁'(a) = 1`, `φ₂(a) = -1, φ₂'(a) = 0`, and
//! `φ₂ + m∞(λ) φ₁ ∈ L²`. The square-integrable solution is integrated
//! backward from the truncation point `L`, where the potential is already
//! constant and the decaying solution is known exactly.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ode::{integrate, OdeConfig};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", bound(deserialize = "T: Deserialize<'de>"))]
pub enum PotentialKind<T> {
    Zero,
    Constant {
        value: T,
    },
    /// Linear interpolation on `grid`; constant (the last value) from the last
    /// grid point on. `cutoff`, if given, only moves the truncation point.
    Table {
        grid: Vec<T>,
        values: Vec<T>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cutoff: Option<T>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfLinePotential<T> {
    pub a: T,
    pub q: PotentialKind<T>,
}

impl<T: Scalar> HalfLinePotential<T> {
    pub fn zero(a: T) -> Self {
        HalfLinePotential { a, q: PotentialKind::Zero }
    }

    pub fn constant(a: T, value: T) -> Self {
        HalfLinePotential { a, q: PotentialKind::Constant { value } }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidPotential(m.into()));
        if !self.a.is_finite() {
            return bad("endpoint a must be finite");
        }
        match &self.q {
            PotentialKind::Zero => Ok(()),
            PotentialKind::Constant { value } if value.is_finite() => Ok(()),
            PotentialKind::Constant { .. } => bad("constant potential must be finite"),
            PotentialKind::Table { grid, values, cutoff } => {
                if grid.len() < 2 || grid.len() != values.len() {
                    return bad("table needs at least two grid points and one value per point");
                }
                if grid[0] != self.a {
                    return bad("table grid must start at a");
                }
                if grid.windows(2).any(|w| !(w[1] > w[0])) {
                    return bad("table grid must be strictly increasing");
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return bad("table values must be finite");
                }
                if let Some(c) = cutoff {
                    if !(*c >= grid[grid.len() - 1]) {
                        return bad("cutoff must not precede the last grid point");
                    }
                }
                Ok(())
            }
        }
    }

    /// `q(x)` for `x >= a`.
    pub fn value_at(&self, x: T) -> T {
        match &self.q {
            PotentialKind::Zero => T::zero(),
            PotentialKind::Constant { value } => *value,
            PotentialKind::Table { grid, values, .. } => {
                let n = grid.len();
                if x <= grid[0] {
                    return values[0];
                }
                if x >= grid[n - 1] {
                    return values[n - 1];
                }
                let j = grid.partition_point(|g| *g <= x).max(1) - 1;
                let w = (x - grid[j]) / (grid[j + 1] - grid[j]);
                values[j] + (values[j + 1] - values[j]) * w
            }
        }
    }

    /// Asymptotic value `q∞`.
    pub fn q_inf(&self) -> T {
        match &self.q {
            PotentialKind::Zero => T::zero(),
            PotentialKind::Constant { value } => *value,
            PotentialKind::Table { values, .. } => values[values.len() - 1],
        }
    }

    /// Point beyond which `q ≡ q∞`.
    pub fn cutoff(&self) -> T {
        match &self.q {
            PotentialKind::Table { grid, cutoff, .. } => cutoff.unwrap_or(grid[grid.len() - 1]),
            _ => self.a,
        }
    }

    /// Kinks of `q` strictly inside `(lo, hi)`, ascending.
    fn kinks(&self, lo: T, hi: T) -> Vec<T> {
        match &self.q {
            PotentialKind::Table { grid, .. } => grid.iter().copied().filter(|g| *g > lo && *g < hi).collect(),
            _ => Vec::new(),
        }
    }
}

/// Data on the operator side of the restoration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Deserialize<'de>"))]
pub struct OperatorData<T> {
    /// Boundary parameter of the self-adjoint operator with spectral function σ.
    /// Forced to `-m` when `∫ dσ/t = ∞`; may be omitted there.
    #[serde(default)]
    pub theta: Option<T>,
    /// `m∞(-0)`
    pub m: T,
    /// Boundary-trace constant `c`.
    #[serde(default)]
    pub c: Option<T>,
    /// `ξ = (1/c) ∫ dσ/(1+t²)`; derived from `c` when absent.
    #[serde(default)]
    pub xi: Option<T>,
}

impl<T: Scalar> OperatorData<T> {
    pub fn xi_for(&self, i2: T) -> Option<T> {
        self.xi.or_else(|| self.c.map(|c| i2 / c))
    }
}

/// Anything that evaluates `λ ↦ m∞(λ)`.
pub trait MFunction<T: Scalar> {
    fn m(&self, lambda: Complex<T>) -> Result<Complex<T>>;
}

impl<T: Scalar, M: MFunction<T> + ?Sized> MFunction<T> for &M {
    fn m(&self, lambda: Complex<T>) -> Result<Complex<T>> {
        (**self).m(lambda)
    }
}

/// Closed form `m∞(λ) = sqrt(v - λ)` (principal branch) for `q ≡ v`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstantPotentialM<T> {
    pub value: T,
}

impl<T: Scalar> MFunction<T> for ConstantPotentialM<T> {
    fn m(&self, lambda: Complex<T>) -> Result<Complex<T>> {
        check_off_spectrum(lambda, self.value)?;
        Ok((Complex::new(self.value, T::zero()) - lambda).sqrt())
    }
}

fn check_off_spectrum<T: Scalar>(lambda: Complex<T>, q_inf: T) -> Result<()> {
    if lambda.im == T::zero() && lambda.re >= q_inf {
        return Err(Error::OnSpectrum { re: lambda.re.as_f64(), im: 0.0, q_inf: q_inf.as_f64() });
    }
    Ok(())
}

/// Values of the two fundamental solutions at `x_end`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CauchySolution<T> {
    pub phi1: Complex<T>,
    pub dphi1: Complex<T>,
    pub phi2: Complex<T>,
    pub dphi2: Complex<T>,
}

impl<T: Scalar> CauchySolution<T> {
    pub fn wronskian(&self) -> Complex<T> {
        self.phi1 * self.dphi2 - self.dphi1 * self.phi2
    }
}

fn rhs<T: Scalar, const N: usize>(
    p: &HalfLinePotential<T>,
    lambda: Complex<T>,
) -> impl Fn(T, &[Complex<T>; N]) -> [Complex<T>; N] + '_ {
    move |x, y| {
        let coef = Complex::new(p.value_at(x), T::zero()) - lambda;
        let mut out = *y;
        for j in (0..N).step_by(2) {
            out[j] = y[j + 1];
            out[j + 1] = coef * y[j];
        }
        out
    }
}

fn run_segments<T: Scalar, const N: usize>(
    p: &HalfLinePotential<T>,
    lambda: Complex<T>,
    from: T,
    mut y: [Complex<T>; N],
    to: T,
    cfg: &OdeConfig<T>,
    renormalize: bool,
) -> Result<[Complex<T>; N]> {
    let (lo, hi) = if from < to { (from, to) } else { (to, from) };
    let mut stops = p.kinks(lo, hi);
    if from > to {
        stops.reverse();
    }
    stops.push(to);
    let f = rhs::<T, N>(p, lambda);
    let mut x = from;
    for s in stops {
        y = integrate(&f, x, y, s, cfg, renormalize)?;
        x = s;
    }
    Ok(y)
}

/// Solves `l(φ) = λφ` for the two fundamental solutions from `a` to `x_end`.
pub fn solve_cauchy<T: Scalar>(
    p: &HalfLinePotential<T>,
    lambda: Complex<T>,
    x_end: T,
    cfg: &OdeConfig<T>,
) -> Result<CauchySolution<T>> {
    p.validate()?;
    if !(x_end > p.a) {
        return Err(Error::InvalidPotential(format!("x_end = {x_end} must exceed a = {}", p.a)));
    }
    let (zero, one) = (Complex::new(T::zero(), T::zero()), Complex::new(T::one(), T::zero()));
    let y = run_segments(p, lambda, p.a, [zero, one, -one, zero], x_end, cfg, false)?;
    Ok(CauchySolution { phi1: y[0], dphi1: y[1], phi2: y[2], dphi2: y[3] })
}

/// `m∞(λ)` with the change observed when the truncation length is doubled.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeylValue<T> {
    pub m: Complex<T>,
    pub err_est: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeylEvaluator<T> {
    potential: HalfLinePotential<T>,
    length: T,
    ode_tol: T,
    levels: usize,
}

impl<T: Scalar> WeylEvaluator<T> {
    pub fn new(potential: HalfLinePotential<T>) -> Result<Self> {
        potential.validate()?;
        let length = potential.cutoff().max(potential.a + T::lit(10.0));
        Ok(WeylEvaluator { potential, length, ode_tol: T::lit(1e-9), levels: 20 })
    }

    /// Truncation point `L`; must satisfy `L >= max(cutoff, a + 10)`.
    pub fn with_length(mut self, length: T) -> Result<Self> {
        let min = self.potential.cutoff().max(self.potential.a + T::lit(10.0));
        if !(length >= min) {
            return Err(Error::InvalidPotential(format!("truncation length {length} is below {min}")));
        }
        self.length = length;
        Ok(self)
    }

    pub fn with_tolerance(mut self, ode_tol: T) -> Result<Self> {
        if !(ode_tol > T::zero()) {
            return Err(Error::InvalidPotential("ode_tol must be positive".into()));
        }
        self.ode_tol = ode_tol;
        Ok(self)
    }

    /// Number of halvings `K` used for `m∞(-0)`.
    pub fn with_levels(mut self, levels: usize) -> Self {
        self.levels = levels.max(3);
        self
    }

    pub fn potential(&self) -> &HalfLinePotential<T> {
        &self.potential
    }

    pub fn length(&self) -> T {
        self.length
    }

    pub fn ode_tol(&self) -> T {
        self.ode_tol
    }

    fn m_truncated(&self, lambda: Complex<T>, length: T) -> Result<Complex<T>> {
        let p = &self.potential;
        // Decaying solution beyond the cutoff: exp(-k (x - L)), Re k > 0.
        let k = (Complex::new(p.q_inf(), T::zero()) - lambda).sqrt();
        let one = Complex::new(T::one(), T::zero());
        let cfg = OdeConfig::with_tolerance(self.ode_tol);
        let y = run_segments(p, lambda, length, [one, -k], p.a, &cfg, true)?;
        let scale = y[0].norm().max(y[1].norm());
        if y[0].norm() < self.ode_tol * scale {
            return Err(Error::NodeAtEndpoint { value: (y[0].norm() / scale).as_f64() });
        }
        Ok(-y[1] / y[0])
    }

    pub fn weyl_m_with_error(&self, lambda: Complex<T>) -> Result<WeylValue<T>> {
        check_off_spectrum(lambda, self.potential.q_inf())?;
        let m = self.m_truncated(lambda, self.length)?;
        let doubled = self.potential.a + (self.length - self.potential.a) * T::lit(2.0);
        let m2 = self.m_truncated(lambda, doubled)?;
        let change = (m - m2).norm();
        let allowed = T::lit(10.0) * self.ode_tol * T::one().max(m.norm());
        if change > allowed {
            return Err(Error::TruncationDominates { change: change.as_f64(), allowed: allowed.as_f64() });
        }
        Ok(WeylValue { m, err_est: change })
    }

    pub fn weyl_m(&self, lambda: Complex<T>) -> Result<Complex<T>> {
        self.weyl_m_with_error(lambda).map(|v| v.m)
    }

    /// `m∞(-0)` from `λ_k = -2^-k`, `k = 0..=K`, with two Richardson levels
    /// (removing the `√s` and `s` terms of the expansion in `s = -λ`).
    pub fn weyl_m_at_minus_zero(&self) -> Result<T> {
        let two = T::lit(2.0);
        let mut values = Vec::with_capacity(self.levels + 1);
        for k in 0..=self.levels {
            let s = two.powi(-(k as i32));
            values.push(self.weyl_m(Complex::new(-s, T::zero()))?.re);
        }
        let r2 = two.sqrt();
        let level1: Vec<T> = values.windows(2).map(|w| (r2 * w[1] - w[0]) / (r2 - T::one())).collect();
        let level2: Vec<T> = level1.windows(2).map(|w| two * w[1] - w[0]).collect();
        let n = level2.len();
        let (best, prev) = (level2[n - 1], level2[n - 2]);
        let spread = (best - prev).abs();
        let allowed = T::lit(1e-6).max(T::lit(1e3) * self.ode_tol) * (T::one() + best.abs());
        if !best.is_finite() || spread > allowed {
            return Err(Error::NonConvergent { spread: spread.as_f64() });
        }
        Ok(best)
    }
}

impl<T: Scalar> MFunction<T> for WeylEvaluator<T> {
    fn m(&self, lambda: Complex<T>) -> Result<Complex<T>> {
        self.weyl_m(lambda)
    }
}

/// Constant `c` of the boundary-trace bound on the domain of the Krein–von
/// Neumann extension. Known in closed form only for `q ≡ 0`.
pub fn boundary_trace_constant<T: Scalar>(p: &HalfLinePotential<T>) -> Result<T> {
    match p.q {
        PotentialKind::Zero => Ok(T::FRAC_1_SQRT_2()),
        PotentialKind::Constant { value } if value == T::zero() => Ok(T::FRAC_1_SQRT_2()),
        _ => Err(Error::Unsupported(
            "boundary trace constant is only available for q = 0; supply c in the operator data".into(),
        )),
    }
}
