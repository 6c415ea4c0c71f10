//! Spectral measures on `[0, +inf)` and their weighted integrals.
//!
//! A measure is a finite list of atoms, a sorted list of density pieces on
//! bounded intervals and an optional power-law tail `coeff * t^exponent` on
//! `[T, +inf)`. Divergence of `∫ dσ/t` is decided from the piece kinds, never
//! from quadrature.

use num_complex::Complex;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadConfig, QuadValue};
use crate::restore::{ClassTag, FunctionClass};
use crate::scalar::{Extended, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom<T> {
    pub t: T,
    pub w: T,
}

/// Shape of the density `dσ/dt` on a piece `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DensityKind<T> {
    /// `coeff * t^exponent` (absolute `t`, not `t - lo`).
    PowerLaw { coeff: T, exponent: T },
    /// `coeff / sqrt(t - lo)`, an edge singularity at the left end.
    InverseSqrt { coeff: T },
    /// Piecewise linear interpolation; knots must start at `lo` and end at `hi`.
    Table { knots: Vec<T>, values: Vec<T> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityPiece<T> {
    pub lo: T,
    pub hi: T,
    #[serde(flatten)]
    pub kind: DensityKind<T>,
}

/// Density `coeff * t^exponent` for `t >= threshold`, with `exponent < 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerTail<T> {
    #[serde(rename = "T")]
    pub threshold: T,
    pub coeff: T,
    pub exponent: T,
}

impl<T: Scalar> PowerTail<T> {
    /// Decay rate `s` in `t^(-s)`.
    pub fn decay(&self) -> T {
        -self.exponent
    }
}

/// On-disk form of a measure, before validation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureSpec<T> {
    #[serde(default)]
    pub atoms: Vec<Atom<T>>,
    #[serde(default)]
    pub pieces: Vec<DensityPiece<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<PowerTail<T>>,
    #[serde(default)]
    pub infinite_mass: bool,
}

/// A validated nonnegative measure σ on `[0, +inf)` with `∫ dσ/(1+t) < ∞`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralMeasure<T> {
    spec: MeasureSpec<T>,
    quad: QuadConfig<T>,
}

/// Weight functions `k(t)` for `∫ k(t) dσ(t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Kernel<T> {
    InvT,
    InvOnePlusT,
    InvOnePlusT2,
    Resolvent(Complex<T>),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum KernelValue<T> {
    Real(Extended<T>),
    Complex(Complex<T>),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightedIntegral<T> {
    pub value: KernelValue<T>,
    /// Bound on quadrature error; zero when the value is infinite.
    pub error: T,
}

/// The three real moments used by the restoration formulas.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct Moments<T> {
    /// `∫ dσ/(t+1)`
    pub a: T,
    /// `∫ dσ/t`, possibly infinite
    pub b: Extended<T>,
    /// `∫ dσ/(1+t²)`
    pub i2: T,
    pub err_a: T,
    pub err_b: T,
    pub err_i2: T,
}

enum Part<V, T> {
    Finite(V, T),
    Divergent,
}

fn default_quad<T: Scalar>() -> QuadConfig<T> {
    QuadConfig { abs_tol: T::lit(1e-10), rel_tol: T::lit(1e-13), max_panels: 4000 }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidMeasure(msg.into())
}

fn check_finite<T: Scalar>(x: T, what: &str) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("{what} must be finite")))
    }
}

impl<T: Scalar> MeasureSpec<T> {
    fn check_structure(&self) -> Result<()> {
        let zero = T::zero();
        for a in &self.atoms {
            check_finite(a.t, "atom location")?;
            check_finite(a.w, "atom weight")?;
            if a.t < zero {
                return Err(invalid(format!("atom at t = {} lies left of 0", a.t)));
            }
            if a.w <= zero {
                return Err(invalid(format!("atom weight {} must be positive", a.w)));
            }
        }
        let mut prev_hi: Option<T> = None;
        for p in &self.pieces {
            check_finite(p.lo, "piece bound")?;
            check_finite(p.hi, "piece bound")?;
            if p.lo < zero || p.hi <= p.lo {
                return Err(invalid(format!("piece [{}, {}] must satisfy 0 <= lo < hi", p.lo, p.hi)));
            }
            if let Some(h) = prev_hi {
                if p.lo < h {
                    return Err(invalid("density pieces must be sorted and non-overlapping"));
                }
            }
            prev_hi = Some(p.hi);
            match &p.kind {
                DensityKind::PowerLaw { coeff, exponent } => {
                    check_finite(*coeff, "power-law coefficient")?;
                    check_finite(*exponent, "power-law exponent")?;
                    if *coeff < zero {
                        return Err(invalid("power-law coefficient must be nonnegative"));
                    }
                    if p.lo == zero && *exponent <= -T::one() && *coeff > zero {
                        return Err(Error::NonIntegrable(format!(
                            "t^{} is not integrable at the origin",
                            exponent
                        )));
                    }
                }
                DensityKind::InverseSqrt { coeff } => {
                    check_finite(*coeff, "inverse-sqrt coefficient")?;
                    if *coeff < zero {
                        return Err(invalid("inverse-sqrt coefficient must be nonnegative"));
                    }
                }
                DensityKind::Table { knots, values } => {
                    if knots.len() < 2 || knots.len() != values.len() {
                        return Err(invalid("table needs at least two knots and one value per knot"));
                    }
                    if knots[0] != p.lo || knots[knots.len() - 1] != p.hi {
                        return Err(invalid("table knots must start at lo and end at hi"));
                    }
                    if knots.windows(2).any(|w| w[1] <= w[0]) {
                        return Err(invalid("table knots must be strictly increasing"));
                    }
                    if values.iter().any(|v| !v.is_finite() || *v < zero) {
                        return Err(invalid("table values must be finite and nonnegative"));
                    }
                }
            }
        }
        if let Some(tail) = &self.tail {
            check_finite(tail.threshold, "tail threshold")?;
            check_finite(tail.coeff, "tail coefficient")?;
            check_finite(tail.exponent, "tail exponent")?;
            if tail.threshold <= zero || tail.coeff <= zero {
                return Err(invalid("tail needs threshold T > 0 and coeff > 0"));
            }
            if tail.exponent >= zero {
                return Err(Error::NonIntegrable(format!(
                    "tail density t^{} does not decay (exponent must be negative)",
                    tail.exponent
                )));
            }
            if let Some(h) = prev_hi {
                if h > tail.threshold {
                    return Err(invalid("density pieces must lie inside [0, T]"));
                }
            }
        }
        if self.infinite_mass {
            match &self.tail {
                Some(t) if t.decay() <= T::one() => {}
                _ => {
                    return Err(invalid(
                        "infinite_mass requires a tail with exponent in [-1, 0) (decay s <= 1)",
                    ))
                }
            }
        }
        Ok(())
    }
}

impl<T: Scalar> SpectralMeasure<T> {
    pub fn new(spec: MeasureSpec<T>) -> Result<Self> {
        spec.check_structure()?;
        let m = SpectralMeasure { spec, quad: default_quad() };
        // The invariant ∫ dσ/(1+t) < ∞ is confirmed by actually integrating.
        match m.integrate_weighted(Kernel::InvOnePlusT)?.value {
            KernelValue::Real(Extended::Finite(v)) if v.is_finite() => Ok(m),
            _ => Err(Error::NonIntegrable("integral of dsigma/(1+t) is not finite".into())),
        }
    }

    /// Builds a measure without any checks. Only for synthetic negative tests.
    pub fn new_unchecked(spec: MeasureSpec<T>) -> Self {
        SpectralMeasure { spec, quad: default_quad() }
    }

    pub fn empty() -> Self {
        SpectralMeasure::new_unchecked(MeasureSpec {
            atoms: Vec::new(),
            pieces: Vec::new(),
            tail: None,
            infinite_mass: false,
        })
    }

    /// `coeff * t^exponent` on `(0, +inf)` split at `t = 1`; the measure of the
    /// worked example when `coeff = 1/π`, `exponent = -1/2`.
    pub fn power_law(coeff: T, exponent: T) -> Result<Self> {
        let one = T::one();
        SpectralMeasure::new(MeasureSpec {
            atoms: Vec::new(),
            pieces: vec![DensityPiece {
                lo: T::zero(),
                hi: one,
                kind: DensityKind::PowerLaw { coeff, exponent },
            }],
            tail: Some(PowerTail { threshold: one, coeff, exponent }),
            infinite_mass: exponent >= -one,
        })
    }

    pub fn with_quadrature(mut self, quad: QuadConfig<T>) -> Self {
        self.quad = quad;
        self
    }

    pub fn spec(&self) -> &MeasureSpec<T> {
        &self.spec
    }

    pub fn atoms(&self) -> &[Atom<T>] {
        &self.spec.atoms
    }

    pub fn pieces(&self) -> &[DensityPiece<T>] {
        &self.spec.pieces
    }

    pub fn tail(&self) -> Option<&PowerTail<T>> {
        self.spec.tail.as_ref()
    }

    pub fn declared_infinite_mass(&self) -> bool {
        self.spec.infinite_mass
    }

    fn component_count(&self) -> usize {
        self.spec.atoms.len().min(1) + self.spec.pieces.len() + usize::from(self.spec.tail.is_some())
    }

    fn component_quad(&self) -> QuadConfig<T> {
        let n = T::from_usize(self.component_count().max(1)).unwrap_or_else(T::one);
        QuadConfig { abs_tol: self.quad.abs_tol / n, ..self.quad }
    }

    /// Core accumulator for `∫ t^(-omega) g(t) dσ(t)`.
    ///
    /// `g` is regular on `[0, inf)`; `at_inf(r)` must equal `t^kappa * t^(-omega) g(t)`
    /// written in `r = 1/t`, bounded as `r -> 0`.
    fn accumulate<V, G, H>(&self, omega: i32, g: G, kappa: T, at_inf: H) -> Result<Part<V, T>>
    where
        V: QuadValue<T>,
        G: Fn(T) -> V,
        H: Fn(T) -> V,
    {
        let zero = T::zero();
        let one = T::one();
        let two = T::lit(2.0);
        let quad = self.component_quad();
        let omega_t = T::from_i32(omega).unwrap_or(zero);
        let weight = |t: T| if omega == 0 { one } else { t.powi(-omega) };

        let mut total = V::zero();
        let mut err = zero;
        let mut push = |est: crate::quadrature::Estimate<V, T>| -> Result<()> {
            if !est.converged {
                return Err(Error::QuadratureNotConverged { error: est.error.as_f64(), tol: quad.abs_tol.as_f64() });
            }
            total = total + est.value;
            err = err + est.error;
            Ok(())
        };

        let mut atoms = V::zero();
        for a in &self.spec.atoms {
            if omega > 0 && a.t == zero {
                return Err(Error::DivergentAtOrigin);
            }
            atoms = atoms + g(a.t) * (a.w * weight(a.t));
        }

        for p in &self.spec.pieces {
            match &p.kind {
                DensityKind::PowerLaw { coeff, exponent } => {
                    let (c, pw) = (*coeff, *exponent);
                    if c == zero {
                        continue;
                    }
                    if p.lo > zero {
                        push(integrate(|t: T| g(t) * (c * t.powf(pw) * weight(t)), p.lo, p.hi, &quad))?;
                        continue;
                    }
                    let eff = pw - omega_t;
                    if eff <= -one {
                        return Ok(Part::Divergent);
                    }
                    if eff < zero {
                        // u = t^(1+eff) absorbs the singular factor t^eff dt.
                        let q = one + eff;
                        let inv_q = one / q;
                        let scale = c / q;
                        push(integrate(|u: T| g(u.powf(inv_q)) * scale, zero, p.hi.powf(q), &quad))?;
                    } else {
                        push(integrate(|t: T| g(t) * (c * t.powf(eff)), zero, p.hi, &quad))?;
                    }
                }
                DensityKind::InverseSqrt { coeff } => {
                    let c = *coeff;
                    if c == zero {
                        continue;
                    }
                    if omega > 0 && p.lo == zero {
                        return Ok(Part::Divergent);
                    }
                    let lo = p.lo;
                    push(integrate(
                        |u: T| {
                            let t = lo + u * u;
                            g(t) * (two * c * weight(t))
                        },
                        zero,
                        (p.hi - p.lo).sqrt(),
                        &quad,
                    ))?;
                }
                DensityKind::Table { knots, values } => {
                    if omega > 0 && p.lo == zero && values[0] > zero {
                        return Ok(Part::Divergent);
                    }
                    for i in 0..knots.len() - 1 {
                        let (t0, t1, v0, v1) = (knots[i], knots[i + 1], values[i], values[i + 1]);
                        if v0 == zero && v1 == zero {
                            continue;
                        }
                        let slope = (v1 - v0) / (t1 - t0);
                        push(integrate(|t: T| g(t) * ((v0 + slope * (t - t0)) * weight(t)), t0, t1, &quad))?;
                    }
                }
            }
        }

        if let Some(tail) = &self.spec.tail {
            // t = T w^(-1/(e-1)) maps [T, inf) onto (0, 1] and turns t^(-e) dt into a constant.
            let e = tail.decay() + kappa;
            let em1 = e - one;
            let th = tail.threshold;
            let scale = tail.coeff * th.powf(one - e) / em1;
            let p = one / em1;
            push(integrate(|w: T| at_inf(w.powf(p) / th) * scale, zero, one, &quad))?;
        }

        Ok(Part::Finite(total + atoms, err))
    }

    /// `∫ k(t) dσ(t)` with an error bound.
    pub fn integrate_weighted(&self, kernel: Kernel<T>) -> Result<WeightedIntegral<T>> {
        let one = T::one();
        let real = |part: Part<T, T>| match part {
            Part::Finite(v, e) => WeightedIntegral { value: KernelValue::Real(Extended::Finite(v)), error: e },
            Part::Divergent => WeightedIntegral { value: KernelValue::Real(Extended::Infinite), error: T::zero() },
        };
        match kernel {
            Kernel::InvT => Ok(real(self.accumulate(1, |_| one, one, |_| one)?)),
            Kernel::InvOnePlusT => {
                let part = self.accumulate(0, |t: T| one / (one + t), one, |r: T| one / (one + r))?;
                match part {
                    Part::Divergent => Err(Error::NonIntegrable("dsigma/(1+t)".into())),
                    p => Ok(real(p)),
                }
            }
            Kernel::InvOnePlusT2 => {
                let part = self.accumulate(0, |t: T| one / (one + t * t), T::lit(2.0), |r: T| one / (one + r * r))?;
                match part {
                    Part::Divergent => Err(Error::NonIntegrable("dsigma/(1+t^2)".into())),
                    p => Ok(real(p)),
                }
            }
            Kernel::Resolvent(z) => {
                if z.im == T::zero() && z.re >= T::zero() {
                    return Err(Error::PoleOnSupport { module: "measure", re: z.re.as_f64(), im: 0.0 });
                }
                let c1 = Complex::new(one, T::zero());
                let part = self.accumulate(
                    0,
                    |t: T| (Complex::new(t, T::zero()) - z).inv(),
                    one,
                    |r: T| (c1 - z * r).inv(),
                )?;
                match part {
                    Part::Finite(v, e) => Ok(WeightedIntegral { value: KernelValue::Complex(v), error: e }),
                    Part::Divergent => Err(Error::NonIntegrable("resolvent".into())),
                }
            }
        }
    }

    /// `∫ dσ(t)/(t - z)` and its error bound.
    pub fn resolvent(&self, z: Complex<T>) -> Result<(Complex<T>, T)> {
        match self.integrate_weighted(Kernel::Resolvent(z))? {
            WeightedIntegral { value: KernelValue::Complex(v), error } => Ok((v, error)),
            _ => unreachable!("resolvent kernel yields a complex value"),
        }
    }

    /// A real-kernel integral, `+inf` allowed.
    pub fn real_integral(&self, kernel: Kernel<T>) -> Result<(Extended<T>, T)> {
        match self.integrate_weighted(kernel)? {
            WeightedIntegral { value: KernelValue::Real(v), error } => Ok((v, error)),
            WeightedIntegral { value: KernelValue::Complex(_), .. } => {
                Err(invalid("resolvent kernel passed where a real kernel was expected"))
            }
        }
    }

    pub fn moments(&self) -> Result<Moments<T>> {
        let finite = |(v, e): (Extended<T>, T)| -> Result<(T, T)> {
            v.finite().map(|x| (x, e)).ok_or_else(|| Error::NonIntegrable("moment".into()))
        };
        let (a, err_a) = finite(self.real_integral(Kernel::InvOnePlusT)?)?;
        let (i2, err_i2) = finite(self.real_integral(Kernel::InvOnePlusT2)?)?;
        let (b, err_b) = self.real_integral(Kernel::InvT)?;
        Ok(Moments { a, b, i2, err_a, err_b, err_i2 })
    }

    /// Class membership of `γ + ∫ dσ/(t - z)`.
    pub fn classify(&self, gamma: T) -> Result<ClassTag> {
        if !self.spec.infinite_mass {
            return Err(Error::NotSL0);
        }
        let (b, _) = self.real_integral(Kernel::InvT)?;
        let class = if b.is_infinite() { FunctionClass::SL0K } else { FunctionClass::SL01K };
        Ok(ClassTag { class, stieltjes: gamma >= T::zero() })
    }
}

impl<T: Scalar + Serialize> Serialize for SpectralMeasure<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.spec.serialize(s)
    }
}

impl<'de, T: Scalar + Deserialize<'de>> Deserialize<'de> for SpectralMeasure<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let spec = MeasureSpec::deserialize(d)?;
        SpectralMeasure::new(spec).map_err(serde::de::Error::custom)
    }
}
