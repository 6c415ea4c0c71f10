//! Forward model of the realizing system: transfer function, impedance,
//! Cayley maps, the `V_h` accretivity functional and end-to-end verification.
//!
//! The system is represented by the scalars `(h, μ)` together with the Weyl
//! function `m∞`; the underlying operators are never materialized.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::restore::{accretivity_form, quasi_kernel_eta, RestoredSystem};
use crate::scalar::{Extended, Scalar};
use crate::stieltjes::StieltjesLikeFunction;
use crate::weyl::MFunction;

/// Relative size below which a denominator is treated as zero.
fn pole_tolerance<T: Scalar>() -> T {
    T::epsilon() * T::lit(64.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SystemParams<T, M> {
    pub h: Complex<T>,
    pub mu: Extended<T>,
    pub m_fn: M,
    pub theta_expected: T,
}

impl<T: Scalar, M: MFunction<T>> SystemParams<T, M> {
    pub fn new(h: Complex<T>, mu: Extended<T>, m_fn: M, theta_expected: T) -> Result<Self> {
        if !(h.im > T::zero()) || !h.re.is_finite() || !h.im.is_finite() {
            return Err(Error::InvalidParams(format!("Im h must be positive, got h = {h}")));
        }
        if let Extended::Finite(mu) = mu {
            if !mu.is_finite() {
                return Err(Error::InvalidParams("mu must be a finite number or inf".into()));
            }
        }
        Ok(SystemParams { h, mu, m_fn, theta_expected })
    }

    pub fn from_restored(r: &RestoredSystem<T>, m_fn: M) -> Result<Self> {
        Self::new(r.h, r.mu, m_fn, r.theta)
    }

    /// `η(h, μ)`; `None` when `μ` (numerically) equals `Re h`.
    pub fn eta(&self) -> Option<T> {
        quasi_kernel_eta(self.h, self.mu)
    }
}

/// `W_Θ(λ) = (μ - h)/(μ - h̄) · (m∞(λ) + h̄)/(m∞(λ) + h)`; the first factor is 1 for `μ = ∞`.
pub fn transfer_w<T: Scalar, M: MFunction<T>>(p: &SystemParams<T, M>, lambda: Complex<T>) -> Result<Complex<T>> {
    let m = p.m_fn.m(lambda)?;
    transfer_w_from_m(p.h, p.mu, m)
}

pub fn transfer_w_from_m<T: Scalar>(h: Complex<T>, mu: Extended<T>, m: Complex<T>) -> Result<Complex<T>> {
    let den = m + h;
    if den.norm() <= pole_tolerance::<T>() * (T::one() + m.norm() + h.norm()) {
        return Err(Error::PoleOfW { value: den.norm().as_f64() });
    }
    let second = (m + h.conj()) / den;
    match mu {
        Extended::Infinite => Ok(second),
        Extended::Finite(mu) => {
            let mu = Complex::new(mu, T::zero());
            Ok((mu - h) / (mu - h.conj()) * second)
        }
    }
}

/// `V_Θ(λ) = (m∞ + μ) Im h / ((μ - Re h) m∞ + μ Re h - |h|²)`, or `Im h / (m∞ + Re h)` for `μ = ∞`.
pub fn impedance_v<T: Scalar, M: MFunction<T>>(p: &SystemParams<T, M>, lambda: Complex<T>) -> Result<Complex<T>> {
    let m = p.m_fn.m(lambda)?;
    impedance_v_from_m(p.h, p.mu, m)
}

pub fn impedance_v_from_m<T: Scalar>(h: Complex<T>, mu: Extended<T>, m: Complex<T>) -> Result<Complex<T>> {
    let (num, den, scale) = match mu {
        Extended::Infinite => {
            let den = m + h.re;
            (Complex::new(h.im, T::zero()), den, T::one() + m.norm() + h.re.abs())
        }
        Extended::Finite(mu) => {
            let num = (m + mu) * h.im;
            let den = m * (mu - h.re) + (mu * h.re - h.norm_sqr());
            let scale = T::one() + (m.norm() + h.norm()) * (mu.abs() + h.norm());
            (num, den, scale)
        }
    };
    if den.norm() <= pole_tolerance::<T>() * scale {
        return Err(Error::PoleOfV { value: den.norm().as_f64() });
    }
    Ok(num / den)
}

/// `V = i (W - 1)/(W + 1)`
pub fn cayley_v_from_w<T: Scalar>(w: Complex<T>) -> Result<Complex<T>> {
    let den = w + T::one();
    if den.norm() <= pole_tolerance::<T>() * (T::one() + w.norm()) {
        return Err(Error::CayleyPole { value: den.norm().as_f64() });
    }
    Ok(Complex::<T>::i() * (w - T::one()) / den)
}

/// `W = (1 - iV)/(1 + iV)`
pub fn cayley_w_from_v<T: Scalar>(v: Complex<T>) -> Result<Complex<T>> {
    let iv = Complex::<T>::i() * v;
    let den = iv + T::one();
    if den.norm() <= pole_tolerance::<T>() * (T::one() + v.norm()) {
        return Err(Error::CayleyPole { value: den.norm().as_f64() });
    }
    Ok((Complex::new(T::one(), T::zero()) - iv) / den)
}

/// Inputs of the closed-form `V_h` values.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VhInputs<T> {
    /// `∫ dσ/(t+1)`
    pub a: T,
    /// `∫ dσ/t`, finite
    pub b: T,
    pub gamma: T,
}

/// `V_h(0)`, `V_h(-∞)` and `1 + V_h(0) V_h(-∞)`.
///
/// A `None` limit marks a pole; the accretivity value then falls back to
/// `γ² + γb + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VhValues<T> {
    pub at_zero: Option<T>,
    pub at_minus_infinity: Option<T>,
    pub accretivity_value: T,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VhReport<T> {
    pub closed_form: VhValues<T>,
    /// From `V_h(z) = i (R - 1)/(R + 1)`, `R = W(z)/W(-1)`, at `z = -ε` and `z = -R`.
    pub numeric: Option<VhValues<T>>,
    /// `(γ² + γb + 1)/b`
    pub cot_alpha: T,
    /// `(1 + bγ)/(b - γ)`
    pub cot_alpha_vh_route: T,
}

fn ratio<T: Scalar>(num: T, den: T) -> Option<T> {
    let tol = pole_tolerance::<T>() * (T::one() + num.abs());
    (den.abs() > tol).then(|| num / den)
}

fn combine<T: Scalar>(at_zero: Option<T>, at_minus_infinity: Option<T>, fallback: T) -> VhValues<T> {
    let accretivity_value = match (at_zero, at_minus_infinity) {
        (Some(z), Some(i)) => T::one() + z * i,
        _ => fallback,
    };
    VhValues { at_zero, at_minus_infinity, accretivity_value }
}

pub const VH_EPSILON: f64 = 1e-6;
pub const VH_RADIUS: f64 = 1e8;

/// Evaluates the `V_h` functional in closed form and, given a system, numerically.
pub fn vh_functional<T: Scalar, M: MFunction<T>>(
    inputs: VhInputs<T>,
    system: Option<&SystemParams<T, M>>,
) -> Result<VhReport<T>> {
    let VhInputs { a, b, gamma } = inputs;
    if !(a.is_finite() && b.is_finite() && gamma.is_finite()) || b < T::zero() {
        return Err(Error::InvalidParams("V_h needs finite a, b >= 0 and gamma".into()));
    }
    if !(b - gamma > T::zero()) {
        return Err(Error::SideConditionViolated { value: (b - gamma).as_f64() });
    }
    if b == T::zero() {
        return Err(Error::InvalidParams("cot alpha is undefined for b = 0".into()));
    }
    let form = accretivity_form(b, gamma);
    let closed_form = combine(
        ratio(a - b, T::one() + a * b),
        ratio(a - gamma, T::one() + a * gamma),
        form,
    );
    let numeric = match system {
        None => None,
        Some(p) => {
            let w_ref = transfer_w(p, Complex::new(-T::one(), T::zero()))?;
            let at = |x: T| -> Result<Option<T>> {
                let r = transfer_w(p, Complex::new(x, T::zero()))? / w_ref;
                Ok(cayley_v_from_w(r).ok().map(|v| v.re))
            };
            Some(combine(at(-T::lit(VH_EPSILON))?, at(-T::lit(VH_RADIUS))?, form))
        }
    };
    Ok(VhReport {
        closed_form,
        numeric,
        cot_alpha: form / b,
        cot_alpha_vh_route: (T::one() + b * gamma) / (b - gamma),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "SampleRepr<T>", from = "SampleRepr<T>")]
#[serde(bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct Sample<T> {
    pub z: Complex<T>,
    pub v_in: Complex<T>,
    pub v_model: Complex<T>,
}

#[derive(Serialize, Deserialize)]
#[allow(non_snake_case)]
struct SampleRepr<T> {
    z_re: T,
    z_im: T,
    V_in: [T; 2],
    V_model: [T; 2],
}

impl<T: Scalar> From<Sample<T>> for SampleRepr<T> {
    fn from(s: Sample<T>) -> Self {
        SampleRepr {
            z_re: s.z.re,
            z_im: s.z.im,
            V_in: [s.v_in.re, s.v_in.im],
            V_model: [s.v_model.re, s.v_model.im],
        }
    }
}

impl<T: Scalar> From<SampleRepr<T>> for Sample<T> {
    fn from(r: SampleRepr<T>) -> Self {
        Sample {
            z: Complex::new(r.z_re, r.z_im),
            v_in: Complex::new(r.V_in[0], r.V_in[1]),
            v_model: Complex::new(r.V_model[0], r.V_model[1]),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct VerificationReport<T> {
    pub max_residual: T,
    /// `|η(h, μ) - θ|`; absent when `μ = Re h`.
    pub eta_residual: Option<T>,
    pub samples: Vec<Sample<T>>,
    pub tolerance: T,
    pub pass: bool,
}

pub const VERIFY_TOLERANCE: f64 = 1e-6;

/// Compares `V_Θ` of the system against `V` on the sample points.
pub fn verify_realization<T: Scalar, M: MFunction<T>>(
    f: &StieltjesLikeFunction<T>,
    p: &SystemParams<T, M>,
    sample_z: &[Complex<T>],
    tol: T,
) -> Result<VerificationReport<T>> {
    let mut samples = Vec::with_capacity(sample_z.len());
    let mut max_residual = T::zero();
    for &z in sample_z {
        let v_in = f.eval(z)?;
        let v_model = impedance_v(p, z)?;
        max_residual = max_residual.max((v_model - v_in).norm());
        samples.push(Sample { z, v_in, v_model });
    }
    let eta_residual = p.eta().map(|eta| (eta - p.theta_expected).abs());
    let pass = max_residual < tol && eta_residual.is_none_or(|e| e < tol);
    Ok(VerificationReport { max_residual, eta_residual, samples, tolerance: tol, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::SpectralMeasure;
    use crate::stieltjes::verification_grid;
    use crate::weyl::ConstantPotentialM;
    use std::f64::consts::FRAC_1_PI;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn free() -> ConstantPotentialM<f64> {
        ConstantPotentialM { value: 0.0 }
    }

    fn example_params() -> SystemParams<f64, ConstantPotentialM<f64>> {
        SystemParams::new(c(0.0, 1.0), Extended::Infinite, free(), 0.0).unwrap()
    }

    fn free_term_params(g: f64) -> SystemParams<f64, ConstantPotentialM<f64>> {
        let d = 1.0 + g * g;
        SystemParams::new(c(g / d, 1.0 / d), Extended::Finite(1.0 / g), free(), 0.0).unwrap()
    }

    #[test]
    fn transfer_example() {
        let w = transfer_w(&example_params(), c(-1.0, 0.0)).unwrap();
        assert!((w - c(0.0, -1.0)).norm() < 1e-15);
        assert!((cayley_v_from_w(w).unwrap() - 1.0).norm() < 1e-15);
    }

    #[test]
    fn unit_modulus_for_real_m() {
        for mu in [Extended::Infinite, Extended::Finite(3.0), Extended::Finite(-0.5)] {
            let p = SystemParams::new(c(0.3, 0.7), mu, free(), 0.0).unwrap();
            for x in [-0.1, -1.0, -30.0] {
                assert!((transfer_w(&p, c(x, 0.0)).unwrap().norm() - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn rejects_real_h() {
        assert!(SystemParams::new(c(1.0, 0.0), Extended::Infinite, free(), 0.0).is_err());
    }

    #[test]
    fn impedance_examples() {
        let p = example_params();
        for z in verification_grid::<f64>() {
            let v = impedance_v(&p, z).unwrap();
            assert!((v - Complex::<f64>::i() / crate::scalar::sqrt_cut_positive(z)).norm() < 1e-13);
        }
        for g in [0.25, 0.5, 1.0, 2.0] {
            let v = impedance_v(&free_term_params(g), c(-1.0, 0.0)).unwrap();
            assert!((v - (g + 1.0)).norm() < 1e-13);
        }
    }

    #[test]
    fn cayley_values() {
        assert!((cayley_v_from_w(c(0.0, -1.0)).unwrap() - 1.0).norm() < 1e-15);
        assert_eq!(cayley_w_from_v(c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert!(matches!(cayley_v_from_w(c(-1.0, 0.0)), Err(Error::CayleyPole { .. })));
        assert!(matches!(cayley_w_from_v(c(0.0, 1.0)), Err(Error::CayleyPole { .. })));
    }

    #[test]
    fn large_mu_approaches_infinite_mu() {
        let h = c(0.4, 1.3);
        let lambda = c(-2.0, 0.5);
        let limit = transfer_w(&SystemParams::new(h, Extended::Infinite, free(), 0.0).unwrap(), lambda).unwrap();
        let mut prev = f64::INFINITY;
        for k in 1..=8 {
            let p = SystemParams::new(h, Extended::Finite(10f64.powi(k)), free(), 0.0).unwrap();
            let d = (transfer_w(&p, lambda).unwrap() - limit).norm();
            assert!(d < prev);
            prev = d;
        }
        assert!(prev < 1e-7);
    }

    #[test]
    fn vh_closed_forms() {
        let r = vh_functional::<f64, ConstantPotentialM<f64>>(VhInputs { a: 1.0, b: 2.0, gamma: 0.0 }, None).unwrap();
        assert!((r.closed_form.at_zero.unwrap() + 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(r.closed_form.at_minus_infinity, Some(1.0));
        assert!((r.closed_form.accretivity_value - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!((r.cot_alpha, r.cot_alpha_vh_route), (0.5, 0.5));

        let r = vh_functional::<f64, ConstantPotentialM<f64>>(VhInputs { a: 1.0, b: 2.0, gamma: -1.0 }, None).unwrap();
        assert_eq!(r.closed_form.at_minus_infinity, None);
        assert_eq!(r.closed_form.accretivity_value, 0.0);

        let err = vh_functional::<f64, ConstantPotentialM<f64>>(VhInputs { a: 1.0, b: 2.0, gamma: 2.0 }, None);
        assert!(matches!(err, Err(Error::SideConditionViolated { .. })));
    }

    #[test]
    fn vh_numeric_matches_impedance_difference_quotient() {
        let p = SystemParams::new(c(0.2, 0.9), Extended::Finite(4.0), ConstantPotentialM { value: 1.0 }, 0.0).unwrap();
        let r = vh_functional(VhInputs { a: 0.5, b: 1.0, gamma: 0.1 }, Some(&p)).unwrap();
        let n = r.numeric.unwrap();
        let v = |x: f64| impedance_v(&p, c(x, 0.0)).unwrap().re;
        let expected = |x: f64| (v(x) - v(-1.0)) / (1.0 + v(x) * v(-1.0));
        assert!((n.at_zero.unwrap() - expected(-VH_EPSILON)).abs() < 1e-10);
        assert!((n.at_minus_infinity.unwrap() - expected(-VH_RADIUS)).abs() < 1e-10);
    }

    #[test]
    fn verification_detects_perturbation() {
        let f = StieltjesLikeFunction::new(SpectralMeasure::power_law(FRAC_1_PI, -0.5).unwrap(), 0.0);
        let grid = verification_grid::<f64>();
        let report = verify_realization(&f, &example_params(), &grid, VERIFY_TOLERANCE).unwrap();
        assert!(report.pass, "{}", report.max_residual);
        assert_eq!(report.samples.len(), 20);
        let bad = SystemParams::new(c(0.1, 1.0), Extended::Infinite, free(), 0.0).unwrap();
        let report = verify_realization(&f, &bad, &grid, VERIFY_TOLERANCE).unwrap();
        assert!(!report.pass && report.max_residual > 1e-2);

        let json = serde_json::to_value(&report).unwrap();
        assert!(json["samples"][0]["V_in"].is_array());
        let back: VerificationReport<f64> = serde_json::from_value(json).unwrap();
        assert_eq!(back, report);
    }
}
