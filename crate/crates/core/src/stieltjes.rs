//! Stieltjes-like functions `V(z) = γ + ∫ dσ(t)/(t - z)`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{Kernel, SpectralMeasure};
use crate::scalar::{Extended, Scalar};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct StieltjesLikeFunction<T> {
    pub sigma: SpectralMeasure<T>,
    /// Free term; any sign.
    pub gamma: T,
}

/// Limits of `V` along the negative real axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Asymptotics<T> {
    /// `V(-∞) = γ`
    pub at_minus_infinity: T,
    /// `V(0) = γ + ∫ dσ/t`
    pub at_zero: Extended<T>,
}

/// Result of sampling an analytic positivity criterion on a grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalyticCheck<T> {
    pub min_value: T,
    pub argmin: Complex<T>,
    pub tolerance: T,
    pub passed: bool,
}

impl<T: Scalar> StieltjesLikeFunction<T> {
    pub fn new(sigma: SpectralMeasure<T>, gamma: T) -> Self {
        StieltjesLikeFunction { sigma, gamma }
    }

    pub fn eval(&self, z: Complex<T>) -> Result<Complex<T>> {
        self.eval_with_error(z).map(|(v, _)| v)
    }

    pub fn eval_with_error(&self, z: Complex<T>) -> Result<(Complex<T>, T)> {
        if z.im == T::zero() && z.re >= T::zero() {
            return Err(Error::PoleOnSupport { module: "stieltjes", re: z.re.as_f64(), im: 0.0 });
        }
        let (r, err) = self.sigma.resolvent(z)?;
        Ok((r + self.gamma, err))
    }

    pub fn asymptotics(&self) -> Result<Asymptotics<T>> {
        let (b, _) = self.sigma.real_integral(Kernel::InvT)?;
        Ok(Asymptotics { at_minus_infinity: self.gamma, at_zero: b.offset(self.gamma) })
    }

    /// Minimum of `Im V(z)` over the grid; passes when it is `>= -tol`.
    pub fn check_herglotz(&self, grid: &[Complex<T>], tol: T) -> Result<AnalyticCheck<T>> {
        self.check(grid, tol, |_, v| v.im)
    }

    /// Minimum of `Im[z V(z)] / Im z` over the grid; passes when it is `>= -tol`.
    pub fn check_stieltjes(&self, grid: &[Complex<T>], tol: T) -> Result<AnalyticCheck<T>> {
        self.check(grid, tol, |z, v| (z * v).im / z.im)
    }

    fn check<F>(&self, grid: &[Complex<T>], tol: T, quantity: F) -> Result<AnalyticCheck<T>>
    where
        F: Fn(Complex<T>, Complex<T>) -> T,
    {
        let mut min_value = T::infinity();
        let mut argmin = Complex::new(T::zero(), T::one());
        for &z in grid {
            if !(z.im > T::zero()) {
                return Err(Error::InvalidGrid { re: z.re.as_f64(), im: z.im.as_f64() });
            }
            let q = quantity(z, self.eval(z)?);
            if q < min_value {
                min_value = q;
                argmin = z;
            }
        }
        Ok(AnalyticCheck { min_value, argmin, tolerance: tol, passed: min_value >= -tol })
    }
}

/// `n_radii × n_args` points `r e^{iφ}` with log-spaced `r ∈ [r_min, r_max]`
/// and `φ = π k / (n_args + 1)`, `k = 1..=n_args`, all strictly inside the
/// upper half-plane.
pub fn log_polar_grid<T: Scalar>(n_radii: usize, n_args: usize, r_min: T, r_max: T) -> Vec<Complex<T>> {
    let (l0, l1) = (r_min.ln(), r_max.ln());
    let mut out = Vec::with_capacity(n_radii * n_args);
    for i in 0..n_radii {
        let frac = if n_radii > 1 {
            T::from_usize(i).unwrap_or_else(T::zero) / T::from_usize(n_radii - 1).unwrap_or_else(T::one)
        } else {
            T::zero()
        };
        let r = (l0 + (l1 - l0) * frac).exp();
        for k in 1..=n_args {
            let phi = T::PI() * T::from_usize(k).unwrap_or_else(T::one) / T::from_usize(n_args + 1).unwrap_or_else(T::one);
            out.push(Complex::from_polar(r, phi));
        }
    }
    out
}

/// The 7 × 7 grid over `|z| ∈ [1e-3, 1e3]`.
pub fn default_grid<T: Scalar>() -> Vec<Complex<T>> {
    log_polar_grid(7, 7, T::lit(1e-3), T::lit(1e3))
}

/// The 20-point (5 radii × 4 angles) verification grid over `|z| ∈ [1e-3, 1e3]`.
pub fn verification_grid<T: Scalar>() -> Vec<Complex<T>> {
    log_polar_grid(5, 4, T::lit(1e-3), T::lit(1e3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{Atom, DensityKind, DensityPiece, MeasureSpec, PowerTail};
    use crate::scalar::sqrt_cut_positive;
    use std::f64::consts::{FRAC_1_PI, FRAC_1_SQRT_2};

    fn example(gamma: f64) -> StieltjesLikeFunction<f64> {
        StieltjesLikeFunction::new(SpectralMeasure::power_law(FRAC_1_PI, -0.5).unwrap(), gamma)
    }

    fn b_two(gamma: f64) -> StieltjesLikeFunction<f64> {
        let sigma = SpectralMeasure::new(MeasureSpec {
            atoms: vec![],
            pieces: vec![],
            tail: Some(PowerTail { threshold: 1.0, coeff: 3.0, exponent: -1.5 }),
            infinite_mass: false,
        })
        .unwrap();
        StieltjesLikeFunction::new(sigma, gamma)
    }

    fn constant(gamma: f64) -> StieltjesLikeFunction<f64> {
        StieltjesLikeFunction::new(SpectralMeasure::empty(), gamma)
    }

    #[test]
    fn example_values() {
        let f = example(0.0);
        let v = f.eval(Complex::new(-1.0, 0.0)).unwrap();
        assert!((v - 1.0).norm() < 1e-8);
        let v = f.eval(Complex::i()).unwrap();
        assert!((v - Complex::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2)).norm() < 1e-8, "{v}");
        assert_eq!(constant(2.5).eval(Complex::new(3.0, 1.0)).unwrap(), Complex::new(2.5, 0.0));
    }

    #[test]
    fn example_matches_closed_form_on_grid() {
        let f = example(0.0);
        for z in verification_grid::<f64>() {
            let closed = Complex::<f64>::i() / sqrt_cut_positive(z);
            assert!((f.eval(z).unwrap() - closed).norm() < 1e-8, "z = {z}");
        }
    }

    #[test]
    fn pole_on_support() {
        assert!(matches!(example(0.0).eval(Complex::new(0.0, 0.0)), Err(Error::PoleOnSupport { .. })));
    }

    #[test]
    fn herglotz_checks() {
        let grid = log_polar_grid(10, 5, 1e-2, 1e2);
        assert_eq!(grid.len(), 50);
        let r = example(0.0).check_herglotz(&grid, 1e-10).unwrap();
        assert!(r.passed && r.min_value > 0.0);

        let r = constant(-5.0).check_herglotz(&grid, 1e-10).unwrap();
        assert!(r.passed);
        assert_eq!(r.min_value, 0.0);

        let bad = SpectralMeasure::new_unchecked(MeasureSpec {
            atoms: vec![Atom { t: 1.0, w: 0.1 }],
            pieces: vec![DensityPiece {
                lo: 0.0,
                hi: 2.0,
                kind: DensityKind::Table { knots: vec![0.0, 1.0, 2.0], values: vec![-1.0, -2.0, -1.0] },
            }],
            tail: None,
            infinite_mass: false,
        });
        let r = StieltjesLikeFunction::new(bad, 0.0).check_herglotz(&grid, 1e-10).unwrap();
        assert!(!r.passed);
    }

    #[test]
    fn herglotz_rejects_lower_half_plane_grid() {
        let err = example(0.0).check_herglotz(&[Complex::new(1.0, -1.0)], 0.0).unwrap_err();
        assert!(matches!(err, Error::InvalidGrid { .. }));
    }

    #[test]
    fn stieltjes_checks() {
        let grid = default_grid::<f64>();
        assert!(example(0.0).check_stieltjes(&grid, 1e-10).unwrap().passed);
        assert!(constant(1.0).check_stieltjes(&grid, 1e-10).unwrap().passed);
        let r = b_two(-1.0).check_stieltjes(&grid, 1e-10).unwrap();
        assert!(!r.passed);
        // along z = -R + i the quotient tends to γ = -1
        let f = b_two(-1.0);
        let z = Complex::new(-1e6, 1.0);
        let q = (z * f.eval(z).unwrap()).im / z.im;
        assert!(q < -0.99);
    }

    #[test]
    fn asymptotics_examples() {
        let a = b_two(-1.0).asymptotics().unwrap();
        assert_eq!(a.at_minus_infinity, -1.0);
        assert!((a.at_zero.finite().unwrap() - 1.0).abs() < 1e-9);
        let a = example(0.0).asymptotics().unwrap();
        assert_eq!((a.at_minus_infinity, a.at_zero), (0.0, Extended::Infinite));
        let a = constant(0.0).asymptotics().unwrap();
        assert_eq!((a.at_minus_infinity, a.at_zero), (0.0, Extended::Finite(0.0)));
    }

    #[test]
    fn approaches_gamma_along_negative_axis() {
        let f = b_two(-1.0);
        let mut prev = f64::INFINITY;
        for k in 1..8 {
            let x = -(10f64.powi(k));
            let d = (f.eval(Complex::new(x, 0.0)).unwrap() - (-1.0)).norm();
            assert!(d < prev);
            prev = d;
        }
        assert!(prev < 1e-6);
    }
}
