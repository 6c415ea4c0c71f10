//! Globally adaptive Gauss–Kronrod (7/15) quadrature with bisection.
//!
//! The integrand may be real or complex valued. The panel with the largest
//! error estimate is bisected until the summed estimate meets the tolerance
//! or the panel budget runs out.

#![allow(clippy::excessive_precision)]

use std::ops::{Add, Mul, Sub};

use num_complex::Complex;
use num_traits::Zero;

use crate::scalar::Scalar;

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

// Gauss weights for the odd Kronrod abscissae (index 1, 3, 5 and the center).
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Values a quadrature rule can accumulate.
pub trait QuadValue<T>:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<T, Output = Self> + Zero
{
    fn magnitude(self) -> T;
}

impl<T: Scalar> QuadValue<T> for T {
    fn magnitude(self) -> T {
        self.abs()
    }
}

impl<T: Scalar> QuadValue<T> for Complex<T> {
    fn magnitude(self) -> T {
        self.norm()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadConfig<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_panels: usize,
}

impl<T: Scalar> Default for QuadConfig<T> {
    fn default() -> Self {
        QuadConfig {
            abs_tol: T::lit(1e-12),
            rel_tol: T::lit(1e-13),
            max_panels: 4000,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Estimate<V, T> {
    pub value: V,
    pub error: T,
    pub panels: usize,
    pub converged: bool,
}

struct Panel<V, T> {
    lo: T,
    hi: T,
    value: V,
    error: T,
    splittable: bool,
}

fn kronrod<T, V, F>(f: &F, lo: T, hi: T) -> (V, T)
where
    T: Scalar,
    V: QuadValue<T>,
    F: Fn(T) -> V,
{
    let two = T::lit(2.0);
    let center = (lo + hi) / two;
    let half = (hi - lo) / two;
    let fc = f(center);
    let mut kron = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    for j in 0..7 {
        let dx = half * T::lit(XGK[j]);
        let pair = f(center - dx) + f(center + dx);
        kron = kron + pair * T::lit(WGK[j]);
        if j % 2 == 1 {
            gauss = gauss + pair * T::lit(WG[j / 2]);
        }
    }
    let value = kron * half;
    let error = ((kron - gauss) * half).magnitude();
    (value, error)
}

/// Integrates `f` over `[lo, hi]`. Never evaluates `f` at the endpoints.
pub fn integrate<T, V, F>(f: F, lo: T, hi: T, cfg: &QuadConfig<T>) -> Estimate<V, T>
where
    T: Scalar,
    V: QuadValue<T>,
    F: Fn(T) -> V,
{
    if lo == hi {
        return Estimate { value: V::zero(), error: T::zero(), panels: 0, converged: true };
    }
    let min_width = T::epsilon() * T::lit(64.0);
    let make = |lo: T, hi: T| {
        let (value, error) = kronrod(&f, lo, hi);
        let scale = lo.abs().max(hi.abs()).max(T::min_positive_value());
        Panel { lo, hi, value, error, splittable: (hi - lo).abs() > min_width * scale }
    };
    let mut panels = vec![make(lo, hi)];
    loop {
        let mut total = V::zero();
        let mut err = T::zero();
        for p in &panels {
            total = total + p.value;
            err = err + p.error;
        }
        let tol = cfg.abs_tol.max(cfg.rel_tol * total.magnitude());
        let worst = panels
            .iter()
            .enumerate()
            .filter(|(_, p)| p.splittable)
            .max_by(|a, b| a.1.error.partial_cmp(&b.1.error).unwrap_or(std::cmp::Ordering::Equal))
            .map(|(i, _)| i);
        let done = err <= tol;
        if done || worst.is_none() || panels.len() >= cfg.max_panels {
            return Estimate { value: total, error: err, panels: panels.len(), converged: done };
        }
        let p = panels.swap_remove(worst.unwrap_or_default());
        let mid = (p.lo + p.hi) / T::lit(2.0);
        panels.push(make(p.lo, mid));
        panels.push(make(mid, p.hi));
    }
}
