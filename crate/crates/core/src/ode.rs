//! Dormand–Prince 5(4) integrator for small complex linear systems.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OdeConfig<T> {
    pub rtol: T,
    pub atol: T,
    pub max_steps: usize,
}

impl<T: Scalar> OdeConfig<T> {
    pub fn with_tolerance(tol: T) -> Self {
        OdeConfig { rtol: tol, atol: tol * T::lit(1e-3), max_steps: 200_000 }
    }
}

impl<T: Scalar> Default for OdeConfig<T> {
    fn default() -> Self {
        OdeConfig::with_tolerance(T::lit(1e-9))
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// Difference between the 5th and embedded 4th order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

type State<T, const N: usize> = [Complex<T>; N];

fn axpy<T: Scalar, const N: usize>(y: &State<T, N>, h: T, terms: &[(f64, &State<T, N>)]) -> State<T, N> {
    let mut out = *y;
    for (w, k) in terms {
        if *w == 0.0 {
            continue;
        }
        let s = h * T::lit(*w);
        for i in 0..N {
            out[i] = out[i] + k[i] * s;
        }
    }
    out
}

/// Integrates `y' = f(x, y)` from `x0` to `x1` (either direction).
///
/// With `renormalize`, the state is rescaled whenever it grows large; only
/// ratios of components are then meaningful.
pub fn integrate<T, const N: usize, F>(
    f: F,
    x0: T,
    y0: State<T, N>,
    x1: T,
    cfg: &OdeConfig<T>,
    renormalize: bool,
) -> Result<State<T, N>>
where
    T: Scalar,
    F: Fn(T, &State<T, N>) -> State<T, N>,
{
    let span = x1 - x0;
    if span == T::zero() {
        return Ok(y0);
    }
    let dir = span.signum();
    let big = T::lit(1e100);
    let mut x = x0;
    let mut y = y0;
    let mut h = span / T::lit(64.0);
    let mut k1 = f(x, &y);
    let fifth = T::lit(0.2);

    for _ in 0..cfg.max_steps {
        if (x1 - x) * dir <= T::zero() {
            return Ok(y);
        }
        let last = ((x + h) - x1) * dir >= T::zero();
        if last {
            h = x1 - x;
        }
        let k2 = f(x + h * T::lit(C[1]), &axpy(&y, h, &[(A[1][0], &k1)]));
        let k3 = f(x + h * T::lit(C[2]), &axpy(&y, h, &[(A[2][0], &k1), (A[2][1], &k2)]));
        let k4 = f(x + h * T::lit(C[3]), &axpy(&y, h, &[(A[3][0], &k1), (A[3][1], &k2), (A[3][2], &k3)]));
        let k5 = f(
            x + h * T::lit(C[4]),
            &axpy(&y, h, &[(A[4][0], &k1), (A[4][1], &k2), (A[4][2], &k3), (A[4][3], &k4)]),
        );
        let k6 = f(
            x + h * T::lit(C[5]),
            &axpy(&y, h, &[(A[5][0], &k1), (A[5][1], &k2), (A[5][2], &k3), (A[5][3], &k4), (A[5][4], &k5)]),
        );
        let y_new = axpy(
            &y,
            h,
            &[(A[6][0], &k1), (A[6][2], &k3), (A[6][3], &k4), (A[6][4], &k5), (A[6][5], &k6)],
        );
        let x_new = if last { x1 } else { x + h };
        let k7 = f(x_new, &y_new);
        let err_vec = axpy(
            &[Complex::new(T::zero(), T::zero()); N],
            h,
            &[(E[0], &k1), (E[2], &k3), (E[3], &k4), (E[4], &k5), (E[5], &k6), (E[6], &k7)],
        );
        let mut acc = T::zero();
        for i in 0..N {
            let scale = cfg.atol + cfg.rtol * y[i].norm().max(y_new[i].norm());
            let r = err_vec[i].norm() / scale;
            acc = acc + r * r;
        }
        let err = (acc / T::from_usize(N).unwrap_or_else(T::one)).sqrt();
        if !err.is_finite() {
            return Err(Error::OdeStepFailure { x: x.as_f64(), reason: "non-finite state".into() });
        }
        let factor = if err == T::zero() {
            T::lit(5.0)
        } else {
            (T::lit(0.9) * err.powf(-fifth)).max(T::lit(0.2)).min(T::lit(5.0))
        };
        if err <= T::one() {
            x = x_new;
            y = y_new;
            k1 = k7;
            if renormalize {
                let mag = y.iter().fold(T::zero(), |m, c| m.max(c.norm()));
                if mag > big {
                    let inv = T::one() / mag;
                    for c in y.iter_mut() {
                        *c = *c * inv;
                    }
                    for c in k1.iter_mut() {
                        *c = *c * inv;
                    }
                }
            }
        }
        h = h * factor;
        let floor = T::epsilon() * T::lit(16.0) * (T::one() + x.abs());
        if h.abs() < floor {
            return Err(Error::OdeStepFailure { x: x.as_f64(), reason: "step size underflow".into() });
        }
    }
    Err(Error::OdeStepFailure { x: x.as_f64(), reason: "step budget exhausted".into() })
}
