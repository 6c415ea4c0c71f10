//! Restoration of the boundary parameter `h` and extension parameter `μ`.
//!
//! Everything here is closed-form algebra in the moment `b = ∫ dσ/t`, the
//! free term `γ`, the quasi-kernel parameter `θ`, the Weyl limit
//! `m = m∞(-0)` and, when `b = ∞`, the scale `ξ = (1/c) ∫ dσ/(1+t²)`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Extended, Scalar};
use crate::stieltjes::StieltjesLikeFunction;
use crate::weyl::OperatorData;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FunctionClass {
    /// `∫ dσ/t = ∞`
    SL0K,
    /// `∫ dσ/t < ∞`
    SL01K,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassTag {
    pub class: FunctionClass,
    /// The free term is nonnegative, so the function is a genuine Stieltjes function.
    pub stieltjes: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Accretivity {
    pub accretive: bool,
    pub strict: bool,
}

/// The quadratic form `γ² + γ b + 1` whose sign decides accretivity.
pub fn accretivity_form<T: Scalar>(b: T, gamma: T) -> T {
    gamma * gamma + gamma * b + T::one()
}

/// Exact accretivity test of the restored operator.
pub fn accretivity<T: Scalar>(b: Extended<T>, gamma: T) -> Accretivity {
    accretivity_within(b, gamma, T::zero())
}

/// Like [`accretivity`], but treats `|γ² + γb + 1| <= tol` as the extremal
/// boundary. Used when `b` carries a quadrature error.
pub fn accretivity_within<T: Scalar>(b: Extended<T>, gamma: T, tol: T) -> Accretivity {
    let d = match b {
        Extended::Finite(b) => accretivity_form(b, gamma),
        Extended::Infinite => gamma,
    };
    if d.abs() <= tol {
        Accretivity { accretive: true, strict: false }
    } else {
        Accretivity { accretive: d > T::zero(), strict: d > T::zero() }
    }
}

/// Set of free terms `γ` giving an accretive restored operator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GammaSet<T> {
    /// Every real `γ` (`b < 2`).
    All,
    /// `(-∞, lower] ∪ [upper, ∞)` with `lower <= upper` (`b >= 2`).
    Rays { lower: T, upper: T },
    /// `[0, ∞)` (`b = ∞`).
    NonNegative,
}

impl<T: Scalar> GammaSet<T> {
    pub fn contains(&self, gamma: T) -> bool {
        match *self {
            GammaSet::All => true,
            GammaSet::Rays { lower, upper } => gamma <= lower || gamma >= upper,
            GammaSet::NonNegative => gamma >= T::zero(),
        }
    }

    /// True when the set is the whole real line (including `b = 2`, where the
    /// two rays share the endpoint `-1`).
    pub fn is_all_reals(&self) -> bool {
        match *self {
            GammaSet::All => true,
            GammaSet::Rays { lower, upper } => lower >= upper,
            GammaSet::NonNegative => false,
        }
    }
}

pub fn gamma_admissible<T: Scalar>(b: Extended<T>) -> GammaSet<T> {
    let two = T::lit(2.0);
    match b {
        Extended::Infinite => GammaSet::NonNegative,
        Extended::Finite(b) if b < two => GammaSet::All,
        Extended::Finite(b) => {
            let root = (b * b - T::lit(4.0)).max(T::zero()).sqrt();
            GammaSet::Rays { lower: (-b - root) / two, upper: (-b + root) / two }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Sectoriality<T> {
    /// α-sectorial with the given angle in `(0, π/2)`.
    Sectorial(T),
    Extremal,
    NonAccretive,
}

impl<T: Scalar> Sectoriality<T> {
    pub fn angle(&self) -> Option<T> {
        match *self {
            Sectoriality::Sectorial(a) => Some(a),
            _ => None,
        }
    }
}

pub fn sectoriality_angle<T: Scalar>(b: Extended<T>, gamma: T) -> Sectoriality<T> {
    sectoriality_angle_within(b, gamma, T::zero())
}

pub fn sectoriality_angle_within<T: Scalar>(b: Extended<T>, gamma: T, tol: T) -> Sectoriality<T> {
    let acc = accretivity_within(b, gamma, tol);
    if !acc.accretive {
        return Sectoriality::NonAccretive;
    }
    if !acc.strict {
        return Sectoriality::Extremal;
    }
    match b {
        Extended::Finite(b) => Sectoriality::Sectorial((b / accretivity_form(b, gamma)).atan()),
        Extended::Infinite => Sectoriality::Sectorial((T::one() / gamma).atan()),
    }
}

/// Free term and angle of the most sectorial restored operator, `0 < b < 2`.
pub fn max_sectoriality<T: Scalar>(b: T) -> Result<(T, T)> {
    let two = T::lit(2.0);
    if !(b > T::zero() && b < two) {
        return Err(Error::OutOfRange(format!("maximal sectoriality needs 0 < b < 2, got b = {b}")));
    }
    let gamma = -b / two;
    let alpha = (b / (T::one() - b * b / T::lit(4.0))).atan();
    Ok((gamma, alpha))
}

/// Tolerance used when checking `θ = -m` in the `b = ∞` case.
pub fn theta_tolerance<T: Scalar>(m: T) -> T {
    T::lit(1e-8) * (T::one() + m.abs())
}

fn require_xi<T: Scalar>(xi: Option<T>) -> Result<T> {
    let xi = xi.ok_or(Error::MissingXi)?;
    if xi > T::zero() {
        Ok(xi)
    } else {
        Err(Error::DegenerateImaginaryPart { value: xi.as_f64() })
    }
}

fn require_positive_scale<T: Scalar>(b: T, theta: T, m: T) -> Result<T> {
    let c = (theta + m) * b;
    if c > T::zero() {
        Ok(c)
    } else {
        Err(Error::DegenerateImaginaryPart { value: c.as_f64() })
    }
}

fn check_theta<T: Scalar>(theta: T, m: T) -> Result<()> {
    if (theta + m).abs() > theta_tolerance(m) {
        return Err(Error::ThetaMismatch { theta: theta.as_f64(), neg_m: (-m).as_f64() });
    }
    Ok(())
}

/// Restored boundary parameter `h = x + iy`.
pub fn restore_h<T: Scalar>(b: Extended<T>, gamma: T, theta: T, m: T, xi: Option<T>) -> Result<Complex<T>> {
    let denom = T::one() + gamma * gamma;
    match b {
        Extended::Finite(b) => {
            let c = require_positive_scale(b, theta, m)?;
            Ok(Complex::new(theta + gamma * c / denom, c / denom))
        }
        Extended::Infinite => {
            let xi = require_xi(xi)?;
            check_theta(theta, m)?;
            Ok(Complex::new(-m + gamma * xi / denom, xi / denom))
        }
    }
}

/// Extension parameter `μ = Re h + Im h / γ`, infinite at `γ = 0`.
pub fn restore_mu<T: Scalar>(h: Complex<T>, gamma: T) -> Extended<T> {
    if gamma == T::zero() {
        Extended::Infinite
    } else {
        Extended::Finite(h.re + h.im / gamma)
    }
}

/// Boundary parameter `η` of the quasi-kernel of the extension `(h, μ)`.
///
/// `None` when `μ` is too close to `Re h` for the quotient to be meaningful.
pub fn quasi_kernel_eta<T: Scalar>(h: Complex<T>, mu: Extended<T>) -> Option<T> {
    match mu {
        Extended::Infinite => Some(h.re),
        Extended::Finite(mu) => {
            let gap = mu - h.re;
            if gap.abs() < T::lit(1e-8) * (T::one() + mu.abs()) {
                None
            } else {
                Some((mu * h.re - h.norm_sqr()) / gap)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Circle<T> {
    pub center: Complex<T>,
    pub radius: T,
    /// Points of the circle not attained for any finite `γ`.
    pub excluded: Vec<Complex<T>>,
}

impl<T: Scalar> Circle<T> {
    /// `| |h - center|² - radius² |`
    pub fn residual(&self, h: Complex<T>) -> T {
        ((h - self.center).norm_sqr() - self.radius * self.radius).abs()
    }
}

/// Circle traced by `h` as `γ` runs over the real line.
pub fn h_locus<T: Scalar>(b: Extended<T>, theta: T, m: T, xi: Option<T>) -> Result<Circle<T>> {
    let two = T::lit(2.0);
    match b {
        Extended::Finite(b) => {
            let c = require_positive_scale(b, theta, m)?;
            Ok(Circle {
                center: Complex::new(theta, c / two),
                radius: c / two,
                excluded: vec![Complex::new(theta, T::zero())],
            })
        }
        Extended::Infinite => {
            let xi = require_xi(xi)?;
            check_theta(theta, m)?;
            Ok(Circle {
                center: Complex::new(-m, xi / two),
                radius: xi / two,
                excluded: vec![Complex::new(-m, T::zero())],
            })
        }
    }
}

/// `γ ↦ μ(γ) = offset + numerator / γ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Hyperbola<T> {
    pub offset: T,
    pub numerator: T,
    /// The `γ` at which `μ = 0`, if any.
    pub zero_crossing: Option<T>,
}

impl<T: Scalar> Hyperbola<T> {
    pub fn mu_at(&self, gamma: T) -> Extended<T> {
        if gamma == T::zero() {
            Extended::Infinite
        } else {
            Extended::Finite(self.offset + self.numerator / gamma)
        }
    }
}

pub fn mu_locus<T: Scalar>(b: Extended<T>, theta: T, m: T, xi: Option<T>) -> Result<Hyperbola<T>> {
    let (offset, numerator) = match b {
        Extended::Finite(b) => (theta, require_positive_scale(b, theta, m)?),
        Extended::Infinite => {
            let xi = require_xi(xi)?;
            check_theta(theta, m)?;
            (-m, xi)
        }
    };
    let zero_crossing = if offset != T::zero() { Some(-numerator / offset) } else { None };
    Ok(Hyperbola { offset, numerator, zero_crossing })
}

/// Evenly spaced free terms `lo, ..., hi` (`n` values, inclusive).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaRange<T> {
    pub lo: T,
    pub hi: T,
    pub n: usize,
}

impl<T: Scalar> GammaRange<T> {
    pub fn values(&self) -> Vec<T> {
        match self.n {
            0 => Vec::new(),
            1 => vec![self.lo],
            n => {
                let step = (self.hi - self.lo) / T::from_usize(n - 1).unwrap_or_else(T::one);
                (0..n)
                    .map(|i| if i == n - 1 { self.hi } else { self.lo + step * T::from_usize(i).unwrap_or_else(T::zero) })
                    .collect()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct SweepRow<T> {
    pub gamma: T,
    pub h: Complex<T>,
    pub mu: Extended<T>,
    pub sectoriality: Sectoriality<T>,
    pub accretive: bool,
    pub circle_residual: T,
    /// `|η(h, μ) - θ|`, absent when `μ ≈ Re h`.
    pub eta_residual: Option<T>,
}

impl<T: Serialize> Serialize for Sectoriality<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Sectoriality::Sectorial(a) => a.serialize(s),
            Sectoriality::Extremal => s.serialize_str("extremal"),
            Sectoriality::NonAccretive => s.serialize_str("none"),
        }
    }
}

impl<'de, T: Deserialize<'de>> Deserialize<'de> for Sectoriality<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr<T> {
            Angle(T),
            Tag(String),
        }
        match Repr::deserialize(d)? {
            Repr::Angle(a) => Ok(Sectoriality::Sectorial(a)),
            Repr::Tag(t) if t == "extremal" => Ok(Sectoriality::Extremal),
            Repr::Tag(t) if t == "none" => Ok(Sectoriality::NonAccretive),
            Repr::Tag(t) => Err(serde::de::Error::custom(format!("unknown sectoriality \"{t}\""))),
        }
    }
}

/// Restores `(h, μ)` along a range of free terms, with identity residuals.
pub fn sweep<T: Scalar>(
    b: Extended<T>,
    theta: T,
    m: T,
    xi: Option<T>,
    range: GammaRange<T>,
) -> Result<Vec<SweepRow<T>>> {
    let gammas = range.values();
    if gammas.is_empty() {
        return Ok(Vec::new());
    }
    let circle = h_locus(b, theta, m, xi)?;
    let theta_eff = if b.is_infinite() { -m } else { theta };
    gammas
        .into_iter()
        .map(|gamma| {
            let h = restore_h(b, gamma, theta, m, xi)?;
            let mu = restore_mu(h, gamma);
            let sectoriality = sectoriality_angle(b, gamma);
            Ok(SweepRow {
                gamma,
                h,
                mu,
                sectoriality,
                accretive: !matches!(sectoriality, Sectoriality::NonAccretive),
                circle_residual: circle.residual(h),
                eta_residual: quasi_kernel_eta(h, mu).map(|eta| (eta - theta_eff).abs()),
            })
        })
        .collect()
}

/// Outcome of the full restoration pipeline.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct RestoredSystem<T> {
    pub h: Complex<T>,
    pub mu: Extended<T>,
    pub alpha: Option<T>,
    pub accretive: bool,
    pub sectorial: bool,
    pub extremal: bool,
    pub class_tag: ClassTag,
    pub gamma: T,
    pub b: Extended<T>,
    pub theta: T,
    pub m: T,
    pub xi: Option<T>,
}

/// Classifies `f`, decides accretivity and restores `(h, μ)` from the
/// moments of its measure and the operator data.
pub fn restore_system<T: Scalar>(f: &StieltjesLikeFunction<T>, op: &OperatorData<T>) -> Result<RestoredSystem<T>> {
    let gamma = f.gamma;
    let class_tag = f.sigma.classify(gamma)?;
    let moments = f.sigma.moments()?;
    let m = op.m;
    let (theta, xi) = match moments.b {
        Extended::Finite(_) => (op.theta.ok_or(Error::MissingTheta)?, op.xi_for(moments.i2)),
        Extended::Infinite => {
            let theta = op.theta.unwrap_or(-m);
            check_theta(theta, m)?;
            (theta, Some(op.xi_for(moments.i2).ok_or(Error::MissingXi)?))
        }
    };
    // The quadratic form inherits |γ| * err_b from the moment.
    let tol = gamma.abs() * moments.err_b
        + T::lit(8.0) * T::epsilon() * (T::one() + gamma * gamma + gamma.abs() * moments.b.finite().unwrap_or(T::zero()));
    let sectoriality = sectoriality_angle_within(moments.b, gamma, tol);
    let h = restore_h(moments.b, gamma, theta, m, xi)?;
    let mu = restore_mu(h, gamma);
    Ok(RestoredSystem {
        h,
        mu,
        alpha: sectoriality.angle(),
        accretive: !matches!(sectoriality, Sectoriality::NonAccretive),
        sectorial: matches!(sectoriality, Sectoriality::Sectorial(_)),
        extremal: matches!(sectoriality, Sectoriality::Extremal),
        class_tag,
        gamma,
        b: moments.b,
        theta,
        m,
        xi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const INF: Extended<f64> = Extended::Infinite;

    fn fin(x: f64) -> Extended<f64> {
        Extended::Finite(x)
    }

    #[test]
    fn accretivity_examples() {
        assert_eq!(accretivity(fin(2.0), -1.0), Accretivity { accretive: true, strict: false });
        for g in [-100.0, -1.0, -0.5, 0.0, 3.0] {
            assert_eq!(accretivity(fin(1.0), g), Accretivity { accretive: true, strict: true });
        }
        assert_eq!(accretivity(INF, -0.1), Accretivity { accretive: false, strict: false });
        assert_eq!(accretivity(INF, 0.0), Accretivity { accretive: true, strict: false });
        assert_eq!(accretivity(fin(3.0), -1.0), Accretivity { accretive: false, strict: false });
    }

    #[test]
    fn gamma_admissible_examples() {
        let set = gamma_admissible(fin(2.0));
        assert_eq!(set, GammaSet::Rays { lower: -1.0, upper: -1.0 });
        assert!(set.is_all_reals());

        let GammaSet::Rays { lower, upper } = gamma_admissible(fin(2.5)) else { panic!() };
        assert!((lower + 2.0).abs() < 1e-15 && (upper + 0.5).abs() < 1e-15);
        for r in [lower, upper] {
            assert!(accretivity_form(2.5, r).abs() < 1e-15);
        }
        assert!(!gamma_admissible(fin(2.5)).contains(-1.0));
        assert_eq!(gamma_admissible(INF), GammaSet::NonNegative);
        assert_eq!(gamma_admissible(fin(1.0)), GammaSet::All);
    }

    #[test]
    fn sectoriality_examples() {
        let a = sectoriality_angle(INF, 1.0).angle().unwrap();
        assert!((a - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert_eq!(sectoriality_angle(fin(2.0), -1.0), Sectoriality::Extremal);
        assert_eq!(sectoriality_angle(INF, 0.0), Sectoriality::Extremal);
        assert_eq!(sectoriality_angle(INF, -1.0), Sectoriality::NonAccretive);
        let a = sectoriality_angle(fin(1.0), -0.5).angle().unwrap();
        assert!((a - (4.0f64 / 3.0).atan()).abs() < 1e-15);
    }

    #[test]
    fn max_sectoriality_matches_brute_force() {
        let (g, a) = max_sectoriality(1.0).unwrap();
        assert_eq!(g, -0.5);
        assert!((a - (4.0f64 / 3.0).atan()).abs() < 1e-15);
        assert!(max_sectoriality(1e-9).unwrap().1 < 1e-8);
        assert!(max_sectoriality(2.0).is_err());
        for b in [0.5, 1.0, 1.5] {
            // dense scan of arctan(b / (γ² + γb + 1)) over γ
            let mut best = (0.0, f64::MIN);
            for i in 0..=400_000 {
                let gamma = -4.0 + 8.0 * i as f64 / 400_000.0;
                let v = (b / accretivity_form(b, gamma)).atan();
                if v > best.1 {
                    best = (gamma, v);
                }
            }
            let (g, a) = max_sectoriality(b).unwrap();
            assert!((g - best.0).abs() < 1e-4);
            assert!((a - best.1).abs() < 1e-9);
            assert_eq!(sectoriality_angle(fin(b), g).angle().unwrap(), a);
        }
    }

    #[test]
    fn restore_h_examples() {
        let (theta, m) = (0.7, 0.3);
        let h = restore_h(fin(2.0), -1.0, theta, m, None).unwrap();
        assert!((h - Complex::new(-m, theta + m)).norm() < 1e-15);

        let h = restore_h(INF, 0.0, 0.0, 0.0, Some(1.0)).unwrap();
        assert_eq!(h, Complex::new(0.0, 1.0));

        let h = restore_h(fin(1.0), 0.0, 1.0, 0.5, None).unwrap();
        assert_eq!(h, Complex::new(1.0, 1.5));
        // linear relation x - γy = θ and the circle through it
        assert_eq!(h.re - 0.0 * h.im, 1.0);
        assert!(h_locus(fin(1.0), 1.0, 0.5, None).unwrap().residual(h) < 1e-15);
    }

    #[test]
    fn restore_h_errors() {
        assert!(matches!(restore_h(fin(1.0), 0.0, -1.0, 0.5, None), Err(Error::DegenerateImaginaryPart { .. })));
        assert_eq!(restore_h(INF, 0.0, 0.0, 0.0, None), Err(Error::MissingXi));
        assert!(matches!(restore_h(INF, 0.0, 0.0, 0.0, Some(-1.0)), Err(Error::DegenerateImaginaryPart { .. })));
        assert!(matches!(restore_h(INF, 0.0, 0.5, 0.0, Some(1.0)), Err(Error::ThetaMismatch { .. })));
    }

    #[test]
    fn restore_mu_examples() {
        let (theta, m) = (0.7, 0.3);
        let h = restore_h(fin(2.0), -1.0, theta, m, None).unwrap();
        assert!((restore_mu(h, -1.0).finite().unwrap() + (theta + 2.0 * m)).abs() < 1e-14);
        assert_eq!(restore_mu(Complex::new(0.0, 1.0), 0.0), INF);
        let (xi, m, gamma) = (1.3, 0.4, 0.8);
        let h = restore_h(INF, gamma, -m, m, Some(xi)).unwrap();
        let mu = restore_mu(h, gamma).finite().unwrap();
        assert!((mu - (-m + xi / gamma)).abs() < 1e-14);
    }

    #[test]
    fn locus_examples() {
        let c = h_locus(INF, 0.0, 0.0, Some(1.0)).unwrap();
        assert_eq!((c.center, c.radius), (Complex::new(0.0, 0.5), 0.5));

        let c = h_locus(fin(2.0), 1.0, 0.0, None).unwrap();
        assert_eq!((c.center, c.radius), (Complex::new(1.0, 1.0), 1.0));
        assert_eq!(c.excluded, vec![Complex::new(1.0, 0.0)]);
        for i in 0..100 {
            let gamma = -50.0 + i as f64;
            let h = restore_h(fin(2.0), gamma, 1.0, 0.0, None).unwrap();
            assert!(c.residual(h) < 1e-12);
        }
        assert!(h_locus(fin(2.0), 1.0, -1.0, None).is_err());

        let hyp = mu_locus(INF, 0.0, 0.0, Some(1.0)).unwrap();
        assert_eq!(hyp.mu_at(0.25), fin(4.0));
        assert_eq!(hyp.zero_crossing, None);

        let hyp = mu_locus(fin(2.5), 1.0, 1.0, None).unwrap();
        let GammaSet::Rays { upper, .. } = gamma_admissible(fin(2.5)) else { panic!() };
        assert!((hyp.mu_at(upper).finite().unwrap() + 9.0).abs() < 1e-12);
        let via_h = restore_mu(restore_h(fin(2.5), upper, 1.0, 1.0, None).unwrap(), upper);
        assert!((via_h.finite().unwrap() + 9.0).abs() < 1e-12);
        assert_eq!(hyp.zero_crossing, Some(-5.0));
        assert_eq!(hyp.mu_at(-5.0), fin(0.0));

        let (b, theta, m) = (1.2, 0.4, 0.9);
        let hyp = mu_locus(fin(b), theta, m, None).unwrap();
        let mu = hyp.mu_at(-b / 2.0).finite().unwrap();
        assert!((mu + theta + 2.0 * m).abs() < 1e-14);
    }

    #[test]
    fn sweep_examples() {
        let rows = sweep(INF, 0.0, 0.0, Some(1.0), GammaRange { lo: 0.1, hi: 10.0, n: 100 }).unwrap();
        assert_eq!(rows.len(), 100);
        assert!(rows.iter().all(|r| r.circle_residual < 1e-12));
        assert_eq!(rows.last().unwrap().gamma, 10.0);

        let rows = sweep(fin(2.0), 1.0, 0.0, None, GammaRange { lo: -3.0, hi: 1.0, n: 5 }).unwrap();
        let at_minus_one = rows.iter().find(|r| r.gamma == -1.0).unwrap();
        assert_eq!(at_minus_one.sectoriality, Sectoriality::Extremal);

        assert!(sweep(fin(2.0), 1.0, 0.0, None, GammaRange { lo: 0.0, hi: 1.0, n: 0 }).unwrap().is_empty());
    }

    #[test]
    fn eta_degenerate_is_unavailable() {
        let h = Complex::new(1.0, 1.0);
        assert_eq!(quasi_kernel_eta(h, fin(1.0 + 1e-12)), None);
        assert_eq!(quasi_kernel_eta(h, INF), Some(1.0));
    }

    #[test]
    fn single_precision_restore() {
        let h = restore_h(Extended::<f32>::Infinite, 0.5, 0.0, 0.0, Some(1.0)).unwrap();
        assert!((h - Complex::new(0.4_f32, 0.8)).norm() < 1e-6);
    }

    proptest! {
        #[test]
        fn finite_b_identities(b in 0.05f64..10.0, theta in -3.0f64..3.0, shift in 0.05f64..3.0, gamma in -20.0f64..20.0) {
            let m = shift - theta;
            let h = restore_h(fin(b), gamma, theta, m, None).unwrap();
            prop_assert!(h.im > 0.0);
            let circle = h_locus(fin(b), theta, m, None).unwrap();
            prop_assert!(circle.residual(h) < 1e-10 * (1.0 + circle.radius * circle.radius));
            prop_assert!((h.re - gamma * h.im - theta).abs() < 1e-10 * (1.0 + theta.abs() + (gamma * h.im).abs()));
            if let Sectoriality::Sectorial(alpha) = sectoriality_angle(fin(b), gamma) {
                let tan = h.im / (h.re + m);
                prop_assert!((alpha.tan() - tan).abs() < 1e-9 * (1.0 + tan.abs()));
            }
            if gamma.abs() > 1e-3 {
                let mu = restore_mu(h, gamma).finite().unwrap();
                let via = mu_locus(fin(b), theta, m, None).unwrap().mu_at(gamma).finite().unwrap();
                prop_assert!((mu - via).abs() < 1e-10 * (1.0 + mu.abs()));
                if let Some(eta) = quasi_kernel_eta(h, Extended::Finite(mu)) {
                    prop_assert!((eta - theta).abs() < 1e-8 * (1.0 + mu.abs()));
                }
            }
        }
    }
}
