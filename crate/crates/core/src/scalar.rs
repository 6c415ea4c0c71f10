//! Scalar abstraction and the extended-real number type.

use std::fmt::{self, Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

/// Gathers the traits the numerical core needs from a floating point type.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into the scalar type.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Square root with the branch cut on `[0, +inf)` and `Im sqrt(z) > 0`
/// everywhere off the cut.
pub fn sqrt_cut_positive<T: Scalar>(z: Complex<T>) -> Complex<T> {
    Complex::<T>::i() * (-z).sqrt()
}

/// An element of `R ∪ {∞}`.
///
/// The single infinite point serves both as `+∞` for nonnegative moments
/// and as the projective infinity of the extension parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Extended<T> {
    Finite(T),
    Infinite,
}

impl<T: Scalar> Extended<T> {
    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        !self.is_finite()
    }

    pub fn finite(&self) -> Option<T> {
        match *self {
            Extended::Finite(x) => Some(x),
            Extended::Infinite => None,
        }
    }

    /// Shifts by a finite amount; infinity absorbs.
    pub fn offset(self, by: T) -> Self {
        match self {
            Extended::Finite(x) => Extended::Finite(x + by),
            Extended::Infinite => Extended::Infinite,
        }
    }

    /// Maps to a float, with `Infinite` becoming `+inf`.
    pub fn to_float(self) -> T {
        match self {
            Extended::Finite(x) => x,
            Extended::Infinite => T::infinity(),
        }
    }

    pub fn from_float(x: T) -> Self {
        if x.is_infinite() {
            Extended::Infinite
        } else {
            Extended::Finite(x)
        }
    }
}

impl<T: Display> Display for Extended<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(x) => Display::fmt(x, f),
            Extended::Infinite => f.write_str("inf"),
        }
    }
}

impl<T: Serialize> Serialize for Extended<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Extended::Finite(x) => x.serialize(s),
            Extended::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de, T: Scalar> Deserialize<'de> for Extended<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct ExtVisitor<T>(std::marker::PhantomData<T>);

        impl<'de, T: Scalar> Visitor<'de> for ExtVisitor<T> {
            type Value = Extended<T>;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number or the string \"inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Self::Value, E> {
                T::from_f64(v)
                    .map(Extended::Finite)
                    .ok_or_else(|| E::custom("number out of range"))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Self::Value, E> {
                self.visit_f64(v as f64)
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Self::Value, E> {
                self.visit_f64(v as f64)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
                match v {
                    "inf" | "+inf" | "infinity" | "Infinity" => Ok(Extended::Infinite),
                    other => Err(E::invalid_value(de::Unexpected::Str(other), &self)),
                }
            }
        }

        d.deserialize_any(ExtVisitor(std::marker::PhantomData))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_cut_has_positive_imaginary_part() {
        for &(re, im) in &[(-1.0, 0.0), (0.0, 1.0), (3.0, 1e-9), (3.0, -1e-9), (-4.0, -2.0)] {
            let z = Complex::new(re, im);
            let r = sqrt_cut_positive(z);
            assert!(r.im > 0.0, "{z} -> {r}");
            assert!((r * r - z).norm() < 1e-12);
        }
        let r = sqrt_cut_positive(Complex::new(-4.0_f64, 0.0));
        assert!((r - Complex::new(0.0, 2.0)).norm() < 1e-15);
    }

    #[test]
    fn extended_serde() {
        let v: Vec<Extended<f64>> = serde_json::from_str(r#"[1.5, "inf", 2]"#).unwrap();
        assert_eq!(v, vec![Extended::Finite(1.5), Extended::Infinite, Extended::Finite(2.0)]);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"[1.5,"inf",2.0]"#);
        assert!(serde_json::from_str::<Extended<f64>>(r#""nan""#).is_err());
    }

    #[test]
    fn extended_offset_absorbs() {
        assert_eq!(Extended::<f64>::Infinite.offset(3.0), Extended::Infinite);
        assert_eq!(Extended::Finite(2.0).offset(-1.0), Extended::Finite(1.0));
        assert_eq!(Extended::from_float(f64::INFINITY), Extended::<f64>::Infinite);
    }
}
