use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::ops::{CompleteRound, Pow};
use rug::Float;

use crate::error::{Error, Result};

/// Arbitrary-precision real scalar backed by MPFR.
///
/// Binary operations produce results at the larger of the two operand
/// precisions, so mixed-precision expressions never silently truncate.
/// Values serialize as full-precision decimal strings that parse back to
/// the identical bit pattern.
#[derive(Clone, Debug)]
pub struct Real(Float);

impl Real {
    pub fn zero(prec: u32) -> Self {
        Real(Float::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        Real(Float::with_val(prec, 1))
    }

    pub fn from_f64(x: f64, prec: u32) -> Self {
        Real(Float::with_val(prec, x))
    }

    pub fn from_u32(x: u32, prec: u32) -> Self {
        Real(Float::with_val(prec, x))
    }

    pub fn from_i64(x: i64, prec: u32) -> Self {
        Real(Float::with_val(prec, x))
    }

    /// 2^e at the given precision (exact for any representable exponent).
    pub fn exp2i(e: i64, prec: u32) -> Self {
        let mut f = Float::with_val(prec, 1);
        f <<= e as i32;
        Real(f)
    }

    /// Parses a decimal literal (`1.25`, `-3e-7`, ...) at the given precision.
    pub fn parse(s: &str, prec: u32) -> Result<Self> {
        let incomplete = Float::parse(s.trim())
            .map_err(|e| Error::Parse(format!("bad numeric literal {s:?}: {e}")))?;
        Ok(Real(Float::with_val(prec, incomplete)))
    }

    pub fn prec(&self) -> u32 {
        self.0.prec()
    }

    /// Full-precision decimal string; `Real::parse` recovers the exact value.
    pub fn to_decimal(&self) -> String {
        self.0.to_string_radix(10, None)
    }

    /// Decimal string rounded to `digits` significant digits (display only).
    pub fn to_decimal_digits(&self, digits: usize) -> String {
        self.0.to_string_radix(10, Some(digits.max(1)))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_sign_negative() && !self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_sign_positive() && !self.0.is_zero()
    }

    pub fn abs(&self) -> Self {
        Real(self.0.abs_ref().complete(self.prec()))
    }

    pub fn sqrt(&self) -> Self {
        Real(self.0.sqrt_ref().complete(self.prec()))
    }

    pub fn ln(&self) -> Self {
        Real(self.0.ln_ref().complete(self.prec()))
    }

    pub fn exp(&self) -> Self {
        Real(self.0.exp_ref().complete(self.prec()))
    }

    pub fn recip(&self) -> Self {
        Real(self.0.recip_ref().complete(self.prec()))
    }

    pub fn pi(prec: u32) -> Self {
        Real(Float::with_val(prec, rug::float::Constant::Pi))
    }

    pub fn sin_cos(&self) -> (Self, Self) {
        let (s, c) = self.0.clone().sin_cos(Float::new(self.prec()));
        (Real(s), Real(c))
    }

    /// Integer power, exact sign handling for negative bases.
    pub fn powi(&self, k: i32) -> Self {
        Real((&self.0).pow(k).complete(self.prec()))
    }

    /// Real power; requires a nonnegative base unless the exponent is an integer.
    pub fn pow(&self, e: &Real) -> Self {
        let prec = self.prec().max(e.prec());
        Real((&self.0).pow(&e.0).complete(prec))
    }

    pub fn min(&self, other: &Real) -> Self {
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    pub fn max(&self, other: &Real) -> Self {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// Total ordering; panics on NaN (never produced by this crate's domain checks).
    pub fn cmp_total(&self, other: &Real) -> Ordering {
        self.partial_cmp(other).expect("NaN in Real comparison")
    }

    pub(crate) fn as_float(&self) -> &Float {
        &self.0
    }

    pub(crate) fn from_float(f: Float) -> Self {
        Real(f)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal())
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl PartialEq<f64> for Real {
    fn eq(&self, other: &f64) -> bool {
        self.0 == *other
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl PartialOrd<f64> for Real {
    fn partial_cmp(&self, other: &f64) -> Option<Ordering> {
        self.0.partial_cmp(other)
    }
}

impl serde::Serialize for Real {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_decimal())
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                let prec = self.prec().max(rhs.prec());
                Real((&self.0).$method(&rhs.0).complete(prec))
            }
        }
        impl $trait<Real> for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Real> for Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                (&self).$method(rhs)
            }
        }
        impl $trait<Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real((-&self.0).complete(self.prec()))
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        -&self
    }
}
