use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::real::Real;

/// Complex scalar over [`Real`].
///
/// Division uses Smith's algorithm so extreme magnitude imbalances between
/// the parts do not overflow intermediate products.
#[derive(Clone, Debug, PartialEq)]
pub struct Cplx {
    pub re: Real,
    pub im: Real,
}

impl Cplx {
    pub fn new(re: Real, im: Real) -> Self {
        Cplx { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Cplx::new(Real::zero(prec), Real::zero(prec))
    }

    pub fn one(prec: u32) -> Self {
        Cplx::new(Real::one(prec), Real::zero(prec))
    }

    pub fn from_real(re: Real) -> Self {
        let prec = re.prec();
        Cplx::new(re, Real::zero(prec))
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        Cplx::new(Real::from_f64(re, prec), Real::from_f64(im, prec))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Cplx::new(self.re.clone(), -&self.im)
    }

    /// Modulus via hypot (no overflow for imbalanced parts).
    pub fn abs(&self) -> Real {
        Real::from_float(
            self.re
                .as_float()
                .clone()
                .hypot(self.im.as_float()),
        )
    }

    pub fn scale(&self, s: &Real) -> Self {
        Cplx::new(&self.re * s, &self.im * s)
    }

    pub fn mul(&self, rhs: &Cplx) -> Self {
        Cplx::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }

    /// Smith's division.
    pub fn div(&self, rhs: &Cplx) -> Self {
        if rhs.im.is_zero() {
            return Cplx::new(&self.re / &rhs.re, &self.im / &rhs.re);
        }
        if rhs.re.is_zero() {
            // a+bi / di = b/d - (a/d) i
            return Cplx::new(&self.im / &rhs.im, -&(&self.re / &rhs.im));
        }
        if rhs.re.abs() >= rhs.im.abs() {
            let r = &rhs.im / &rhs.re;
            let den = &rhs.re + &rhs.im * &r;
            Cplx::new(
                (&self.re + &self.im * &r) / &den,
                (&self.im - &self.re * &r) / &den,
            )
        } else {
            let r = &rhs.re / &rhs.im;
            let den = &rhs.re * &r + &rhs.im;
            Cplx::new(
                (&self.re * &r + &self.im) / &den,
                (&self.im * &r - &self.re) / &den,
            )
        }
    }

    pub fn recip(&self) -> Self {
        Cplx::one(self.prec()).div(self)
    }
}

impl fmt::Display for Cplx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}

impl Add<&Cplx> for &Cplx {
    type Output = Cplx;
    fn add(self, rhs: &Cplx) -> Cplx {
        Cplx::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub<&Cplx> for &Cplx {
    type Output = Cplx;
    fn sub(self, rhs: &Cplx) -> Cplx {
        Cplx::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul<&Cplx> for &Cplx {
    type Output = Cplx;
    fn mul(self, rhs: &Cplx) -> Cplx {
        Cplx::mul(self, rhs)
    }
}

impl Neg for &Cplx {
    type Output = Cplx;
    fn neg(self) -> Cplx {
        Cplx::new(-&self.re, -&self.im)
    }
}

impl serde::Serialize for Cplx {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Cplx", 2)?;
        st.serialize_field("re", &self.re)?;
        st.serialize_field("im", &self.im)?;
        st.end()
    }
}
