use crate::error::{Error, Result};
use crate::real::Real;

/// Working precision plus the derived tolerances threaded through every
/// numeric operation.
///
/// * `eps_id` — identity-residual tolerance, default `2^(-bits/2)`; the
///   budget for "these two independently computed quantities are equal".
/// * `eps_real` — realness tolerance, default `2^(-bits/4)`; the budget
///   for "this computed zero lies on the real axis".
#[derive(Clone, Debug)]
pub struct PrecisionContext {
    bits: u32,
    eps_id: Real,
    eps_real: Real,
}

pub const DEFAULT_BITS: u32 = 256;

impl PrecisionContext {
    /// Context with the default derived tolerances. `bits` must be ≥ 64.
    pub fn new(bits: u32) -> Result<Self> {
        if bits < 64 {
            return Err(Error::Domain(format!(
                "precision must be at least 64 bits, got {bits}"
            )));
        }
        let eps_id = Real::exp2i(-i64::from(bits / 2), bits);
        let eps_real = Real::exp2i(-i64::from(bits / 4), bits);
        Ok(PrecisionContext {
            bits,
            eps_id,
            eps_real,
        })
    }

    /// Context with explicit tolerances; requires `0 < eps_id < eps_real < 1`.
    pub fn with_tolerances(bits: u32, eps_id: Real, eps_real: Real) -> Result<Self> {
        if bits < 64 {
            return Err(Error::Domain(format!(
                "precision must be at least 64 bits, got {bits}"
            )));
        }
        if !(eps_id.is_positive() && eps_id < eps_real && eps_real < Real::one(bits)) {
            return Err(Error::Domain(
                "tolerances must satisfy 0 < eps_id < eps_real < 1".into(),
            ));
        }
        Ok(PrecisionContext {
            bits,
            eps_id,
            eps_real,
        })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn eps_id(&self) -> &Real {
        &self.eps_id
    }

    pub fn eps_real(&self) -> &Real {
        &self.eps_real
    }

    /// Same tolerances evaluated with `extra` guard bits of working
    /// precision; used internally when an identity residual must land
    /// below `eps_id` with room to spare.
    pub fn padded(&self, extra: u32) -> PrecisionContext {
        PrecisionContext {
            bits: self.bits + extra,
            eps_id: self.eps_id.clone(),
            eps_real: self.eps_real.clone(),
        }
    }

    pub fn real(&self, x: f64) -> Real {
        Real::from_f64(x, self.bits)
    }

    pub fn parse_real(&self, s: &str) -> Result<Real> {
        Real::parse(s, self.bits)
    }

    pub fn zero(&self) -> Real {
        Real::zero(self.bits)
    }

    pub fn one(&self) -> Real {
        Real::one(self.bits)
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext::new(DEFAULT_BITS).expect("default precision is valid")
    }
}
