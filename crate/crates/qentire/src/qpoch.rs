//! q-Pochhammer symbols and rising factorials — the primitives every
//! series family is assembled from.

use crate::complex::Cplx;
use crate::error::{Error, Result};
use crate::precision::PrecisionContext;
use crate::real::Real;

/// Finite q-Pochhammer `(a;q)_n = ∏_{k=0}^{n-1} (1 - a q^k)`.
///
/// Total in `a`, `q`, `n`; `n = 0` is the empty product 1. Any real `q`
/// is accepted (bases above 1 appear in the base-inversion symmetry
/// checks).
pub fn qpoch_finite(a: &Cplx, q: &Real, n: u32) -> Cplx {
    let prec = a.prec().max(q.prec());
    let mut acc = Cplx::one(prec);
    let mut qk = Real::one(prec);
    for _ in 0..n {
        let factor = Cplx::new(Real::one(prec) - &a.re * &qk, -&(&a.im * &qk));
        acc = acc.mul(&factor);
        qk = &qk * q;
    }
    acc
}

/// Real-argument specialization of [`qpoch_finite`].
pub fn qpoch_finite_real(a: &Real, q: &Real, n: u32) -> Real {
    let prec = a.prec().max(q.prec());
    let mut acc = Real::one(prec);
    let mut qk = Real::one(prec);
    for _ in 0..n {
        acc = acc * (Real::one(prec) - a * &qk);
        qk = &qk * q;
    }
    acc
}

/// Infinite q-Pochhammer `(a;q)_∞ = ∏_{k≥0} (1 - a q^k)` with a certified
/// multiplicative tail bound.
///
/// Returns `(P_K, t)` where `P_K` is the partial product through index
/// `K` and, provided the returned value is nonzero,
/// `|log((a;q)_∞ / P_K)| ≤ t ≤ eps_id`. `K` is chosen so that
/// `Σ_{k>K} |a| q^k / (1-q) < eps_id/2` and `|a| q^{K+1} < 1/2`, which
/// makes `t = 2 |a| q^{K+1} / (1-q)` a valid bound.
///
/// Errors with a domain failure when `q ∉ (0,1)` (the product diverges).
pub fn qpoch_infinite(a: &Cplx, q: &Real, ctx: &PrecisionContext) -> Result<(Cplx, Real)> {
    if !(q.is_positive() && *q < 1.0) {
        return Err(Error::Domain(format!(
            "infinite q-Pochhammer requires 0 < q < 1, got q = {q}"
        )));
    }
    let prec = a.prec().max(q.prec()).max(ctx.bits());
    let one = Real::one(prec);
    let abs_a = a.abs();
    let one_minus_q = &one - q;
    let half = Real::from_f64(0.5, prec);
    let mass_target = ctx.eps_id() * &half;

    let mut acc = Cplx::one(prec);
    let mut qk = Real::one(prec);
    loop {
        // Remaining mass Σ_{j≥k} |a| q^j = |a| q^k / (1-q); stop once it is
        // inside tolerance and small enough for the log bound to apply.
        let mass = &abs_a * &qk / &one_minus_q;
        if mass < mass_target && &abs_a * &qk < half {
            let tail = Real::from_u32(2, prec) * mass;
            return Ok((acc, tail));
        }
        let factor = Cplx::new(&one - &a.re * &qk, -&(&a.im * &qk));
        acc = acc.mul(&factor);
        qk = &qk * q;
    }
}

/// Multi-parameter symbol `(a_1,…,a_m;q)_n = ∏_j (a_j;q)_n`; empty list → 1.
pub fn qpoch_multi(bases: &[Cplx], q: &Real, n: u32) -> Cplx {
    let prec = bases
        .iter()
        .map(Cplx::prec)
        .max()
        .unwrap_or(q.prec())
        .max(q.prec());
    let mut acc = Cplx::one(prec);
    for a in bases {
        acc = acc.mul(&qpoch_finite(a, q, n));
    }
    acc
}

/// Rising factorial `(a)_n = a (a+1) ⋯ (a+n-1)`; `(a)_0 = 1`.
pub fn rising_factorial(a: &Real, n: u32) -> Real {
    let prec = a.prec();
    let mut acc = Real::one(prec);
    for k in 0..n {
        acc = acc * (a + &Real::from_u32(k, prec));
    }
    acc
}
