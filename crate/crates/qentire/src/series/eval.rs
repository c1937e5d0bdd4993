use serde::Serialize;

use crate::complex::Cplx;
use crate::error::{Error, Result};
use crate::precision::PrecisionContext;
use crate::real::Real;
use crate::series::spec::{BesselKind, SeriesSpec};

/// Hard cap on the number of generated terms before giving up on a
/// certified tail.
pub const MAX_TERMS: usize = 10_000;

/// Certifies `Σ_{k>N} |c_k| R^k ≤ tail`: truncating the series at degree
/// `N` changes its value by at most `tail` anywhere on `|z| ≤ R`.
///
/// Established through a non-increasing bound `B(k) ≥ |c_{k+1}/c_k|`:
/// with `ρ = B(N)·R < 1` the tail is at most `|c_N| R^N · ρ/(1−ρ)`.
/// Terminating sequences carry an exact zero tail.
#[derive(Clone, Debug, Serialize)]
pub struct TruncationCertificate {
    #[serde(rename = "terms")]
    pub n: usize,
    pub radius: Real,
    #[serde(rename = "tail_bound")]
    pub tail: Real,
}

/// Certified series evaluation by term recurrence.
///
/// Runs the term ratios forward, accumulating `Σ c_k z^k`, and stops once
/// the certified tail drops below `eps_id · max(1, |partial sum|)` (checked
/// every 8 terms). Terminating sequences are always summed through their
/// exact degree, so for them the result equals direct polynomial
/// evaluation of the coefficient list in the same term order.
///
/// The certificate covers truncation only; arithmetic rounding at the
/// working precision is smaller by a factor of roughly `2^(bits/2)` and is
/// not tracked per-operation.
pub fn evaluate(
    spec: &SeriesSpec,
    z: &Cplx,
    ctx: &PrecisionContext,
) -> Result<(Cplx, TruncationCertificate)> {
    spec.validate()?;
    let wp = ctx.bits().max(spec.prec());
    let one = Real::one(wp);
    let z_abs = z.abs();
    // The certificate needs a positive radius even at z = 0.
    let radius = if z_abs.is_zero() {
        Real::exp2i(-i64::from(wp), wp)
    } else {
        z_abs
    };
    let terminating = spec.termination_degree().is_some();
    let mut ratios = spec.ratio_iter();

    let mut coeff = Real::one(wp); // c_k
    let mut zpow = Cplx::one(wp); // z^k
    let mut sum = Cplx::one(wp);
    let mut coeff_r = Real::one(wp); // |c_k| R^k

    for k in 0..MAX_TERMS {
        let ratio = ratios.next_ratio();
        if ratio.is_zero() {
            // Exact termination: the sum is the whole polynomial.
            return Ok((
                sum,
                TruncationCertificate {
                    n: k,
                    radius,
                    tail: Real::zero(wp),
                },
            ));
        }
        coeff = &coeff * &ratio;
        zpow = &zpow * z;
        sum = &sum + &zpow.scale(&coeff);
        coeff_r = &coeff_r * &(ratio.abs() * &radius);
        let n = k + 1;
        if !terminating && n % 8 == 0 {
            let rho = spec.ratio_bound(n as u32) * &radius;
            if rho < 1.0 {
                let tail = &coeff_r * &rho / (&one - &rho);
                let scale = sum.abs().max(&one);
                if tail <= ctx.eps_id() * &scale {
                    return Ok((sum, TruncationCertificate { n, radius, tail }));
                }
            }
        }
    }
    Err(Error::NonConvergence(format!(
        "no certified tail within {MAX_TERMS} terms at |z| = {radius}"
    )))
}

/// Smallest truncation degree (stepping by 8) whose certified tail on
/// `|z| ≤ R` is at most `eps_id`. Terminating sequences return their exact
/// degree with a zero tail.
pub fn truncation_degree(
    spec: &SeriesSpec,
    r: &Real,
    ctx: &PrecisionContext,
) -> Result<TruncationCertificate> {
    spec.validate()?;
    if !r.is_positive() {
        return Err(Error::Domain(format!("radius must be > 0, got {r}")));
    }
    let wp = ctx.bits().max(spec.prec());
    let one = Real::one(wp);
    if let Some(d) = spec.termination_degree() {
        return Ok(TruncationCertificate {
            n: d as usize,
            radius: r.clone(),
            tail: Real::zero(wp),
        });
    }
    let mut ratios = spec.ratio_iter();
    let mut coeff_r = Real::one(wp); // |c_N| R^N
    for k in 0..MAX_TERMS {
        let n = k;
        if n % 8 == 0 {
            let rho = spec.ratio_bound(n as u32) * r;
            if rho < 1.0 {
                let tail = &coeff_r * &rho / (&one - &rho);
                if tail <= *ctx.eps_id() {
                    return Ok(TruncationCertificate {
                        n,
                        radius: r.clone(),
                        tail,
                    });
                }
            }
        }
        coeff_r = &coeff_r * &(ratios.next_ratio().abs() * r);
    }
    Err(Error::NonConvergence(format!(
        "no certified tail within {MAX_TERMS} terms at |z| = {r}"
    )))
}

/// Normalized q-Bessel function `j_ν^(kind)(z; q)`: the even entire series
/// evaluated in the variable `u = z²`.
pub fn qbessel_normalized(
    kind: BesselKind,
    nu: &Real,
    q: &Real,
    z: &Cplx,
    ctx: &PrecisionContext,
) -> Result<Cplx> {
    let spec = SeriesSpec::QBessel {
        kind,
        nu: nu.clone(),
        q: q.clone(),
    };
    let u = z * z;
    Ok(evaluate(&spec, &u, ctx)?.0)
}
