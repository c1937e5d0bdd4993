use crate::complex::Cplx;
use crate::error::{Error, Result};
use crate::precision::PrecisionContext;
use crate::real::Real;
use crate::series::CoefficientSequence;

use super::{imag_ratio, sort_zeros, Zero, ZeroSet};

/// Sweep cap for the simultaneous-iteration solver.
pub(crate) const MAX_SWEEPS: usize = 200;

/// Root iteration runs with this many guard bits beyond the context, so
/// that the convergence target `2^(-bits/2)·|z|` stays reachable even for
/// clustered roots (whose attainable accuracy is the square root of the
/// working epsilon).
pub(crate) const GUARD_BITS: u32 = 64;

/// `p(z)` by Horner.
pub(crate) fn horner(coeffs: &[Real], z: &Cplx) -> Cplx {
    let mut acc = Cplx::zero(z.prec());
    for c in coeffs.iter().rev() {
        acc = &acc * z;
        acc.re = &acc.re + c;
    }
    acc
}

/// `(p(z), p'(z))` by Horner.
pub(crate) fn horner_deriv(coeffs: &[Real], z: &Cplx) -> (Cplx, Cplx) {
    let prec = z.prec();
    let mut p = Cplx::zero(prec);
    let mut dp = Cplx::zero(prec);
    for c in coeffs.iter().rev() {
        dp = &(&dp * z) + &p;
        p = &p * z;
        p.re = &p.re + c;
    }
    (p, dp)
}

/// `p(x)` for real x by Horner.
pub(crate) fn horner_real(coeffs: &[Real], x: &Real) -> Real {
    let mut acc = Real::zero(x.prec());
    for c in coeffs.iter().rev() {
        acc = &(&acc * x) + c;
    }
    acc
}

/// `Σ|c_j| t^j` for t ≥ 0.
pub(crate) fn abs_sum_at(coeffs: &[Real], t: &Real) -> Real {
    let mut acc = Real::zero(t.prec());
    for c in coeffs.iter().rev() {
        acc = &(&acc * t) + &c.abs();
    }
    acc
}

fn log2_abs(x: &Real) -> f64 {
    x.abs().ln().to_f64() / std::f64::consts::LN_2
}

/// Per-root starting moduli from the upper convex hull of
/// `(k, log|c_k|)`: each hull edge of width `w` contributes `w` roots at
/// modulus `|c_k1/c_k2|^(1/w)`, placed at deterministic asymmetric angles.
/// Compared to a single shared circle this keeps the iteration fast when
/// the root moduli span many orders of magnitude, which the q-polynomials
/// routinely do.
fn initial_guesses(coeffs: &[Real], wp: u32) -> Vec<Cplx> {
    let pts: Vec<(usize, f64)> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k, log2_abs(c)))
        .collect();
    // Upper hull, left to right; pop while the middle point sits on or
    // below the chord.
    let mut hull: Vec<(usize, f64)> = Vec::with_capacity(pts.len());
    for &p in &pts {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let m = hull[hull.len() - 1];
            // Orientation of a→m→p: a left turn (or collinear run) means
            // `m` lies on or below the chord a→p, so it is not a vertex.
            let cross = (m.0 as f64 - a.0 as f64) * (p.1 - a.1)
                - (m.1 - a.1) * (p.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let deg = coeffs.len() - 1;
    let mut guesses = Vec::with_capacity(deg);
    let two = Real::from_u32(2, wp);
    let two_pi = Real::pi(wp) * &two;
    for (seg, w) in hull.windows(2).enumerate() {
        let (k1, y1) = w[0];
        let (k2, y2) = w[1];
        let n_seg = k2 - k1;
        let modulus = two.pow(&Real::from_f64((y1 - y2) / n_seg as f64, wp));
        for i in 0..n_seg {
            let frac = (i as f64 + 0.3711) / n_seg as f64 + 0.0563 * (seg as f64 + 1.0);
            let theta = &two_pi * &Real::from_f64(frac, wp);
            let (sin, cos) = theta.sin_cos();
            guesses.push(Cplx::new(&modulus * &cos, &modulus * &sin));
        }
    }
    guesses
}

/// All roots of `Σ c_k x^k` (c_0 ≠ 0, leading coefficient nonzero) by
/// Aberth–Ehrlich simultaneous iteration with immediate (Gauss–Seidel)
/// updates. Converged when every root's correction in one sweep is below
/// `2^(-bits/2)·|z|`.
pub(crate) fn aberth(coeffs: &[Real], ctx: &PrecisionContext) -> Result<Vec<Cplx>> {
    let deg = coeffs.len() - 1;
    let cprec = coeffs.iter().map(Real::prec).max().unwrap_or(64);
    let wp = ctx.bits().max(cprec) + GUARD_BITS;
    let thresh = Real::exp2i(-i64::from(ctx.bits() / 2), wp);
    let floor = Real::exp2i(-2 * i64::from(wp), wp);
    // Horner evaluation of `p` at working precision carries rounding
    // noise up to ~2·deg·2^(-wp) times the termwise absolute sum; a
    // residual at that floor is backward-stable and no further digits
    // are attainable. Roots of multiplicity m stall their corrections
    // near 2^(-wp/m) — far above `thresh` for m ≥ 3 — while sitting
    // exactly on this floor, so the residual test, not the correction
    // test, is what terminates them.
    let noise_unit =
        Real::from_u32(4 * (deg as u32) + 4, wp) * Real::exp2i(-i64::from(wp), wp);
    let one = Cplx::one(wp);
    let nudge = Cplx::from_f64(1.0 + 1e-6, 1e-6, wp);

    let mut z: Vec<Cplx> = initial_guesses(coeffs, wp)
        .into_iter()
        .map(|g| {
            // Lift to working precision.
            Cplx::new(&g.re + &Real::zero(wp), &g.im + &Real::zero(wp))
        })
        .collect();
    debug_assert_eq!(z.len(), deg);

    let mut last_worst = Real::zero(wp);
    for _sweep in 0..MAX_SWEEPS {
        let mut worst = Real::zero(wp);
        let mut done = true;
        for i in 0..deg {
            let (p, dp) = horner_deriv(coeffs, &z[i]);
            if p.is_zero() || p.abs() <= &noise_unit * &abs_sum_at(coeffs, &z[i].abs()) {
                continue;
            }
            if dp.is_zero() {
                // Stationary point of p: step off it and retry.
                z[i] = z[i].mul(&nudge);
                done = false;
                continue;
            }
            let w = p.div(&dp);
            let mut s = Cplx::zero(wp);
            let mut coincident = false;
            for j in 0..deg {
                if j == i {
                    continue;
                }
                let d = &z[i] - &z[j];
                if d.is_zero() {
                    coincident = true;
                    break;
                }
                s = &s + &d.recip();
            }
            if coincident {
                z[i] = z[i].mul(&nudge);
                done = false;
                continue;
            }
            let denom = &one - &w.mul(&s);
            let corr = if denom.is_zero() { w } else { w.div(&denom) };
            z[i] = &z[i] - &corr;
            let ratio = corr.abs() / z[i].abs().max(&floor);
            if ratio > thresh {
                done = false;
            }
            worst = worst.max(&ratio);
        }
        last_worst = worst;
        if done {
            return Ok(z);
        }
    }
    Err(Error::RootNonConvergence {
        sweeps: MAX_SWEEPS,
        worst: last_worst.to_decimal_digits(6),
    })
}

/// All zeros of the polynomial carried by a coefficient sequence, ordered
/// ascending by real part. Zeros at the origin (vanishing low-order
/// coefficients) are split off exactly; the rest come from the
/// simultaneous iteration. Residuals and condition estimates are attached
/// per zero; realness certification is a separate step
/// ([`super::certify_real_roots`]).
pub fn find_poly_roots(seq: &CoefficientSequence, ctx: &PrecisionContext) -> Result<ZeroSet> {
    let deg = seq
        .trimmed_degree()
        .ok_or_else(|| Error::Domain("cannot root-solve the zero polynomial".into()))?;
    if deg < 1 {
        return Err(Error::Domain(
            "polynomial is a nonzero constant; no roots to find".into(),
        ));
    }
    let coeffs = &seq.coeffs[..=deg];
    let origin_mult = coeffs
        .iter()
        .position(|c| !c.is_zero())
        .expect("trimmed polynomial has a nonzero coefficient");
    let body = &coeffs[origin_mult..];
    let cprec = coeffs.iter().map(Real::prec).max().unwrap_or(64);
    let wp = ctx.bits().max(cprec) + GUARD_BITS;

    let mut roots = if body.len() >= 2 {
        aberth(body, ctx)?
    } else {
        Vec::new()
    };
    for _ in 0..origin_mult {
        roots.push(Cplx::zero(wp));
    }

    let mut zeros: Vec<Zero> = roots
        .into_iter()
        .map(|z| {
            let z_abs = z.abs();
            let (p, dp) = horner_deriv(coeffs, &z);
            let denom = (dp.abs() * &z_abs.max(&Real::one(wp))).max(&Real::exp2i(
                -2 * i64::from(wp),
                wp,
            ));
            let condition = abs_sum_at(coeffs, &z_abs) / denom;
            let is_real = &imag_ratio(&z) <= ctx.eps_real();
            Zero {
                value: z,
                residual: p.abs(),
                condition,
                is_real,
            }
        })
        .collect();
    sort_zeros(&mut zeros);
    Ok(ZeroSet {
        family: seq.family.clone(),
        params: seq.params.clone(),
        zeros,
        report: None,
        certificate: None,
    })
}
