use crate::complex::Cplx;
use crate::error::{Error, Result};
use crate::precision::PrecisionContext;
use crate::real::Real;
use crate::series::{coefficients, evaluate, truncation_degree, SeriesSpec};

use super::aberth::{aberth, abs_sum_at, horner, horner_deriv, GUARD_BITS};
use super::{imag_ratio, sort_zeros, RealnessReport, Zero, ZeroSet};

const CIRCLE_SAMPLES: usize = 256;
const STABILITY_STEP: usize = 16;
const MAX_DOUBLINGS: usize = 40;

/// Locates the `count` smallest-modulus zeros of a non-terminating series.
///
/// The enclosing radius starts at twice the first certified sign change of
/// the function along the real axis and doubles until the certified
/// truncation polynomial `p_N` on `|z| ≤ R` carries at least `count` roots
/// well inside (`|z| ≤ R/2`). Each candidate set must then survive two
/// guards:
///
/// * stability — the roots of `p_{N+16}` match within relative `eps_real`;
/// * separation — `|p_N|` exceeds four times the certified tail at 256
///   points of the circle `|z| = R` and at all pairwise midpoints of the
///   selected roots (a sampled Rouché-style argument; strong evidence, not
///   a rigorous contour bound).
///
/// Realness is certified the same dual way as for polynomials, with the
/// sign changes counted on the *function itself* through certified
/// evaluations at brackets around the selected zeros.
pub fn locate_entire_zeros(
    spec: &SeriesSpec,
    count: usize,
    ctx: &PrecisionContext,
) -> Result<ZeroSet> {
    spec.validate()?;
    if spec.termination_degree().is_some() {
        return Err(Error::Domain(
            "spec terminates into a polynomial; use find_poly_roots on its coefficients".into(),
        ));
    }
    if count < 1 {
        return Err(Error::Domain("requested zero count must be >= 1".into()));
    }
    let mut radius = first_sign_change_radius(spec, ctx)?;
    for _ in 0..MAX_DOUBLINGS {
        if let Some(set) = try_radius(spec, count, &radius, ctx)? {
            return Ok(set);
        }
        radius = &radius * &Real::from_u32(2, radius.prec());
    }
    Err(Error::Guard(format!(
        "could not enclose {count} zeros within the radius-doubling budget (last R = {radius})"
    )))
}

/// `f(0)·∏_{k≤K}(1 − z/r_k)` over the located zeros `r_k`; every family
/// has `f(0) = 1`. Agreement with direct evaluation improves as `count`
/// grows while `|z|` stays well inside the last located zero.
pub fn hadamard_reconstruct(
    spec: &SeriesSpec,
    count: usize,
    z: &Cplx,
    ctx: &PrecisionContext,
) -> Result<Cplx> {
    let set = locate_entire_zeros(spec, count, ctx)?;
    Ok(hadamard_product(&set, z))
}

/// The product form over an already-located zero set.
pub fn hadamard_product(set: &ZeroSet, z: &Cplx) -> Cplx {
    let wp = z.prec();
    let one = Cplx::one(wp);
    let mut prod = Cplx::one(wp);
    for zero in &set.zeros {
        prod = prod.mul(&(&one - &z.div(&zero.value)));
    }
    prod
}

/// Initial enclosure radius: twice the magnitude of the first certified
/// sign change of the function along the real axis (both directions are
/// probed; the families keep their zeros on one side but which side is
/// family-specific).
fn first_sign_change_radius(spec: &SeriesSpec, ctx: &PrecisionContext) -> Result<Real> {
    let wp = ctx.bits().max(spec.prec());
    for t in -4..40i64 {
        let mag = Real::exp2i(t, wp);
        for sgn in [-1.0, 1.0] {
            let x = Cplx::from_real(&mag * &Real::from_f64(sgn, wp));
            let (v, cert) = evaluate(spec, &x, ctx)?;
            // f(0) = 1; a certified non-positive value means a zero was
            // crossed, an uncertified one means we are sitting near it.
            if v.re.is_negative() || v.abs() <= cert.tail {
                return Ok(&mag * &Real::from_u32(2, wp));
            }
        }
    }
    Err(Error::Guard(
        "no sign change of the function found on the real axis out to 2^39".into(),
    ))
}

fn try_radius(
    spec: &SeriesSpec,
    count: usize,
    radius: &Real,
    ctx: &PrecisionContext,
) -> Result<Option<ZeroSet>> {
    let cert = truncation_degree(spec, radius, ctx)?;
    let n = cert.n.max(count + 2).max(8);
    let seq = coefficients(spec, n)?;
    let roots = aberth(&seq.coeffs, ctx)?;
    let wp = ctx.bits().max(spec.prec()) + GUARD_BITS;
    let half = radius / Real::from_u32(2, wp);

    let mut inside: Vec<Cplx> = roots
        .iter()
        .filter(|z| z.abs() <= half)
        .cloned()
        .collect();
    if inside.len() < count {
        return Ok(None);
    }
    inside.sort_by(|a, b| a.abs().cmp_total(&b.abs()));
    let picked = &inside[..count];

    // Stability guard: the same zeros must reappear under a deeper
    // truncation.
    let seq2 = coefficients(spec, n + STABILITY_STEP)?;
    let roots2 = aberth(&seq2.coeffs, ctx)?;
    let one = Real::one(wp);
    for z in picked {
        let nearest = roots2
            .iter()
            .map(|w| (z - w).abs())
            .min_by(|a, b| a.cmp_total(b))
            .expect("deeper truncation has roots");
        let tol = ctx.eps_real() * &(&one + &z.abs());
        if nearest > tol {
            return Err(Error::Guard(format!(
                "zero near {z} moved by {} when the truncation degree grew by {STABILITY_STEP}; raise precision or the degree cap",
                nearest.to_decimal_digits(6)
            )));
        }
    }

    // Sampled separation guard on |z| = R and at pairwise midpoints.
    let margin = &cert.tail * &Real::from_u32(4, wp);
    let two_pi = Real::pi(wp) * &Real::from_u32(2, wp);
    for i in 0..CIRCLE_SAMPLES {
        let theta = &two_pi * &(Real::from_u32(i as u32, wp) / Real::from_u32(CIRCLE_SAMPLES as u32, wp));
        let (sin, cos) = theta.sin_cos();
        let point = Cplx::new(radius * &cos, radius * &sin);
        if horner(&seq.coeffs, &point).abs() <= margin {
            return Err(Error::Guard(format!(
                "truncation tail is not separated from |p_N| on the circle R = {radius}; raise precision"
            )));
        }
    }
    for i in 0..count {
        for j in (i + 1)..count {
            let mid = (&picked[i] + &picked[j]).scale(&Real::from_f64(0.5, wp));
            if horner(&seq.coeffs, &mid).abs() <= margin {
                return Err(Error::Guard(
                    "truncation tail is not separated from |p_N| between located zeros; raise precision"
                        .into(),
                ));
            }
        }
    }

    // Per-zero evidence from the function itself.
    let mut zeros: Vec<Zero> = Vec::with_capacity(count);
    for z in picked {
        let (fv, _) = evaluate(spec, z, ctx)?;
        let (_, dp) = horner_deriv(&seq.coeffs, z);
        let z_abs = z.abs();
        let denom = (dp.abs() * &z_abs.max(&one)).max(&Real::exp2i(-2 * i64::from(wp), wp));
        zeros.push(Zero {
            value: z.clone(),
            residual: fv.abs(),
            condition: abs_sum_at(&seq.coeffs, &z_abs) / denom,
            is_real: &imag_ratio(z) <= ctx.eps_real(),
        });
    }

    let report = certify_entire(spec, &zeros, &inside, &roots, radius, ctx)?;
    sort_zeros(&mut zeros);
    Ok(Some(ZeroSet {
        family: spec.family_name().into(),
        params: spec.params_json(),
        zeros,
        report: Some(report),
        certificate: Some(cert),
    }))
}

/// Dual realness certification against the function itself: bracket the
/// selected zeros along the real axis and count certified sign changes of
/// `f`, expecting exactly one per zero.
fn certify_entire(
    spec: &SeriesSpec,
    zeros: &[Zero],
    inside: &[Cplx],
    all_roots: &[Cplx],
    radius: &Real,
    ctx: &PrecisionContext,
) -> Result<RealnessReport> {
    let wp = ctx.bits().max(spec.prec()) + GUARD_BITS;
    let one = Real::one(wp);
    let half = Real::from_f64(0.5, wp);
    let count = zeros.len();

    let mut max_ratio = Real::zero(wp);
    for z in zeros {
        max_ratio = max_ratio.max(&imag_ratio(&z.value));
    }
    let imag_ok = &max_ratio <= ctx.eps_real();

    let mut xs: Vec<Real> = zeros.iter().map(|z| z.value.re.clone()).collect();
    xs.sort_by(|a, b| a.cmp_total(b));

    // Outer brackets: half-way to the nearest unselected root on that
    // side if one exists inside the disk, else a short certified step.
    let outer = |x: &Real, dir: f64| -> Real {
        let beyond = all_roots
            .iter()
            .filter(|w| {
                w.abs() <= *radius
                    && if dir < 0.0 {
                        w.re < *x && !xs.iter().any(|s| (&w.re - s).abs().is_zero())
                    } else {
                        w.re > *x && !xs.iter().any(|s| (&w.re - s).abs().is_zero())
                    }
            })
            .map(|w| w.re.clone())
            .min_by(|a, b| {
                (a - x).abs().cmp_total(&(b - x).abs())
            });
        match beyond {
            Some(b) => (x + &b) * &half,
            None => {
                let step = (&one + &x.abs()) * &Real::from_f64(0.25, wp);
                let room = (radius - &x.abs()) * &Real::from_f64(0.4, wp);
                let step = step.min(&room).max(&Real::exp2i(-8, wp));
                if dir < 0.0 {
                    x - &step
                } else {
                    x + &step
                }
            }
        }
    };

    let mut brackets = Vec::with_capacity(count + 1);
    brackets.push(outer(&xs[0], -1.0));
    for pair in xs.windows(2) {
        brackets.push((&pair[0] + &pair[1]) * &half);
    }
    brackets.push(outer(&xs[count - 1], 1.0));

    let mut sign_changes = 0usize;
    let mut prev: Option<bool> = None;
    let mut uncertified = false;
    for b in &brackets {
        let (v, cert) = evaluate(spec, &Cplx::from_real(b.clone()), ctx)?;
        if v.abs() <= cert.tail {
            uncertified = true;
            prev = None;
            continue;
        }
        let neg = v.re.is_negative();
        if let Some(p) = prev {
            if p != neg {
                sign_changes += 1;
            }
        }
        prev = Some(neg);
    }

    if imag_ok {
        if uncertified {
            return Err(Error::Inconsistent(
                "a bracket value of the function is not certifiably nonzero".into(),
            ));
        }
        if sign_changes != count {
            return Err(Error::Inconsistent(format!(
                "zeros pass the imaginary-part tolerance but the function shows {sign_changes} certified sign changes for {count} zeros"
            )));
        }
    }
    let _ = inside;

    let all_real = imag_ok && sign_changes == count;
    let all_negative = all_real && zeros.iter().all(|z| z.value.re.is_negative());
    let all_positive = all_real && zeros.iter().all(|z| z.value.re.is_positive());
    Ok(RealnessReport {
        all_real,
        all_negative,
        all_positive,
        max_imag_ratio: max_ratio,
        sign_change_count: sign_changes,
    })
}
