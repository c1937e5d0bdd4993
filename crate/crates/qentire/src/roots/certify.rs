use crate::error::{Error, Result};
use crate::precision::PrecisionContext;
use crate::real::Real;
use crate::series::CoefficientSequence;

use super::aberth::{abs_sum_at, horner_real, GUARD_BITS};
use super::{imag_ratio, RealnessReport, ZeroSet};

/// Dual realness certification for a full root set of a polynomial.
///
/// Route (i): every zero's `|Im z|/(|z|+1)` is at most `eps_real`.
/// Route (ii): the real parts are clustered (relative `eps_real` merge
/// tolerance) and the polynomial is evaluated at bracket points outside
/// and between clusters; a sign change across a cluster certifies odd
/// total multiplicity there, no sign change plus a vanishing residual at
/// the cluster center certifies even multiplicity. The multiplicity-
/// weighted count must reach the degree.
///
/// `all_real` needs both routes; if route (i) passes but route (ii)
/// cannot account for the degree (or a bracket sign cannot be certified),
/// the routes disagree and an inconsistency error is returned — that
/// combination signals precision exhaustion, not a mathematical finding.
/// Route (ii) alone saying "enough sign changes" while route (i) sees
/// large imaginary parts is *not* an inconsistency: sign counting is
/// blind to complex pairs that shadow real zeros, which is exactly why
/// both routes are required.
pub fn certify_real_roots(
    seq: &CoefficientSequence,
    zeros: &ZeroSet,
    ctx: &PrecisionContext,
) -> Result<RealnessReport> {
    let deg = seq
        .trimmed_degree()
        .ok_or_else(|| Error::Domain("zero polynomial has no roots to certify".into()))?;
    if zeros.degree() != deg {
        return Err(Error::Domain(format!(
            "zero set carries {} zeros but the polynomial has degree {deg}",
            zeros.degree()
        )));
    }
    let coeffs = &seq.coeffs[..=deg];
    let cprec = coeffs.iter().map(Real::prec).max().unwrap_or(64);
    let wp = ctx.bits().max(cprec) + GUARD_BITS;
    let one = Real::one(wp);

    let mut max_ratio = Real::zero(wp);
    for z in &zeros.zeros {
        max_ratio = max_ratio.max(&imag_ratio(&z.value));
    }
    let imag_ok = &max_ratio <= ctx.eps_real();

    // Cluster the real parts under the relative eps_real merge tolerance.
    let mut xs: Vec<Real> = zeros.zeros.iter().map(|z| z.value.re.clone()).collect();
    xs.sort_by(|a, b| a.cmp_total(b));
    let mut clusters: Vec<(Real, usize)> = Vec::new(); // (center, size)
    let mut start = 0;
    for i in 1..=xs.len() {
        let split = i == xs.len() || {
            let gap = &xs[i] - &xs[i - 1];
            let tol = ctx.eps_real() * &(&one + &xs[i - 1].abs());
            gap > tol
        };
        if split {
            let size = i - start;
            let mut center = Real::zero(wp);
            for x in &xs[start..i] {
                center = &center + x;
            }
            center = center / Real::from_u32(size as u32, wp);
            clusters.push((center, size));
            start = i;
        }
    }

    // Bracket points: outside the Cauchy root bound on both ends, and at
    // midpoints between adjacent cluster centers.
    let lead = coeffs.last().unwrap();
    let mut bound = Real::one(wp);
    for c in &coeffs[..deg] {
        bound = bound.max(&(c.abs() / lead.abs()));
    }
    bound = &bound + &one;
    let mut brackets = Vec::with_capacity(clusters.len() + 1);
    brackets.push(-&bound);
    for pair in clusters.windows(2) {
        brackets.push((&pair[0].0 + &pair[1].0) / Real::from_u32(2, wp));
    }
    brackets.push(bound.clone());

    let signs: Vec<Option<bool>> = brackets
        .iter()
        .map(|t| {
            let v = horner_real(coeffs, t);
            let certified = v.abs() > ctx.eps_id() * &abs_sum_at(coeffs, &t.abs());
            certified.then(|| v.is_negative())
        })
        .collect();

    let mut count = 0usize;
    let mut trouble: Option<String> = None;
    for (i, (center, size)) in clusters.iter().enumerate() {
        let (left, right) = (&signs[i], &signs[i + 1]);
        let (Some(left), Some(right)) = (left, right) else {
            trouble = Some(format!(
                "bracket value near cluster {center} is not certifiably nonzero"
            ));
            continue;
        };
        let flips = left != right;
        let parity_ok = flips == (size % 2 == 1);
        let center_is_root = *size == 1 || {
            let v = horner_real(coeffs, center);
            v.abs() <= ctx.eps_id() * &abs_sum_at(coeffs, &center.abs())
        };
        if parity_ok && center_is_root {
            count += size;
        } else if flips {
            // At least one real zero of odd multiplicity is bracketed even
            // when the full cluster cannot be credited.
            count += 1;
            if imag_ok {
                trouble = Some(format!(
                    "cluster of {size} at {center} shows a sign change but cannot be fully certified"
                ));
            }
        } else if imag_ok && *size % 2 == 1 {
            trouble = Some(format!(
                "cluster of {size} at {center} shows no sign change despite odd size"
            ));
        }
    }

    if imag_ok {
        if let Some(msg) = trouble {
            return Err(Error::Inconsistent(msg));
        }
        if count != deg {
            return Err(Error::Inconsistent(format!(
                "all imaginary parts pass eps_real but the sign-change count {count} misses the degree {deg}"
            )));
        }
    }

    let all_real = imag_ok && count == deg;
    let all_negative = all_real && zeros.zeros.iter().all(|z| z.value.re.is_negative());
    let all_positive = all_real && zeros.zeros.iter().all(|z| z.value.re.is_positive());
    Ok(RealnessReport {
        all_real,
        all_negative,
        all_positive,
        max_imag_ratio: max_ratio,
        sign_change_count: count,
    })
}
