//! Series families: coefficient generation by term-ratio recurrence and
//! certified evaluation of the resulting polynomials and entire functions.
//!
//! A [`SeriesSpec`] is the single source of truth for one concrete series.
//! Coefficients are always produced by multiplying out the closed-form
//! ratio `c_{k+1}/c_k`, never by re-evaluating products per term, so a
//! numerator parameter of the exact form `q^(-n)` terminates the sequence
//! with an exact zero, and tails are certified through non-increasing
//! bounds on the same ratios.

mod eval;
mod spec;

pub use eval::{
    evaluate, qbessel_normalized, truncation_degree, TruncationCertificate, MAX_TERMS,
};
pub use spec::{BesselKind, DenFactor, NumFactor, NumKind, QParam, SeriesSpec};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::real::Real;

/// Finite prefix `c_0..c_N` of a family's coefficient sequence.
#[derive(Clone, Debug, Serialize)]
pub struct CoefficientSequence {
    pub family: String,
    pub params: serde_json::Value,
    pub precision_bits: u32,
    pub coeffs: Vec<Real>,
    pub terminating: bool,
    /// Degree of the generated polynomial when the sequence terminates.
    pub degree: Option<usize>,
}

impl CoefficientSequence {
    /// Raw sequence without family provenance (transform outputs, tests).
    pub fn from_raw(coeffs: Vec<Real>) -> Self {
        let bits = coeffs.iter().map(Real::prec).max().unwrap_or(64);
        CoefficientSequence {
            family: "raw".into(),
            params: serde_json::json!({}),
            precision_bits: bits,
            coeffs,
            terminating: true,
            degree: None,
        }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Index of the last nonzero coefficient, if any.
    pub fn trimmed_degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }
}

/// Coefficients `c_0..c_n` generated by the spec's term-ratio recurrence.
///
/// Termination (a numerator parameter of the exact form `q^(-n)`) is
/// detected through an exact-zero ratio; all later coefficients are
/// exactly zero.
pub fn coefficients(spec: &SeriesSpec, n: usize) -> Result<CoefficientSequence> {
    spec.validate()?;
    let prec = spec.prec();
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(Real::one(prec));
    let mut ratios = spec.ratio_iter();
    let mut cur = Real::one(prec);
    for _ in 0..n {
        if cur.is_zero() {
            coeffs.push(Real::zero(prec));
            continue;
        }
        cur = &cur * &ratios.next_ratio();
        coeffs.push(cur.clone());
    }
    Ok(CoefficientSequence {
        family: spec.family_name().into(),
        params: spec.params_json(),
        precision_bits: prec,
        coeffs,
        terminating: spec.termination_degree().is_some(),
        degree: spec.termination_degree().map(|d| d as usize),
    })
}

/// Coefficients of the q-scaled series used in the `q↑1` limit runs.
///
/// The input must be a `GeneralizedQ` spec whose per-factor bases all
/// equal one common `q`. Terminating (polynomial-variant) specs are
/// scaled by `(1-q)^(2ℓk)`; entire-variant specs require every numerator
/// value to be zero and the exponent to equal `ℓ + m/2`, and are scaled
/// by `(1-q)^((m+2ℓ)k)`. As `q↑1` the scaled coefficients converge to
/// those of the matching `LimitPoly` / `LimitEntire` family (see
/// [`SeriesSpec::limit_target`]).
pub fn scaled_limit_coefficients(spec: &SeriesSpec, n: usize) -> Result<CoefficientSequence> {
    let (q, scaling_per_k) = scaled_limit_exponent(spec)?;
    let mut seq = coefficients(spec, n)?;
    let prec = spec.prec();
    let shrink = (Real::one(prec) - &q).powi(scaling_per_k as i32);
    let mut factor = Real::one(prec);
    for c in seq.coeffs.iter_mut().skip(1) {
        factor = &factor * &shrink;
        *c = &*c * &factor;
    }
    seq.family = format!("{}-scaled", seq.family);
    Ok(seq)
}

pub(crate) fn scaled_limit_exponent(spec: &SeriesSpec) -> Result<(Real, u32)> {
    let SeriesSpec::GeneralizedQ { alpha, q, num, den } = spec else {
        return Err(Error::Domain(
            "scaled limit coefficients require a generalized-q spec".into(),
        ));
    };
    for f in num {
        if f.q != *q {
            return Err(Error::Domain(
                "scaled limit requires every numerator base to equal the common q".into(),
            ));
        }
    }
    for f in den {
        if f.q != *q {
            return Err(Error::Domain(
                "scaled limit requires every denominator base to equal the common q".into(),
            ));
        }
    }
    let m = num.len() as u32;
    let l = den.len() as u32;
    if spec.termination_degree().is_some() {
        // Polynomial variant: the numerator/denominator base ratios are
        // dimensionless in (1-q); only the 2ℓ denominator factors scale.
        return Ok((q.clone(), 2 * l));
    }
    // Entire variant: the limit target exists only for vanishing numerator
    // values and exponent ℓ + m/2.
    for f in num {
        if !matches!(&f.kind, NumKind::NegVal(a) if a.is_zero()) {
            return Err(Error::Domain(
                "entire-case scaled limit requires all numerator values to be zero".into(),
            ));
        }
    }
    let prec = spec.prec();
    let want = Real::from_u32(l, prec) + Real::from_u32(m, prec) / Real::from_u32(2, prec);
    if *alpha != want {
        return Err(Error::Domain(format!(
            "entire-case scaled limit requires exponent alpha = l + m/2 = {want}, got {alpha}"
        )));
    }
    Ok((q.clone(), m + 2 * l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Cplx;
    use crate::precision::PrecisionContext;
    use crate::qpoch::{qpoch_finite_real, rising_factorial};

    fn r(x: f64) -> Real {
        Real::from_f64(x, 256)
    }

    fn ram(alpha: f64, a: QParam, q: f64) -> SeriesSpec {
        SeriesSpec::RamanujanA {
            alpha: r(alpha),
            a,
            q: r(q),
        }
    }

    fn gen_poly(alpha: f64, q: f64, orders: &[u32], betas: &[f64]) -> SeriesSpec {
        let qq = r(q);
        SeriesSpec::GeneralizedQ {
            alpha: r(alpha),
            q: qq.clone(),
            num: orders
                .iter()
                .map(|n| NumFactor {
                    q: qq.clone(),
                    kind: NumKind::NegPow(*n),
                })
                .collect(),
            den: betas
                .iter()
                .map(|b| DenFactor {
                    q: qq.clone(),
                    beta: r(*b),
                })
                .collect(),
        }
    }

    fn gen_entire(alpha: f64, q: f64, avals: &[f64], betas: &[f64]) -> SeriesSpec {
        let qq = r(q);
        SeriesSpec::GeneralizedQ {
            alpha: r(alpha),
            q: qq.clone(),
            num: avals
                .iter()
                .map(|a| NumFactor {
                    q: qq.clone(),
                    kind: NumKind::NegVal(r(*a)),
                })
                .collect(),
            den: betas
                .iter()
                .map(|b| DenFactor {
                    q: qq.clone(),
                    beta: r(*b),
                })
                .collect(),
        }
    }

    #[test]
    fn degree_one_sequence() {
        let seq = coefficients(&ram(1.0, QParam::NegPow(1), 0.5), 3).unwrap();
        assert!(seq.terminating);
        assert_eq!(seq.degree, Some(1));
        assert_eq!(seq.coeffs[0], Real::one(256));
        assert_eq!(seq.coeffs[1], -Real::one(256));
        assert!(seq.coeffs[2].is_zero());
        assert!(seq.coeffs[3].is_zero());
    }

    #[test]
    fn degree_two_sequence() {
        // (1 - q^-2) q / (1 - q) = -3 and then (1 - q^-1) q^3 / (1 - q^2)
        // brings the quadratic coefficient to exactly 1/2 at q = 1/2.
        let seq = coefficients(&ram(1.0, QParam::NegPow(2), 0.5), 2).unwrap();
        assert_eq!(seq.coeffs[1], Real::from_f64(-3.0, 256));
        assert_eq!(seq.coeffs[2], Real::from_f64(0.5, 256));
        assert_eq!(seq.trimmed_degree(), Some(2));
    }

    #[test]
    fn unit_constant_term() {
        let specs = [
            ram(1.0, QParam::Value(r(0.0)), 0.5),
            gen_entire(1.5, 0.3, &[0.2], &[1.0]),
            SeriesSpec::LimitPoly {
                orders: vec![3],
                betas: vec![r(1.0)],
            },
            SeriesSpec::LimitEntire {
                m: 0,
                betas: vec![r(2.0)],
            },
            SeriesSpec::RAs {
                alpha: r(1.0),
                a: vec![r(0.3)],
                b: vec![r(0.2)],
                q: r(0.5),
            },
            SeriesSpec::RPhiS {
                a: vec![],
                b: vec![r(0.4)],
                q: r(0.5),
            },
            SeriesSpec::QBessel {
                kind: BesselKind::Two,
                nu: r(0.5),
                q: r(0.5),
            },
        ];
        for spec in &specs {
            let seq = coefficients(spec, 0).unwrap();
            assert_eq!(seq.coeffs, vec![Real::one(spec.prec())], "{spec:?}");
        }
    }

    #[test]
    fn empty_products_degenerate_to_theta() {
        // No numerator or denominator factors: c_k = q^(alpha k^2), exact
        // at q = 1/2 where every power is a binary shift.
        let spec = gen_entire(1.0, 0.5, &[], &[]);
        let seq = coefficients(&spec, 12).unwrap();
        for (k, c) in seq.coeffs.iter().enumerate() {
            assert_eq!(*c, r(0.5).powi((k * k) as i32), "k = {k}");
        }
    }

    #[test]
    fn partial_theta_coefficients() {
        // a = q cancels the (q;q)_n denominator: c_k = q^(k^2).
        let seq = coefficients(&ram(1.0, QParam::Value(r(0.5)), 0.5), 10).unwrap();
        for (k, c) in seq.coeffs.iter().enumerate() {
            assert_eq!(*c, r(0.5).powi((k * k) as i32), "k = {k}");
        }
    }

    #[test]
    fn termination_is_exact() {
        let spec = gen_poly(1.0, 0.5, &[3, 5], &[1.0]);
        assert_eq!(spec.termination_degree(), Some(3));
        let seq = coefficients(&spec, 8).unwrap();
        assert_eq!(seq.trimmed_degree(), Some(3));
        for c in &seq.coeffs[4..] {
            assert!(c.is_zero());
        }
    }

    #[test]
    fn json_round_trip() {
        let specs = [
            ram(1.0, QParam::NegPow(4), 0.5),
            ram(0.5, QParam::Value(r(-0.25)), 0.75),
            gen_poly(2.0, 0.3, &[2, 4], &[1.5]),
            gen_entire(1.5, 0.6, &[0.0], &[1.0]),
            SeriesSpec::LimitPoly {
                orders: vec![2, 2],
                betas: vec![r(1.25)],
            },
            SeriesSpec::LimitEntire {
                m: 1,
                betas: vec![r(1.0), r(2.5)],
            },
            SeriesSpec::RAs {
                alpha: r(1.0),
                a: vec![r(0.3), r(-0.1)],
                b: vec![r(0.2)],
                q: r(0.5),
            },
            SeriesSpec::RPhiS {
                a: vec![r(0.1)],
                b: vec![r(0.4), r(0.0)],
                q: r(0.5),
            },
            SeriesSpec::QBessel {
                kind: BesselKind::Three,
                nu: r(-0.5),
                q: r(0.9),
            },
        ];
        for spec in &specs {
            let wire = serde_json::json!({
                "family": spec.family_name(),
                "params": spec.params_json(),
            });
            let back = SeriesSpec::from_json(&wire, 256).unwrap();
            assert_eq!(&back, spec);
        }
    }

    #[test]
    fn domain_rejections() {
        assert!(ram(1.0, QParam::Value(r(0.0)), 1.5).validate().is_err());
        assert!(ram(-1.0, QParam::Value(r(0.0)), 0.5).validate().is_err());
        assert!(gen_poly(1.0, 0.5, &[2], &[0.0]).validate().is_err());
        assert!(SeriesSpec::QBessel {
            kind: BesselKind::One,
            nu: r(-1.0),
            q: r(0.5),
        }
        .validate()
        .is_err());
        // Mixed terminating/entire numerator factors.
        let qq = r(0.5);
        assert!(SeriesSpec::GeneralizedQ {
            alpha: r(1.0),
            q: qq.clone(),
            num: vec![
                NumFactor {
                    q: qq.clone(),
                    kind: NumKind::NegPow(2),
                },
                NumFactor {
                    q: qq.clone(),
                    kind: NumKind::NegVal(r(0.5)),
                },
            ],
            den: vec![],
        }
        .validate()
        .is_err());
        // r > s + 1.
        assert!(SeriesSpec::RPhiS {
            a: vec![r(0.1), r(0.2)],
            b: vec![],
            q: r(0.5),
        }
        .validate()
        .is_err());
        assert!(SeriesSpec::LimitPoly {
            orders: vec![],
            betas: vec![r(1.0)],
        }
        .validate()
        .is_err());
    }

    #[test]
    fn evaluate_at_origin() {
        let ctx = PrecisionContext::default();
        let z = Cplx::zero(256);
        for spec in [
            ram(1.0, QParam::Value(r(0.0)), 0.5),
            gen_entire(1.5, 0.4, &[0.3], &[1.0]),
            SeriesSpec::LimitEntire {
                m: 1,
                betas: vec![r(1.0)],
            },
        ] {
            let (v, cert) = evaluate(&spec, &z, &ctx).unwrap();
            assert_eq!(v.re, Real::one(256));
            assert!(v.im.is_zero());
            assert!(&cert.tail <= ctx.eps_id());
        }
    }

    #[test]
    fn evaluate_matches_independent_sum() {
        // alpha = 1, a = 0 reduces to sum q^(n^2) z^n / (q;q)_n; re-sum it
        // from scratch at 512 bits through the finite products.
        let ctx = PrecisionContext::default();
        let spec = ram(1.0, QParam::Value(r(0.0)), 0.7);
        let q512 = Real::from_f64(0.7, 512);
        for z in [
            Cplx::from_f64(0.7, 0.0, 256),
            Cplx::from_f64(2.5, 0.0, 256),
            Cplx::from_f64(-1.3, 0.0, 256),
            Cplx::from_f64(1.0, 1.0, 256),
        ] {
            let (v, cert) = evaluate(&spec, &z, &ctx).unwrap();
            let z512 = Cplx::new(
                Real::from_f64(z.re.to_f64(), 512),
                Real::from_f64(z.im.to_f64(), 512),
            );
            let mut oracle = Cplx::one(512);
            let mut zp = Cplx::one(512);
            for n in 1u32..200 {
                zp = &zp * &z512;
                let c = q512.powi((n * n) as i32) / qpoch_finite_real(&q512, &q512, n);
                oracle = &oracle + &zp.scale(&c);
            }
            let diff = (&v - &oracle).abs();
            let budget = &cert.tail + &Real::exp2i(-200, 512);
            assert!(diff <= budget, "z = {z}: diff {diff} > budget {budget}");
        }
    }

    #[test]
    fn certificates_from_two_runs_agree() {
        let spec = gen_entire(1.5, 0.6, &[0.25], &[1.5]);
        let z = Cplx::from_f64(3.0, -2.0, 256);
        let c1 = PrecisionContext::default();
        let c2 = PrecisionContext::new(320).unwrap();
        let (v1, t1) = evaluate(&spec, &z, &c1).unwrap();
        let (v2, t2) = evaluate(&spec, &z, &c2).unwrap();
        let diff = (&v1 - &v2).abs();
        let budget = &(&t1.tail + &t2.tail) + &Real::exp2i(-200, 256);
        assert!(diff <= budget, "diff {diff} > budget {budget}");
    }

    #[test]
    fn terminating_evaluate_is_polynomial_evaluation() {
        let spec = gen_poly(1.0, 0.45, &[4], &[2.0]);
        let z = Cplx::from_f64(0.3, -1.2, 256);
        let (v, cert) = evaluate(&spec, &z, &PrecisionContext::default()).unwrap();
        assert_eq!(cert.n, 4);
        assert!(cert.tail.is_zero());
        let seq = coefficients(&spec, 4).unwrap();
        let mut direct = Cplx::one(256);
        let mut zp = Cplx::one(256);
        for c in &seq.coeffs[1..] {
            zp = &zp * &z;
            direct = &direct + &zp.scale(c);
        }
        assert_eq!(v.re, direct.re);
        assert_eq!(v.im, direct.im);
    }

    #[test]
    fn truncation_of_terminating_spec_is_exact() {
        let ctx = PrecisionContext::default();
        let cert = truncation_degree(&ram(1.0, QParam::NegPow(6), 0.5), &r(50.0), &ctx).unwrap();
        assert_eq!(cert.n, 6);
        assert!(cert.tail.is_zero());
    }

    #[test]
    fn truncation_degree_monotone_in_radius() {
        let ctx = PrecisionContext::default();
        let spec = ram(1.0, QParam::Value(r(0.0)), 0.5);
        let mut last = 0usize;
        for radius in [0.5, 1.0, 10.0, 100.0, 1e6] {
            let cert = truncation_degree(&spec, &r(radius), &ctx).unwrap();
            assert!(cert.n >= last, "R = {radius}");
            last = cert.n;
        }
    }

    #[test]
    fn truncation_pinned_instance() {
        // Frozen from the ratio-test sweep; the direct 512-bit tail sum
        // confirms both the certificate bound and the eps_id target.
        let ctx = PrecisionContext::default();
        let spec = ram(1.0, QParam::Value(r(0.0)), 0.5);
        let cert = truncation_degree(&spec, &r(10.0), &ctx).unwrap();
        assert_eq!(cert.n, 16);
        let q = Real::from_f64(0.5, 512);
        let ten = Real::from_f64(10.0, 512);
        let mut true_tail = Real::zero(512);
        for k in (cert.n as u32 + 1)..200 {
            let term = q.powi((k * k) as i32) * ten.powi(k as i32)
                / qpoch_finite_real(&q, &q, k);
            true_tail = &true_tail + &term;
        }
        assert!(&true_tail <= ctx.eps_id());
        assert!(true_tail <= cert.tail);
    }

    #[test]
    fn qbessel_unit_at_origin() {
        let ctx = PrecisionContext::default();
        let z = Cplx::zero(256);
        for kind in [BesselKind::One, BesselKind::Two, BesselKind::Three] {
            let v = qbessel_normalized(kind, &r(0.5), &r(0.5), &z, &ctx).unwrap();
            assert_eq!(v.re, Real::one(256));
            assert!(v.im.is_zero());
        }
    }

    #[test]
    fn qbessel_is_even() {
        let ctx = PrecisionContext::default();
        let z = Cplx::from_f64(0.8, 0.3, 256);
        let minus = -&z;
        for kind in [BesselKind::One, BesselKind::Two, BesselKind::Three] {
            let a = qbessel_normalized(kind, &r(0.25), &r(0.6), &z, &ctx).unwrap();
            let b = qbessel_normalized(kind, &r(0.25), &r(0.6), &minus, &ctx).unwrap();
            assert_eq!(a.re, b.re);
            assert_eq!(a.im, b.im);
        }
    }

    #[test]
    fn scaled_unit_constant_term() {
        for spec in [
            gen_poly(1.0, 0.99, &[3], &[1.0]),
            gen_entire(1.5, 0.99, &[0.0], &[1.0]),
        ] {
            let seq = scaled_limit_coefficients(&spec, 4).unwrap();
            assert_eq!(seq.coeffs[0], Real::one(spec.prec()));
        }
    }

    #[test]
    fn scaled_poly_approaches_limit_target() {
        let spec = gen_poly(1.0, 1.0 - 1e-4, &[3], &[1.0]);
        let seq = scaled_limit_coefficients(&spec, 2).unwrap();
        let target = coefficients(&spec.limit_target().unwrap(), 2).unwrap();
        assert_eq!(target.coeffs[2], r(0.75));
        let gap = (&seq.coeffs[2] - &target.coeffs[2]).abs();
        assert!(gap <= r(1e-3), "gap {gap}");
    }

    #[test]
    fn scaled_entire_approaches_limit_target() {
        let spec = gen_entire(1.5, 1.0 - 1e-4, &[0.0], &[1.0]);
        let seq = scaled_limit_coefficients(&spec, 2).unwrap();
        let target = coefficients(&spec.limit_target().unwrap(), 2).unwrap();
        assert_eq!(target.coeffs[2], r(0.125));
        let gap = (&seq.coeffs[2] - &target.coeffs[2]).abs();
        assert!(gap <= r(1e-3), "gap {gap}");
    }

    #[test]
    fn scaled_entire_factorial_bound() {
        // With every numerator value 0, all bases equal, beta >= 1 and
        // the exponent at its critical value, the scaled coefficients are
        // dominated by 1/(k!)^(m+2l) uniformly in q.
        for q in [0.5, 0.9, 0.999] {
            let spec = gen_entire(1.5, q, &[0.0], &[1.0]);
            let seq = scaled_limit_coefficients(&spec, 25).unwrap();
            for (k, c) in seq.coeffs.iter().enumerate() {
                let bound = rising_factorial(&Real::one(256), k as u32)
                    .powi(3)
                    .recip();
                assert!(c.abs() <= bound, "q = {q}, k = {k}");
            }
        }
    }

    #[test]
    fn scaled_rejects_mismatched_exponent() {
        // Entire-case scaling demands alpha = l + m/2.
        let spec = gen_entire(2.0, 0.9, &[0.0], &[1.0]);
        assert!(scaled_limit_coefficients(&spec, 4).is_err());
        // And vanishing numerator values.
        let spec = gen_entire(1.5, 0.9, &[0.25], &[1.0]);
        assert!(scaled_limit_coefficients(&spec, 4).is_err());
    }
}
