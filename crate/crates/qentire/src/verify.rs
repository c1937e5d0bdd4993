//! Theorem-level verification suites.
//!
//! Each suite sweeps a deterministic parameter grid (plus, for the
//! polynomial suite, a seeded batch of randomized instances), checks one
//! mathematical claim per instance with certified arithmetic, and
//! aggregates the outcomes into a [`VerificationReport`]. A failing
//! instance never panics and never aborts the sweep: the violated claim
//! or the underlying numerical error is recorded as a [`Failure`]
//! carrying the full instance parameters.
//!
//! Reports are deterministic functions of (grid, seed, precision): grids
//! are iterated in index order, randomized instances come from a seeded
//! ChaCha20 stream recorded in the report, and no timestamps or other
//! ambient state enter the output, so serialized reports are
//! byte-identical across runs.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::complex::Cplx;
use crate::error::{Error, Result};
use crate::pf::{turan_ratios, turan_threshold};
use crate::precision::PrecisionContext;
use crate::qpoch::{qpoch_finite, qpoch_finite_real, qpoch_infinite, rising_factorial};
use crate::real::Real;
use crate::roots::{
    certify_real_roots, find_poly_roots, hadamard_product, locate_entire_zeros, ZeroSet,
};
use crate::series::{
    coefficients, evaluate, scaled_limit_coefficients, BesselKind, DenFactor, NumFactor, NumKind,
    QParam, SeriesSpec,
};

/// Parameter grid for the verification suites.
///
/// Every suite validates the fields it consumes against its own
/// hypotheses before running, so a report is only ever produced for a
/// grid that lies inside the verified statement's domain.
#[derive(Clone, Debug, Serialize)]
pub struct GridSpec {
    /// Base values, each in (0,1).
    pub q: Vec<Real>,
    /// Gaussian-exponent values.
    pub alpha: Vec<Real>,
    /// Termination orders for polynomial instances.
    pub n: Vec<u32>,
    /// Bessel-type order values.
    pub nu: Vec<Real>,
    /// Numerator parameter values.
    pub a: Vec<Real>,
    /// Denominator parameter values.
    pub b: Vec<Real>,
    /// Number of seeded randomized instances (polynomial suite).
    pub random_instances: usize,
    /// Seed for the randomized instance stream.
    pub seed: u64,
}

/// Default seed for randomized grid instances.
pub const DEFAULT_SEED: u64 = 0x7e57_ab1e;

impl GridSpec {
    /// Default grid for the polynomial-zero suite: all sign patterns of
    /// the terminating families over a broad base/exponent/order sweep,
    /// plus 50 seeded product-family instances.
    pub fn default_poly(bits: u32) -> GridSpec {
        GridSpec {
            q: reals(&[0.1, 0.3, 0.5, 0.7, 0.9], bits),
            alpha: reals(&[0.0, 0.5, 1.0, 2.0], bits),
            n: (1..=8).collect(),
            nu: Vec::new(),
            a: Vec::new(),
            b: Vec::new(),
            random_instances: 50,
            seed: DEFAULT_SEED,
        }
    }

    /// Default grid for the entire-function zero suite (first parameter
    /// range): positive exponents and nonnegative `a`.
    pub fn default_func1(bits: u32) -> GridSpec {
        GridSpec {
            q: reals(&[0.3, 0.5, 0.7], bits),
            alpha: reals(&[0.5, 1.0, 2.0], bits),
            n: Vec::new(),
            nu: Vec::new(),
            a: reals(&[0.0, 0.5, 2.0], bits),
            b: Vec::new(),
            random_instances: 0,
            seed: DEFAULT_SEED,
        }
    }

    /// Default grid for the two-sided-product suite (second parameter
    /// range): `a`/`b` values in (0,1) combined into shapes of up to two
    /// numerator and one denominator parameter.
    pub fn default_func2(bits: u32) -> GridSpec {
        GridSpec {
            q: reals(&[0.3, 0.5], bits),
            alpha: reals(&[1.0, 1.5], bits),
            n: Vec::new(),
            nu: Vec::new(),
            a: reals(&[0.05, 0.3], bits),
            b: reals(&[0.2, 0.5], bits),
            random_instances: 0,
            seed: DEFAULT_SEED,
        }
    }
}

/// Default base grid for the identity suite.
pub fn default_identity_bases(bits: u32) -> Vec<Real> {
    reals(&[0.3, 0.5, 0.8], bits)
}

/// Default sample points for the identity suite: the origin, two real
/// points, and seventeen points spiralling out to |z| = 0.76, all inside
/// every verified identity's convergence domain.
pub fn default_identity_samples(bits: u32) -> Vec<Cplx> {
    let mut samples = vec![
        Cplx::zero(bits),
        Cplx::from_f64(0.3, 0.0, bits),
        Cplx::from_f64(-0.25, 0.0, bits),
    ];
    for j in 3..20u32 {
        let r = Real::from_f64(0.04 * f64::from(j), bits);
        let turns = 2.0 * f64::from((j * 7) % 19) / 19.0 + 0.1;
        let theta = Real::pi(bits) * Real::from_f64(turns, bits);
        let (s, c) = theta.sin_cos();
        samples.push(Cplx::new(&r * &c, &r * &s));
    }
    samples
}

/// Default base sequence for the limit suite: `1 - 2^(-j)`, `j = 3..=10`.
pub fn default_limit_bases(bits: u32) -> Vec<Real> {
    (3..=10)
        .map(|j| Real::one(bits) - &Real::exp2i(-j, bits))
        .collect()
}

/// One failing instance: its parameters and what went wrong.
#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub instance: String,
    pub message: String,
}

/// Aggregated outcome of one verification suite.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    /// Suite tag: `poly`, `func1`, `func2`, `identities`, `limits`, `order`.
    pub suite: String,
    pub precision_bits: u32,
    /// Seed of the randomized instance stream (0 for fully deterministic suites).
    pub seed: u64,
    pub instances_run: usize,
    pub instances_passed: usize,
    /// Instances excluded by a precondition filter (not counted as run).
    pub instances_skipped: usize,
    /// Name of the aggregated metric in `worst_value`.
    pub worst_metric: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_value: Option<Real>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_instance: Option<String>,
    pub failures: Vec<Failure>,
}

impl VerificationReport {
    /// True when every executed instance passed.
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.instances_passed == self.instances_run
    }

    /// One-line human-readable summary.
    pub fn summary(&self) -> String {
        let worst = match (&self.worst_value, &self.worst_instance) {
            (Some(v), Some(i)) => format!(
                "; worst {} {} at {}",
                self.worst_metric,
                v.to_decimal_digits(3),
                i
            ),
            _ => String::new(),
        };
        format!(
            "{}: {}/{} passed, {} skipped{}",
            self.suite, self.instances_passed, self.instances_run, self.instances_skipped, worst
        )
    }
}

/// Whether the suite's worst case is the largest or the smallest metric.
enum Aggregate {
    Max,
    Min,
}

/// Mutable accumulator that enforces the report invariants by
/// construction: `run = passed + |failures|`, skips tracked separately.
struct SuiteRun {
    report: VerificationReport,
    aggregate: Aggregate,
}

impl SuiteRun {
    fn new(
        suite: &str,
        metric: &str,
        aggregate: Aggregate,
        seed: u64,
        ctx: &PrecisionContext,
    ) -> SuiteRun {
        SuiteRun {
            report: VerificationReport {
                suite: suite.into(),
                precision_bits: ctx.bits(),
                seed,
                instances_run: 0,
                instances_passed: 0,
                instances_skipped: 0,
                worst_metric: metric.into(),
                worst_value: None,
                worst_instance: None,
                failures: Vec::new(),
            },
            aggregate,
        }
    }

    fn metric(&mut self, instance: &str, value: Real) {
        let replace = match (&self.report.worst_value, &self.aggregate) {
            (None, _) => true,
            (Some(cur), Aggregate::Max) => value > *cur,
            (Some(cur), Aggregate::Min) => value < *cur,
        };
        if replace {
            self.report.worst_value = Some(value);
            self.report.worst_instance = Some(instance.into());
        }
    }

    fn outcome(&mut self, instance: &str, result: std::result::Result<Real, String>) {
        self.report.instances_run += 1;
        match result {
            Ok(metric) => {
                self.report.instances_passed += 1;
                self.metric(instance, metric);
            }
            Err(message) => self.report.failures.push(Failure {
                instance: instance.into(),
                message,
            }),
        }
    }

    fn skip(&mut self) {
        self.report.instances_skipped += 1;
    }

    fn finish(self) -> VerificationReport {
        self.report
    }
}

fn reals(values: &[f64], bits: u32) -> Vec<Real> {
    values.iter().map(|v| Real::from_f64(*v, bits)).collect()
}

/// Compact decimal label for grid values (all chosen f64-exact).
fn dec(x: &Real) -> String {
    format!("{}", x.to_f64())
}

fn dec_list(xs: &[Real]) -> String {
    let inner: Vec<String> = xs.iter().map(dec).collect();
    format!("[{}]", inner.join(","))
}

fn check_base(q: &Real) -> Result<()> {
    if q.is_positive() && *q < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("base must lie in (0,1), got {q}")))
    }
}

// ---------------------------------------------------------------------------
// Polynomial zero-sign suite
// ---------------------------------------------------------------------------

enum Sign {
    Positive,
    Negative,
}

/// Zero signs of the terminating families: the single-parameter family
/// with parameter `q^(-n)` must have all positive zeros; the
/// multi-factor product families (which absorb a `(-1)^m` sign twist
/// into the variable) and their factorial limits must have all negative
/// zeros.
///
/// Grid instances sweep `q × alpha × n` for the single-parameter family;
/// `grid.random_instances` seeded draws alternate between the product
/// family (random per-factor bases, orders ≤ 5, up to two numerator and
/// two denominator factors) and its factorial limit.
pub fn verify_thm_poly(grid: &GridSpec, ctx: &PrecisionContext) -> Result<VerificationReport> {
    for q in &grid.q {
        check_base(q)?;
    }
    for alpha in &grid.alpha {
        if alpha.is_negative() {
            return Err(Error::Domain(format!(
                "exponent alpha must be >= 0, got {alpha}"
            )));
        }
    }
    if grid.n.contains(&0) {
        return Err(Error::Domain("orders n must be >= 1".into()));
    }
    let mut run = SuiteRun::new("poly", "max imag ratio", Aggregate::Max, grid.seed, ctx);

    for q in &grid.q {
        for alpha in &grid.alpha {
            for &n in &grid.n {
                let spec = SeriesSpec::RamanujanA {
                    alpha: alpha.clone(),
                    a: QParam::NegPow(n),
                    q: q.clone(),
                };
                let inst = format!(
                    "{} q={} alpha={} n={n}",
                    spec.family_name(),
                    dec(q),
                    dec(alpha)
                );
                let result = poly_instance(&spec, n as usize, &Sign::Positive, ctx);
                run.outcome(&inst, result);
            }
        }
    }

    let mut rng = ChaCha20Rng::seed_from_u64(grid.seed);
    for i in 0..grid.random_instances {
        let spec = random_poly_spec(&mut rng, ctx.bits(), i % 2 == 0);
        let deg = spec
            .termination_degree()
            .expect("random polynomial specs terminate") as usize;
        let inst = format!("random[{i}] {} {}", spec.family_name(), spec.params_json());
        let result = poly_instance(&spec, deg, &Sign::Negative, ctx);
        run.outcome(&inst, result);
    }

    Ok(run.finish())
}

fn poly_instance(
    spec: &SeriesSpec,
    deg: usize,
    want: &Sign,
    ctx: &PrecisionContext,
) -> std::result::Result<Real, String> {
    let seq = coefficients(spec, deg).map_err(|e| e.to_string())?;
    let zeros = find_poly_roots(&seq, ctx).map_err(|e| e.to_string())?;
    let report = certify_real_roots(&seq, &zeros, ctx).map_err(|e| e.to_string())?;
    if !report.all_real {
        return Err(format!(
            "zeros not certified real (max imag ratio {})",
            report.max_imag_ratio.to_decimal_digits(3)
        ));
    }
    match want {
        Sign::Positive if !report.all_positive => {
            Err("zeros certified real but not all positive".into())
        }
        Sign::Negative if !report.all_negative => {
            Err("zeros certified real but not all negative".into())
        }
        _ => Ok(report.max_imag_ratio),
    }
}

fn draw(rng: &mut ChaCha20Rng, modulus: u64) -> u64 {
    rng.next_u64() % modulus
}

/// Random terminating spec with dyadic parameters: orders in 1..=5,
/// per-factor bases in {1/16..15/16}, denominator exponents in
/// {1/8..3}, exponent in {0, 1/16, .., 2}.
fn random_poly_spec(rng: &mut ChaCha20Rng, bits: u32, generalized: bool) -> SeriesSpec {
    let m = 1 + draw(rng, 2) as usize;
    let l = draw(rng, 3) as usize;
    let mut orders = Vec::with_capacity(m);
    for _ in 0..m {
        orders.push(1 + draw(rng, 5) as u32);
    }
    let mut betas = Vec::with_capacity(l);
    for _ in 0..l {
        betas.push(Real::from_f64((1 + draw(rng, 24)) as f64 / 8.0, bits));
    }
    if !generalized {
        return SeriesSpec::LimitPoly { orders, betas };
    }
    let alpha = Real::from_f64(draw(rng, 33) as f64 / 16.0, bits);
    let q = Real::from_f64((1 + draw(rng, 14)) as f64 / 16.0, bits);
    let mut num = Vec::with_capacity(m);
    for &n in &orders {
        num.push(NumFactor {
            q: Real::from_f64((1 + draw(rng, 14)) as f64 / 16.0, bits),
            kind: NumKind::NegPow(n),
        });
    }
    let mut den = Vec::with_capacity(l);
    for beta in &betas {
        den.push(DenFactor {
            q: Real::from_f64((1 + draw(rng, 14)) as f64 / 16.0, bits),
            beta: beta.clone(),
        });
    }
    SeriesSpec::GeneralizedQ { alpha, q, num, den }
}

// ---------------------------------------------------------------------------
// Entire-function zero suite, first parameter range
// ---------------------------------------------------------------------------

/// First `count` zeros of the entire families with nonnegative series
/// parameters must all be certified real and negative (and the origin is
/// never among them — every family has unit constant term).
///
/// Instances: the single-parameter family over `q × alpha × a` (the
/// series parameter is `-a`, `a >= 0`), three fixed two-sided product
/// shapes per base, and four factorial-limit shapes with denominator
/// exponents >= 1.
pub fn verify_thm_func1(
    grid: &GridSpec,
    count: usize,
    ctx: &PrecisionContext,
) -> Result<VerificationReport> {
    for q in &grid.q {
        check_base(q)?;
    }
    for alpha in &grid.alpha {
        if !alpha.is_positive() {
            return Err(Error::Domain(format!(
                "entire-function suite requires alpha > 0, got {alpha}"
            )));
        }
    }
    for a in &grid.a {
        if a.is_negative() {
            return Err(Error::Domain(format!(
                "series parameter bound a must be >= 0, got {a}"
            )));
        }
    }
    if count == 0 {
        return Err(Error::Domain("zero count must be >= 1".into()));
    }
    let bits = ctx.bits();
    let mut run = SuiteRun::new("func1", "max imag ratio", Aggregate::Max, grid.seed, ctx);

    for q in &grid.q {
        for alpha in &grid.alpha {
            for a in &grid.a {
                let spec = SeriesSpec::RamanujanA {
                    alpha: alpha.clone(),
                    a: QParam::Value(-a),
                    q: q.clone(),
                };
                let inst = format!(
                    "{} q={} alpha={} a={}",
                    spec.family_name(),
                    dec(q),
                    dec(alpha),
                    dec(a)
                );
                run.outcome(&inst, entire_instance(&spec, count, ctx));
            }
        }
    }

    // Fixed two-sided product shapes: (numerator values, denominator
    // exponents, exponent alpha).
    let shapes: [(&[f64], &[f64], f64); 3] = [
        (&[0.5], &[1.5], 1.0),
        (&[], &[1.0], 0.75),
        (&[0.3, 0.7], &[], 1.25),
    ];
    for q in &grid.q {
        for (avals, bvals, alpha) in &shapes {
            let num = avals
                .iter()
                .map(|a| NumFactor {
                    q: q.clone(),
                    kind: NumKind::NegVal(Real::from_f64(*a, bits)),
                })
                .collect();
            let den = bvals
                .iter()
                .map(|b| DenFactor {
                    q: q.clone(),
                    beta: Real::from_f64(*b, bits),
                })
                .collect();
            let spec = SeriesSpec::GeneralizedQ {
                alpha: Real::from_f64(*alpha, bits),
                q: q.clone(),
                num,
                den,
            };
            let inst = format!(
                "{} q={} alpha={alpha} a={avals:?} beta={bvals:?}",
                spec.family_name(),
                dec(q)
            );
            run.outcome(&inst, entire_instance(&spec, count, ctx));
        }
    }

    let limit_shapes: [(u32, &[f64]); 4] = [(0, &[1.0]), (1, &[1.5]), (0, &[1.0, 2.0]), (2, &[1.0])];
    for (m, bvals) in &limit_shapes {
        let spec = SeriesSpec::LimitEntire {
            m: *m,
            betas: reals(bvals, bits),
        };
        let inst = format!("{} m={m} beta={bvals:?}", spec.family_name());
        run.outcome(&inst, entire_instance(&spec, count, ctx));
    }

    Ok(run.finish())
}

fn entire_instance(
    spec: &SeriesSpec,
    count: usize,
    ctx: &PrecisionContext,
) -> std::result::Result<Real, String> {
    let set = locate_entire_zeros(spec, count, ctx).map_err(|e| e.to_string())?;
    if set.zeros.len() != count {
        return Err(format!(
            "located {} zeros, wanted {count}",
            set.zeros.len()
        ));
    }
    if set.zeros.iter().any(|z| z.value.is_zero()) {
        return Err("origin reported as a zero despite unit constant term".into());
    }
    let report = set
        .report
        .as_ref()
        .ok_or_else(|| "zero set carries no realness report".to_string())?;
    if !report.all_real {
        return Err(format!(
            "zeros not certified real (max imag ratio {})",
            report.max_imag_ratio.to_decimal_digits(3)
        ));
    }
    if !report.all_negative {
        return Err("zeros certified real but not all negative".into());
    }
    Ok(report.max_imag_ratio.clone())
}

// ---------------------------------------------------------------------------
// Two-sided product suite, second parameter range
// ---------------------------------------------------------------------------

/// For two-sided product series whose parameters satisfy the product
/// threshold, the Turán ratio floor must clear 4 and the first `count`
/// zeros must be certified real negative. Instances failing the
/// threshold are excluded before running and reported as skipped, so
/// the two checks can never disagree in direction on a report.
pub fn verify_thm_func2(
    grid: &GridSpec,
    count: usize,
    ctx: &PrecisionContext,
) -> Result<VerificationReport> {
    for q in &grid.q {
        check_base(q)?;
    }
    for alpha in &grid.alpha {
        if !alpha.is_positive() {
            return Err(Error::Domain(format!(
                "two-sided product suite requires alpha > 0, got {alpha}"
            )));
        }
    }
    for v in grid.a.iter().chain(grid.b.iter()) {
        if !v.is_positive() || *v >= 1.0 {
            return Err(Error::Domain(format!(
                "parameters a, b must lie in (0,1), got {v}"
            )));
        }
    }
    if count == 0 {
        return Err(Error::Domain("zero count must be >= 1".into()));
    }
    let mut run = SuiteRun::new("func2", "min turan ratio", Aggregate::Min, grid.seed, ctx);

    // Parameter shapes: empty, one-sided, balanced, and two-numerator.
    let mut shapes: Vec<(Vec<Real>, Vec<Real>)> = vec![(Vec::new(), Vec::new())];
    for a in &grid.a {
        shapes.push((vec![a.clone()], Vec::new()));
    }
    for b in &grid.b {
        shapes.push((Vec::new(), vec![b.clone()]));
    }
    for a in &grid.a {
        for b in &grid.b {
            shapes.push((vec![a.clone()], vec![b.clone()]));
        }
    }
    if grid.a.len() >= 2 {
        for b in &grid.b {
            shapes.push((vec![grid.a[0].clone(), grid.a[1].clone()], vec![b.clone()]));
        }
    }

    for q in &grid.q {
        for alpha in &grid.alpha {
            for (avals, bvals) in &shapes {
                let check = turan_threshold(alpha, q, avals, bvals)?;
                if !check.holds {
                    run.skip();
                    continue;
                }
                let spec = SeriesSpec::RAs {
                    alpha: alpha.clone(),
                    a: avals.clone(),
                    b: bvals.clone(),
                    q: q.clone(),
                };
                let inst = format!(
                    "{} q={} alpha={} a={} b={}",
                    spec.family_name(),
                    dec(q),
                    dec(alpha),
                    dec_list(avals),
                    dec_list(bvals)
                );
                run.outcome(&inst, threshold_instance(&spec, count, ctx));
            }
        }
    }

    Ok(run.finish())
}

fn threshold_instance(
    spec: &SeriesSpec,
    count: usize,
    ctx: &PrecisionContext,
) -> std::result::Result<Real, String> {
    let seq = coefficients(spec, 11).map_err(|e| e.to_string())?;
    let ratios = turan_ratios(&seq, ctx).map_err(|e| e.to_string())?;
    if !ratios.passes_4 {
        return Err(format!(
            "Turán ratio floor {} below 4 despite the product threshold holding",
            ratios.min_ratio.to_decimal_digits(6)
        ));
    }
    entire_instance(spec, count, ctx)?;
    Ok(ratios.min_ratio)
}

// ---------------------------------------------------------------------------
// Identity suite
// ---------------------------------------------------------------------------

/// Bessel-type orders exercised by the identity suite.
const IDENTITY_NUS: [f64; 3] = [0.0, 0.5, 1.3];

/// Zeros kept when truncating an infinite product over a zero set.
const PRODUCT_ZEROS: usize = 8;

/// Cross-checks between independently computed closed forms.
///
/// Exact identities (finite sums, products of infinite q-shifted
/// factorials, series rearrangements, base-inversion symmetries) are
/// evaluated at every sample point and must agree to the identity
/// tolerance. The two truncated-product identities keep the first
/// [`PRODUCT_ZEROS`] zeros only, so they are checked in two tiers: at
/// tiny arguments (|z| = 2^-132), where the omitted factors are provably
/// below the identity tolerance, and at a moderate argument against an
/// allowance derived from the geometric growth of the zero moduli.
///
/// Sample points must satisfy |z| <= 0.9 so that every identity is
/// evaluated strictly inside its convergence domain.
pub fn verify_identities(
    q_grid: &[Real],
    samples: &[Cplx],
    ctx: &PrecisionContext,
) -> Result<VerificationReport> {
    for q in q_grid {
        check_base(q)?;
    }
    if samples.is_empty() {
        return Err(Error::Domain("identity suite needs sample points".into()));
    }
    let limit = Real::from_f64(0.9, 64);
    for z in samples {
        if z.abs() > limit {
            return Err(Error::Domain(format!(
                "sample point {z} lies outside |z| <= 0.9"
            )));
        }
    }
    // Evaluate in a strictly tighter context (more bits AND smaller
    // internal truncation targets), then certify against the caller's
    // tolerance; `padded` alone would keep the caller's truncation
    // targets and leave product tails at the certification threshold.
    let pad = PrecisionContext::new(ctx.bits() + 64)?;
    let eps = ctx.eps_id().clone();
    let mut run = SuiteRun::new("identities", "max residual", Aggregate::Max, 0, ctx);

    for q in q_grid {
        for n in [1u32, 2, 3] {
            let inst = format!("stieltjes-wigert-bridge q={} n={n}", dec(q));
            run.outcome(&inst, sweep(samples, &eps, |z| sw_bridge(q, n, z, &pad)));
        }

        let inst = format!("zero-parameter-reduction q={}", dec(q));
        run.outcome(&inst, sweep(samples, &eps, |z| zero_param_reduction(q, z, &pad)));

        let inst = format!("partial-theta-collapse q={}", dec(q));
        run.outcome(&inst, sweep(samples, &eps, |z| partial_theta_collapse(q, z, &pad)));

        for a in [0.0, 0.5, 1.0] {
            let inst = format!("q-binomial-ratio q={} a={a}", dec(q));
            run.outcome(&inst, sweep(samples, &eps, |z| binomial_ratio(q, a, z, &pad)));
        }

        for n in [1u32, 2, 3, 5] {
            let inst = format!("terminating-q-binomial q={} n={n}", dec(q));
            run.outcome(&inst, sweep(samples, &eps, |z| terminating_binomial(q, n, z, &pad)));
        }

        for nu_f in IDENTITY_NUS {
            let nu = Real::from_f64(nu_f, ctx.bits());

            let inst = format!("bessel-kind-bridge q={} nu={nu_f}", dec(q));
            run.outcome(&inst, sweep(samples, &eps, |z| kind_bridge(q, &nu, z, &pad)));

            // Both product identities reuse one located zero set.
            let kind2 = SeriesSpec::QBessel {
                kind: BesselKind::Two,
                nu: nu.clone(),
                q: q.clone(),
            };
            match locate_entire_zeros(&kind2, PRODUCT_ZEROS, &pad) {
                Ok(set) => {
                    let inst = format!("bessel-zero-product q={} nu={nu_f}", dec(q));
                    run.outcome(&inst, tiered_product(&set, q, &eps, &pad, |u| {
                        let (lhs, _) = evaluate(&kind2, u, &pad)?;
                        Ok((lhs, hadamard_product(&set, u)))
                    }));

                    let kind1 = SeriesSpec::QBessel {
                        kind: BesselKind::One,
                        nu: nu.clone(),
                        q: q.clone(),
                    };
                    let inst = format!("bessel-product-euler-ratio q={} nu={nu_f}", dec(q));
                    run.outcome(&inst, tiered_product(&set, q, &eps, &pad, |u| {
                        let neg = -u;
                        let (lhs, _) = evaluate(&kind1, &neg, &pad)?;
                        let quarter = Real::from_f64(0.25, u.prec());
                        let (euler, _) = qpoch_infinite(&u.scale(&quarter), q, &pad)?;
                        Ok((lhs, hadamard_product(&set, &neg).div(&euler)))
                    }));
                }
                Err(e) => {
                    let msg = format!("zero location failed: {e}");
                    let inst = format!("bessel-zero-product q={} nu={nu_f}", dec(q));
                    run.outcome(&inst, Err(msg.clone()));
                    let inst = format!("bessel-product-euler-ratio q={} nu={nu_f}", dec(q));
                    run.outcome(&inst, Err(msg));
                }
            }

            for (tag, lhs_kind, rhs_kind, weighted) in [
                ("one-two", BesselKind::One, BesselKind::Two, false),
                ("two-one", BesselKind::Two, BesselKind::One, false),
                ("three-three", BesselKind::Three, BesselKind::Three, true),
            ] {
                let inst = format!("base-inversion-{tag} q={} nu={nu_f}", dec(q));
                run.outcome(&inst, sweep(samples, &eps, |z| {
                    base_inversion(q, &nu, lhs_kind, rhs_kind, weighted, z, &pad)
                }));
            }
        }
    }

    Ok(run.finish())
}

/// Maximum relative residual of `f` over the samples, failed against `tol`.
fn sweep(
    samples: &[Cplx],
    tol: &Real,
    f: impl Fn(&Cplx) -> Result<Real>,
) -> std::result::Result<Real, String> {
    let mut worst = Real::zero(tol.prec());
    for z in samples {
        let r = f(z).map_err(|e| e.to_string())?;
        worst = worst.max(&r);
    }
    if worst <= *tol {
        Ok(worst)
    } else {
        Err(format!(
            "residual {} exceeds tolerance {}",
            worst.to_decimal_digits(6),
            tol.to_decimal_digits(6)
        ))
    }
}

/// Relative gap |l - r| / max(1, |l|, |r|).
fn rel_residual(l: &Cplx, r: &Cplx) -> Real {
    let diff = (l - r).abs();
    let scale = Real::one(diff.prec()).max(&l.abs()).max(&r.abs());
    diff / scale
}

/// Direct term-by-term summation with a small-term stopping rule;
/// `term(n)` must be callable in increasing order of `n`. This is the
/// independent oracle path: closed-form terms, no ratio recurrences.
fn direct_sum(wp: u32, mut term: impl FnMut(u32) -> Cplx) -> Cplx {
    let floor = Real::exp2i(-i64::from(wp) - 16, wp);
    let mut sum = Cplx::zero(wp);
    let mut quiet = 0u32;
    for n in 0..600u32 {
        let t = term(n);
        sum = &sum + &t;
        if t.abs() <= &floor * &Real::one(wp).max(&sum.abs()) {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    sum
}

/// Terminating series against the classical discrete weight polynomial:
/// the degree-n series with parameter `q^(-n)` and exponent 1/2 equals
/// `(q;q)_n` times the Stieltjes–Wigert polynomial at `-z q^(-n-1/2)`.
fn sw_bridge(q: &Real, n: u32, z: &Cplx, ctx: &PrecisionContext) -> Result<Real> {
    let wp = ctx.bits();
    let spec = SeriesSpec::RamanujanA {
        alpha: Real::from_f64(0.5, wp),
        a: QParam::NegPow(n),
        q: q.clone(),
    };
    let (lhs, _) = evaluate(&spec, z, ctx)?;

    let shift = q.pow(&Real::from_f64(-f64::from(n) - 0.5, wp));
    let w = (-z).scale(&shift);
    let mut sum = Cplx::zero(wp);
    let mut wk = Cplx::one(wp);
    for k in 0..=n {
        if k > 0 {
            wk = wk.mul(&w);
        }
        let c = q.powi((k * k) as i32)
            / (qpoch_finite_real(q, q, k) * qpoch_finite_real(q, q, n - k));
        sum = &sum + &wk.scale(&c);
    }
    let rhs = sum.scale(&qpoch_finite_real(q, q, n));
    Ok(rel_residual(&lhs, &rhs))
}

/// Zero series parameter: the family evaluator against a direct sum of
/// `q^(n^2) z^n / (q;q)_n`.
fn zero_param_reduction(q: &Real, z: &Cplx, ctx: &PrecisionContext) -> Result<Real> {
    let wp = ctx.bits();
    let spec = SeriesSpec::RamanujanA {
        alpha: Real::one(wp),
        a: QParam::Value(Real::zero(wp)),
        q: q.clone(),
    };
    let (lhs, _) = evaluate(&spec, z, ctx)?;
    let mut zp = Cplx::one(wp);
    let rhs = direct_sum(wp, |n| {
        if n > 0 {
            zp = zp.mul(z);
        }
        zp.scale(&(q.powi((n * n) as i32) / qpoch_finite_real(q, q, n)))
    });
    Ok(rel_residual(&lhs, &rhs))
}

/// Series parameter equal to the base collapses the denominator: the
/// evaluator against a direct partial-theta sum `Σ q^(n^2) z^n`.
fn partial_theta_collapse(q: &Real, z: &Cplx, ctx: &PrecisionContext) -> Result<Real> {
    let wp = ctx.bits();
    let spec = SeriesSpec::RamanujanA {
        alpha: Real::one(wp),
        a: QParam::Value(q.clone()),
        q: q.clone(),
    };
    let (lhs, _) = evaluate(&spec, z, ctx)?;
    let mut zp = Cplx::one(wp);
    let rhs = direct_sum(wp, |n| {
        if n > 0 {
            zp = zp.mul(z);
        }
        zp.scale(&q.powi((n * n) as i32))
    });
    Ok(rel_residual(&lhs, &rhs))
}

/// Generating-function form of the q-binomial theorem specialised to a
/// unit denominator parameter: `(-az;q)_∞ / (z;q)_∞` equals the series
/// with numerator factor `(-a;q)_n` for |z| < 1.
fn binomial_ratio(q: &Real, a: f64, z: &Cplx, ctx: &PrecisionContext) -> Result<Real> {
    let wp = ctx.bits();
    let av = Real::from_f64(a, wp);
    let (num, _) = qpoch_infinite(&(-z).scale(&av), q, ctx)?;
    let (den, _) = qpoch_infinite(z, q, ctx)?;
    let lhs = num.div(&den);

    let spec = SeriesSpec::GeneralizedQ {
        alpha: Real::zero(wp),
        q: q.clone(),
        num: vec![NumFactor {
            q: q.clone(),
            kind: NumKind::NegVal(av),
        }],
        den: Vec::new(),
    };
    let (rhs, _) = evaluate(&spec, z, ctx)?;
    Ok(rel_residual(&lhs, &rhs))
}

/// Terminating q-binomial sum: the degree-n series with parameter
/// `q^(-n)` and exponent 0, evaluated at `-z`, equals the finite product
/// `(-z q^(-n); q)_n`.
fn terminating_binomial(q: &Real, n: u32, z: &Cplx, ctx: &PrecisionContext) -> Result<Real> {
    let wp = ctx.bits();
    let spec = SeriesSpec::RamanujanA {
        alpha: Real::zero(wp),
        a: QParam::NegPow(n),
        q: q.clone(),
    };
    let neg = -z;
    let (lhs, _) = evaluate(&spec, &neg, ctx)?;
    let arg = neg.scale(&q.powi(-(n as i32)));
    let rhs = qpoch_finite(&arg, q, n);
    Ok(rel_residual(&lhs, &rhs))
}

/// Bridge between the first two Bessel-type kinds (in the even variable
/// `u`): kind 1 equals kind 2 divided by `(-u/4; q)_∞`.
fn kind_bridge(q: &Real, nu: &Real, u: &Cplx, ctx: &PrecisionContext) -> Result<Real> {
    let wp = ctx.bits();
    let one = SeriesSpec::QBessel {
        kind: BesselKind::One,
        nu: nu.clone(),
        q: q.clone(),
    };
    let two = SeriesSpec::QBessel {
        kind: BesselKind::Two,
        nu: nu.clone(),
        q: q.clone(),
    };
    let (lhs, _) = evaluate(&one, u, ctx)?;
    let (val2, _) = evaluate(&two, u, ctx)?;
    let quarter = Real::from_f64(0.25, wp);
    let (euler, _) = qpoch_infinite(&(-u).scale(&quarter), q, ctx)?;
    Ok(rel_residual(&lhs, &val2.div(&euler)))
}

/// Two-tier check of a truncated zero product against a series value.
///
/// Tier one: at |u| = 2^-132 the omitted factors contribute at most
/// |u|·Σ 1/|u_k| over the unlocated zeros, provably below the identity
/// tolerance for every grid base. Tier two: at u = 0.01 the residual
/// must stay within an allowance `8 |u| q² / ((1-q²) |u_K|)` obtained by
/// bounding the unlocated zero moduli from below by the geometric
/// growth `|u_(K+i)| >= |u_K| q^(-2i)`.
fn tiered_product(
    set: &ZeroSet,
    q: &Real,
    eps: &Real,
    ctx: &PrecisionContext,
    f: impl Fn(&Cplx) -> Result<(Cplx, Cplx)>,
) -> std::result::Result<Real, String> {
    let wp = ctx.bits();
    // Tier one: tiny arguments on six phases.
    let tiny = Real::exp2i(-132, wp);
    for k in 0..6u32 {
        let theta = Real::pi(wp) * Real::from_f64(f64::from(k) / 3.0, wp);
        let (s, c) = theta.sin_cos();
        let u = Cplx::new(&tiny * &c, &tiny * &s);
        let (lhs, rhs) = f(&u).map_err(|e| e.to_string())?;
        let r = rel_residual(&lhs, &rhs);
        if r > *eps {
            return Err(format!(
                "tiny-argument residual {} exceeds tolerance {}",
                r.to_decimal_digits(6),
                eps.to_decimal_digits(6)
            ));
        }
    }
    // Tier two: moderate argument with a truncation allowance.
    let u = Cplx::from_f64(0.01, 0.0, wp);
    let (lhs, rhs) = f(&u).map_err(|e| e.to_string())?;
    let r = rel_residual(&lhs, &rhs);
    let outer = set
        .zeros
        .last()
        .ok_or_else(|| "empty zero set".to_string())?
        .value
        .abs();
    let q2 = q * q;
    let allow = Real::from_f64(8.0 * 0.01, wp) * &q2 / ((Real::one(wp) - &q2) * outer);
    if r > allow {
        return Err(format!(
            "truncated-product residual {} exceeds allowance {}",
            r.to_decimal_digits(6),
            allow.to_decimal_digits(6)
        ));
    }
    Ok(r)
}

/// Direct partial sum of a Bessel-type series at an inverted base
/// `Q = 1/q > 1`; terms are computed from the finite products, which
/// stay well-defined for any positive base.
fn inverted_base_sum(kind: BesselKind, nu: &Real, bigq: &Real, usym: &Cplx, wp: u32) -> Cplx {
    let qn1 = bigq.pow(&(nu + &Real::one(wp)));
    let qnu = bigq.pow(nu);
    let step = (-usym).scale(&Real::from_f64(0.25, wp));
    let mut power = Cplx::one(wp);
    direct_sum(wp, |n| {
        if n > 0 {
            power = power.mul(&step);
        }
        let den = qpoch_finite_real(bigq, bigq, n) * qpoch_finite_real(&qn1, bigq, n);
        let weight = match kind {
            BesselKind::One => Real::one(wp),
            BesselKind::Two => bigq.powi((n * n) as i32) * qnu.powi(n as i32),
            BesselKind::Three => bigq.powi((n * (n + 1) / 2) as i32),
        };
        power.scale(&(weight / den))
    })
}

/// Base-inversion symmetry: a kind evaluated at base `q` in (0,1) equals
/// a (possibly different) kind at base `1/q` with the argument rescaled
/// by `1/q` (or by `q^(-nu)` for the third kind, `weighted`). The
/// inverted-base side is summed directly from finite products.
fn base_inversion(
    q: &Real,
    nu: &Real,
    lhs_kind: BesselKind,
    rhs_kind: BesselKind,
    weighted: bool,
    u: &Cplx,
    ctx: &PrecisionContext,
) -> Result<Real> {
    let wp = ctx.bits();
    let spec = SeriesSpec::QBessel {
        kind: lhs_kind,
        nu: nu.clone(),
        q: q.clone(),
    };
    let (lhs, _) = evaluate(&spec, u, ctx)?;
    let bigq = q.recip();
    let scale = if weighted { bigq.pow(nu) } else { bigq.clone() };
    let rhs = inverted_base_sum(rhs_kind, nu, &bigq, &u.scale(&scale), wp);
    Ok(rel_residual(&lhs, &rhs))
}

// ---------------------------------------------------------------------------
// Limit suite
// ---------------------------------------------------------------------------

/// Convergence of the q-scaled families to their factorial limits along
/// an increasing base sequence.
///
/// For each instance the maximum coefficient gap against the limit
/// family must shrink by at least 1.8x per step over the final three
/// steps (the asymptotic rate is 2x, linear in `1-q`; the margin covers
/// curvature). Polynomial instances additionally track their zeros,
/// which must approach the limit polynomial's zeros at a 1.5x-per-step
/// rate; entire instances are additionally checked against the uniform
/// bound `|scaled c_k| <= 1/(k!)^(m+2l)` at every base in the sequence.
pub fn verify_limits(q_sequence: &[Real], ctx: &PrecisionContext) -> Result<VerificationReport> {
    if q_sequence.len() < 4 {
        return Err(Error::Domain(
            "limit suite needs at least four base values".into(),
        ));
    }
    for q in q_sequence {
        check_base(q)?;
    }
    for pair in q_sequence.windows(2) {
        if pair[1] <= pair[0] {
            return Err(Error::Domain(
                "limit suite requires a strictly increasing base sequence".into(),
            ));
        }
    }
    let bits = ctx.bits();
    let mut run = SuiteRun::new(
        "limits",
        "final coefficient gap",
        Aggregate::Max,
        0,
        ctx,
    );

    let poly_shapes: [(&[u32], &[f64]); 3] =
        [(&[2], &[1.0]), (&[2, 3], &[]), (&[4], &[1.0, 2.5])];
    for (orders, bvals) in &poly_shapes {
        let inst = format!("poly-limit n={orders:?} beta={bvals:?}");
        run.outcome(
            &inst,
            poly_limit_instance(orders, &reals(bvals, bits), q_sequence, ctx),
        );
    }

    let entire_shapes: [(u32, &[f64]); 3] = [(0, &[1.0]), (1, &[1.5]), (0, &[1.0, 2.0])];
    for (m, bvals) in &entire_shapes {
        let inst = format!("entire-limit m={m} beta={bvals:?}");
        run.outcome(
            &inst,
            entire_limit_instance(*m, &reals(bvals, bits), q_sequence, ctx),
        );
    }

    Ok(run.finish())
}

/// Gap sequence must shrink by `factor` per step over the last three steps.
fn check_shrink(gaps: &[Real], factor: f64, what: &str) -> std::result::Result<(), String> {
    let n = gaps.len();
    let f = Real::from_f64(factor, gaps[0].prec());
    for i in (n - 3)..n {
        if gaps[i].is_zero() {
            continue; // converged exactly; nothing left to shrink
        }
        if &gaps[i] * &f > gaps[i - 1] {
            return Err(format!(
                "{what} shrank only {}x at step {i} (need >= {factor}x)",
                (&gaps[i - 1] / &gaps[i]).to_decimal_digits(3)
            ));
        }
    }
    Ok(())
}

fn max_coeff_gap(scaled: &[Real], target: &[Real]) -> Real {
    let mut gap = Real::zero(scaled[0].prec());
    for (s, t) in scaled.iter().zip(target) {
        gap = gap.max(&(s - t).abs());
    }
    gap
}

fn poly_limit_instance(
    orders: &[u32],
    betas: &[Real],
    qs: &[Real],
    ctx: &PrecisionContext,
) -> std::result::Result<Real, String> {
    let deg = *orders.iter().min().expect("nonempty orders") as usize;
    let target_spec = SeriesSpec::LimitPoly {
        orders: orders.to_vec(),
        betas: betas.to_vec(),
    };
    let target = coefficients(&target_spec, deg).map_err(|e| e.to_string())?;
    let target_roots = find_poly_roots(&target, ctx).map_err(|e| e.to_string())?;

    let mut gaps = Vec::with_capacity(qs.len());
    let mut dists = Vec::with_capacity(qs.len());
    for q in qs {
        let spec = SeriesSpec::GeneralizedQ {
            alpha: Real::one(ctx.bits()),
            q: q.clone(),
            num: orders
                .iter()
                .map(|&n| NumFactor {
                    q: q.clone(),
                    kind: NumKind::NegPow(n),
                })
                .collect(),
            den: betas
                .iter()
                .map(|b| DenFactor {
                    q: q.clone(),
                    beta: b.clone(),
                })
                .collect(),
        };
        let scaled = scaled_limit_coefficients(&spec, deg).map_err(|e| e.to_string())?;
        if scaled.coeffs[0] != Real::one(scaled.coeffs[0].prec()) {
            return Err("scaled constant term differs from 1".into());
        }
        gaps.push(max_coeff_gap(&scaled.coeffs, &target.coeffs));

        let roots = find_poly_roots(&scaled, ctx).map_err(|e| e.to_string())?;
        let mut dist = Real::zero(ctx.bits());
        for t in &target_roots.zeros {
            let mut nearest: Option<Real> = None;
            for s in &roots.zeros {
                let d = (&t.value - &s.value).abs();
                nearest = Some(match nearest {
                    None => d,
                    Some(cur) => cur.min(&d),
                });
            }
            dist = dist.max(&nearest.expect("limit polynomial has roots"));
        }
        dists.push(dist);
    }

    check_shrink(&gaps, 1.8, "coefficient gap")?;
    check_shrink(&dists, 1.5, "zero distance")?;
    Ok(gaps.last().expect("nonempty sequence").clone())
}

fn entire_limit_instance(
    m: u32,
    betas: &[Real],
    qs: &[Real],
    ctx: &PrecisionContext,
) -> std::result::Result<Real, String> {
    const GAP_TERMS: usize = 12;
    const BOUND_TERMS: usize = 25;
    let bits = ctx.bits();
    let l = betas.len() as u32;
    let alpha = Real::from_u32(l, bits) + Real::from_u32(m, bits) / Real::from_u32(2, bits);
    let target_spec = SeriesSpec::LimitEntire {
        m,
        betas: betas.to_vec(),
    };
    let target = coefficients(&target_spec, GAP_TERMS).map_err(|e| e.to_string())?;

    let power = (m + 2 * l) as i32;
    let mut gaps = Vec::with_capacity(qs.len());
    for q in qs {
        let spec = SeriesSpec::GeneralizedQ {
            alpha: alpha.clone(),
            q: q.clone(),
            num: (0..m)
                .map(|_| NumFactor {
                    q: q.clone(),
                    kind: NumKind::NegVal(Real::zero(bits)),
                })
                .collect(),
            den: betas
                .iter()
                .map(|b| DenFactor {
                    q: q.clone(),
                    beta: b.clone(),
                })
                .collect(),
        };
        let scaled = scaled_limit_coefficients(&spec, BOUND_TERMS).map_err(|e| e.to_string())?;
        for (k, c) in scaled.coeffs.iter().enumerate() {
            let bound = rising_factorial(&Real::one(bits), k as u32)
                .powi(power)
                .recip();
            if c.abs() > bound {
                return Err(format!(
                    "scaled coefficient k={k} at q={} breaks the factorial-power bound",
                    dec(q)
                ));
            }
        }
        gaps.push(max_coeff_gap(
            &scaled.coeffs[..=GAP_TERMS],
            &target.coeffs,
        ));
    }

    check_shrink(&gaps, 1.8, "coefficient gap")?;
    Ok(gaps.last().expect("nonempty sequence").clone())
}

// ---------------------------------------------------------------------------
// Growth-order suite
// ---------------------------------------------------------------------------

/// Growth-order estimate of a factorial-limit entire function from its
/// K-th coefficient: `K (ln K - 1) / (-ln a_K)`.
///
/// The numerator compensates the denominator's leading Stirling term
/// (`ln K! ≈ K ln K - K`), so the estimate converges to the true order
/// `1/(m+2l)` at a `O(ln K / K)` rate instead of `O(1/ln K)` for the
/// uncompensated index ratio. Logarithms of the coefficient are
/// accumulated exactly, term by term, never through the (tiny)
/// coefficient value itself.
pub fn estimate_order(spec: &SeriesSpec, k: usize) -> Result<Real> {
    let SeriesSpec::LimitEntire { m, betas } = spec else {
        return Err(Error::Domain(
            "order estimation targets the factorial-limit entire family".into(),
        ));
    };
    spec.validate()?;
    if k < 50 {
        return Err(Error::Domain(format!(
            "order estimation needs K >= 50, got {k}"
        )));
    }
    let bits = 256.max(spec.prec());
    // ln(1/a_K) = (m + l) ln K! + Σ_r ln (β_r)_K, all accumulated as sums
    // of logarithms.
    let mut ln_fact = Real::zero(bits);
    for j in 1..=k {
        ln_fact = &ln_fact + &Real::from_u32(j as u32, bits).ln();
    }
    let mut ln_inv = &ln_fact * &Real::from_u32(m + betas.len() as u32, bits);
    for beta in betas {
        let mut s = Real::zero(bits);
        for j in 0..k {
            s = &s + &(beta + &Real::from_u32(j as u32, bits)).ln();
        }
        ln_inv = &ln_inv + &s;
    }
    let kk = Real::from_u32(k as u32, bits);
    Ok(&kk * &(kk.ln() - &Real::one(bits)) / ln_inv)
}

/// Order estimates across the factorial-limit shapes must land within 5%
/// of `1/(m+2l)` at K = 200.
pub fn verify_order(ctx: &PrecisionContext) -> Result<VerificationReport> {
    let bits = ctx.bits();
    let mut run = SuiteRun::new("order", "max relative error", Aggregate::Max, 0, ctx);
    let shapes: [(u32, &[f64]); 4] = [(0, &[1.0]), (1, &[1.0]), (0, &[1.0, 2.0]), (2, &[1.0])];
    for (m, bvals) in &shapes {
        let spec = SeriesSpec::LimitEntire {
            m: *m,
            betas: reals(bvals, bits),
        };
        let inst = format!("{} m={m} beta={bvals:?}", spec.family_name());
        let result = (|| {
            let est = estimate_order(&spec, 200).map_err(|e| e.to_string())?;
            let denom = m + 2 * bvals.len() as u32;
            let rho = Real::from_u32(denom, bits).recip();
            let rel = (&est - &rho).abs() / &rho;
            if rel > Real::from_f64(0.05, bits) {
                return Err(format!(
                    "estimate {} deviates {}% from 1/{denom}",
                    est.to_decimal_digits(6),
                    (&rel * &Real::from_u32(100, bits)).to_decimal_digits(3)
                ));
            }
            Ok(rel)
        })();
        run.outcome(&inst, result);
    }
    Ok(run.finish())
}

// ---------------------------------------------------------------------------
// Suite runner
// ---------------------------------------------------------------------------

/// All six suites on their default grids, in a fixed order.
pub fn run_all(ctx: &PrecisionContext) -> Result<Vec<VerificationReport>> {
    let bits = ctx.bits();
    Ok(vec![
        verify_thm_poly(&GridSpec::default_poly(bits), ctx)?,
        verify_thm_func1(&GridSpec::default_func1(bits), 5, ctx)?,
        verify_thm_func2(&GridSpec::default_func2(bits), 5, ctx)?,
        verify_identities(
            &default_identity_bases(bits),
            &default_identity_samples(bits),
            ctx,
        )?,
        verify_limits(&default_limit_bases(bits), ctx)?,
        verify_order(ctx)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn small_poly_grid() -> GridSpec {
        GridSpec {
            q: reals(&[0.5], 256),
            alpha: reals(&[1.0], 256),
            n: vec![1, 2],
            nu: Vec::new(),
            a: Vec::new(),
            b: Vec::new(),
            random_instances: 0,
            seed: DEFAULT_SEED,
        }
    }

    #[test]
    fn poly_low_degree_instances_are_pinned() {
        // Degree 1 at q = 1/2: the polynomial is 1 - x, zero exactly 1.
        // Degree 2: 1 - 3x + x²/2, zeros 3 ± sqrt(7).
        let seq = coefficients(
            &SeriesSpec::RamanujanA {
                alpha: Real::one(256),
                a: QParam::NegPow(2),
                q: Real::from_f64(0.5, 256),
            },
            2,
        )
        .unwrap();
        let roots = find_poly_roots(&seq, &ctx()).unwrap();
        let seven = Real::from_f64(7.0, 320).sqrt();
        let three = Real::from_f64(3.0, 320);
        let tol = Real::exp2i(-100, 320);
        let lo = (&roots.zeros[0].value.re - &(&three - &seven)).abs();
        let hi = (&roots.zeros[1].value.re - &(&three + &seven)).abs();
        assert!(lo <= tol, "small zero off by {lo}");
        assert!(hi <= tol, "large zero off by {hi}");

        let report = verify_thm_poly(&small_poly_grid(), &ctx()).unwrap();
        assert!(report.passed());
        assert_eq!(report.instances_run, 2);
        assert_eq!(report.instances_passed, 2);
        assert!(report.failures.is_empty());
    }

    #[test]
    fn poly_grid_and_random_batch_pass() {
        let grid = GridSpec {
            q: reals(&[0.1, 0.5, 0.9], 256),
            alpha: reals(&[0.0, 1.0], 256),
            n: vec![1, 2, 3, 4, 5],
            nu: Vec::new(),
            a: Vec::new(),
            b: Vec::new(),
            random_instances: 12,
            seed: DEFAULT_SEED,
        };
        let report = verify_thm_poly(&grid, &ctx()).unwrap();
        assert_eq!(report.instances_run, 3 * 2 * 5 + 12);
        assert!(report.passed(), "failures: {:?}", report.failures);
        assert_eq!(report.instances_skipped, 0);
        assert!(report.worst_value.is_some());
        // The certified imaginary parts on real-zero instances are tiny.
        assert!(*report.worst_value.as_ref().unwrap() <= *ctx().eps_real());
    }

    #[test]
    fn poly_grid_validation_rejects_bad_points() {
        let mut grid = small_poly_grid();
        grid.q = reals(&[1.2], 256);
        assert!(matches!(
            verify_thm_poly(&grid, &ctx()),
            Err(Error::Domain(_))
        ));
        let mut grid = small_poly_grid();
        grid.n = vec![0];
        assert!(matches!(
            verify_thm_poly(&grid, &ctx()),
            Err(Error::Domain(_))
        ));
        let mut grid = small_poly_grid();
        grid.alpha = reals(&[-0.5], 256);
        assert!(matches!(
            verify_thm_poly(&grid, &ctx()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn func1_small_grid_zeros_are_negative() {
        let grid = GridSpec {
            q: reals(&[0.5], 256),
            alpha: reals(&[1.0], 256),
            n: Vec::new(),
            nu: Vec::new(),
            a: reals(&[0.0, 0.5], 256),
            b: Vec::new(),
            random_instances: 0,
            seed: DEFAULT_SEED,
        };
        let report = verify_thm_func1(&grid, 3, &ctx()).unwrap();
        // 2 single-parameter + 3 product shapes + 4 factorial-limit shapes.
        assert_eq!(report.instances_run, 9);
        assert!(report.passed(), "failures: {:?}", report.failures);
        assert_eq!(report.suite, "func1");
    }

    #[test]
    fn func1_rejects_zero_alpha() {
        let mut grid = GridSpec::default_func1(256);
        grid.alpha = reals(&[0.0], 256);
        assert!(matches!(
            verify_thm_func1(&grid, 3, &ctx()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn factorial_square_series_first_zero_matches_classical_bessel() {
        // Σ z^k/(k!)² — its first zero is minus the square of half the
        // first zero of the classical cylinder function of order zero.
        let spec = SeriesSpec::LimitEntire {
            m: 0,
            betas: vec![Real::one(256)],
        };
        let set = locate_entire_zeros(&spec, 1, &ctx()).unwrap();
        let j01 = Real::parse("2.404825557695772768621631879326", 320).unwrap();
        let expected = -(&j01 / &Real::from_u32(2, 320)).powi(2);
        let gap = (&set.zeros[0].value.re - &expected).abs();
        assert!(gap <= Real::from_f64(1e-28, 320), "gap {gap}");
    }

    #[test]
    fn func2_boundary_runs_and_off_threshold_skips() {
        // At q = 1/2, alpha = 1 the empty shape sits exactly on the
        // threshold boundary (1 >= 4q² = 1) and its ratio floor is
        // exactly 4; every one-parameter shape pushes the left side
        // below 1 and is skipped.
        let grid = GridSpec {
            q: reals(&[0.5], 256),
            alpha: reals(&[1.0], 256),
            n: Vec::new(),
            nu: Vec::new(),
            a: reals(&[0.3], 256),
            b: reals(&[0.2], 256),
            random_instances: 0,
            seed: DEFAULT_SEED,
        };
        let report = verify_thm_func2(&grid, 3, &ctx()).unwrap();
        assert_eq!(report.instances_run, 1);
        assert_eq!(report.instances_passed, 1);
        assert_eq!(report.instances_skipped, 3);
        let worst = report.worst_value.as_ref().unwrap();
        let four = Real::from_u32(4, 256);
        assert!(
            (worst - &four).abs() <= Real::exp2i(-120, 256),
            "boundary ratio floor {worst}"
        );
    }

    #[test]
    fn func2_threshold_implies_ratio_pass_across_shapes() {
        // q = 0.4, alpha = 1: the threshold right side is 4q² = 0.64 and
        // every shape over a = 0.05, b = 0.3 clears it, so all five
        // shapes run and pass.
        let grid = GridSpec {
            q: reals(&[0.4], 256),
            alpha: reals(&[1.0], 256),
            n: Vec::new(),
            nu: Vec::new(),
            a: reals(&[0.05], 256),
            b: reals(&[0.3], 256),
            random_instances: 0,
            seed: DEFAULT_SEED,
        };
        let report = verify_thm_func2(&grid, 3, &ctx()).unwrap();
        assert_eq!(report.instances_run, 4);
        assert_eq!(report.instances_skipped, 0);
        assert!(report.passed(), "failures: {:?}", report.failures);
        assert!(*report.worst_value.as_ref().unwrap() >= Real::from_u32(4, 256));
    }

    #[test]
    fn identities_pass_on_reduced_grid() {
        let q = reals(&[0.5], 256);
        let samples: Vec<Cplx> = default_identity_samples(256)
            .into_iter()
            .step_by(3)
            .collect();
        let report = verify_identities(&q, &samples, &ctx()).unwrap();
        assert!(report.passed(), "failures: {:?}", report.failures);
        // 3 bridge + 1 reduction + 1 collapse + 3 ratio + 4 terminating
        // + 3 nu x (1 kind bridge + 2 products + 3 inversions).
        assert_eq!(report.instances_run, 12 + 3 * 6);
        assert!(report.worst_value.is_some());
    }

    #[test]
    fn identity_samples_are_validated() {
        let q = reals(&[0.5], 256);
        let too_big = vec![Cplx::from_f64(1.5, 0.0, 256)];
        assert!(matches!(
            verify_identities(&q, &too_big, &ctx()),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            verify_identities(&q, &[], &ctx()),
            Err(Error::Domain(_))
        ));
        let bad_q = reals(&[1.0], 256);
        assert!(matches!(
            verify_identities(&bad_q, &default_identity_samples(256), &ctx()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn limits_default_sequence_converges() {
        let report = verify_limits(&default_limit_bases(256), &ctx()).unwrap();
        assert_eq!(report.instances_run, 6);
        assert!(report.passed(), "failures: {:?}", report.failures);
        // Final gaps at q = 1 - 2^(-10) are small but visibly nonzero.
        let worst = report.worst_value.as_ref().unwrap();
        assert!(*worst > Real::zero(256));
        assert!(*worst < Real::from_f64(0.1, 256));
    }

    #[test]
    fn limits_validation_rejects_bad_sequences() {
        let decreasing = reals(&[0.9, 0.8, 0.7, 0.6], 256);
        assert!(matches!(
            verify_limits(&decreasing, &ctx()),
            Err(Error::Domain(_))
        ));
        let short = reals(&[0.5, 0.9], 256);
        assert!(matches!(
            verify_limits(&short, &ctx()),
            Err(Error::Domain(_))
        ));
        let out_of_range = reals(&[0.5, 0.7, 0.9, 1.0], 256);
        assert!(matches!(
            verify_limits(&out_of_range, &ctx()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn order_estimates_match_growth_rates() {
        let cases: [(u32, &[f64], u32); 4] =
            [(0, &[1.0], 2), (1, &[1.0], 3), (0, &[1.0, 2.0], 4), (2, &[1.0], 4)];
        for (m, bvals, denom) in cases {
            let spec = SeriesSpec::LimitEntire {
                m,
                betas: reals(bvals, 256),
            };
            let est = estimate_order(&spec, 200).unwrap();
            let rho = Real::from_u32(denom, 256).recip();
            let rel = (&est - &rho).abs() / &rho;
            assert!(
                rel <= Real::from_f64(0.05, 256),
                "m={m} beta={bvals:?}: estimate {est} vs 1/{denom}"
            );
        }
        let report = verify_order(&ctx()).unwrap();
        assert!(report.passed());
        assert_eq!(report.instances_run, 4);
    }

    #[test]
    fn order_estimation_domain_checks() {
        let spec = SeriesSpec::LimitEntire {
            m: 0,
            betas: vec![Real::one(256)],
        };
        assert!(matches!(estimate_order(&spec, 49), Err(Error::Domain(_))));
        let other = SeriesSpec::RamanujanA {
            alpha: Real::one(256),
            a: QParam::NegPow(2),
            q: Real::from_f64(0.5, 256),
        };
        assert!(matches!(estimate_order(&other, 200), Err(Error::Domain(_))));
    }

    #[test]
    fn reports_are_byte_identical_across_runs() {
        let grid = GridSpec {
            q: reals(&[0.5], 256),
            alpha: reals(&[1.0], 256),
            n: vec![1, 2, 3],
            nu: Vec::new(),
            a: Vec::new(),
            b: Vec::new(),
            random_instances: 6,
            seed: DEFAULT_SEED,
        };
        let a = serde_json::to_string(&verify_thm_poly(&grid, &ctx()).unwrap()).unwrap();
        let b = serde_json::to_string(&verify_thm_poly(&grid, &ctx()).unwrap()).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("\"suite\":\"poly\""));
    }

    #[test]
    fn suite_bookkeeping_invariants_hold() {
        let mut run = SuiteRun::new("demo", "max residual", Aggregate::Max, 7, &ctx());
        run.outcome("first", Ok(Real::from_f64(0.25, 256)));
        run.outcome("second", Ok(Real::from_f64(0.75, 256)));
        run.skip();
        run.outcome("third", Err("broken".into()));
        let report = run.finish();
        assert_eq!(report.instances_run, 3);
        assert_eq!(report.instances_passed, 2);
        assert_eq!(report.instances_skipped, 1);
        assert_eq!(report.failures.len(), 1);
        assert!(report.instances_passed <= report.instances_run);
        assert_eq!(
            report.failures.is_empty(),
            report.instances_passed == report.instances_run
        );
        assert_eq!(report.worst_instance.as_deref(), Some("second"));
        assert!(!report.passed());
        assert_eq!(report.seed, 7);
        assert!(report.summary().contains("2/3 passed"));

        let mut min_run = SuiteRun::new("demo-min", "min ratio", Aggregate::Min, 0, &ctx());
        min_run.outcome("hi", Ok(Real::from_f64(6.0, 256)));
        min_run.outcome("lo", Ok(Real::from_f64(4.5, 256)));
        let report = min_run.finish();
        assert_eq!(report.worst_instance.as_deref(), Some("lo"));
        assert!(report.passed());
    }
}
