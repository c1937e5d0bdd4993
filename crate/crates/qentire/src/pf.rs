//! Total-positivity (Pólya frequency) checks for coefficient sequences.
//!
//! A nonnegative sequence is PF when every minor of its infinite Toeplitz
//! matrix `(a_{j−i})` is nonnegative. Three complementary views are
//! implemented:
//!
//! * [`toeplitz_minors`] — direct enumeration of all small-order minors of
//!   a leading block (necessary evidence, never sufficient);
//! * [`pf_finite_via_roots`] — the exact oracle for finite sequences: PF
//!   holds iff the generating polynomial has only real nonpositive zeros;
//! * [`turan_ratios`] / [`turan_threshold`] — the coefficient-ratio test
//!   `c_n²/(c_{n+1}c_{n−1}) ≥ 4` and the closed-form parameter condition
//!   `∏(1−a_j)·∏(1−b_k q) ≥ 4q^(2α)` that guarantees it for the
//!   product-ratio families.
//!
//! [`closure_transform`] provides the PF-preserving sequence maps
//! (entrywise products and factorial rescalings) used by the randomized
//! closure tests.
//!
//! Minor enumeration is capped by a combinatorial budget (order ≤ 5;
//! with the default budget the window tops out at 14); past that the
//! root-based oracle is the authoritative check for finite sequences.
//! Minors are compared against `−eps_id` rather than zero to absorb
//! determinant round-off. Turán ratios are computed by direct division —
//! the scalar type's huge exponent range absorbs the dynamic range that
//! would otherwise force log-space arithmetic.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::precision::PrecisionContext;
use crate::real::Real;
use crate::roots::{certify_real_roots, find_poly_roots};
use crate::series::CoefficientSequence;

/// Total number of minors (over all orders) a single report may enumerate.
pub const MINOR_BUDGET: u128 = 10_000_000;

/// First minor found below `−eps_id`, with its row and column index sets.
#[derive(Clone, Debug, Serialize)]
pub struct MinorViolation {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub value: Real,
}

/// Outcome of enumerating all order-`≤ max_order` minors of the leading
/// `window × window` Toeplitz block of a sequence.
#[derive(Clone, Debug, Serialize)]
pub struct MinorReport {
    /// Short identity of the inspected sequence (family, length, hash).
    pub fingerprint: String,
    pub window: usize,
    pub max_order: usize,
    pub min_minor: Real,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violating_minor: Option<MinorViolation>,
    /// `min_minor ≥ −eps_id`: no minor is certifiably negative.
    pub pf_consistent: bool,
}

/// One Turán ratio `c_n²/(c_{n+1}c_{n−1})`.
#[derive(Clone, Debug, Serialize)]
pub struct RatioEntry {
    pub n: usize,
    pub value: Real,
}

/// The Turán ratios of a sequence over every index where they are defined.
#[derive(Clone, Debug, Serialize)]
pub struct RatioReport {
    /// Short identity of the inspected sequence (family, length, hash).
    pub fingerprint: String,
    pub ratios: Vec<RatioEntry>,
    /// Indices `n` whose denominator `c_{n+1}c_{n−1}` vanishes.
    pub skipped: Vec<usize>,
    pub min_ratio: Real,
    /// `min_ratio ≥ 4 − eps_id`.
    pub passes_4: bool,
}

/// Both sides of the parameter condition `∏(1−a_j)·∏(1−b_k q) ≥ 4q^(2α)`.
#[derive(Clone, Debug, Serialize)]
pub struct ThresholdCheck {
    pub holds: bool,
    pub lhs: Real,
    pub rhs: Real,
}

/// PF-preserving sequence transforms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosureKind {
    /// `{a_k b_k}` — entrywise product of two sequences.
    Hadamard,
    /// `{a_k / k!}`.
    DivideFactorial,
    /// `{k! a_k b_k}`.
    FactorialHadamard,
}

impl ClosureKind {
    pub fn name(self) -> &'static str {
        match self {
            ClosureKind::Hadamard => "hadamard",
            ClosureKind::DivideFactorial => "divide-factorial",
            ClosureKind::FactorialHadamard => "factorial-hadamard",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "hadamard" => Ok(ClosureKind::Hadamard),
            "divide-factorial" | "divide_factorial" => Ok(ClosureKind::DivideFactorial),
            "factorial-hadamard" | "factorial_hadamard" => Ok(ClosureKind::FactorialHadamard),
            other => Err(Error::Parse(format!(
                "unknown closure transform {other:?}; expected hadamard, divide-factorial, or factorial-hadamard"
            ))),
        }
    }
}

fn fingerprint(seq: &CoefficientSequence) -> String {
    // FNV-1a over the family name and the decimal renderings.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let eat = |h: &mut u64, bytes: &[u8]| {
        for &b in bytes {
            *h ^= u64::from(b);
            *h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    };
    eat(&mut h, seq.family.as_bytes());
    for c in &seq.coeffs {
        eat(&mut h, c.to_decimal().as_bytes());
        eat(&mut h, b";");
    }
    format!("{}:{}:{h:016x}", seq.family, seq.len())
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Advances `c` to the next k-subset of `0..n` in lexicographic order;
/// returns false after the last one.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] != i + n - k {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Determinant of the `rows × cols` submatrix by Gaussian elimination
/// with partial pivoting at precision `wp`.
fn det_submatrix(t: &[Vec<Real>], rows: &[usize], cols: &[usize], wp: u32) -> Real {
    let k = rows.len();
    if k == 1 {
        return t[rows[0]][cols[0]].clone();
    }
    let mut m: Vec<Vec<Real>> = rows
        .iter()
        .map(|&r| cols.iter().map(|&c| t[r][c].clone()).collect())
        .collect();
    let mut negate = false;
    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&a, &b| m[a][col].abs().cmp_total(&m[b][col].abs()))
            .unwrap();
        if m[pivot][col].is_zero() {
            return Real::zero(wp);
        }
        if pivot != col {
            m.swap(pivot, col);
            negate = !negate;
        }
        for r in col + 1..k {
            let (top, rest) = m.split_at_mut(r);
            let pivot = &top[col];
            let row = &mut rest[0];
            if row[col].is_zero() {
                continue;
            }
            let f = &row[col] / &pivot[col];
            for (c, cell) in row.iter_mut().enumerate().skip(col) {
                *cell = &*cell - &(&f * &pivot[c]);
            }
        }
    }
    let mut det = Real::one(wp);
    for (i, row) in m.iter().enumerate() {
        det = &det * &row[i];
    }
    if negate {
        -det
    } else {
        det
    }
}

/// Enumerates every minor of order `≤ max_order` of the leading
/// `window × window` block of the Toeplitz matrix `(a_{j−i})` (entries
/// below the diagonal are zero once the subscript goes negative) and
/// reports the minimum together with the first certified violation.
///
/// Nonnegativity of these minors is necessary for the sequence to be PF;
/// it is never sufficient, which is why the verdict field is called
/// `pf_consistent` rather than `pf`.
pub fn toeplitz_minors(
    seq: &CoefficientSequence,
    window: usize,
    max_order: usize,
    ctx: &PrecisionContext,
) -> Result<MinorReport> {
    if window == 0 || window > seq.len() {
        return Err(Error::Domain(format!(
            "window {window} must lie in 1..={} (the sequence length)",
            seq.len()
        )));
    }
    if max_order == 0 || max_order > window.min(5) {
        return Err(Error::Domain(format!(
            "minor order {max_order} must lie in 1..={} (window size, capped at 5)",
            window.min(5)
        )));
    }
    let total: u128 = (1..=max_order)
        .map(|k| binomial(window, k) * binomial(window, k))
        .sum();
    if total > MINOR_BUDGET {
        return Err(Error::CostGuard(format!(
            "{total} minors exceed the enumeration budget of {MINOR_BUDGET}; \
             shrink the window or rely on the root-based oracle"
        )));
    }

    let wp = ctx.bits().max(seq.precision_bits);
    let zero = Real::zero(wp);
    let block: Vec<Vec<Real>> = (0..window)
        .map(|i| {
            (0..window)
                .map(|j| {
                    if j >= i {
                        seq.coeffs[j - i].clone()
                    } else {
                        zero.clone()
                    }
                })
                .collect()
        })
        .collect();

    let mut min_minor: Option<Real> = None;
    let mut violating: Option<MinorViolation> = None;
    for k in 1..=max_order {
        let mut rows: Vec<usize> = (0..k).collect();
        loop {
            let mut cols: Vec<usize> = (0..k).collect();
            loop {
                let d = det_submatrix(&block, &rows, &cols, wp);
                if violating.is_none() && d < -ctx.eps_id() {
                    violating = Some(MinorViolation {
                        rows: rows.clone(),
                        cols: cols.clone(),
                        value: d.clone(),
                    });
                }
                min_minor = Some(match min_minor {
                    None => d,
                    Some(m) => m.min(&d),
                });
                if !next_combination(&mut cols, window) {
                    break;
                }
            }
            if !next_combination(&mut rows, window) {
                break;
            }
        }
    }
    let min_minor = min_minor.expect("at least one minor was enumerated");
    let pf_consistent = min_minor >= -ctx.eps_id();
    Ok(MinorReport {
        fingerprint: fingerprint(seq),
        window,
        max_order,
        min_minor,
        violating_minor: violating,
        pf_consistent,
    })
}

/// Exact PF test for a finite nonnegative sequence: PF holds iff the
/// generating polynomial has all its zeros real and nonpositive. Runs the
/// zero finder plus the dual realness certification and propagates their
/// errors; a constant sequence is vacuously PF.
pub fn pf_finite_via_roots(seq: &CoefficientSequence, ctx: &PrecisionContext) -> Result<bool> {
    for c in &seq.coeffs {
        if !c.is_finite() {
            return Err(Error::Domain("sequence entries must be finite".into()));
        }
        if c.is_negative() {
            return Err(Error::Domain(
                "the root-based PF test needs nonnegative entries".into(),
            ));
        }
    }
    let Some(deg) = seq.trimmed_degree() else {
        return Err(Error::Domain(
            "the zero sequence generates no polynomial".into(),
        ));
    };
    if deg == 0 {
        return Ok(true);
    }
    let zeros = find_poly_roots(seq, ctx)?;
    let report = certify_real_roots(seq, &zeros, ctx)?;
    Ok(report.all_real && zeros.zeros.iter().all(|z| !z.value.re.is_positive()))
}

/// The PF-preserving transforms `{a_k b_k}`, `{a_k/k!}`, and
/// `{k! a_k b_k}`. Entrywise kinds need equal lengths; the factorial
/// division takes exactly one sequence.
pub fn closure_transform(
    kind: ClosureKind,
    a: &CoefficientSequence,
    b: Option<&CoefficientSequence>,
) -> Result<CoefficientSequence> {
    let needs_b = !matches!(kind, ClosureKind::DivideFactorial);
    let operands: Vec<&CoefficientSequence> = match (needs_b, b) {
        (true, Some(b)) => vec![a, b],
        (true, None) => {
            return Err(Error::Domain(format!(
                "{} needs a second sequence",
                kind.name()
            )))
        }
        (false, None) => vec![a],
        (false, Some(_)) => {
            return Err(Error::Domain(format!(
                "{} takes exactly one sequence",
                kind.name()
            )))
        }
    };
    for seq in &operands {
        if seq.coeffs.iter().any(Real::is_negative) {
            return Err(Error::Domain(
                "closure transforms are defined for nonnegative sequences".into(),
            ));
        }
    }
    if let Some(b) = b {
        if a.len() != b.len() {
            return Err(Error::LengthMismatch(format!(
                "entrywise transform over lengths {} and {}",
                a.len(),
                b.len()
            )));
        }
    }
    let wp = operands
        .iter()
        .map(|s| s.precision_bits)
        .max()
        .unwrap()
        .max(64);
    let mut coeffs = Vec::with_capacity(a.len());
    let mut fact = Real::one(wp);
    for k in 0..a.len() {
        if k > 0 {
            fact = &fact * &Real::from_u32(k as u32, wp);
        }
        let value = match kind {
            ClosureKind::Hadamard => &a.coeffs[k] * &b.unwrap().coeffs[k],
            ClosureKind::DivideFactorial => &a.coeffs[k] / &fact,
            ClosureKind::FactorialHadamard => &(&fact * &a.coeffs[k]) * &b.unwrap().coeffs[k],
        };
        coeffs.push(value);
    }
    let names: Vec<&str> = operands.iter().map(|s| s.family.as_str()).collect();
    Ok(CoefficientSequence {
        family: kind.name().into(),
        params: serde_json::json!({ "operands": names }),
        precision_bits: wp,
        coeffs,
        terminating: operands.iter().all(|s| s.terminating),
        degree: None,
    })
}

/// Turán ratios `c_n²/(c_{n+1}c_{n−1})` for `1 ≤ n ≤ len−2`, skipping
/// (and reporting) indices whose denominator vanishes. `passes_4` asks
/// the minimum to clear `4 − eps_id`, the threshold below which the
/// sequence cannot come from the product-ratio families with PF
/// parameters.
pub fn turan_ratios(seq: &CoefficientSequence, ctx: &PrecisionContext) -> Result<RatioReport> {
    if seq.len() < 3 {
        return Err(Error::Domain(
            "Turán ratios need at least three coefficients".into(),
        ));
    }
    if seq.coeffs.iter().any(Real::is_negative) {
        return Err(Error::Domain(
            "Turán ratios are defined for nonnegative sequences".into(),
        ));
    }
    let wp = ctx.bits().max(seq.precision_bits);
    let mut ratios = Vec::new();
    let mut skipped = Vec::new();
    let mut min_ratio: Option<Real> = None;
    for n in 1..=seq.len() - 2 {
        let denom = &seq.coeffs[n + 1] * &seq.coeffs[n - 1];
        if denom.is_zero() {
            skipped.push(n);
            continue;
        }
        let value = &(&seq.coeffs[n] * &seq.coeffs[n]) / &denom;
        min_ratio = Some(match min_ratio {
            None => value.clone(),
            Some(m) => m.min(&value),
        });
        ratios.push(RatioEntry { n, value });
    }
    let Some(min_ratio) = min_ratio else {
        return Err(Error::Domain(
            "every ratio index has a vanishing denominator".into(),
        ));
    };
    let four = Real::from_u32(4, wp);
    let passes_4 = min_ratio >= &four - ctx.eps_id();
    Ok(RatioReport {
        fingerprint: fingerprint(seq),
        ratios,
        skipped,
        min_ratio,
        passes_4,
    })
}

/// The closed-form parameter condition `∏(1−a_j)·∏(1−b_k q) ≥ 4q^(2α)`
/// under which every Turán ratio of the corresponding product-ratio
/// series is at least 4 (and the generated function has only real
/// negative zeros). Both sides are returned for inspection.
pub fn turan_threshold(
    alpha: &Real,
    q: &Real,
    a: &[Real],
    b: &[Real],
) -> Result<ThresholdCheck> {
    let wp = a
        .iter()
        .chain(b.iter())
        .chain([alpha, q])
        .map(Real::prec)
        .max()
        .unwrap()
        .max(64);
    let one = Real::one(wp);
    if !q.is_positive() || q >= &one {
        return Err(Error::Domain("base q must lie in (0,1)".into()));
    }
    if !alpha.is_positive() {
        return Err(Error::Domain("exponent alpha must be positive".into()));
    }
    for (name, list) in [("numerator", a), ("denominator", b)] {
        if list.iter().any(|p| !p.is_positive() || p >= &one) {
            return Err(Error::Domain(format!(
                "{name} parameters must lie in (0,1)"
            )));
        }
    }
    let mut lhs = Real::one(wp);
    for aj in a {
        lhs = &lhs * &(&one - aj);
    }
    for bk in b {
        lhs = &lhs * &(&one - &(bk * q));
    }
    let two_alpha = alpha * &Real::from_u32(2, wp);
    let rhs = Real::from_u32(4, wp) * &q.pow(&two_alpha);
    let holds = lhs >= rhs;
    Ok(ThresholdCheck { holds, lhs, rhs })
}
