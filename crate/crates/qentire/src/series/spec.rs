use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::real::Real;

/// Numerator parameter: a plain value, or exactly `q^(-n)`.
///
/// The `NegPow` form is kept symbolic so the term ratio hits an exact zero
/// at index `n` and the generated sequence terminates; a floating
/// approximation of `q^(-n)` would never produce that exact zero.
#[derive(Clone, Debug, PartialEq)]
pub enum QParam {
    Value(Real),
    NegPow(u32),
}

impl QParam {
    /// Numeric value of the parameter at base `q`.
    pub fn value_at(&self, q: &Real) -> Real {
        match self {
            QParam::Value(v) => v.clone(),
            QParam::NegPow(n) => q.powi(-(*n as i32)),
        }
    }
}

/// One numerator factor of the generalized family.
#[derive(Clone, Debug, PartialEq)]
pub struct NumFactor {
    pub q: Real,
    pub kind: NumKind,
}

#[derive(Clone, Debug, PartialEq)]
pub enum NumKind {
    /// Parameter `q^(-n)`: terminating (polynomial) variant.
    NegPow(u32),
    /// Parameter `-a` with `a ≥ 0`: entire variant.
    NegVal(Real),
}

/// One denominator factor of the generalized family: the paired symbols
/// `(q; q)_k (q^β; q)_k` at base `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct DenFactor {
    pub q: Real,
    pub beta: Real,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BesselKind {
    One,
    Two,
    Three,
}

/// Tagged description of one concrete series; the single source of truth
/// for coefficient generation, evaluation, and zero location.
///
/// Every family has unit constant term and real coefficients in its own
/// variable. The Bessel families are expressed in the even variable
/// `u = z²`, which is also the variable their zeros are reported in.
#[derive(Clone, Debug, PartialEq)]
pub enum SeriesSpec {
    /// `Σ_n (a;q)_n q^(α n²) z^n / (q;q)_n`
    RamanujanA { alpha: Real, a: QParam, q: Real },
    /// `Σ_k ∏_j [(x_j;q_j)_k/(q_j;q_j)_k] · q^(α k²) w^k / ∏_r (q_r, q_r^{β_r}; q_r)_k`
    /// with `x_j = q_j^{-n_j}` (all-`NegPow`, terminating, `w = (-1)^m z`)
    /// or `x_j = -a_j` (all-`NegVal`, entire, `w = z`).
    GeneralizedQ {
        alpha: Real,
        q: Real,
        num: Vec<NumFactor>,
        den: Vec<DenFactor>,
    },
    /// `Σ_k [∏_j (-n_j)_k / ∏_r (β_r)_k] ((-1)^m z)^k / (k!)^(m+ℓ)`
    LimitPoly { orders: Vec<u32>, betas: Vec<Real> },
    /// `Σ_k z^k / [(k!)^(m+ℓ) ∏_r (β_r)_k]`
    LimitEntire { m: u32, betas: Vec<Real> },
    /// `Σ_n [(a_1..a_r;q)_n / (b_1..b_s;q)_n] q^(α n²) z^n`
    RAs {
        alpha: Real,
        a: Vec<Real>,
        b: Vec<Real>,
        q: Real,
    },
    /// `Σ_n [(a_1..a_r;q)_n / (q, b_1..b_s;q)_n] (-q^((n-1)/2))^(n(s+1-r)) z^n`
    RPhiS {
        a: Vec<Real>,
        b: Vec<Real>,
        q: Real,
    },
    /// Normalized q-Bessel series in `u = z²`:
    /// kind 1: `Σ_n (-u/4)^n / (q, q^(ν+1); q)_n`
    /// kind 2: `Σ_n q^(n²) (-u q^ν/4)^n / (q, q^(ν+1); q)_n`
    /// kind 3: `Σ_n q^(n(n+1)/2) (-u/4)^n / (q, q^(ν+1); q)_n`
    QBessel {
        kind: BesselKind,
        nu: Real,
        q: Real,
    },
}

fn check_base(q: &Real, what: &str) -> Result<()> {
    if q.is_positive() && *q < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{what} must lie in (0,1), got {q}"
        )))
    }
}

impl SeriesSpec {
    pub fn family_name(&self) -> &'static str {
        match self {
            SeriesSpec::RamanujanA { .. } => "ramanujan-a",
            SeriesSpec::GeneralizedQ { .. } => "generalized-q",
            SeriesSpec::LimitPoly { .. } => "limit-poly",
            SeriesSpec::LimitEntire { .. } => "limit-entire",
            SeriesSpec::RAs { .. } => "ras",
            SeriesSpec::RPhiS { .. } => "rphis",
            SeriesSpec::QBessel { kind, .. } => match kind {
                BesselKind::One => "qbessel1",
                BesselKind::Two => "qbessel2",
                BesselKind::Three => "qbessel3",
            },
        }
    }

    /// Largest parameter precision; all derived quantities use at least this.
    pub fn prec(&self) -> u32 {
        let mut p = 64u32;
        let mut see = |r: &Real| p = p.max(r.prec());
        match self {
            SeriesSpec::RamanujanA { alpha, a, q } => {
                see(alpha);
                see(q);
                if let QParam::Value(v) = a {
                    see(v);
                }
            }
            SeriesSpec::GeneralizedQ { alpha, q, num, den } => {
                see(alpha);
                see(q);
                for f in num {
                    see(&f.q);
                    if let NumKind::NegVal(a) = &f.kind {
                        see(a);
                    }
                }
                for f in den {
                    see(&f.q);
                    see(&f.beta);
                }
            }
            SeriesSpec::LimitPoly { betas, .. } => betas.iter().for_each(see),
            SeriesSpec::LimitEntire { betas, .. } => betas.iter().for_each(see),
            SeriesSpec::RAs { alpha, a, b, q } => {
                see(alpha);
                see(q);
                a.iter().for_each(&mut see);
                b.iter().for_each(&mut see);
            }
            SeriesSpec::RPhiS { a, b, q } => {
                see(q);
                a.iter().for_each(&mut see);
                b.iter().for_each(&mut see);
            }
            SeriesSpec::QBessel { nu, q, .. } => {
                see(nu);
                see(q);
            }
        }
        p
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SeriesSpec::RamanujanA { alpha, a, q } => {
                check_base(q, "base q")?;
                if alpha.is_negative() {
                    return Err(Error::Domain(format!(
                        "exponent alpha must be >= 0, got {alpha}"
                    )));
                }
                if let QParam::Value(v) = a {
                    if !v.is_finite() {
                        return Err(Error::Domain("parameter a must be finite".into()));
                    }
                }
                Ok(())
            }
            SeriesSpec::GeneralizedQ { alpha, q, num, den } => {
                check_base(q, "base q")?;
                if alpha.is_negative() {
                    return Err(Error::Domain(format!(
                        "exponent alpha must be >= 0, got {alpha}"
                    )));
                }
                let mut saw_negpow = false;
                let mut saw_negval = false;
                for f in num {
                    check_base(&f.q, "numerator base")?;
                    match &f.kind {
                        NumKind::NegPow(n) => {
                            saw_negpow = true;
                            if *n == 0 {
                                return Err(Error::Domain(
                                    "numerator order n must be >= 1".into(),
                                ));
                            }
                        }
                        NumKind::NegVal(a) => {
                            saw_negval = true;
                            if a.is_negative() {
                                return Err(Error::Domain(format!(
                                    "numerator value a must be >= 0, got {a}"
                                )));
                            }
                        }
                    }
                }
                if saw_negpow && saw_negval {
                    return Err(Error::Domain(
                        "numerator factors must be all terminating or all entire".into(),
                    ));
                }
                for f in den {
                    check_base(&f.q, "denominator base")?;
                    if !f.beta.is_positive() {
                        return Err(Error::Domain(format!(
                            "denominator exponent beta must be > 0, got {}",
                            f.beta
                        )));
                    }
                }
                Ok(())
            }
            SeriesSpec::LimitPoly { orders, betas } => {
                if orders.is_empty() {
                    return Err(Error::Domain(
                        "limit-poly requires at least one numerator order (m >= 1)".into(),
                    ));
                }
                if orders.contains(&0) {
                    return Err(Error::Domain("numerator orders must be >= 1".into()));
                }
                for b in betas {
                    if !b.is_positive() {
                        return Err(Error::Domain(format!(
                            "denominator parameter beta must be > 0, got {b}"
                        )));
                    }
                }
                Ok(())
            }
            SeriesSpec::LimitEntire { betas, .. } => {
                if betas.is_empty() {
                    return Err(Error::Domain(
                        "limit-entire requires at least one beta (l >= 1)".into(),
                    ));
                }
                for b in betas {
                    if !b.is_positive() {
                        return Err(Error::Domain(format!(
                            "denominator parameter beta must be > 0, got {b}"
                        )));
                    }
                }
                Ok(())
            }
            SeriesSpec::RAs { alpha, a, b, q } => {
                check_base(q, "base q")?;
                if alpha.is_negative() {
                    return Err(Error::Domain(format!(
                        "exponent alpha must be >= 0, got {alpha}"
                    )));
                }
                for v in a {
                    if v.abs() >= 1.0 {
                        return Err(Error::Domain(format!(
                            "numerator parameter a must lie in (-1,1), got {v}"
                        )));
                    }
                }
                for v in b {
                    if v.is_negative() || *v >= 1.0 {
                        return Err(Error::Domain(format!(
                            "denominator parameter b must lie in [0,1), got {v}"
                        )));
                    }
                }
                Ok(())
            }
            SeriesSpec::RPhiS { a, b, q } => {
                check_base(q, "base q")?;
                if a.len() > b.len() + 1 {
                    return Err(Error::Domain(format!(
                        "series requires r <= s+1, got r={} s={}",
                        a.len(),
                        b.len()
                    )));
                }
                for v in a {
                    if v.abs() >= 1.0 {
                        return Err(Error::Domain(format!(
                            "numerator parameter a must lie in (-1,1), got {v}"
                        )));
                    }
                }
                for v in b {
                    if v.is_negative() || *v >= 1.0 {
                        return Err(Error::Domain(format!(
                            "denominator parameter b must lie in [0,1), got {v}"
                        )));
                    }
                }
                Ok(())
            }
            SeriesSpec::QBessel { nu, q, .. } => {
                check_base(q, "base q")?;
                let neg_one = -Real::one(nu.prec());
                if *nu <= neg_one {
                    return Err(Error::Domain(format!("order nu must be > -1, got {nu}")));
                }
                Ok(())
            }
        }
    }

    /// Degree at which the sequence terminates with an exact zero ratio.
    pub fn termination_degree(&self) -> Option<u32> {
        match self {
            SeriesSpec::RamanujanA {
                a: QParam::NegPow(n),
                ..
            } => Some(*n),
            SeriesSpec::GeneralizedQ { num, .. } => {
                let mut min: Option<u32> = None;
                for f in num {
                    if let NumKind::NegPow(n) = f.kind {
                        min = Some(min.map_or(n, |m| m.min(n)));
                    } else {
                        return None;
                    }
                }
                min
            }
            SeriesSpec::LimitPoly { orders, .. } => orders.iter().copied().min(),
            _ => None,
        }
    }

    /// The limit family this generalized spec converges to under the
    /// `q↑1` scaling (see `scaled_limit_coefficients`).
    pub fn limit_target(&self) -> Result<SeriesSpec> {
        let SeriesSpec::GeneralizedQ { num, den, .. } = self else {
            return Err(Error::Domain(
                "limit target is defined for generalized-q specs only".into(),
            ));
        };
        let betas: Vec<Real> = den.iter().map(|f| f.beta.clone()).collect();
        if self.termination_degree().is_some() {
            let orders: Vec<u32> = num
                .iter()
                .map(|f| match f.kind {
                    NumKind::NegPow(n) => n,
                    NumKind::NegVal(_) => unreachable!(),
                })
                .collect();
            Ok(SeriesSpec::LimitPoly { orders, betas })
        } else {
            Ok(SeriesSpec::LimitEntire {
                m: num.len() as u32,
                betas,
            })
        }
    }

    pub fn params_json(&self) -> Value {
        fn qp(p: &QParam) -> Value {
            match p {
                QParam::Value(v) => json!(v.to_decimal()),
                QParam::NegPow(n) => json!(format!("q^-{n}")),
            }
        }
        match self {
            SeriesSpec::RamanujanA { alpha, a, q } => json!({
                "alpha": alpha.to_decimal(),
                "a": qp(a),
                "q": q.to_decimal(),
            }),
            SeriesSpec::GeneralizedQ { alpha, q, num, den } => json!({
                "alpha": alpha.to_decimal(),
                "q": q.to_decimal(),
                "num": num.iter().map(|f| match &f.kind {
                    NumKind::NegPow(n) => json!({"n": n, "q": f.q.to_decimal()}),
                    NumKind::NegVal(a) => json!({"a": a.to_decimal(), "q": f.q.to_decimal()}),
                }).collect::<Vec<_>>(),
                "den": den.iter().map(|f| json!({
                    "beta": f.beta.to_decimal(),
                    "q": f.q.to_decimal(),
                })).collect::<Vec<_>>(),
            }),
            SeriesSpec::LimitPoly { orders, betas } => json!({
                "orders": orders,
                "betas": betas.iter().map(Real::to_decimal).collect::<Vec<_>>(),
            }),
            SeriesSpec::LimitEntire { m, betas } => json!({
                "m": m,
                "betas": betas.iter().map(Real::to_decimal).collect::<Vec<_>>(),
            }),
            SeriesSpec::RAs { alpha, a, b, q } => json!({
                "alpha": alpha.to_decimal(),
                "a": a.iter().map(Real::to_decimal).collect::<Vec<_>>(),
                "b": b.iter().map(Real::to_decimal).collect::<Vec<_>>(),
                "q": q.to_decimal(),
            }),
            SeriesSpec::RPhiS { a, b, q } => json!({
                "a": a.iter().map(Real::to_decimal).collect::<Vec<_>>(),
                "b": b.iter().map(Real::to_decimal).collect::<Vec<_>>(),
                "q": q.to_decimal(),
            }),
            SeriesSpec::QBessel { nu, q, .. } => json!({
                "nu": nu.to_decimal(),
                "q": q.to_decimal(),
            }),
        }
    }

    /// Parses `{"family": ..., "params": {...}}` at the given precision.
    pub fn from_json(v: &Value, bits: u32) -> Result<SeriesSpec> {
        let family = v
            .get("family")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("missing string field \"family\"".into()))?;
        let params = v
            .get("params")
            .cloned()
            .unwrap_or_else(|| json!({}));
        let real = |key: &str| -> Result<Real> {
            match params.get(key) {
                Some(Value::String(s)) => Real::parse(s, bits),
                Some(Value::Number(n)) => Real::parse(&n.to_string(), bits),
                _ => Err(Error::Parse(format!("missing numeric field {key:?}"))),
            }
        };
        let real_list = |key: &str| -> Result<Vec<Real>> {
            match params.get(key) {
                None | Some(Value::Null) => Ok(vec![]),
                Some(Value::Array(items)) => items
                    .iter()
                    .map(|it| match it {
                        Value::String(s) => Real::parse(s, bits),
                        Value::Number(n) => Real::parse(&n.to_string(), bits),
                        _ => Err(Error::Parse(format!("bad entry in list {key:?}"))),
                    })
                    .collect(),
                _ => Err(Error::Parse(format!("field {key:?} must be a list"))),
            }
        };
        let spec = match family {
            "ramanujan-a" => {
                let a = match params.get("a") {
                    Some(Value::String(s)) => parse_qparam(s, bits)?,
                    Some(Value::Number(n)) => QParam::Value(Real::parse(&n.to_string(), bits)?),
                    _ => return Err(Error::Parse("missing field \"a\"".into())),
                };
                SeriesSpec::RamanujanA {
                    alpha: real("alpha")?,
                    a,
                    q: real("q")?,
                }
            }
            "generalized-q" => {
                let q = real("q")?;
                let mut num = Vec::new();
                if let Some(Value::Array(items)) = params.get("num") {
                    for it in items {
                        let fq = match it.get("q") {
                            Some(Value::String(s)) => Real::parse(s, bits)?,
                            Some(Value::Number(n)) => Real::parse(&n.to_string(), bits)?,
                            None => q.clone(),
                            _ => return Err(Error::Parse("bad numerator base".into())),
                        };
                        let kind = if let Some(n) = it.get("n").and_then(Value::as_u64) {
                            NumKind::NegPow(n as u32)
                        } else if let Some(a) = it.get("a") {
                            let a = match a {
                                Value::String(s) => Real::parse(s, bits)?,
                                Value::Number(n) => Real::parse(&n.to_string(), bits)?,
                                _ => return Err(Error::Parse("bad numerator value".into())),
                            };
                            NumKind::NegVal(a)
                        } else {
                            return Err(Error::Parse(
                                "numerator factor needs \"n\" or \"a\"".into(),
                            ));
                        };
                        num.push(NumFactor { q: fq, kind });
                    }
                }
                let mut den = Vec::new();
                if let Some(Value::Array(items)) = params.get("den") {
                    for it in items {
                        let fq = match it.get("q") {
                            Some(Value::String(s)) => Real::parse(s, bits)?,
                            Some(Value::Number(n)) => Real::parse(&n.to_string(), bits)?,
                            None => q.clone(),
                            _ => return Err(Error::Parse("bad denominator base".into())),
                        };
                        let beta = match it.get("beta") {
                            Some(Value::String(s)) => Real::parse(s, bits)?,
                            Some(Value::Number(n)) => Real::parse(&n.to_string(), bits)?,
                            _ => return Err(Error::Parse("denominator factor needs \"beta\"".into())),
                        };
                        den.push(DenFactor { q: fq, beta });
                    }
                }
                SeriesSpec::GeneralizedQ {
                    alpha: real("alpha")?,
                    q,
                    num,
                    den,
                }
            }
            "limit-poly" => {
                let orders = match params.get("orders") {
                    Some(Value::Array(items)) => items
                        .iter()
                        .map(|it| {
                            it.as_u64()
                                .map(|n| n as u32)
                                .ok_or_else(|| Error::Parse("bad order".into()))
                        })
                        .collect::<Result<Vec<_>>>()?,
                    _ => return Err(Error::Parse("missing list field \"orders\"".into())),
                };
                SeriesSpec::LimitPoly {
                    orders,
                    betas: real_list("betas")?,
                }
            }
            "limit-entire" => SeriesSpec::LimitEntire {
                m: params
                    .get("m")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| Error::Parse("missing integer field \"m\"".into()))?
                    as u32,
                betas: real_list("betas")?,
            },
            "ras" => SeriesSpec::RAs {
                alpha: real("alpha")?,
                a: real_list("a")?,
                b: real_list("b")?,
                q: real("q")?,
            },
            "rphis" => SeriesSpec::RPhiS {
                a: real_list("a")?,
                b: real_list("b")?,
                q: real("q")?,
            },
            "qbessel1" | "qbessel2" | "qbessel3" => SeriesSpec::QBessel {
                kind: match family {
                    "qbessel1" => BesselKind::One,
                    "qbessel2" => BesselKind::Two,
                    _ => BesselKind::Three,
                },
                nu: real("nu")?,
                q: real("q")?,
            },
            other => {
                return Err(Error::Parse(format!("unknown family {other:?}")));
            }
        };
        spec.validate()?;
        Ok(spec)
    }

    pub(crate) fn ratio_iter(&self) -> RatioIter {
        RatioIter::new(self)
    }

    /// Non-increasing bound `B(k) ≥ sup_{k' ≥ k} |c_{k'+1}/c_{k'}|`,
    /// used to certify truncation tails.
    pub(crate) fn ratio_bound(&self, k: u32) -> Real {
        let prec = self.prec();
        let ki = k as i32;
        let one = Real::one(prec);
        match self {
            SeriesSpec::RamanujanA { alpha, a, q } => {
                let aq = a.value_at(q).abs() * q.powi(ki);
                let two_k1 = Real::from_u32(2 * k + 1, prec);
                (one.clone() + aq) * q.pow(&(alpha * &two_k1)) / (&one - q.powi(ki + 1))
            }
            SeriesSpec::GeneralizedQ { alpha, q, num, den } => {
                let mut b = {
                    let two_k1 = Real::from_u32(2 * k + 1, prec);
                    q.pow(&(alpha * &two_k1))
                };
                for f in num {
                    let x = match &f.kind {
                        NumKind::NegPow(n) => f.q.powi(ki - *n as i32).abs(),
                        NumKind::NegVal(a) => a * &f.q.powi(ki),
                    };
                    b = b * (&one + &x) / (&one - f.q.powi(ki + 1));
                }
                for f in den {
                    b = b / (&one - f.q.powi(ki + 1)) / (&one - f.q.pow(&(&f.beta + &Real::from_u32(k, prec))));
                }
                b
            }
            SeriesSpec::LimitPoly { orders, betas } => {
                // Terminating; any valid bound works. Use the k = degree-adjacent ratio shape.
                let m = orders.len() as u32;
                let mut b = one.clone();
                for n in orders {
                    b = b * (Real::from_u32(*n, prec) + Real::from_u32(k, prec));
                }
                for beta in betas {
                    b = b / (beta + &Real::from_u32(k, prec));
                }
                b / Real::from_u32(k + 1, prec).powi((m + betas.len() as u32) as i32)
            }
            SeriesSpec::LimitEntire { m, betas } => {
                let mut b = Real::from_u32(k + 1, prec)
                    .powi((*m + betas.len() as u32) as i32)
                    .recip();
                for beta in betas {
                    b = b / (beta + &Real::from_u32(k, prec));
                }
                b
            }
            SeriesSpec::RAs { alpha, a, b, q } => {
                let two_k1 = Real::from_u32(2 * k + 1, prec);
                let mut bound = q.pow(&(alpha * &two_k1));
                for v in a {
                    bound = bound * (&one + &(v.abs() * q.powi(ki)));
                }
                for v in b {
                    bound = bound / (&one - v * &q.powi(ki));
                }
                bound
            }
            SeriesSpec::RPhiS { a, b, q } => {
                let d = (b.len() + 1 - a.len()) as i32;
                let mut bound = q.powi(d * ki);
                for v in a {
                    bound = bound * (&one + &(v.abs() * q.powi(ki)));
                }
                bound = bound / (&one - q.powi(ki + 1));
                for v in b {
                    bound = bound / (&one - v * &q.powi(ki));
                }
                bound
            }
            SeriesSpec::QBessel { kind, nu, q } => {
                let quarter = Real::from_f64(0.25, prec);
                let extra = match kind {
                    BesselKind::One => one.clone(),
                    BesselKind::Two => q.powi(2 * ki + 1) * q.pow(nu),
                    BesselKind::Three => q.powi(ki + 1),
                };
                let d1 = &one - q.powi(ki + 1);
                let d2 = &one - q.pow(&(nu + &Real::from_u32(k + 1, prec)));
                quarter * extra / (d1 * d2)
            }
        }
    }
}

fn parse_qparam(s: &str, bits: u32) -> Result<QParam> {
    let t = s.trim();
    if let Some(rest) = t.strip_prefix("q^-") {
        let n: u32 = rest
            .parse()
            .map_err(|_| Error::Parse(format!("bad exponent in {t:?}")))?;
        Ok(QParam::NegPow(n))
    } else {
        Ok(QParam::Value(Real::parse(t, bits)?))
    }
}

/// Incremental term-ratio generator: `next_ratio()` returns
/// `c_{k+1}/c_k` for k = 0, 1, 2, … maintaining running powers so each
/// step costs O(families) multiplications.
pub(crate) struct RatioIter {
    k: u32,
    prec: u32,
    state: RatioState,
}

enum RatioState {
    RamanujanA {
        q: Real,
        /// `q^(α(2k+1))`, advanced by the constant `q^(2α)`.
        qa_cur: Real,
        qa_step: Real,
        /// `q^(k+1)`.
        qk1: Real,
        a_state: NumState,
    },
    GeneralizedQ {
        qa_cur: Real,
        qa_step: Real,
        sign: Real,
        num: Vec<(Real, Real, NumState)>, // (base, base^(k+1), numerator factor state)
        den: Vec<(Real, Real, Real)>,     // (base, base^(k+1), base^(β+k))
    },
    LimitPoly {
        orders: Vec<u32>,
        betas: Vec<Real>,
        sign: Real,
        power: u32,
    },
    LimitEntire {
        betas: Vec<Real>,
        power: u32,
    },
    RAs {
        q: Real,
        qa_cur: Real,
        qa_step: Real,
        aq: Vec<Real>, // a_j q^k
        bq: Vec<Real>, // b_j q^k
    },
    RPhiS {
        q: Real,
        qd_cur: Real,  // q^(dk)
        qd_step: Real, // q^d
        sign: Real,    // (-1)^d
        qk1: Real,
        aq: Vec<Real>,
        bq: Vec<Real>,
    },
    QBessel {
        kind: BesselKind,
        q: Real,
        qk1: Real,    // q^(k+1)
        qnu_k1: Real, // q^(ν+k+1)
        q2k1: Real,   // q^(2k+1), kind 2 only
        scale: Real,  // -1/4 (kinds 1, 3), -q^ν/4 (kind 2)
    },
}

enum NumState {
    /// Plain value a: maintains a·q^k.
    Value(Real, Real), // (a·q^k, q)
    /// a = q^(-n): maintains q^(k-n) for k < n; exact zero at k = n.
    NegPow { n: u32, qkn: Real, q: Real },
}

impl NumState {
    fn new_value(a: Real, q: Real) -> NumState {
        NumState::Value(a, q)
    }

    fn new_negpow(n: u32, q: &Real) -> NumState {
        NumState::NegPow {
            n,
            qkn: q.powi(-(n as i32)),
            q: q.clone(),
        }
    }

    /// Factor `(1 - x q^k)` at the current k, exact zero at termination.
    fn factor(&self, k: u32, prec: u32) -> Real {
        match self {
            NumState::Value(aqk, _) => Real::one(prec) - aqk,
            NumState::NegPow { n, qkn, .. } => {
                if k == *n {
                    Real::zero(prec)
                } else {
                    Real::one(prec) - qkn
                }
            }
        }
    }

    fn advance(&mut self) {
        match self {
            NumState::Value(aqk, q) => *aqk = &*aqk * &*q,
            NumState::NegPow { qkn, q, .. } => *qkn = &*qkn * &*q,
        }
    }
}

impl RatioIter {
    fn new(spec: &SeriesSpec) -> RatioIter {
        let prec = spec.prec();
        let one = Real::one(prec);
        let state = match spec {
            SeriesSpec::RamanujanA { alpha, a, q } => {
                let two = Real::from_u32(2, prec);
                let a_state = match a {
                    QParam::Value(v) => NumState::new_value(v.clone(), q.clone()),
                    QParam::NegPow(n) => NumState::new_negpow(*n, q),
                };
                RatioState::RamanujanA {
                    q: q.clone(),
                    qa_cur: q.pow(alpha),
                    qa_step: q.pow(&(alpha * &two)),
                    qk1: q.clone(),
                    a_state,
                }
            }
            SeriesSpec::GeneralizedQ { alpha, q, num, den } => {
                let two = Real::from_u32(2, prec);
                let terminating = spec.termination_degree().is_some();
                let m = num.len();
                let sign = if terminating && m % 2 == 1 {
                    -&one
                } else {
                    one.clone()
                };
                RatioState::GeneralizedQ {
                    qa_cur: q.pow(alpha),
                    qa_step: q.pow(&(alpha * &two)),
                    sign,
                    num: num
                        .iter()
                        .map(|f| {
                            let st = match &f.kind {
                                NumKind::NegPow(n) => NumState::new_negpow(*n, &f.q),
                                NumKind::NegVal(a) => NumState::new_value(-a, f.q.clone()),
                            };
                            (f.q.clone(), f.q.clone(), st)
                        })
                        .collect(),
                    den: den
                        .iter()
                        .map(|f| (f.q.clone(), f.q.clone(), f.q.pow(&f.beta)))
                        .collect(),
                }
            }
            SeriesSpec::LimitPoly { orders, betas } => RatioState::LimitPoly {
                orders: orders.clone(),
                betas: betas.clone(),
                sign: if orders.len() % 2 == 1 { -&one } else { one.clone() },
                power: orders.len() as u32 + betas.len() as u32,
            },
            SeriesSpec::LimitEntire { m, betas } => RatioState::LimitEntire {
                betas: betas.clone(),
                power: m + betas.len() as u32,
            },
            SeriesSpec::RAs { alpha, a, b, q } => {
                let two = Real::from_u32(2, prec);
                RatioState::RAs {
                    q: q.clone(),
                    qa_cur: q.pow(alpha),
                    qa_step: q.pow(&(alpha * &two)),
                    aq: a.to_vec(),
                    bq: b.to_vec(),
                }
            }
            SeriesSpec::RPhiS { a, b, q } => {
                let d = (b.len() + 1 - a.len()) as u32;
                let qd = q.powi(d as i32);
                RatioState::RPhiS {
                    q: q.clone(),
                    qd_cur: one.clone(),
                    qd_step: qd,
                    sign: if d % 2 == 1 { -&one } else { one.clone() },
                    qk1: q.clone(),
                    aq: a.to_vec(),
                    bq: b.to_vec(),
                }
            }
            SeriesSpec::QBessel { kind, nu, q } => {
                let quarter = Real::from_f64(0.25, prec);
                let scale = match kind {
                    BesselKind::Two => -&(quarter * q.pow(nu)),
                    _ => -&quarter,
                };
                RatioState::QBessel {
                    kind: *kind,
                    q: q.clone(),
                    qk1: q.clone(),
                    qnu_k1: q.pow(&(nu + &one)),
                    q2k1: q.clone(),
                    scale,
                }
            }
        };
        RatioIter { k: 0, prec, state }
    }

    pub(crate) fn next_ratio(&mut self) -> Real {
        let prec = self.prec;
        let one = Real::one(prec);
        let k = self.k;
        let ratio = match &mut self.state {
            RatioState::RamanujanA {
                q,
                qa_cur,
                qa_step,
                qk1,
                a_state,
            } => {
                let r = a_state.factor(k, prec) * &*qa_cur / (&one - &*qk1);
                a_state.advance();
                *qa_cur = &*qa_cur * &*qa_step;
                *qk1 = &*qk1 * &*q;
                r
            }
            RatioState::GeneralizedQ {
                qa_cur,
                qa_step,
                sign,
                num,
                den,
            } => {
                let mut r = &*qa_cur * &*sign;
                for (base, bk1, st) in num.iter_mut() {
                    r = r * st.factor(k, prec) / (&one - &*bk1);
                    st.advance();
                    *bk1 = &*bk1 * &*base;
                }
                for (base, bk1, bbk) in den.iter_mut() {
                    r = r / (&one - &*bk1) / (&one - &*bbk);
                    *bk1 = &*bk1 * &*base;
                    *bbk = &*bbk * &*base;
                }
                *qa_cur = &*qa_cur * &*qa_step;
                r
            }
            RatioState::LimitPoly {
                orders,
                betas,
                sign,
                power,
            } => {
                let mut r = sign.clone();
                for n in orders.iter() {
                    // (-n)_{k+1} / (-n)_k = k - n, exact integer arithmetic.
                    r = r * Real::from_i64(i64::from(k) - i64::from(*n), prec);
                }
                for beta in betas.iter() {
                    r = r / (beta + &Real::from_u32(k, prec));
                }
                r / Real::from_u32(k + 1, prec).powi(*power as i32)
            }
            RatioState::LimitEntire { betas, power } => {
                let mut r = Real::from_u32(k + 1, prec).powi(*power as i32).recip();
                for beta in betas.iter() {
                    r = r / (beta + &Real::from_u32(k, prec));
                }
                r
            }
            RatioState::RAs {
                q,
                qa_cur,
                qa_step,
                aq,
                bq,
            } => {
                let mut r = qa_cur.clone();
                for v in aq.iter_mut() {
                    r = r * (&one - &*v);
                    *v = &*v * &*q;
                }
                for v in bq.iter_mut() {
                    r = r / (&one - &*v);
                    *v = &*v * &*q;
                }
                *qa_cur = &*qa_cur * &*qa_step;
                r
            }
            RatioState::RPhiS {
                q,
                qd_cur,
                qd_step,
                sign,
                qk1,
                aq,
                bq,
            } => {
                let mut r = &*qd_cur * &*sign / (&one - &*qk1);
                for v in aq.iter_mut() {
                    r = r * (&one - &*v);
                    *v = &*v * &*q;
                }
                for v in bq.iter_mut() {
                    r = r / (&one - &*v);
                    *v = &*v * &*q;
                }
                *qd_cur = &*qd_cur * &*qd_step;
                *qk1 = &*qk1 * &*q;
                r
            }
            RatioState::QBessel {
                kind,
                q,
                qk1,
                qnu_k1,
                q2k1,
                scale,
            } => {
                let extra = match kind {
                    BesselKind::One => one.clone(),
                    BesselKind::Two => q2k1.clone(),
                    BesselKind::Three => qk1.clone(),
                };
                let r = &*scale * &extra / ((&one - &*qk1) * (&one - &*qnu_k1));
                *qk1 = &*qk1 * &*q;
                *qnu_k1 = &*qnu_k1 * &*q;
                *q2k1 = &*q2k1 * &q.powi(2);
                r
            }
        };
        self.k += 1;
        ratio
    }
}
