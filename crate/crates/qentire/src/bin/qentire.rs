//! Command-line front end: series evaluation, zero location, and the
//! verification suites, with deterministic machine-readable output.
//!
//! Exit codes: 0 success, 1 verification failure, 2 argument/domain
//! error, 3 numerical guard failure, 64 usage error.

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use qentire::complex::Cplx;
use qentire::error::Error;
use qentire::precision::PrecisionContext;
use qentire::real::Real;
use qentire::roots::{certify_real_roots, find_poly_roots, locate_entire_zeros, ZeroSet};
use qentire::series::{coefficients, evaluate, QParam, SeriesSpec, TruncationCertificate};
use qentire::verify::{
    self, default_identity_bases, default_identity_samples, default_limit_bases, GridSpec,
    VerificationReport,
};

const EXIT_VERIFY_FAILED: i32 = 1;
const EXIT_ARGS: i32 = 2;
const EXIT_GUARD: i32 = 3;
const EXIT_USAGE: i32 = 64;

/// Default precision when neither flag, config file, nor environment
/// variable sets one.
const DEFAULT_BITS: u32 = 256;
/// Environment variable consulted for the default precision.
const PRECISION_ENV: &str = "QENTIRE_PRECISION_BITS";
/// Default zero count for the entire-function verification suites.
const DEFAULT_VERIFY_COUNT: usize = 5;

#[derive(Parser)]
#[command(
    name = "qentire",
    version,
    about = "High-precision q-series evaluation, certified zero location, and verification suites",
    after_help = "Exit codes: 0 success, 1 verification failure, 2 argument/domain error, \
                  3 numerical guard failure, 64 usage error.\n\
                  Numbers are printed as full-precision decimal strings unless --digits is given.\n\
                  Precedence for shared settings: flag > config file > environment > default."
)]
struct Cli {
    /// Working precision in bits (>= 64); also via config `precision`
    /// or the QENTIRE_PRECISION_BITS environment variable.
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Output format: json, csv, or table.
    #[arg(long, global = true)]
    format: Option<String>,
    /// Round printed numbers to this many significant digits (display
    /// only; verification reports in JSON always carry full precision).
    #[arg(long, global = true)]
    digits: Option<usize>,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Config file with `key = value` lines (keys: precision, format,
    /// digits, seed, count, random-instances, grid.q, grid.alpha,
    /// grid.n, grid.a, grid.b, grid.nu, limit-bases).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct SpecArgs {
    /// Series family: ramanujan-a, qbessel1, qbessel2, qbessel3,
    /// limit-entire, limit-poly, ras, rphis. (The multi-factor product
    /// family is reachable through --spec-json.)
    #[arg(long)]
    family: Option<String>,
    /// Complete series spec as JSON: {"family": "...", "params": {...}}
    /// — the same shape the JSON output echoes back.
    #[arg(long, value_name = "JSON")]
    spec_json: Option<String>,
    /// Gaussian exponent alpha.
    #[arg(long)]
    alpha: Option<String>,
    /// Base q in (0,1).
    #[arg(long)]
    q: Option<String>,
    /// Termination order: series parameter q^(-n) (ramanujan-a).
    #[arg(long)]
    n: Option<u32>,
    /// Series parameter value (ramanujan-a).
    #[arg(long)]
    a: Option<String>,
    /// Bessel-type order nu > -1 (qbessel families).
    #[arg(long)]
    nu: Option<String>,
    /// Number of unit numerator factors (limit-entire).
    #[arg(long)]
    m: Option<u32>,
    /// Comma-separated termination orders (limit-poly).
    #[arg(long)]
    orders: Option<String>,
    /// Comma-separated denominator exponents (limit families).
    #[arg(long)]
    betas: Option<String>,
    /// Comma-separated numerator parameters (ras / rphis).
    #[arg(long = "a-list")]
    a_list: Option<String>,
    /// Comma-separated denominator parameters (ras / rphis).
    #[arg(long = "b-list")]
    b_list: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a series at a point, with its truncation certificate.
    Eval {
        #[command(flatten)]
        spec: SpecArgs,
        /// Evaluation point, `re` or `re,im`.
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// Locate and certify zeros: all of them for terminating specs, the
    /// first --count for entire specs.
    Zeros {
        #[command(flatten)]
        spec: SpecArgs,
        /// How many zeros to locate (required for non-terminating
        /// specs; ignored for terminating ones, which report all roots).
        #[arg(long)]
        count: Option<usize>,
    },
    /// Run a verification suite: poly, func1, func2, identities,
    /// limits, order, or all.
    Verify {
        /// Suite name.
        suite: String,
        /// Override the base grid (comma-separated; also the identity
        /// suite's bases).
        #[arg(long = "grid-q")]
        grid_q: Option<String>,
        /// Override the exponent grid (comma-separated).
        #[arg(long = "grid-alpha")]
        grid_alpha: Option<String>,
        /// Override the order grid (comma-separated, ranges like 1..8 allowed).
        #[arg(long = "grid-n")]
        grid_n: Option<String>,
        /// Override the numerator-parameter grid (comma-separated).
        #[arg(long = "grid-a")]
        grid_a: Option<String>,
        /// Override the denominator-parameter grid (comma-separated).
        #[arg(long = "grid-b")]
        grid_b: Option<String>,
        /// Zeros per instance in the entire-function suites.
        #[arg(long)]
        count: Option<usize>,
        /// Seed for the randomized polynomial instances.
        #[arg(long)]
        seed: Option<u64>,
        /// Number of randomized polynomial instances.
        #[arg(long = "random-instances")]
        random_instances: Option<usize>,
        /// Increasing base sequence for the limit suite (comma-separated).
        #[arg(long = "limit-bases")]
        limit_bases: Option<String>,
    },
    /// Tabulate zero sequences across a parameter grid (CSV-oriented).
    Atlas {
        /// Family: qbessel1, qbessel2, qbessel3, or ramanujan-a.
        family: String,
        /// Order grid for the qbessel families (comma-separated).
        #[arg(long = "grid-nu")]
        grid_nu: Option<String>,
        /// Base grid (comma-separated).
        #[arg(long = "grid-q")]
        grid_q: Option<String>,
        /// Exponent grid for ramanujan-a (comma-separated).
        #[arg(long = "grid-alpha")]
        grid_alpha: Option<String>,
        /// Series-parameter grid for ramanujan-a (comma-separated).
        #[arg(long = "grid-a")]
        grid_a: Option<String>,
        /// Zeros per parameter combination.
        #[arg(long)]
        count: Option<usize>,
    },
}

/// A command failure carrying its exit code.
struct Fail {
    code: i32,
    message: String,
}

impl Fail {
    fn usage(msg: impl Into<String>) -> Fail {
        Fail {
            code: EXIT_USAGE,
            message: format!("usage error: {}", msg.into()),
        }
    }
    fn args(msg: impl Into<String>) -> Fail {
        Fail {
            code: EXIT_ARGS,
            message: msg.into(),
        }
    }
}

/// Library errors onto the exit-code convention: parameter problems are
/// argument errors; convergence/guard/consistency problems are guard
/// failures with a remediation hint.
fn lib_fail(e: Error) -> Fail {
    match e {
        Error::Domain(_) | Error::Parse(_) | Error::LengthMismatch(_) => Fail {
            code: EXIT_ARGS,
            message: e.to_string(),
        },
        _ => Fail {
            code: EXIT_GUARD,
            message: format!("{e}\nhint: retry with a higher --precision (or a larger zero count / truncation budget)"),
        },
    }
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(fail) => {
            eprintln!("{}", fail.message);
            fail.code
        }
    }
}

// ---------------------------------------------------------------------------
// Configuration resolution
// ---------------------------------------------------------------------------

/// Values read from the `key = value` config file; all optional.
#[derive(Default)]
struct FileConfig {
    precision: Option<u32>,
    format: Option<String>,
    digits: Option<usize>,
    seed: Option<u64>,
    count: Option<usize>,
    random_instances: Option<usize>,
    grid_q: Option<String>,
    grid_alpha: Option<String>,
    grid_n: Option<String>,
    grid_a: Option<String>,
    grid_b: Option<String>,
    grid_nu: Option<String>,
    limit_bases: Option<String>,
}

fn parse_config(path: &PathBuf) -> Result<FileConfig, Fail> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Fail::args(format!("cannot read config {}: {e}", path.display())))?;
    let mut cfg = FileConfig::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Fail::args(format!(
                "config {}:{}: expected `key = value`",
                path.display(),
                lineno + 1
            )));
        };
        let key = key.trim();
        let value = value.trim().to_string();
        let bad = |what: &str| {
            Fail::args(format!(
                "config {}:{}: bad {what} value {value:?}",
                path.display(),
                lineno + 1
            ))
        };
        match key {
            "precision" => cfg.precision = Some(value.parse().map_err(|_| bad("precision"))?),
            "format" => cfg.format = Some(value),
            "digits" => cfg.digits = Some(value.parse().map_err(|_| bad("digits"))?),
            "seed" => cfg.seed = Some(value.parse().map_err(|_| bad("seed"))?),
            "count" => cfg.count = Some(value.parse().map_err(|_| bad("count"))?),
            "random-instances" => {
                cfg.random_instances = Some(value.parse().map_err(|_| bad("random-instances"))?)
            }
            "grid.q" => cfg.grid_q = Some(value),
            "grid.alpha" => cfg.grid_alpha = Some(value),
            "grid.n" => cfg.grid_n = Some(value),
            "grid.a" => cfg.grid_a = Some(value),
            "grid.b" => cfg.grid_b = Some(value),
            "grid.nu" => cfg.grid_nu = Some(value),
            "limit-bases" => cfg.limit_bases = Some(value),
            _ => {
                return Err(Fail::args(format!(
                    "config {}:{}: unknown key {key:?}",
                    path.display(),
                    lineno + 1
                )))
            }
        }
    }
    Ok(cfg)
}

#[derive(Clone, Copy, PartialEq)]
enum Format {
    Json,
    Csv,
    Table,
}

fn parse_format(s: &str) -> Result<Format, Fail> {
    match s {
        "json" => Ok(Format::Json),
        "csv" => Ok(Format::Csv),
        "table" => Ok(Format::Table),
        _ => Err(Fail::args(format!(
            "unrecognized format {s:?} (expected json, csv, or table)"
        ))),
    }
}

/// Fully resolved run configuration.
struct Run {
    ctx: PrecisionContext,
    format: Format,
    digits: Option<usize>,
    out: Option<PathBuf>,
    cfg: FileConfig,
}

impl Run {
    fn fmt_real(&self, x: &Real) -> String {
        match self.digits {
            Some(d) => x.to_decimal_digits(d),
            None => x.to_decimal(),
        }
    }

    fn fmt_cplx_parts(&self, z: &Cplx) -> (String, String) {
        (self.fmt_real(&z.re), self.fmt_real(&z.im))
    }

    /// Single-column rendering of a located zero: the real part when the
    /// zero is certified real, otherwise both parts.
    fn fmt_zero_value(&self, z: &Cplx, is_real: bool) -> String {
        if is_real {
            self.fmt_real(&z.re)
        } else {
            let (re, im) = self.fmt_cplx_parts(z);
            format!("{re}{}{}i", if im.starts_with('-') { "" } else { "+" }, im)
        }
    }

    /// Write the rendered output to --out or stdout.
    fn emit(&self, body: &str) -> Result<(), Fail> {
        match &self.out {
            Some(path) => std::fs::write(path, body)
                .map_err(|e| Fail::args(format!("cannot write {}: {e}", path.display()))),
            None => {
                print!("{body}");
                Ok(())
            }
        }
    }
}

fn resolve_run(cli: &Cli) -> Result<Run, Fail> {
    let cfg = match &cli.config {
        Some(path) => parse_config(path)?,
        None => FileConfig::default(),
    };
    let env_bits = match std::env::var(PRECISION_ENV) {
        Ok(v) => Some(v.parse::<u32>().map_err(|_| {
            Fail::args(format!("environment {PRECISION_ENV}: bad precision {v:?}"))
        })?),
        Err(_) => None,
    };
    let bits = cli
        .precision
        .or(cfg.precision)
        .or(env_bits)
        .unwrap_or(DEFAULT_BITS);
    let ctx = PrecisionContext::new(bits).map_err(lib_fail)?;
    let format = match cli.format.as_deref().or(cfg.format.as_deref()) {
        Some(s) => parse_format(s)?,
        None => Format::Json,
    };
    let digits = cli.digits.or(cfg.digits);
    if digits == Some(0) {
        return Err(Fail::args("--digits must be >= 1"));
    }
    Ok(Run {
        ctx,
        format,
        digits,
        out: cli.out.clone(),
        cfg,
    })
}

// ---------------------------------------------------------------------------
// Argument parsing helpers
// ---------------------------------------------------------------------------

fn parse_real_arg(name: &str, s: &str, bits: u32) -> Result<Real, Fail> {
    Real::parse(s, bits).map_err(|_| Fail::args(format!("{name}: not a number: {s:?}")))
}

fn parse_cplx_arg(name: &str, s: &str, bits: u32) -> Result<Cplx, Fail> {
    match s.split_once(',') {
        Some((re, im)) => Ok(Cplx::new(
            parse_real_arg(name, re.trim(), bits)?,
            parse_real_arg(name, im.trim(), bits)?,
        )),
        None => Ok(Cplx::from_real(parse_real_arg(name, s.trim(), bits)?)),
    }
}

/// Comma-separated reals; an empty string is an empty list.
fn parse_real_list(name: &str, s: &str, bits: u32) -> Result<Vec<Real>, Fail> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|piece| parse_real_arg(name, piece.trim(), bits))
        .collect()
}

/// Comma-separated integers, with inclusive ranges like `1..8`.
fn parse_u32_list(name: &str, s: &str) -> Result<Vec<u32>, Fail> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for piece in s.split(',') {
        let piece = piece.trim();
        if let Some((lo, hi)) = piece.split_once("..") {
            let lo: u32 = lo
                .trim()
                .parse()
                .map_err(|_| Fail::args(format!("{name}: not an integer: {lo:?}")))?;
            let hi: u32 = hi
                .trim()
                .parse()
                .map_err(|_| Fail::args(format!("{name}: not an integer: {hi:?}")))?;
            if hi < lo {
                return Err(Fail::args(format!("{name}: empty range {piece:?}")));
            }
            out.extend(lo..=hi);
        } else {
            out.push(
                piece
                    .parse()
                    .map_err(|_| Fail::args(format!("{name}: not an integer: {piece:?}")))?,
            );
        }
    }
    Ok(out)
}

fn require<'a>(flag: &str, value: &'a Option<String>) -> Result<&'a str, Fail> {
    value
        .as_deref()
        .ok_or_else(|| Fail::usage(format!("missing required flag {flag}")))
}

fn build_spec(args: &SpecArgs, bits: u32) -> Result<SeriesSpec, Fail> {
    if let Some(text) = &args.spec_json {
        if args.family.is_some() {
            return Err(Fail::usage("--family and --spec-json are mutually exclusive"));
        }
        let value: Value = serde_json::from_str(text)
            .map_err(|e| Fail::args(format!("--spec-json: invalid JSON: {e}")))?;
        let spec = SeriesSpec::from_json(&value, bits).map_err(lib_fail)?;
        spec.validate().map_err(lib_fail)?;
        return Ok(spec);
    }
    let Some(family) = args.family.as_deref() else {
        return Err(Fail::usage("one of --family or --spec-json is required"));
    };
    let spec = match family {
        "ramanujan-a" => {
            let alpha = parse_real_arg("--alpha", require("--alpha", &args.alpha)?, bits)?;
            let q = parse_real_arg("--q", require("--q", &args.q)?, bits)?;
            let a = match (&args.n, &args.a) {
                (Some(n), None) => QParam::NegPow(*n),
                (None, Some(a)) => QParam::Value(parse_real_arg("--a", a, bits)?),
                _ => {
                    return Err(Fail::usage(
                        "ramanujan-a takes exactly one of --n (terminating) or --a (value)",
                    ))
                }
            };
            SeriesSpec::RamanujanA { alpha, a, q }
        }
        "qbessel1" | "qbessel2" | "qbessel3" => {
            let nu = parse_real_arg("--nu", require("--nu", &args.nu)?, bits)?;
            let q = parse_real_arg("--q", require("--q", &args.q)?, bits)?;
            SeriesSpec::QBessel {
                kind: match family {
                    "qbessel1" => qentire::series::BesselKind::One,
                    "qbessel2" => qentire::series::BesselKind::Two,
                    _ => qentire::series::BesselKind::Three,
                },
                nu,
                q,
            }
        }
        "limit-entire" => SeriesSpec::LimitEntire {
            m: args.m.unwrap_or(0),
            betas: parse_real_list("--betas", require("--betas", &args.betas)?, bits)?,
        },
        "limit-poly" => SeriesSpec::LimitPoly {
            orders: parse_u32_list("--orders", require("--orders", &args.orders)?)?,
            betas: match &args.betas {
                Some(s) => parse_real_list("--betas", s, bits)?,
                None => Vec::new(),
            },
        },
        "ras" => SeriesSpec::RAs {
            alpha: parse_real_arg("--alpha", require("--alpha", &args.alpha)?, bits)?,
            a: match &args.a_list {
                Some(s) => parse_real_list("--a-list", s, bits)?,
                None => Vec::new(),
            },
            b: match &args.b_list {
                Some(s) => parse_real_list("--b-list", s, bits)?,
                None => Vec::new(),
            },
            q: parse_real_arg("--q", require("--q", &args.q)?, bits)?,
        },
        "rphis" => SeriesSpec::RPhiS {
            a: match &args.a_list {
                Some(s) => parse_real_list("--a-list", s, bits)?,
                None => Vec::new(),
            },
            b: match &args.b_list {
                Some(s) => parse_real_list("--b-list", s, bits)?,
                None => Vec::new(),
            },
            q: parse_real_arg("--q", require("--q", &args.q)?, bits)?,
        },
        "generalized-q" => {
            return Err(Fail::usage(
                "the multi-factor product family has per-factor bases; pass it via --spec-json",
            ))
        }
        other => return Err(Fail::args(format!("unknown family {other:?}"))),
    };
    spec.validate().map_err(lib_fail)?;
    Ok(spec)
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_rows(columns: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(&columns.join(","));
    out.push('\n');
    for row in rows {
        let fields: Vec<String> = row.iter().map(|f| csv_field(f)).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

fn aligned_table(columns: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = columns.iter().map(|c| c.len()).collect();
    for row in rows {
        for (i, field) in row.iter().enumerate() {
            widths[i] = widths[i].max(field.len());
        }
    }
    let render = |cells: Vec<&str>| -> String {
        let mut line = String::new();
        for (i, cell) in cells.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            line.push_str(cell);
            if i + 1 < cells.len() {
                for _ in cell.len()..widths[i] {
                    line.push(' ');
                }
            }
        }
        line.push('\n');
        line
    };
    let mut out = render(columns.to_vec());
    let dashes: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    out.push_str(&render(dashes.iter().map(String::as_str).collect()));
    for row in rows {
        out.push_str(&render(row.iter().map(String::as_str).collect()));
    }
    out
}

fn json_body(v: &Value) -> String {
    let mut body = serde_json::to_string_pretty(v).expect("JSON serialization cannot fail");
    body.push('\n');
    body
}

fn certificate_json(cert: &TruncationCertificate, run: &Run) -> Value {
    json!({
        "terms": cert.n,
        "radius": run.fmt_real(&cert.radius),
        "tail_bound": run.fmt_real(&cert.tail),
    })
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn dispatch(cli: Cli) -> Result<i32, Fail> {
    let run = resolve_run(&cli)?;
    match &cli.command {
        Command::Eval { spec, z } => cmd_eval(spec, z, &run),
        Command::Zeros { spec, count } => cmd_zeros(spec, *count, &run),
        Command::Verify {
            suite,
            grid_q,
            grid_alpha,
            grid_n,
            grid_a,
            grid_b,
            count,
            seed,
            random_instances,
            limit_bases,
        } => {
            let over = VerifyOverrides {
                grid_q: grid_q.clone().or_else(|| run.cfg.grid_q.clone()),
                grid_alpha: grid_alpha.clone().or_else(|| run.cfg.grid_alpha.clone()),
                grid_n: grid_n.clone().or_else(|| run.cfg.grid_n.clone()),
                grid_a: grid_a.clone().or_else(|| run.cfg.grid_a.clone()),
                grid_b: grid_b.clone().or_else(|| run.cfg.grid_b.clone()),
                count: count.or(run.cfg.count),
                seed: seed.or(run.cfg.seed),
                random_instances: random_instances.or(run.cfg.random_instances),
                limit_bases: limit_bases.clone().or_else(|| run.cfg.limit_bases.clone()),
            };
            cmd_verify(suite, &over, &run)
        }
        Command::Atlas {
            family,
            grid_nu,
            grid_q,
            grid_alpha,
            grid_a,
            count,
        } => {
            let nu = grid_nu.clone().or_else(|| run.cfg.grid_nu.clone());
            let q = grid_q.clone().or_else(|| run.cfg.grid_q.clone());
            let alpha = grid_alpha.clone().or_else(|| run.cfg.grid_alpha.clone());
            let a = grid_a.clone().or_else(|| run.cfg.grid_a.clone());
            let count = count.or(run.cfg.count);
            cmd_atlas(family, &nu, &q, &alpha, &a, count, &run)
        }
    }
}

fn cmd_eval(spec_args: &SpecArgs, z_arg: &str, run: &Run) -> Result<i32, Fail> {
    let bits = run.ctx.bits();
    let spec = build_spec(spec_args, bits)?;
    let z = parse_cplx_arg("--z", z_arg, bits)?;
    let (value, cert) = evaluate(&spec, &z, &run.ctx).map_err(lib_fail)?;
    let (z_re, z_im) = run.fmt_cplx_parts(&z);
    let (v_re, v_im) = run.fmt_cplx_parts(&value);

    let body = match run.format {
        Format::Json => json_body(&json!({
            "command": "eval",
            "family": spec.family_name(),
            "params": spec.params_json(),
            "precision_bits": bits,
            "z": {"re": z_re, "im": z_im},
            "value": {"re": v_re, "im": v_im},
            "certificate": certificate_json(&cert, run),
        })),
        Format::Csv => csv_rows(
            &[
                "family", "z_re", "z_im", "value_re", "value_im", "terms", "radius", "tail_bound",
            ],
            &[vec![
                spec.family_name().to_string(),
                z_re,
                z_im,
                v_re,
                v_im,
                cert.n.to_string(),
                run.fmt_real(&cert.radius),
                run.fmt_real(&cert.tail),
            ]],
        ),
        Format::Table => format!(
            "family   {}\nparams   {}\nz        {z_re} + {z_im} i\nvalue    {v_re} + {v_im} i\nsummed   {} terms, radius {}, tail bound {}\n",
            spec.family_name(),
            spec.params_json(),
            cert.n,
            run.fmt_real(&cert.radius),
            run.fmt_real(&cert.tail),
        ),
    };
    run.emit(&body)?;
    Ok(0)
}

/// Zero rows shared by `zeros` table/CSV output.
fn zero_rows(set: &ZeroSet, run: &Run) -> Vec<Vec<String>> {
    set.zeros
        .iter()
        .enumerate()
        .map(|(i, z)| {
            let (re, im) = run.fmt_cplx_parts(&z.value);
            vec![
                (i + 1).to_string(),
                re,
                im,
                run.fmt_real(&z.residual),
                run.fmt_real(&z.condition),
                z.is_real.to_string(),
            ]
        })
        .collect()
}

fn zeros_json(spec: &SeriesSpec, set: &ZeroSet, run: &Run) -> Value {
    let zeros: Vec<Value> = set
        .zeros
        .iter()
        .enumerate()
        .map(|(i, z)| {
            let (re, im) = run.fmt_cplx_parts(&z.value);
            json!({
                "index": i + 1,
                "re": re,
                "im": im,
                "residual": run.fmt_real(&z.residual),
                "condition": run.fmt_real(&z.condition),
                "is_real": z.is_real,
            })
        })
        .collect();
    let realness = set.report.as_ref().map(|r| {
        json!({
            "all_real": r.all_real,
            "all_negative": r.all_negative,
            "all_positive": r.all_positive,
            "max_imag_ratio": run.fmt_real(&r.max_imag_ratio),
            "sign_changes": r.sign_change_count,
        })
    });
    let certificate = set.certificate.as_ref().map(|c| certificate_json(c, run));
    json!({
        "command": "zeros",
        "family": spec.family_name(),
        "params": spec.params_json(),
        "precision_bits": run.ctx.bits(),
        "zeros": zeros,
        "realness": realness,
        "certificate": certificate,
    })
}

const ZERO_COLUMNS: [&str; 6] = ["index", "re", "im", "residual", "condition", "is_real"];

fn cmd_zeros(spec_args: &SpecArgs, count: Option<usize>, run: &Run) -> Result<i32, Fail> {
    let bits = run.ctx.bits();
    let spec = build_spec(spec_args, bits)?;
    let set = match spec.termination_degree() {
        Some(deg) => {
            // Terminating: the full root set, certified.
            let seq = coefficients(&spec, deg as usize).map_err(lib_fail)?;
            let mut set = find_poly_roots(&seq, &run.ctx).map_err(lib_fail)?;
            let report = certify_real_roots(&seq, &set, &run.ctx).map_err(lib_fail)?;
            set.report = Some(report);
            set
        }
        None => {
            let Some(k) = count else {
                return Err(Fail::usage(
                    "this spec is not terminating; pass --count for the number of zeros",
                ));
            };
            if k == 0 {
                return Err(Fail::usage("--count must be >= 1"));
            }
            locate_entire_zeros(&spec, k, &run.ctx).map_err(lib_fail)?
        }
    };

    let body = match run.format {
        Format::Json => json_body(&zeros_json(&spec, &set, run)),
        Format::Csv => csv_rows(&ZERO_COLUMNS, &zero_rows(&set, run)),
        Format::Table => {
            let mut out = format!(
                "family   {}\nparams   {}\n\n",
                spec.family_name(),
                spec.params_json()
            );
            out.push_str(&aligned_table(&ZERO_COLUMNS, &zero_rows(&set, run)));
            if let Some(r) = &set.report {
                out.push_str(&format!(
                    "\nall_real {}  all_negative {}  all_positive {}  max_imag_ratio {}  sign_changes {}\n",
                    r.all_real,
                    r.all_negative,
                    r.all_positive,
                    run.fmt_real(&r.max_imag_ratio),
                    r.sign_change_count,
                ));
            }
            out
        }
    };
    run.emit(&body)?;
    Ok(0)
}

struct VerifyOverrides {
    grid_q: Option<String>,
    grid_alpha: Option<String>,
    grid_n: Option<String>,
    grid_a: Option<String>,
    grid_b: Option<String>,
    count: Option<usize>,
    seed: Option<u64>,
    random_instances: Option<usize>,
    limit_bases: Option<String>,
}

impl VerifyOverrides {
    fn any_grid_override(&self) -> bool {
        self.grid_q.is_some()
            || self.grid_alpha.is_some()
            || self.grid_n.is_some()
            || self.grid_a.is_some()
            || self.grid_b.is_some()
            || self.random_instances.is_some()
            || self.limit_bases.is_some()
    }

    /// Apply the shared overrides to a suite's default grid.
    fn apply(&self, mut grid: GridSpec, bits: u32) -> Result<GridSpec, Fail> {
        if let Some(s) = &self.grid_q {
            grid.q = parse_real_list("--grid-q", s, bits)?;
        }
        if let Some(s) = &self.grid_alpha {
            grid.alpha = parse_real_list("--grid-alpha", s, bits)?;
        }
        if let Some(s) = &self.grid_n {
            grid.n = parse_u32_list("--grid-n", s)?;
        }
        if let Some(s) = &self.grid_a {
            grid.a = parse_real_list("--grid-a", s, bits)?;
        }
        if let Some(s) = &self.grid_b {
            grid.b = parse_real_list("--grid-b", s, bits)?;
        }
        if let Some(n) = self.random_instances {
            grid.random_instances = n;
        }
        if let Some(seed) = self.seed {
            grid.seed = seed;
        }
        Ok(grid)
    }
}

fn verify_csv(reports: &[VerificationReport], run: &Run) -> String {
    let columns = [
        "suite",
        "precision_bits",
        "seed",
        "instances_run",
        "instances_passed",
        "instances_skipped",
        "worst_metric",
        "worst_value",
        "worst_instance",
        "failures",
    ];
    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|r| {
            let failures: Vec<String> = r
                .failures
                .iter()
                .map(|f| format!("{}: {}", f.instance, f.message))
                .collect();
            vec![
                r.suite.clone(),
                r.precision_bits.to_string(),
                r.seed.to_string(),
                r.instances_run.to_string(),
                r.instances_passed.to_string(),
                r.instances_skipped.to_string(),
                r.worst_metric.clone(),
                r.worst_value.as_ref().map(|v| run.fmt_real(v)).unwrap_or_default(),
                r.worst_instance.clone().unwrap_or_default(),
                failures.join("; "),
            ]
        })
        .collect();
    csv_rows(&columns, &rows)
}

fn verify_table(reports: &[VerificationReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&r.summary());
        out.push('\n');
        for f in &r.failures {
            out.push_str(&format!("  FAIL {}: {}\n", f.instance, f.message));
        }
    }
    out
}

fn cmd_verify(suite: &str, over: &VerifyOverrides, run: &Run) -> Result<i32, Fail> {
    let bits = run.ctx.bits();
    let ctx = &run.ctx;
    let count = over.count.unwrap_or(DEFAULT_VERIFY_COUNT);
    if count == 0 {
        return Err(Fail::usage("--count must be >= 1"));
    }
    let reports: Vec<VerificationReport> = match suite {
        "poly" => vec![
            verify::verify_thm_poly(&over.apply(GridSpec::default_poly(bits), bits)?, ctx)
                .map_err(lib_fail)?,
        ],
        "func1" => vec![verify::verify_thm_func1(
            &over.apply(GridSpec::default_func1(bits), bits)?,
            count,
            ctx,
        )
        .map_err(lib_fail)?],
        "func2" => vec![verify::verify_thm_func2(
            &over.apply(GridSpec::default_func2(bits), bits)?,
            count,
            ctx,
        )
        .map_err(lib_fail)?],
        "identities" => {
            let bases = match &over.grid_q {
                Some(s) => parse_real_list("--grid-q", s, bits)?,
                None => default_identity_bases(bits),
            };
            vec![
                verify::verify_identities(&bases, &default_identity_samples(bits), ctx)
                    .map_err(lib_fail)?,
            ]
        }
        "limits" => {
            let bases = match &over.limit_bases {
                Some(s) => parse_real_list("--limit-bases", s, bits)?,
                None => default_limit_bases(bits),
            };
            vec![verify::verify_limits(&bases, ctx).map_err(lib_fail)?]
        }
        "order" => vec![verify::verify_order(ctx).map_err(lib_fail)?],
        "all" => {
            if over.any_grid_override() {
                return Err(Fail::args(
                    "grid overrides apply to single-suite runs, not `verify all`",
                ));
            }
            verify::run_all(ctx).map_err(lib_fail)?
        }
        other => {
            return Err(Fail::args(format!(
                "unknown suite {other:?} (expected poly, func1, func2, identities, limits, order, or all)"
            )))
        }
    };

    let body = match run.format {
        Format::Json => {
            let vals: Vec<Value> = reports
                .iter()
                .map(|r| serde_json::to_value(r).expect("report serialization cannot fail"))
                .collect();
            json_body(&Value::Array(vals))
        }
        Format::Csv => verify_csv(&reports, run),
        Format::Table => verify_table(&reports),
    };
    run.emit(&body)?;
    Ok(if reports.iter().all(VerificationReport::passed) {
        0
    } else {
        EXIT_VERIFY_FAILED
    })
}

/// One atlas parameter combination: labels and the spec to locate.
struct AtlasGroup {
    params: Vec<String>,
    spec: SeriesSpec,
}

fn atlas_groups(
    family: &str,
    nu: &Option<String>,
    q: &Option<String>,
    alpha: &Option<String>,
    a: &Option<String>,
    run: &Run,
) -> Result<(Vec<&'static str>, Vec<AtlasGroup>), Fail> {
    let bits = run.ctx.bits();
    let list = |name: &str, s: &Option<String>| -> Result<Vec<Real>, Fail> {
        match s {
            Some(s) => parse_real_list(name, s, bits),
            None => Ok(Vec::new()),
        }
    };
    match family {
        "qbessel1" | "qbessel2" | "qbessel3" => {
            let kind = match family {
                "qbessel1" => qentire::series::BesselKind::One,
                "qbessel2" => qentire::series::BesselKind::Two,
                _ => qentire::series::BesselKind::Three,
            };
            let nus = list("--grid-nu", nu)?;
            let qs = list("--grid-q", q)?;
            let mut groups = Vec::new();
            for nu in &nus {
                for q in &qs {
                    groups.push(AtlasGroup {
                        params: vec![run.fmt_real(nu), run.fmt_real(q)],
                        spec: SeriesSpec::QBessel {
                            kind,
                            nu: nu.clone(),
                            q: q.clone(),
                        },
                    });
                }
            }
            Ok((vec!["nu", "q"], groups))
        }
        "ramanujan-a" => {
            let alphas = list("--grid-alpha", alpha)?;
            let avals = list("--grid-a", a)?;
            let qs = list("--grid-q", q)?;
            let mut groups = Vec::new();
            for alpha in &alphas {
                for av in &avals {
                    for q in &qs {
                        groups.push(AtlasGroup {
                            params: vec![
                                run.fmt_real(alpha),
                                run.fmt_real(av),
                                run.fmt_real(q),
                            ],
                            spec: SeriesSpec::RamanujanA {
                                alpha: alpha.clone(),
                                a: QParam::Value(av.clone()),
                                q: q.clone(),
                            },
                        });
                    }
                }
            }
            Ok((vec!["alpha", "a", "q"], groups))
        }
        other => Err(Fail::args(format!(
            "atlas supports qbessel1, qbessel2, qbessel3, or ramanujan-a; got {other:?}"
        ))),
    }
}

fn cmd_atlas(
    family: &str,
    nu: &Option<String>,
    q: &Option<String>,
    alpha: &Option<String>,
    a: &Option<String>,
    count: Option<usize>,
    run: &Run,
) -> Result<i32, Fail> {
    let Some(k) = count else {
        return Err(Fail::usage("atlas requires --count"));
    };
    if k == 0 {
        return Err(Fail::usage("--count must be >= 1"));
    }
    let (param_columns, groups) = atlas_groups(family, nu, q, alpha, a, run)?;
    let mut columns: Vec<&str> = param_columns.clone();
    columns.extend(["index", "zero", "residual", "error"]);

    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut failed_groups = 0usize;
    for group in &groups {
        let located = group
            .spec
            .validate()
            .and_then(|()| locate_entire_zeros(&group.spec, k, &run.ctx));
        match located {
            Ok(set) => {
                for (i, z) in set.zeros.iter().enumerate() {
                    let mut row = group.params.clone();
                    row.push((i + 1).to_string());
                    row.push(run.fmt_zero_value(&z.value, z.is_real));
                    row.push(run.fmt_real(&z.residual));
                    row.push(String::new());
                    rows.push(row);
                }
            }
            Err(e) => {
                failed_groups += 1;
                for i in 0..k {
                    let mut row = group.params.clone();
                    row.push((i + 1).to_string());
                    row.push(String::new());
                    row.push(String::new());
                    row.push(e.to_string());
                    rows.push(row);
                }
            }
        }
    }

    let body = match run.format {
        Format::Json => {
            let cols: Vec<Value> = columns.iter().map(|c| json!(c)).collect();
            let row_vals: Vec<Value> = rows
                .iter()
                .map(|r| Value::Array(r.iter().map(|f| json!(f)).collect()))
                .collect();
            json_body(&json!({
                "command": "atlas",
                "family": family,
                "precision_bits": run.ctx.bits(),
                "count": k,
                "columns": cols,
                "rows": row_vals,
            }))
        }
        Format::Csv => csv_rows(&columns, &rows),
        Format::Table => aligned_table(&columns, &rows),
    };
    run.emit(&body)?;
    Ok(if !groups.is_empty() && failed_groups == groups.len() {
        EXIT_GUARD
    } else {
        0
    })
}
