//! End-to-end tests of the command-line tool: exit codes, output
//! formats, schema conformance of every JSON payload, configuration
//! precedence, and determinism.

use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

const SCHEMA: &str = include_str!(concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/schemas/output.schema.json"
));

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run_with(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qentire"));
    cmd.args(args).env_remove("QENTIRE_PRECISION_BITS");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Output {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).expect("stdout is UTF-8"),
        stderr: String::from_utf8(out.stderr).expect("stderr is UTF-8"),
    }
}

fn run(args: &[&str]) -> Output {
    run_with(args, &[])
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {:?}", out.stdout);
    })
}

fn assert_schema_valid(payload: &str) {
    let schema: Value = serde_json::from_str(SCHEMA).expect("schema file is JSON");
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let instance: Value = serde_json::from_str(payload).expect("payload is JSON");
    let errors: Vec<String> = validator
        .iter_errors(&instance)
        .map(|e| format!("{e} at {}", e.instance_path))
        .collect();
    assert!(errors.is_empty(), "schema violations: {errors:#?}");
}

fn temp_file(tag: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!(
        "qentire-cli-{}-{tag}",
        std::process::id()
    ));
    std::fs::write(&path, contents).expect("temp file written");
    path
}

// --- eval ------------------------------------------------------------------

#[test]
fn eval_at_origin_is_one_and_validates() {
    let out = run(&[
        "eval", "--family", "ramanujan-a", "--alpha", "1", "--a", "0", "--q", "0.5", "--z", "0",
    ]);
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    assert_schema_valid(&out.stdout);
    let v = json(&out);
    assert_eq!(v["command"], "eval");
    assert_eq!(v["value"]["re"].as_str().unwrap().parse::<f64>().unwrap(), 1.0);
    assert_eq!(v["value"]["im"].as_str().unwrap().parse::<f64>().unwrap(), 0.0);
    assert_eq!(v["precision_bits"], 256);
}

#[test]
fn eval_bessel_normalization_at_origin_is_one() {
    let out = run(&["eval", "--family", "qbessel2", "--nu", "0", "--q", "0.5", "--z", "0"]);
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    let v = json(&out);
    assert_eq!(v["value"]["re"].as_str().unwrap().parse::<f64>().unwrap(), 1.0);
}

#[test]
fn eval_csv_has_documented_columns() {
    let out = run(&[
        "eval", "--family", "qbessel2", "--nu", "0", "--q", "0.5", "--z", "0.25", "--format",
        "csv",
    ]);
    assert_eq!(out.code, 0);
    let header = out.stdout.lines().next().unwrap();
    assert_eq!(
        header,
        "family,z_re,z_im,value_re,value_im,terms,radius,tail_bound"
    );
    assert_eq!(out.stdout.lines().count(), 2);
}

#[test]
fn eval_rejects_base_outside_unit_interval() {
    let out = run(&[
        "eval", "--family", "ramanujan-a", "--alpha", "1", "--a", "0", "--q", "1.5", "--z", "0",
    ]);
    assert_eq!(out.code, 2);
    assert!(
        out.stderr.contains("(0,1)"),
        "message names the violated constraint: {}",
        out.stderr
    );
}

#[test]
fn eval_requires_exactly_one_terminating_parameter() {
    let out = run(&["eval", "--family", "ramanujan-a", "--alpha", "1", "--q", "0.5", "--z", "0"]);
    assert_eq!(out.code, 64, "stderr: {}", out.stderr);
}

// --- zeros -----------------------------------------------------------------

#[test]
fn zeros_of_linear_instance_is_exactly_one() {
    let out = run(&[
        "zeros", "--family", "ramanujan-a", "--alpha", "1", "--n", "1", "--q", "0.5",
    ]);
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    assert_schema_valid(&out.stdout);
    let v = json(&out);
    let zeros = v["zeros"].as_array().unwrap();
    assert_eq!(zeros.len(), 1);
    assert_eq!(zeros[0]["re"].as_str().unwrap().parse::<f64>().unwrap(), 1.0);
    assert_eq!(v["realness"]["all_positive"], true);
}

#[test]
fn zeros_of_quadratic_instance_match_closed_form() {
    let out = run(&[
        "zeros", "--family", "ramanujan-a", "--alpha", "1", "--n", "2", "--q", "0.5",
    ]);
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    assert_schema_valid(&out.stdout);
    let v = json(&out);
    let zeros = v["zeros"].as_array().unwrap();
    assert_eq!(zeros.len(), 2);
    // Roots of 1 - 3z + (1/2)z²: 3 ∓ √7.
    let lo: f64 = zeros[0]["re"].as_str().unwrap().parse().unwrap();
    let hi: f64 = zeros[1]["re"].as_str().unwrap().parse().unwrap();
    assert!((lo - (3.0 - 7.0f64.sqrt())).abs() < 1e-12, "got {lo}");
    assert!((hi - (3.0 + 7.0f64.sqrt())).abs() < 1e-12, "got {hi}");
    assert_eq!(v["realness"]["all_real"], true);
    assert_eq!(v["realness"]["all_positive"], true);
    assert_eq!(v["certificate"], Value::Null);
}

#[test]
fn zeros_csv_has_documented_columns() {
    let out = run(&[
        "zeros", "--family", "ramanujan-a", "--alpha", "1", "--n", "2", "--q", "0.5", "--format",
        "csv",
    ]);
    assert_eq!(out.code, 0);
    assert_eq!(
        out.stdout.lines().next().unwrap(),
        "index,re,im,residual,condition,is_real"
    );
    assert_eq!(out.stdout.lines().count(), 3);
}

#[test]
fn zeros_of_entire_function_require_count() {
    let out = run(&["zeros", "--family", "qbessel2", "--nu", "0", "--q", "0.5"]);
    assert_eq!(out.code, 64);
    assert!(out.stderr.contains("--count"), "hint names the flag: {}", out.stderr);
}

#[test]
fn zeros_of_entire_function_validate_and_carry_certificate() {
    let out = run(&[
        "zeros", "--family", "qbessel2", "--nu", "0", "--q", "0.5", "--count", "3",
    ]);
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    assert_schema_valid(&out.stdout);
    let v = json(&out);
    assert_eq!(v["zeros"].as_array().unwrap().len(), 3);
    assert!(v["certificate"]["terms"].is_u64());
    assert_eq!(v["realness"]["all_positive"], true);
}

#[test]
fn spec_json_and_flag_runs_are_identical() {
    let by_flags = run(&[
        "zeros", "--family", "qbessel2", "--nu", "0.5", "--q", "0.4", "--count", "2",
    ]);
    let by_json = run(&[
        "zeros",
        "--spec-json",
        r#"{"family": "qbessel2", "params": {"nu": "0.5", "q": "0.4"}}"#,
        "--count",
        "2",
    ]);
    assert_eq!(by_flags.code, 0, "stderr: {}", by_flags.stderr);
    assert_eq!(by_json.code, 0, "stderr: {}", by_json.stderr);
    assert_eq!(by_flags.stdout, by_json.stdout);
}

// --- verify ----------------------------------------------------------------

#[test]
fn verify_order_suite_passes_and_validates() {
    let out = run(&["verify", "order"]);
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    assert_schema_valid(&out.stdout);
    let v = json(&out);
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 1);
    assert_eq!(reports[0]["suite"], "order");
    assert_eq!(reports[0]["instances_run"], reports[0]["instances_passed"]);
}

#[test]
fn verify_unknown_suite_is_an_argument_error() {
    let out = run(&["verify", "everything"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("everything"));
}

#[test]
fn verify_csv_has_documented_columns() {
    let out = run(&["verify", "order", "--format", "csv"]);
    assert_eq!(out.code, 0);
    assert_eq!(
        out.stdout.lines().next().unwrap(),
        "suite,precision_bits,seed,instances_run,instances_passed,instances_skipped,\
         worst_metric,worst_value,worst_instance,failures"
    );
}

#[test]
fn verify_all_rejects_grid_overrides() {
    let out = run(&["verify", "all", "--grid-q", "0.5"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("single-suite"), "stderr: {}", out.stderr);
}

// --- atlas -----------------------------------------------------------------

#[test]
fn atlas_rows_are_increasing_within_each_group() {
    let out = run(&[
        "atlas", "qbessel2", "--grid-nu", "0,0.5", "--grid-q", "0.3,0.6", "--count", "3",
        "--format", "csv",
    ]);
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "nu,q,index,zero,residual,error");
    assert_eq!(lines.len(), 1 + 12, "four groups of three zeros");
    for group in lines[1..].chunks(3) {
        let mut prev = 0.0f64;
        for row in group {
            let fields: Vec<&str> = row.split(',').collect();
            assert!(fields[5].is_empty(), "no per-row error: {row}");
            let zero: f64 = fields[3].parse().expect("real zero column");
            assert!(zero > prev, "zeros increase within a group: {row}");
            prev = zero;
        }
    }
}

#[test]
fn atlas_json_validates() {
    let out = run(&[
        "atlas", "qbessel2", "--grid-nu", "0", "--grid-q", "0.5", "--count", "2", "--format",
        "json",
    ]);
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    assert_schema_valid(&out.stdout);
    let v = json(&out);
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn atlas_with_empty_grid_prints_header_only() {
    let out = run(&["atlas", "qbessel2", "--count", "3", "--format", "csv"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout.lines().count(), 1);
}

#[test]
fn atlas_count_is_required_and_positive() {
    let missing = run(&["atlas", "qbessel2", "--grid-nu", "0", "--grid-q", "0.5"]);
    assert_eq!(missing.code, 64);
    let zero = run(&["atlas", "qbessel2", "--grid-nu", "0", "--grid-q", "0.5", "--count", "0"]);
    assert_eq!(zero.code, 64);
}

// --- configuration ---------------------------------------------------------

#[test]
fn precision_precedence_is_flag_config_env_default() {
    let args = &[
        "eval", "--family", "qbessel2", "--nu", "0", "--q", "0.5", "--z", "0",
    ];
    let probe = |out: &Output| json(out)["precision_bits"].as_u64().unwrap();

    let default_run = run(args);
    assert_eq!(probe(&default_run), 256);

    let env_run = run_with(args, &[("QENTIRE_PRECISION_BITS", "128")]);
    assert_eq!(probe(&env_run), 128);

    let config = temp_file("precedence.conf", "# comment\nprecision = 320\n");
    let mut with_config = args.to_vec();
    let config_str = config.to_str().unwrap();
    with_config.extend(["--config", config_str]);
    let config_run = run_with(&with_config, &[("QENTIRE_PRECISION_BITS", "128")]);
    assert_eq!(probe(&config_run), 320, "config file beats the environment");

    let mut with_flag = with_config.clone();
    with_flag.extend(["--precision", "192"]);
    let flag_run = run_with(&with_flag, &[("QENTIRE_PRECISION_BITS", "128")]);
    assert_eq!(probe(&flag_run), 192, "flag beats config and environment");

    std::fs::remove_file(config).ok();
}

#[test]
fn config_rejects_unknown_keys_and_malformed_lines() {
    let bad_key = temp_file("badkey.conf", "wibble = 3\n");
    let out = run(&[
        "eval", "--family", "qbessel2", "--nu", "0", "--q", "0.5", "--z", "0", "--config",
        bad_key.to_str().unwrap(),
    ]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("unknown key"), "stderr: {}", out.stderr);
    assert!(out.stderr.contains(":1:"), "names the line: {}", out.stderr);
    std::fs::remove_file(bad_key).ok();

    let bad_line = temp_file("badline.conf", "precision 320\n");
    let out = run(&[
        "eval", "--family", "qbessel2", "--nu", "0", "--q", "0.5", "--z", "0", "--config",
        bad_line.to_str().unwrap(),
    ]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("key = value"), "stderr: {}", out.stderr);
    std::fs::remove_file(bad_line).ok();
}

#[test]
fn precision_below_minimum_is_an_argument_error() {
    let out = run(&[
        "eval", "--family", "qbessel2", "--nu", "0", "--q", "0.5", "--z", "0", "--precision",
        "32",
    ]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("64"), "stderr: {}", out.stderr);
}

#[test]
fn digits_flag_rounds_for_display() {
    let full = run(&[
        "zeros", "--family", "ramanujan-a", "--alpha", "1", "--n", "2", "--q", "0.5",
    ]);
    let rounded = run(&[
        "zeros", "--family", "ramanujan-a", "--alpha", "1", "--n", "2", "--q", "0.5", "--digits",
        "10",
    ]);
    assert_eq!(rounded.code, 0);
    assert_schema_valid(&rounded.stdout);
    let full_re = json(&full)["zeros"][1]["re"].as_str().unwrap().to_string();
    let short_re = json(&rounded)["zeros"][1]["re"].as_str().unwrap().to_string();
    assert!(full_re.len() > 60, "full precision is long: {full_re}");
    assert!(short_re.len() < 20, "rounded is short: {short_re}");
    let a: f64 = full_re.parse().unwrap();
    let b: f64 = short_re.parse().unwrap();
    assert!((a - b).abs() <= 1e-9 * a.abs());
}

#[test]
fn out_flag_writes_the_payload_to_a_file() {
    let path = std::env::temp_dir().join(format!("qentire-cli-{}-out.json", std::process::id()));
    let out = run(&[
        "eval", "--family", "qbessel2", "--nu", "0", "--q", "0.5", "--z", "0", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    assert!(out.stdout.is_empty(), "payload goes to the file");
    let contents = std::fs::read_to_string(&path).expect("file written");
    assert_schema_valid(&contents);
    std::fs::remove_file(path).ok();
}

// --- determinism and process behavior ---------------------------------------

#[test]
fn identical_invocations_are_byte_identical() {
    let args = &[
        "zeros", "--family", "qbessel2", "--nu", "0", "--q", "0.5", "--count", "2",
    ];
    let first = run(args);
    let second = run(args);
    assert_eq!(first.code, 0);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn help_and_version_exit_zero_and_bad_flags_exit_sixty_four() {
    let help = run(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("Usage"));
    let version = run(&["--version"]);
    assert_eq!(version.code, 0);
    let bad = run(&["--wibble"]);
    assert_eq!(bad.code, 64);
    let none = run(&[]);
    assert_eq!(none.code, 64);
}

#[test]
fn schema_rejects_malformed_payloads() {
    // Negative control: the shipped schema must actually constrain.
    let schema: Value = serde_json::from_str(SCHEMA).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    for bad in [
        r#"{"command": "eval"}"#,
        r#"{"command": "zeros", "family": "x", "params": {}, "precision_bits": 256, "zeros": [{"index": 0}], "realness": null, "certificate": null}"#,
        r#"[{"suite": "nonsense", "precision_bits": 256, "seed": 0, "instances_run": 1, "instances_passed": 1, "instances_skipped": 0, "worst_metric": "m", "failures": []}]"#,
        r#"{"command": "atlas", "family": "qbessel2", "precision_bits": 256, "count": 0, "columns": [], "rows": []}"#,
    ] {
        let instance: Value = serde_json::from_str(bad).unwrap();
        assert!(!validator.is_valid(&instance), "should reject: {bad}");
    }
}
