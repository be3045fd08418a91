//! End-to-end runs of the command line front end.

use serde_json::Value;

use quasilie::cli::{run, EXIT_INPUT, EXIT_NEGATIVE, EXIT_NUMERICAL, EXIT_OK};

fn data(name: &str) -> String {
    format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn quasilie(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("quasilie").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn transform_matches_hand_computation() {
    let (code, out, _) = quasilie(&["transform", &data("all_ones.json"), &data("shifted_curve.json")]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["transformed"]["coeffs"], json(r#"["2","6","8","4"]"#));
}

#[test]
fn identity_curve_returns_input_text() {
    let (code, out, _) = quasilie(&["transform", &data("varying.json"), &data("identity_curve.json")]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["transformed"]["coeffs"], v["input"]["coeffs"]);
}

#[test]
fn malformed_input_exits_two() {
    let (code, _, err) = quasilie(&["transform", &data("missing_coeffs.json"), &data("shifted_curve.json")]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("coeffs"));
    let (code, _, _) = quasilie(&["--grid", "0:1:5", "solve", &data("pure_cubic.json"), "--x0", "0.5"]);
    assert_eq!(code, EXIT_INPUT);
    let (code, _, _) = quasilie(&["transform", &data("nonexistent.json"), &data("shifted_curve.json")]);
    assert_eq!(code, EXIT_INPUT);
}

#[test]
fn invariant_lines_agree_along_an_orbit() {
    let (code, out, _) = quasilie(&["invariant", &data("one_dim_target.json"), "--against", &data("one_dim_reducible.json")]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<Value> = out.lines().map(json).collect();
    assert!(lines.len() > 16);
    let last = lines.last().unwrap();
    assert!(last["max_F_deviation"].as_f64().unwrap() < 1e-8);
    for l in &lines[..lines.len() - 1] {
        let (f, g) = (l["F"].as_f64().unwrap(), l["F_against"].as_f64().unwrap());
        assert!((f - g).abs() < 1e-8 * (1.0 + f.abs()));
    }
}

#[test]
fn reduce_verdicts() {
    let (code, out, _) = quasilie(&["reduce", &data("cubic_linear.json")]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(json(&out)["reducible_2d"], Value::Bool(true));

    let (code, out, _) = quasilie(&["reduce", &data("cubic_plus_one.json")]);
    assert_eq!(code, EXIT_NEGATIVE);
    let v = json(&out);
    assert_eq!(v["reducible_2d"], Value::Bool(false));
    assert_eq!(v["CA_max_residual"].as_f64().unwrap(), 27.0);

    let (code, out, _) = quasilie(&["reduce", &data("integrable.json"), "--mu", "1", "--x0", "0.3"]);
    assert_eq!(code, EXIT_OK, "{out}");

    let (code, out, _) = quasilie(&["reduce", &data("one_dim_reducible.json"), "--c", "0,0,1,1"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert_eq!(json(&out)["reducible_1d"], Value::Bool(true));
}

#[test]
fn canonical_reports_residuals() {
    let (code, out, _) = quasilie(&["canonical", &data("cubic_linear.json"), "--beta", "0"]);
    assert_eq!(code, EXIT_OK);
    assert!(!out.is_empty());
    let (code, _, _) = quasilie(&["canonical", &data("cubic_linear.json"), "--beta", "1"]);
    assert_eq!(code, EXIT_NEGATIVE);
}

#[test]
fn scheme_and_rank() {
    let (code, out, _) = quasilie(&["scheme", "abel"]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["is_scheme"], Value::Bool(true));
    assert_eq!(v["ad_matrices"][0]["nilpotency_index"], 4);

    let (code, out, _) = quasilie(&["--seed", "5", "rank", "planar", "--p", "2", "--samples", "10"]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["generic_rank"], 8);
    assert_eq!(v["invariant_count"], 4);
}

#[test]
fn runs_are_byte_identical() {
    let args = ["--seed", "11", "rank", "planar", "--p", "2", "--samples", "8"];
    assert_eq!(quasilie(&args).1, quasilie(&args).1);
    let args = ["reduce", &data("integrable.json"), "--mu", "1"];
    let args: Vec<&str> = args.iter().map(|s| s.as_ref()).collect();
    assert_eq!(quasilie(&args).1, quasilie(&args).1);
}

#[test]
fn solve_writes_csv_and_flags_blow_up() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.csv");
    let p = path.to_str().unwrap();
    let (code, out, _) = quasilie(&["--out", p, "--verify", "solve", &data("cubic_linear.json"), "--x0", "0.1"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,x"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|s| s.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 64);
    let (t, x) = (rows[63][0], rows[63][1]);
    let exact = 0.1 * t.exp() / (1.0 - 0.01 * ((2.0 * t).exp() - 1.0)).sqrt();
    assert!((x - exact).abs() < 1e-6 * exact);

    let (code, _, _) = quasilie(&["solve", &data("pure_cubic.json"), "--x0", "2"]);
    assert_eq!(code, EXIT_NUMERICAL);
}

#[test]
fn floats_keep_seventeen_digits() {
    let (_, out, _) = quasilie(&["--grid", "0:1:16", "invariant", &data("varying.json")]);
    let first = out.lines().next().unwrap();
    let t = first.split("\"phi3\":").nth(1).unwrap().split(',').next().unwrap();
    let mantissa: String = t.split('e').next().unwrap().chars().filter(|c| c.is_ascii_digit()).collect();
    assert_eq!(mantissa.len(), 17);
}
