use std::io::Write;
use std::process::{Command, Stdio};

use edsh::cli::{parse_input, round12};
use edsh::Error;
use serde_json::Value;

const SILVER1: &str = r#"{"field":{"minpoly":["2","0","1"]},"curve":{"a1":["0"],"a2":["-1"],"a3":["1"],"a4":["0"],"a6":["0"]},"point":{"x":["2","1"],"y":["1","2"]}}"#;
const CURVE37: &str = r#"{"field":{"minpoly":["0","1"]},"curve":{"a1":["0"],"a2":["0"],"a3":["1"],"a4":["-1"],"a6":["0"]},"point":{"x":["0"],"y":["0"]}}"#;

fn run(args: &[&str], input: &str) -> (i32, String, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_edsh"))
        .args(args)
        .env_remove("EDSH_PRECISION_BITS")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn json(args: &[&str], input: &str) -> Value {
    let mut a = args.to_vec();
    a.push("--json");
    let (code, out, err) = run(&a, input);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn parses_documents() {
    let job = parse_input(SILVER1).unwrap();
    assert_eq!(job.field.degree(), 2);
    assert!(job.curve.unwrap().is_on_curve(&job.point.unwrap()));
    let q = parse_input(r#"{"field":{"minpoly":["0","1"]}}"#).unwrap();
    assert!(q.field.is_rational());
    let off = r#"{"field":{"minpoly":["0","1"]},"curve":{"a3":["1"],"a4":["-1"]},"point":{"x":["1"],"y":["1"]}}"#;
    assert_eq!(parse_input(off).unwrap_err(), Error::PointNotOnCurve);
    let bad = r#"{"field":{"minpoly":["0","1"]},"curve":{"a4":["1.5"]}}"#;
    assert!(matches!(parse_input(bad).unwrap_err(), Error::Parse { context, .. } if context == "curve.a4[0]"));
    let long = r#"{"field":{"minpoly":["0","1"]},"curve":{"a4":["1","2"]}}"#;
    assert!(matches!(parse_input(long).unwrap_err(), Error::Parse { .. }));
    assert!(matches!(parse_input("{").unwrap_err(), Error::Parse { .. }));
}

#[test]
fn rational_point_is_moved_to_an_integral_model() {
    // 5P = (1/4, -5/8) on the 37-curve
    let doc = r#"{"field":{"minpoly":["0","1"]},"curve":{"a3":["1"],"a4":["-1"]},"point":{"x":["1/4"],"y":["-5/8"]}}"#;
    let job = parse_input(doc).unwrap();
    assert_eq!(job.notices.len(), 1);
    assert!(job.point.unwrap().is_integral());
    let v = json(&["height", "--n", "64"], doc);
    assert!(v["warnings"][0].as_str().unwrap().contains("u = 2"));
}

#[test]
fn height_command() {
    let v = json(&["height", "--n", "200"], SILVER1);
    assert!((v["hhat"].as_f64().unwrap() - 0.45753).abs() <= 1e-4);
    assert_eq!(v["n"], 200);
    assert_eq!(v["d"], 2);
    assert_eq!(v["method"], "gcd-consecutive");
    assert_eq!(v["torsion"], false);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
    for k in ["hhat", "arch", "nonarch", "n", "d", "method", "torsion", "warnings"] {
        assert!(keys.contains(&k));
    }
    let d = json(&["height", "--pow2", "7", "--method", "dpower"], SILVER1);
    assert_eq!(d["n"], 128);
    assert_eq!(d["method"], "d-power");
    let x = json(&["height", "--extrapolate", "100,200"], SILVER1);
    assert!(x["extrapolated"].is_number() && x["spread"].is_number());
}

#[test]
fn output_round_trips_at_twelve_digits() {
    let v = json(&["height", "--n", "100"], SILVER1);
    let h = v["hhat"].as_f64().unwrap();
    assert_eq!(round12(h), h);
    let printed = serde_json::to_string(&v).unwrap();
    let again: Value = serde_json::from_str(&printed).unwrap();
    assert_eq!(again, v);
    assert_eq!(json(&["height", "--n", "100"], SILVER1), v);
}

#[test]
fn threads_do_not_change_output() {
    let a = run(&["height", "--n", "128", "--json", "--threads", "1"], SILVER1).1;
    let b = run(&["height", "--n", "128", "--json", "--threads", "4"], SILVER1).1;
    assert_eq!(a, b);
}

#[test]
fn other_commands() {
    let v = json(&["tate-check", "--k", "6", "--n", "200"], SILVER1);
    assert!(v["difference"].as_f64().unwrap() <= 5e-3);
    let p = json(&["psi", "--n", "8"], CURVE37);
    assert_eq!(p["E"], "5");
    assert_eq!(p["psi"][0], "-5");
    let p2 = json(&["psi", "--pow2", "3"], CURVE37);
    assert_eq!(p2["E"], "5");
    let a = json(&["arch", "--pow2", "3"], CURVE37);
    assert!((a["arch"].as_f64().unwrap() - round12(5f64.ln() / 64.0)).abs() < 1e-15);
    let d = json(&["decompose", "--n", "100", "--primes", "11", "--method", "dpower"], SILVER1);
    assert!(d["per_prime"]["11"].is_number());
    let g = json(&["eds-growth", "--seed-terms", "1,1;1,1;1,1", "--pow2", "9"], r#"{"field":{"minpoly":["1","1","1"]}}"#);
    assert!((g["hhat"].as_f64().unwrap() - 0.01032).abs() <= 5e-5);
    let s = json(&["lehmer-search", "--coeff-bound", "1", "--extend-to", "128"], r#"{"field":{"minpoly":["0","1"]}}"#);
    assert!(!s["candidates"].as_array().unwrap().is_empty());
}

#[test]
fn document_parameters_and_environment() {
    let doc = format!("{},\"parameters\":{{\"n\":64,\"output\":\"json\"}}}}", &SILVER1[..SILVER1.len() - 1]);
    let (code, out, _) = run(&["height"], &doc);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["n"], 64);
    // flags win over the document
    let (_, out, _) = run(&["height", "--n", "32"], &doc);
    assert_eq!(serde_json::from_str::<Value>(&out).unwrap()["n"], 32);
    let out = Command::new(env!("CARGO_BIN_EXE_edsh"))
        .args(["arch", "--n", "8", "--json", "-"])
        .env("EDSH_PRECISION_BITS", "40")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .and_then(|mut c| {
            c.stdin.take().unwrap().write_all(CURVE37.as_bytes()).unwrap();
            c.wait_with_output()
        })
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn exit_codes() {
    let off = r#"{"field":{"minpoly":["0","1"]},"curve":{"a3":["1"],"a4":["-1"]},"point":{"x":["1"],"y":["1"]}}"#;
    assert_eq!(run(&["height", "--n", "10"], off).0, 1);
    assert_eq!(run(&["height", "--n", "10"], "not json").0, 1);
    assert_eq!(run(&["height"], CURVE37).0, 1);
    assert_eq!(run(&["decompose", "--n", "10"], CURVE37).0, 1);
    assert_eq!(run(&["height", "--n", "10", "--method", "nope"], CURVE37).0, 1);
    let singular = r#"{"field":{"minpoly":["0","1"]},"curve":{},"point":{"x":["0"],"y":["0"]}}"#;
    assert_eq!(run(&["height", "--n", "10"], singular).0, 1);
    // a vanishing sequence term is a computation failure
    assert_eq!(run(&["eds-growth", "--seed-terms", "1;1;1", "--n", "16"], r#"{"field":{"minpoly":["0","1"]}}"#).0, 2);

    let torsion = r#"{"field":{"minpoly":["0","1"]},"curve":{"a4":["-1"]},"point":{"x":["0"],"y":["0"]}}"#;
    let v = json(&["height", "--n", "50"], torsion);
    assert_eq!(v["torsion"], true);
    assert_eq!(v["hhat"], 0.0);
    assert_eq!(run(&["arch", "--n", "50"], torsion).0, 0);
}
