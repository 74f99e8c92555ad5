use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

const E2: &str = r#"{
  "schema": "abmod/1",
  "name": "E2",
  "rank": 2,
  "truncation": 20,
  "a_matrix": [["0", "b^2"], ["1", "0"]]
}
"#;

const PERTURBED_J: &str = r#"{
  "schema": "abmod/1",
  "name": "perturbed J(1/2,2)",
  "rank": 2,
  "truncation": 10,
  "a_matrix": [["1/2*b", "b + b^2"], ["0", "1/2*b"]]
}
"#;

const E1_PLUS_E2: &str = r#"{
  "schema": "abmod/1",
  "rank": 2,
  "truncation": 14,
  "a_matrix": [["b", "0"], ["0", "2*b"]]
}
"#;

fn write(name: &str, text: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn abmod(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_abmod"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, out) = abmod(args);
    (
        code,
        serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}")),
    )
}

fn generated(name: &str, args: &[&str]) -> String {
    let (code, text) = abmod(args);
    assert_eq!(code, 0);
    write(name, &text).to_string_lossy().into_owned()
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap().to_string())
        .collect()
}

fn roots(report: &Value) -> Vec<String> {
    report["result"]["polynomial"]["rational_roots"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["root"].as_str().unwrap().to_string())
        .collect()
}

#[test]
fn info_reports_pole_type_and_regularity() {
    let e2 = write("info_e2.json", E2);
    let (code, r) = json(&["info", e2.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["simple_pole"], false);
    assert_eq!(r["result"]["regular"], true);
    assert_eq!(r["precision"]["trunc"], 20);

    let e1 = generated("info_e1.json", &["gen", "--elambda", "1"]);
    let (_, r) = json(&["info", &e1]);
    assert_eq!(r["result"]["simple_pole"], true);
    assert_eq!(r["result"]["regular"], true);

    // A cap of zero growth steps cannot reach the saturation of E2.
    let (_, r) = json(&["info", e2.to_str().unwrap(), "--max-iter", "0"]);
    assert_eq!(r["result"]["regular"], false);
    assert_eq!(r["precision"]["max_iter"], 0);
}

#[test]
fn malformed_series_is_a_located_parse_error() {
    let bad = write("bad.json", &E2.replace("\"b^2\"", "\"b^^2\""));
    let (code, r) = json(&["info", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    let err = &r["result"]["error"];
    assert_eq!(err["kind"], "ParseError");
    assert_eq!(err["line"], 6);
    let col = err["column"].as_u64().unwrap() as usize;
    let line = E2.lines().nth(5).unwrap();
    let open = line.find("\"b^2\"").unwrap();
    assert!(col > open + 1 && col <= open + 6);
}

#[test]
fn bernstein_examples() {
    let p33 = generated("b_p33.json", &["gen", "--pham", "3,3"]);
    let (code, r) = json(&["bernstein", &p33]);
    assert_eq!(code, 0);
    assert_eq!(roots(&r), ["-4/3", "-1", "-2/3"]);

    let e2 = write("b_e2.json", E2);
    let (_, r) = json(&["bernstein", e2.to_str().unwrap(), "--dual"]);
    assert_eq!(
        strings(&r["result"]["polynomial"]["polynomial"]["coefficients"]),
        ["-1", "1", "1"]
    );
    let (_, r) = json(&["bernstein", e2.to_str().unwrap()]);
    assert_eq!(
        strings(&r["result"]["polynomial"]["polynomial"]["coefficients"]),
        ["-1", "-1", "1"]
    );
    assert_eq!(r["result"]["saturation"]["lattice"]["shift"], -1);

    let e1 = generated("b_e1.json", &["gen", "--elambda", "1"]);
    let (_, r) = json(&["bernstein", &e1]);
    assert_eq!(
        strings(&r["result"]["polynomial"]["polynomial"]["coefficients"]),
        ["1", "1"]
    );
}

#[test]
fn pole_examples() {
    let p33 = generated("p_p33.json", &["gen", "--pham", "3,3"]);
    let (_, r) = json(&["poles", &p33, "--n", "2"]);
    let preds = r["result"]["predictions"].as_array().unwrap();
    assert_eq!(preds.len(), 3);
    assert!(preds
        .iter()
        .any(|p| p["alpha"] == "-2/3" && p["pole"] == "-4/3" && p["d"] == 1));

    let j = generated("p_j.json", &["gen", "--jordan", "1/2", "2"]);
    let (_, r) = json(&["poles", &j, "--n", "1"]);
    let preds = r["result"]["predictions"].as_array().unwrap();
    assert_eq!(preds.len(), 1);
    assert_eq!(preds[0]["pole"], "-1/2");
    assert_eq!(preds[0]["d"], 2);
    assert_eq!(r["result"]["multiplicity_source"], "minimal_polynomial");

    let e2 = write("p_e2.json", E2);
    let (_, r) = json(&["poles", e2.to_str().unwrap(), "--n", "2"]);
    assert!(r["result"]["predictions"].as_array().unwrap().is_empty());
    assert_eq!(r["result"]["symbolic_classes"][0]["kind"], "symbolic");
    assert_eq!(r["caveats"].as_array().unwrap().len(), 1);
}

#[test]
fn check_examples() {
    let (code, r) = json(&["check", "--random", "3", "7", "50", "--suite", "lemma32"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["summary"]["pass"], 50);

    let e2 = write("c_e2.json", E2);
    let (code, r) = json(&["check", e2.to_str().unwrap(), "--suite", "reflection"]);
    assert_eq!(code, 0);
    let detail = &r["result"]["cases"][0]["checks"][0]["detail"];
    assert_eq!(detail["delta"], "0");
    assert_eq!(detail["self_duality_certified"], true);

    // No isomorphism twist(E) -> Hom(E, E_1) exists for E_1 + E_2.
    let sum = write("c_sum.json", E1_PLUS_E2);
    let (code, r) = json(&[
        "check",
        sum.to_str().unwrap(),
        "--suite",
        "propdual",
        "--delta",
        "1",
    ]);
    assert_eq!(code, 2);
    assert_eq!(r["status"], "inconclusive");
    // With the shift read off from the polynomials it is self-dual.
    let (code, r) = json(&["check", sum.to_str().unwrap(), "--suite", "propdual"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["cases"][0]["checks"][0]["detail"]["delta"], "3");

    let (code, r) = json(&["check", e2.to_str().unwrap(), "--suite", "all"]);
    assert_eq!(code, 0, "{r:#}");
}

#[test]
fn gen_examples() {
    let (_, text) = abmod(&["gen", "--pham", "3,3"]);
    let d: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(d["rank"], 4);
    assert_eq!(d["a_matrix"][0][0], "2/3*b");
    assert_eq!(d["a_matrix"][3][3], "4/3*b");
    assert_eq!(d["a_matrix"][0][1], "0");

    let (_, text) = abmod(&["gen", "--jordan", "1/2", "2"]);
    let d: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(
        d["a_matrix"],
        serde_json::json!([["1/2*b", "b"], ["0", "1/2*b"]])
    );

    let (_, text) = abmod(&["gen", "--elambda", "1", "--trunc", "5"]);
    let d: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(d["a_matrix"], serde_json::json!([["b"]]));
    assert_eq!(d["truncation"], 5);

    let (code, _) = abmod(&["gen", "--pham", "1,3"]);
    assert_eq!(code, 1);
}

#[test]
fn jordan_examples() {
    let p = write("j_perturbed.json", PERTURBED_J);
    let (code, r) = json(&["jordan", p.to_str().unwrap(), "--beta", "1/2", "--d", "2"]);
    assert_eq!(code, 0);
    assert_eq!(
        r["result"]["chain"],
        serde_json::json!([["1", "0"], ["-b", "1"]])
    );
    assert_eq!(r["result"]["residuals_zero"], true);

    let p33 = generated("j_p33.json", &["gen", "--pham", "3,3"]);
    let (code, r) = json(&["jordan", &p33, "--beta", "2/3", "--d", "1"]);
    assert_eq!(code, 0);
    assert_eq!(
        r["result"]["chain"],
        serde_json::json!([["1", "0", "0", "0"]])
    );
    let (code, r) = json(&["jordan", &p33, "--beta", "2/3", "--d", "2"]);
    assert_eq!(code, 1);
    assert_eq!(r["result"]["error"]["kind"], "NoSuchBlock");

    let (code, r) = json(&["jordan", &p33, "--beta", "5/3", "--d", "1"]);
    assert_eq!(code, 1);
    assert_eq!(r["result"]["error"]["kind"], "NotMinimalInClass");
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let e2 = write("d_e2.json", E2);
    let e2 = e2.to_str().unwrap();
    for args in [
        vec!["info", e2],
        vec!["bernstein", e2, "--dual"],
        vec!["poles", e2, "--n", "2"],
        vec!["check", "--random", "2", "3", "6", "--suite", "all"],
        vec!["gen", "--random", "2", "11"],
    ] {
        assert_eq!(abmod(&args), abmod(&args), "{args:?}");
    }
}

#[test]
fn stdin_input() {
    let out = Command::new(env!("CARGO_BIN_EXE_abmod"))
        .args(["info", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .and_then(|mut child| {
            use std::io::Write;
            child.stdin.take().unwrap().write_all(E2.as_bytes())?;
            child.wait_with_output()
        })
        .unwrap();
    assert!(out.status.success());
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["result"]["name"], "E2");
}
