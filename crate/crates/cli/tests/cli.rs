use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{json, Value};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}):\n{}", self.stdout))
    }
}

fn glinear(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_glinear")).args(args).output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p.to_str().unwrap().to_string()
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schemas").join(format!("{name}.schema.json"));
    let s: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    jsonschema::validator_for(&s).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn assert_valid(name: &str, v: &Value) {
    let errors: Vec<String> = schema(name).iter_errors(v).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{name}: {errors:#?}\n{v:#}");
}

fn ints(rows: &[&[i64]]) -> Value {
    json!(rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>())
}

/// `P(λ) = λ²A₂ + λA₁ + A₀` with the 3×2 coefficients of the worked trimming example.
fn example3_poly() -> Value {
    json!({
        "kind": "matpoly", "field": "rational", "rows": 3, "cols": 2, "grade": 2,
        "coeffs": [
            ints(&[&[1, 7], &[2, 5], &[4, 19]]),
            ints(&[&[3, 4], &[9, 2], &[15, 10]]),
            ints(&[&[1, 2], &[2, 5], &[4, 9]]),
        ],
    })
}

fn example2_files(dir: &Path) -> (String, String) {
    let rep = glinear(&["examples", "2"]).json();
    let l = write(dir, "L.json", &rep["objects"]["L"]);
    let p = write(dir, "P.json", &rep["objects"]["P"]);
    (l, p)
}

#[test]
fn examples_3_prints_displayed_trimmed_pencil() {
    let r = glinear(&["examples", "3"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    assert_eq!(v["passed"], json!(true));
    let lt = &v["objects"]["L_t"];
    assert_eq!((lt["rows"].as_u64(), lt["cols"].as_u64()), (Some(5), Some(4)));
    assert_eq!(lt["X"], ints(&[&[0, 0, -1, 0], &[0, 0, 0, -1], &[1, 2, 0, 0], &[2, 5, 0, 0], &[0, 0, 0, 0]]));
    assert_eq!(lt["Y"], ints(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[3, 4, 1, 7], &[9, 2, 2, 5], &[0, 0, 0, 0]]));
}

#[test]
fn lemma_check_k3_matches_golden_ratio_conjugate() {
    let r = glinear(&["lemma-check", "--k", "3", "--n", "1"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    // 2·sin(π/10) = (√5 − 1)/2
    let oracle = (5f64.sqrt() - 1.0) / 2.0;
    for row in v["rows"].as_array().unwrap() {
        assert_eq!(row["formula_6dp"], "0.618034");
        assert_eq!(row["match"], json!(true));
        assert!((row["svd"].as_f64().unwrap() - oracle).abs() < 1e-12);
    }
    // 2 − 2cos(π/5)
    let t_hat = v["t_hat_min"]["computed"].as_f64().unwrap();
    assert!((t_hat - (2.0 - 2.0 * (std::f64::consts::PI / 5.0).cos())).abs() < 1e-12);
}

#[test]
fn lemma_check_other_sizes_pass() {
    for (k, n) in [("2", "1"), ("4", "2"), ("6", "1")] {
        let r = glinear(&["lemma-check", "--k", k, "--n", n]);
        assert_eq!(r.code, 0, "k={k} n={n}: {}", r.stdout);
        assert_valid("lemma_check", &r.json());
    }
}

#[test]
fn example2_strong_check_reports_infinite_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let (l, p) = example2_files(dir.path());
    let r = glinear(&["check", &l, &p, "--strong"]);
    assert_eq!(r.code, 3);
    let v = r.json();
    assert_eq!(v["verdict"]["reason"], "infinite eigenvalue mismatch");
    assert_eq!(v["verdict"]["finite_match"], json!(true));

    let weak = glinear(&["check", &l, &p]);
    assert_eq!(weak.code, 0);
    assert_eq!(weak.json()["verdict"]["holds"], json!(true));

    let float = glinear(&["--field", "float64", "check", &l, &p, "--strong"]);
    assert_eq!(float.code, 3);
    assert_eq!(float.json()["verdict"], v["verdict"]);
}

#[test]
fn exit_codes_separate_schema_precondition_and_verification() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(glinear(&["info", "/nonexistent/P.json"]).code, 1);
    let bad = write(dir.path(), "bad.json", &json!({ "kind": "matpoly", "coeffs": [[["1", "2"], ["3"]]] }));
    let r = glinear(&["info", &bad]);
    assert_eq!(r.code, 1);
    assert_valid("error", &r.json());
    assert_eq!(glinear(&["examples", "4"]).code, 1);
    assert_eq!(glinear(&["frobnicate"]).code, 1);

    // L1 member of λ²·[1 0; 0 0; 0 0] with rank-one Z: a strong g-linearization that cannot be trimmed
    let rep = glinear(&["examples", "1"]).json();
    let member = json!({
        "kind": "ansatz_pencil", "field": "rational", "side": "l1", "m": 3, "n": 2, "k": 2,
        "ansatz": ["1", "0"], "pencil": rep["objects"]["L"],
    });
    let l = write(dir.path(), "L1.json", &member);
    let r = glinear(&["trim", &l]);
    assert_eq!(r.code, 2, "{}", r.stdout);
    assert!(r.json()["message"].as_str().unwrap().contains("rank deficient"));

    let (l, p) = example2_files(dir.path());
    assert_eq!(glinear(&["check", &l, &p, "--strong"]).code, 3);
    assert_eq!(glinear(&["recover", &l, &p, "--mode", "trimmed_l1"]).code, 1);
    assert_eq!(glinear(&["recover", &l, &p, "--mode", "sideways"]).code, 1);
}

#[test]
fn companion_pipeline_recovers_the_exact_indices() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "P.json", &example3_poly());
    let solved = glinear(&["solve", &p]).json();

    let built = glinear(&["build", &p, "--side", "l1", "--companion"]);
    assert_eq!(built.code, 0, "{}", built.stderr);
    let l = write(dir.path(), "C1.json", &built.json());
    let trimmed = glinear(&["trim", &l]);
    assert_eq!(trimmed.code, 0, "{}", trimmed.stderr);
    let t = write(dir.path(), "T.json", &trimmed.json());

    for (src, mode) in [(&l, "glin_l1"), (&t, "trimmed_l1")] {
        let rec = glinear(&["recover", src, &p, "--mode", mode]);
        assert_eq!(rec.code, 0, "{mode}: {}", rec.stdout);
        let v = rec.json();
        assert_eq!(v["right"]["indices"], solved["right_indices"], "{mode}");
        assert_eq!(v["left"]["indices"], solved["left_indices"], "{mode}");
    }
    let chk = glinear(&["check", &t, &p, "--strong", "--lin"]);
    assert_eq!(chk.code, 0, "{}", chk.stdout);
}

#[test]
fn built_member_matches_ansatz_identity() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "P.json", &example3_poly());
    let v = write(dir.path(), "v.json", &json!([0, 1]));
    let w = write(dir.path(), "W.json", &json!({ "matrix": [[1, 0], [0, 1], [0, 0], [0, 0], [0, 0], [0, 0]] }));
    let r = glinear(&["build", &p, "--ansatz", &v, "--w", &w]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let out = r.json();
    assert_eq!(out["ansatz"], json!(["0", "1"]));
    let l = write(dir.path(), "L.json", &out);
    let chk = glinear(&["check", &l, &p]).json();
    assert_eq!(chk["membership"]["l1"]["ansatz"], json!(["0", "1"]));
}

#[test]
fn identical_inputs_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "P.json", &example3_poly());
    let l = write(dir.path(), "C1.json", &glinear(&["build", &p, "--companion"]).json());
    let t = write(dir.path(), "T.json", &glinear(&["trim", &l]).json());
    let args = ["backward", &p, &t, "--eps", "0.5", "--trials", "6", "--seed", "11"];
    let a = glinear(&args);
    let b = glinear(&args);
    assert_eq!(a.code, 0, "{}", a.stdout);
    assert_eq!(a.stdout, b.stdout);
    let c = glinear(&["backward", &p, &t, "--eps", "0.5", "--trials", "6", "--seed", "12"]);
    assert_ne!(a.stdout, c.stdout);
    for cmd in [vec!["examples", "3"], vec!["solve", &p], vec!["trim", &l]] {
        assert_eq!(glinear(&cmd).stdout, glinear(&cmd).stdout);
    }
}

#[test]
fn every_output_validates_against_its_schema() {
    let dir = tempfile::tempdir().unwrap();
    let pv = example3_poly();
    assert_valid("matpoly", &pv);
    let p = write(dir.path(), "P.json", &pv);

    let info = glinear(&["info", &p]).json();
    assert_valid("info", &info);
    assert_eq!((info["nrank"].as_u64(), info["degree"].as_u64()), (Some(2), Some(2)));

    let built = glinear(&["build", &p, "--companion"]).json();
    assert_valid("ansatz_pencil", &built);
    assert_valid("pencil", &built["pencil"]);
    let l = write(dir.path(), "C1.json", &built);
    let trimmed = glinear(&["trim", &l]).json();
    assert_valid("trim_result", &trimmed);
    let t = write(dir.path(), "T.json", &trimmed);

    assert_valid("check_report", &glinear(&["check", &l, &p, "--strong"]).json());
    assert_valid("eigenstructure", &glinear(&["solve", &p]).json());
    assert_valid("float_eigenstructure", &glinear(&["--field", "float64", "solve", &p]).json());
    assert_valid("recovery", &glinear(&["recover", &t, &p, "--mode", "trimmed_l1"]).json());
    assert_valid("lemma_check", &glinear(&["lemma-check", "--k", "3"]).json());
    for id in ["1", "2", "3"] {
        assert_valid("example_report", &glinear(&["examples", id]).json());
    }
    assert_valid("error", &glinear(&["trim", &p]).json());

    let bw = glinear(&["backward", &p, &t, "--eps", "0.4", "--trials", "4", "--seed", "3"]);
    let lines: Vec<Value> = bw.stdout.lines().map(|s| serde_json::from_str(s).unwrap()).collect();
    assert_eq!(lines.len(), 5);
    for line in &lines[..4] {
        assert_valid("perturb_report", line);
    }
    assert_valid("backward_summary", &lines[4]);
}

#[test]
fn float_solve_of_regular_square_polynomial() {
    let dir = tempfile::tempdir().unwrap();
    // (λ − 1)(λ − 2) on the diagonal: finite eigenvalues 1, 2 each with multiplicity 1 per block
    let p = json!({
        "kind": "matpoly", "field": "float64", "rows": 2, "cols": 2, "grade": 2,
        "coeffs": [[[2.0, 0.0], [0.0, 2.0]], [[-3.0, 0.0], [0.0, -3.0]], [[1.0, 0.0], [0.0, 1.0]]],
    });
    let path = write(dir.path(), "P.json", &p);
    let v = glinear(&["solve", &path]).json();
    assert_valid("float_eigenstructure", &v);
    let finite = v["spectrum"]["finite"].as_array().unwrap();
    let got: Vec<(f64, u64)> =
        finite.iter().map(|e| (e["re"].as_f64().unwrap(), e["multiplicity"].as_u64().unwrap())).collect();
    assert_eq!(got.len(), 2);
    assert!((got[0].0 - 1.0).abs() < 1e-8 && got[0].1 == 2);
    assert!((got[1].0 - 2.0).abs() < 1e-8 && got[1].1 == 2);
    assert_eq!(v["spectrum"]["infinite"], json!(0));
}
