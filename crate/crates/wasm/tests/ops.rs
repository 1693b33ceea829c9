use glinear_wasm::{example_report, sigma_table, solve_poly};
use serde_json::Value;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn example_reports_pass() {
    for id in 1..=3 {
        let v = parse(&example_report(id).unwrap());
        assert_eq!(v["passed"], Value::Bool(true), "example {id}");
    }
    assert!(example_report(9).is_err());
}

#[test]
fn sigma_table_rows_agree() {
    let v = parse(&sigma_table(5, 2).unwrap());
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    for r in rows {
        let f = r["formula"].as_f64().unwrap();
        assert!((f - r["svd_square"].as_f64().unwrap()).abs() < 1e-12);
        assert!((f - r["svd_wide"].as_f64().unwrap()).abs() < 1e-12);
    }
    // k = 3: (√5 − 1)/2
    assert!((rows[1]["formula"].as_f64().unwrap() - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-15);
    assert!(sigma_table(1, 1).is_err());
}

#[test]
fn solve_singular_pencil() {
    // [λ 1] has right minimal index 1 and no eigenvalues
    let p = r#"{"kind":"matpoly","field":"rational","rows":1,"cols":2,"grade":1,"coeffs":[[["0","1"]],[["1","0"]]]}"#;
    let v = parse(&solve_poly(p).unwrap());
    assert_eq!(v["eigenstructure"]["right_indices"], serde_json::json!([1]));
    assert_eq!(v["eigenstructure"]["left_indices"], serde_json::json!([]));
    assert!(v["trimmed_companion"].is_null());
    assert!(solve_poly("{").is_err());
}

#[test]
fn solve_reports_trimmed_companion() {
    let p = r#"{"kind":"matpoly","field":"rational","rows":3,"cols":2,"grade":2,
        "coeffs":[[[1,7],[2,5],[4,19]],[[3,4],[9,2],[15,10]],[[1,2],[2,5],[4,9]]]}"#;
    let v = parse(&solve_poly(p).unwrap());
    let lt = &v["trimmed_companion"];
    assert_eq!((lt["rows"].as_u64(), lt["cols"].as_u64()), (Some(5), Some(4)));
}
