//! Browser bindings: worked examples, the σ_min table and exact solves of small polynomials.

use glinear::backward::{sigma_min_tau, AppendixMatrices, ConvIndex};
use glinear::eigen::complete_eigenstructure;
use glinear::io::{basis_to_json, eig_to_json, poly_from_json, to_pretty, trim_to_json};
use glinear::minimal::{minimal_basis, BasisSide};
use glinear::reduction::trim;
use glinear::spaces::{companion_c1g, companion_c2g};
use glinear::{MatPoly, Rat, Tol};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// JSON report for worked example 1, 2 or 3.
pub fn example_report(id: u8) -> Result<String, String> {
    let rep = glinear::worked::run_example(id).map_err(|e| e.to_string())?;
    Ok(to_pretty(&rep.to_json()))
}

/// `σ_min` of the two convolution matrices of `H_{k−1} ⊗ I_n` for `k = 2..=k_max`.
pub fn sigma_table(k_max: usize, n: usize) -> Result<String, String> {
    if !(2..=40).contains(&k_max) || !(1..=8).contains(&n) {
        return Err("need 2 <= k <= 40 and 1 <= n <= 8".into());
    }
    let mut rows = Vec::new();
    for k in 2..=k_max {
        let (formula, square) = sigma_min_tau(k, n, ConvIndex::Square).map_err(|e| e.to_string())?;
        let (_, wide) = sigma_min_tau(k, n, ConvIndex::Wide).map_err(|e| e.to_string())?;
        let t_hat = (k >= 3).then(|| AppendixMatrices::smallest_eigenvalue(&AppendixMatrices::t_hat(k - 1)));
        rows.push(json!({
            "k": k,
            "formula": formula,
            "svd_square": square,
            "svd_wide": wide,
            "t_hat_min": t_hat,
            "t_hat_predicted": (k >= 3).then(|| AppendixMatrices::predicted_t_hat_min(k)),
        }));
    }
    Ok(to_pretty(&json!({ "n": n, "rows": rows })))
}

/// Exact eigenstructure, minimal bases and the trimmed companion pencil of a rational polynomial.
pub fn solve_poly(poly_json: &str) -> Result<String, String> {
    let v: Value = serde_json::from_str(poly_json).map_err(|e| e.to_string())?;
    let p: MatPoly<Rat> = poly_from_json(&v).map_err(|e| e.to_string())?;
    if p.rows() * p.grade() > 12 || p.cols() * p.grade() > 12 {
        return Err("kept to k·max(m, n) <= 12 in the browser".into());
    }
    let tol = Tol::default();
    let es = complete_eigenstructure(&p, tol).map_err(|e| e.to_string())?;
    let right = minimal_basis(&p, BasisSide::Right, tol).map_err(|e| e.to_string())?;
    let left = minimal_basis(&p, BasisSide::Left, tol).map_err(|e| e.to_string())?;
    let trimmed = if p.grade() >= 2 {
        let c = if p.rows() >= p.cols() { companion_c1g(&p) } else { companion_c2g(&p) };
        c.and_then(|c| trim(&c, None, tol)).map(|t| trim_to_json(&t)["L_t_input_orientation"].clone()).ok()
    } else {
        None
    };
    Ok(to_pretty(&json!({
        "eigenstructure": eig_to_json(&es),
        "right_basis": basis_to_json(&right),
        "left_basis": basis_to_json(&left),
        "trimmed_companion": trimmed,
    })))
}

#[wasm_bindgen(js_name = exampleReport)]
pub fn example_report_js(id: u8) -> Result<String, JsError> {
    example_report(id).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = sigmaTable)]
pub fn sigma_table_js(k_max: usize, n: usize) -> Result<String, JsError> {
    sigma_table(k_max, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = solvePoly)]
pub fn solve_poly_js(poly_json: &str) -> Result<String, JsError> {
    solve_poly(poly_json).map_err(|e| JsError::new(&e))
}
