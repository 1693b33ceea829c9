//! JSON encodings of polynomials, pencils and reports.
//!
//! Matrices are arrays of rows. Rational entries are `"p/q"` strings (plain
//! integers are also accepted on input); float entries are numbers.
//! Polynomial coefficients are listed in ascending degree.

use serde_json::{json, Map, Value};

use crate::eigen::{EigStructure, FiniteEigen};
use crate::error::{Error, Result};
use crate::matpoly::{MatPoly, Pencil};
use crate::matrix::Mat;
use crate::minimal::MinimalBasis;
use crate::reduction::TrimResult;
use crate::scalar::{Field, Scalar};
use crate::spaces::{AnsatzPencil, Side};
use crate::upoly::UPoly;

pub fn mat_to_json<T: Scalar>(a: &Mat<T>) -> Value {
    Value::Array((0..a.rows()).map(|i| Value::Array(a.row(i).iter().map(|x| x.to_json()).collect())).collect())
}

/// Parses an array of rows; `cols` disambiguates empty matrices.
pub fn mat_from_json<T: Scalar>(v: &Value, rows_hint: Option<usize>, cols_hint: Option<usize>) -> Result<Mat<T>> {
    let rows = v.as_array().ok_or_else(|| Error::Parse("matrix must be an array of rows".into()))?;
    if rows.is_empty() {
        return Ok(Mat::zeros(rows_hint.unwrap_or(0), cols_hint.unwrap_or(0)));
    }
    let mut out = Vec::with_capacity(rows.len());
    for r in rows {
        let r = r.as_array().ok_or_else(|| Error::Parse("matrix row must be an array".into()))?;
        out.push(r.iter().map(T::from_json).collect::<Result<Vec<T>>>()?);
    }
    let c = out[0].len();
    if out.iter().any(|r| r.len() != c) {
        return Err(Error::Parse("ragged matrix rows".into()));
    }
    if cols_hint.is_some_and(|h| h != c) || rows_hint.is_some_and(|h| h != out.len()) {
        return Err(Error::Parse("matrix shape disagrees with declared rows/cols".into()));
    }
    if c == 0 {
        return Ok(Mat::zeros(out.len(), cols_hint.unwrap_or(0)));
    }
    Ok(Mat::from_rows(out))
}

fn field_tag<T: Scalar>() -> Value {
    Value::String(T::FIELD.name().into())
}

fn check_field<T: Scalar>(obj: &Map<String, Value>) -> Result<()> {
    if let Some(f) = obj.get("field") {
        let name = f.as_str().ok_or_else(|| Error::Parse("field must be a string".into()))?;
        let parsed: Field = name.parse()?;
        if parsed != T::FIELD {
            return Err(Error::FieldMismatch { expected: T::FIELD.name().into(), found: name.into() });
        }
    }
    Ok(())
}

fn obj(v: &Value) -> Result<&Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::Parse("expected a JSON object".into()))
}

fn usize_field(o: &Map<String, Value>, key: &str) -> Result<Option<usize>> {
    match o.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => v
            .as_u64()
            .map(|x| Some(x as usize))
            .ok_or_else(|| Error::Parse(format!("'{key}' must be a nonnegative integer"))),
    }
}

fn req<'a>(o: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    o.get(key).ok_or_else(|| Error::Parse(format!("missing '{key}'")))
}

pub fn poly_to_json<T: Scalar>(p: &MatPoly<T>) -> Value {
    json!({
        "kind": "matpoly",
        "field": field_tag::<T>(),
        "rows": p.rows(),
        "cols": p.cols(),
        "grade": p.grade(),
        "coeffs": p.coeffs().iter().map(mat_to_json).collect::<Vec<_>>(),
    })
}

pub fn poly_from_json<T: Scalar>(v: &Value) -> Result<MatPoly<T>> {
    let o = obj(v)?;
    check_field::<T>(o)?;
    let rows = usize_field(o, "rows")?;
    let cols = usize_field(o, "cols")?;
    let coeffs =
        req(o, "coeffs")?.as_array().ok_or_else(|| Error::Parse("'coeffs' must be an array of matrices".into()))?;
    if coeffs.is_empty() {
        return Err(Error::Parse("'coeffs' must hold at least one matrix".into()));
    }
    let mats = coeffs.iter().map(|c| mat_from_json::<T>(c, rows, cols)).collect::<Result<Vec<_>>>()?;
    let (m, n) = mats[0].shape();
    let p = MatPoly::new(m, n, mats).map_err(|e| Error::Parse(e.to_string()))?;
    match usize_field(o, "grade")? {
        Some(g) if g + 1 != coeffs.len() => {
            Err(Error::Parse(format!("grade {g} disagrees with {} coefficients", coeffs.len())))
        }
        _ => Ok(p),
    }
}

pub fn pencil_to_json<T: Scalar>(l: &Pencil<T>) -> Value {
    json!({
        "kind": "pencil",
        "field": field_tag::<T>(),
        "rows": l.rows(),
        "cols": l.cols(),
        "X": mat_to_json(&l.x),
        "Y": mat_to_json(&l.y),
    })
}

/// Accepts a pencil object, an ansatz-pencil object, or a grade-1 polynomial.
pub fn pencil_from_json<T: Scalar>(v: &Value) -> Result<Pencil<T>> {
    let o = obj(v)?;
    check_field::<T>(o)?;
    match o.get("kind").and_then(Value::as_str) {
        Some("ansatz_pencil") => return Ok(ansatz_from_json::<T>(v)?.pencil),
        Some("trim_result") => return pencil_from_json(req(o, "L_t")?),
        Some("matpoly") => {
            let p = poly_from_json::<T>(v)?;
            return Pencil::from_poly(&p).map_err(|e| Error::Parse(e.to_string()));
        }
        _ => {}
    }
    let rows = usize_field(o, "rows")?;
    let cols = usize_field(o, "cols")?;
    let x = mat_from_json::<T>(req(o, "X")?, rows, cols)?;
    let y = mat_from_json::<T>(req(o, "Y")?, rows, cols)?;
    Pencil::new(x, y).map_err(|e| Error::Parse(e.to_string()))
}

pub fn vector_to_json<T: Scalar>(v: &[T]) -> Value {
    Value::Array(v.iter().map(|x| x.to_json()).collect())
}

pub fn vector_from_json<T: Scalar>(v: &Value) -> Result<Vec<T>> {
    let arr = match v {
        Value::Array(a) => a,
        Value::Object(o) => {
            req(o, "vector")?.as_array().ok_or_else(|| Error::Parse("'vector' must be an array".into()))?
        }
        _ => return Err(Error::Parse("expected a vector".into())),
    };
    arr.iter().map(T::from_json).collect()
}

fn side_name(s: Side) -> &'static str {
    match s {
        Side::L1 => "l1",
        Side::L2 => "l2",
    }
}

pub fn ansatz_to_json<T: Scalar>(l: &AnsatzPencil<T>) -> Value {
    json!({
        "kind": "ansatz_pencil",
        "field": field_tag::<T>(),
        "side": side_name(l.side),
        "m": l.m,
        "n": l.n,
        "k": l.k,
        "ansatz": vector_to_json(&l.ansatz),
        "pencil": pencil_to_json(&l.pencil),
    })
}

pub fn ansatz_from_json<T: Scalar>(v: &Value) -> Result<AnsatzPencil<T>> {
    let o = obj(v)?;
    check_field::<T>(o)?;
    let side: Side = req(o, "side")?.as_str().ok_or_else(|| Error::Parse("'side' must be a string".into()))?.parse()?;
    let get = |k: &str| usize_field(o, k)?.ok_or_else(|| Error::Parse(format!("missing '{k}'")));
    let (m, n, k) = (get("m")?, get("n")?, get("k")?);
    let ansatz = vector_from_json::<T>(req(o, "ansatz")?)?;
    let pencil = pencil_from_json::<T>(req(o, "pencil")?)?;
    if ansatz.len() != k || pencil.rows() != k * m || pencil.cols() != k * n {
        return Err(Error::Parse("ansatz pencil sizes are inconsistent".into()));
    }
    Ok(AnsatzPencil { pencil, side, ansatz, m, n, k })
}

pub fn trim_to_json<T: Scalar>(tr: &TrimResult<T>) -> Value {
    json!({
        "kind": "trim_result",
        "field": field_tag::<T>(),
        "side": side_name(tr.side),
        "orientation": "l1",
        "m": tr.m,
        "n": tr.n,
        "k": tr.k,
        "ansatz": vector_to_json(&tr.ansatz),
        "alpha": tr.alpha.to_json(),
        "M": mat_to_json(&tr.m_mat),
        "Z": mat_to_json(&tr.z),
        "Q1": mat_to_json(&tr.q1),
        "Q2": mat_to_json(&tr.q2),
        "Qd": mat_to_json(&tr.qd),
        "R_tilde": mat_to_json(&tr.r_tilde),
        "X12": mat_to_json(&tr.x12),
        "Y11": mat_to_json(&tr.y11),
        "D": mat_to_json(&tr.d),
        "D_tilde": mat_to_json(&tr.d_tilde),
        "L_t": pencil_to_json(&tr.lt),
        "L_t_input_orientation": pencil_to_json(&tr.lt_oriented()),
        "L_hat_t": pencil_to_json(&tr.lhat_t),
        "K": pencil_to_json(&tr.kcore),
        "default_D": tr.default_d,
        "provenance": {
            "M": "reflector with M·v = alpha·e1",
            "Z": "lower-left block of (M⊗I_m)·Y",
            "Q1": "column space factor of Z",
            "Q2": "left nullspace basis of Z",
            "R_tilde": "Qdᵀ·Z",
            "D": if tr.default_d { "diag(I_m, Qdᵀ)·(M⊗I_m)" } else { "user supplied" },
            "D_tilde": "D·(M⁻¹⊗I_m)·diag(I_m, Q1)",
            "L_t": "D·L",
            "L_hat_t": "[top m rows of (M⊗I_m)·L; R_tilde·(λ[0,−I]+[I,0])]",
            "K": "[top m rows of (M⊗I_m)·L; λ[0,−I]+[I,0]]",
        },
    })
}

pub fn trim_from_json<T: Scalar>(v: &Value) -> Result<TrimResult<T>> {
    let o = obj(v)?;
    check_field::<T>(o)?;
    let side: Side = req(o, "side")?.as_str().ok_or_else(|| Error::Parse("'side' must be a string".into()))?.parse()?;
    let get = |k: &str| usize_field(o, k)?.ok_or_else(|| Error::Parse(format!("missing '{k}'")));
    let (m, n, k) = (get("m")?, get("n")?, get("k")?);
    let zr = (k - 1) * m;
    let zc = (k - 1) * n;
    let mat = |key: &str, r: Option<usize>, c: Option<usize>| mat_from_json::<T>(req(o, key)?, r, c);
    Ok(TrimResult {
        side,
        m,
        n,
        k,
        ansatz: vector_from_json(req(o, "ansatz")?)?,
        alpha: T::from_json(req(o, "alpha")?)?,
        m_mat: mat("M", Some(k), Some(k))?,
        z: mat("Z", Some(zr), Some(zc))?,
        q1: mat("Q1", Some(zr), None)?,
        q2: mat("Q2", Some(zr), None)?,
        qd: mat("Qd", Some(zr), None)?,
        r_tilde: mat("R_tilde", None, Some(zc))?,
        x12: mat("X12", Some(m), Some(zc))?,
        y11: mat("Y11", Some(m), Some(zc))?,
        d: mat("D", None, Some(k * m))?,
        d_tilde: mat("D_tilde", None, None)?,
        lt: pencil_from_json(req(o, "L_t")?)?,
        lhat_t: pencil_from_json(req(o, "L_hat_t")?)?,
        kcore: pencil_from_json(req(o, "K")?)?,
        default_d: req(o, "default_D")?.as_bool().unwrap_or(false),
    })
}

pub fn upoly_to_json<T: Scalar>(p: &UPoly<T>) -> Value {
    json!({
        "text": p.to_string(),
        "coeffs": p.coeffs().iter().map(|c| c.to_json()).collect::<Vec<_>>(),
    })
}

fn finite_to_json(e: &FiniteEigen) -> Value {
    json!({
        "factor": upoly_to_json(&e.factor),
        "degree": e.factor.deg_i(),
        "partition": e.partition,
        "root": e.root().map(|r| r.to_string()),
    })
}

pub fn eig_to_json(es: &EigStructure) -> Value {
    json!({
        "kind": "eigenstructure",
        "nrank": es.nrank,
        "grade": es.grade,
        "finite": es.finite.iter().map(finite_to_json).collect::<Vec<_>>(),
        "infinite": es.infinite,
        "right_indices": es.right_indices,
        "left_indices": es.left_indices,
        "index_sum": es.index_sum(),
        "index_sum_consistent": es.index_sum_consistent(),
        "factors_certified": es.certified,
    })
}

pub fn basis_to_json<T: Scalar>(b: &MinimalBasis<T>) -> Value {
    json!({
        "kind": "minimal_basis",
        "field": field_tag::<T>(),
        "side": b.side,
        "indices": b.indices,
        "vectors": b.vectors.iter().map(|v| {
            Value::Array(v.coeffs().iter().map(|c| vector_to_json(&c.col(0))).collect())
        }).collect::<Vec<_>>(),
    })
}

/// Serializes with sorted keys and a trailing newline, so output is byte-stable.
pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::trim;
    use crate::scalar::Tol;
    use crate::scalar::{int_mat, Rat};
    use crate::spaces::companion_c1g;

    fn sample() -> MatPoly<Rat> {
        MatPoly::from_coeffs(vec![
            int_mat(&[&[1, 7], &[2, 5], &[4, 19]]),
            int_mat(&[&[3, 4], &[9, 2], &[15, 10]]),
            int_mat(&[&[1, 2], &[2, 5], &[4, 9]]),
        ])
    }

    #[test]
    fn polynomial_round_trip() {
        let p = sample().scale(&crate::scalar::rat(1, 3));
        let back: MatPoly<Rat> = poly_from_json(&poly_to_json(&p)).unwrap();
        assert_eq!(back, p);
        let text = json!({"coeffs": [[[1, "1/2"]], [[0, "-3"]]]});
        let q: MatPoly<Rat> = poly_from_json(&text).unwrap();
        assert_eq!((q.rows(), q.cols(), q.grade()), (1, 2, 1));
    }

    #[test]
    fn field_mismatch_is_reported() {
        let p = sample().to_float();
        let err = poly_from_json::<Rat>(&poly_to_json(&p)).unwrap_err();
        assert!(matches!(err, Error::FieldMismatch { .. }));
    }

    #[test]
    fn ansatz_and_trim_round_trip() {
        let l = companion_c1g(&sample()).unwrap();
        let back: AnsatzPencil<Rat> = ansatz_from_json(&ansatz_to_json(&l)).unwrap();
        assert_eq!(back, l);
        let tr = trim(&l, None, Tol::default()).unwrap();
        let tb: TrimResult<Rat> = trim_from_json(&trim_to_json(&tr)).unwrap();
        assert_eq!(tb, tr);
    }

    #[test]
    fn ragged_rows_rejected() {
        let v = json!({"coeffs": [[[1, 2], [3]]]});
        assert!(poly_from_json::<Rat>(&v).is_err());
    }
}
