//! Scalar fields: exact rationals and IEEE doubles.

use std::fmt;
use std::ops::Div;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::{Mat, Ring};

pub type Rat = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Rational,
    Float64,
}

impl Field {
    pub fn name(self) -> &'static str {
        match self {
            Field::Rational => "rational",
            Field::Float64 => "float64",
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Field {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational" => Ok(Field::Rational),
            "float64" => Ok(Field::Float64),
            other => Err(Error::Parse(format!("unknown field {other:?}"))),
        }
    }
}

/// Tolerances for the floating-point path. Ignored by exact arithmetic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tol {
    /// Relative singular-value threshold; `None` uses `max(r,c)·σ_max·2⁻⁵²·8`.
    pub rank_rel: Option<f64>,
    /// Relative residual accepted by verification steps.
    pub verify_rel: f64,
}

impl Default for Tol {
    fn default() -> Self {
        Tol { rank_rel: None, verify_rel: 1e-10 }
    }
}

impl Tol {
    pub fn with_rank_rel(rel: f64) -> Self {
        Tol { rank_rel: Some(rel), ..Tol::default() }
    }

    /// Absolute threshold below which a singular value counts as zero.
    pub fn rank_threshold(&self, rows: usize, cols: usize, sigma_max: f64) -> f64 {
        match self.rank_rel {
            Some(rel) => rel * sigma_max,
            None => rows.max(cols) as f64 * sigma_max * f64::EPSILON * 8.0,
        }
    }
}

pub trait Scalar: Ring + Div<Output = Self> + fmt::Display + Send + Sync + 'static {
    const FIELD: Field;

    fn from_i64(v: i64) -> Self;

    /// Exact dyadic value on the rational path.
    fn from_f64(v: f64) -> Self;

    fn to_f64(&self) -> f64;

    fn abs_val(&self) -> Self;

    fn is_exact() -> bool {
        Self::FIELD == Field::Rational
    }

    fn rank(a: &Mat<Self>, tol: Tol) -> usize;

    /// Columns form a basis of the right nullspace.
    fn nullspace(a: &Mat<Self>, tol: Tol) -> Mat<Self>;

    fn inverse(a: &Mat<Self>, tol: Tol) -> Option<Mat<Self>>;

    /// Minimum-norm least-squares solution of `a·x = b`.
    fn min_norm_solve(a: &Mat<Self>, b: &Mat<Self>, tol: Tol) -> Mat<Self>;

    /// Exact zero test, or Frobenius norm below `verify_rel·scale`.
    fn near_zero(a: &Mat<Self>, scale: f64, tol: Tol) -> bool;

    fn to_json(&self) -> serde_json::Value;

    fn from_json(v: &serde_json::Value) -> Result<Self>;
}

impl Scalar for Rat {
    const FIELD: Field = Field::Rational;

    fn from_i64(v: i64) -> Self {
        Rat::from_integer(BigInt::from(v))
    }

    fn from_f64(v: f64) -> Self {
        Rat::from_float(v).expect("non-finite float cannot become a rational")
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }

    fn rank(a: &Mat<Self>, _tol: Tol) -> usize {
        linalg::rref(a).1.len()
    }

    fn nullspace(a: &Mat<Self>, _tol: Tol) -> Mat<Self> {
        linalg::exact_nullspace(a)
    }

    fn inverse(a: &Mat<Self>, _tol: Tol) -> Option<Mat<Self>> {
        linalg::exact_inverse(a)
    }

    fn min_norm_solve(a: &Mat<Self>, b: &Mat<Self>, _tol: Tol) -> Mat<Self> {
        linalg::exact_min_norm_solve(a, b)
    }

    fn near_zero(a: &Mat<Self>, _scale: f64, _tol: Tol) -> bool {
        a.is_zero()
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_string())
    }

    fn from_json(v: &serde_json::Value) -> Result<Self> {
        match v {
            serde_json::Value::String(s) => parse_rational(s),
            serde_json::Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(Rat::from_i64(i))
                } else {
                    Err(Error::Parse(format!("rational entries must be integers or \"p/q\" strings, got {n}")))
                }
            }
            other => Err(Error::Parse(format!("bad rational entry {other}"))),
        }
    }
}

/// Parses `"p"`, `"p/q"` or a finite decimal such as `"-1.25"`.
pub fn parse_rational(s: &str) -> Result<Rat> {
    let t = s.trim();
    if let Ok(r) = Rat::from_str(t) {
        if r.denom().is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(r);
    }
    if let Some((int, frac)) = t.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        if !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit()) {
            let num = BigInt::from_str(&digits).map_err(|e| Error::Parse(e.to_string()))?;
            let den = num_traits::pow(BigInt::from(10), frac.len());
            let r = Rat::new(num, den);
            return Ok(if neg { -r } else { r });
        }
    }
    Err(Error::Parse(format!("cannot parse rational {s:?}")))
}

impl Scalar for f64 {
    const FIELD: Field = Field::Float64;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_f64(v: f64) -> Self {
        v
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }

    fn rank(a: &Mat<Self>, tol: Tol) -> usize {
        linalg::float_rank(a, tol)
    }

    fn nullspace(a: &Mat<Self>, tol: Tol) -> Mat<Self> {
        linalg::float_nullspace(a, tol)
    }

    fn inverse(a: &Mat<Self>, tol: Tol) -> Option<Mat<Self>> {
        linalg::float_inverse(a, tol)
    }

    fn min_norm_solve(a: &Mat<Self>, b: &Mat<Self>, tol: Tol) -> Mat<Self> {
        linalg::float_min_norm_solve(a, b, tol)
    }

    fn near_zero(a: &Mat<Self>, scale: f64, tol: Tol) -> bool {
        a.frob_sq().sqrt() <= tol.verify_rel * scale.max(1.0)
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Number::from_f64(*self).map(serde_json::Value::Number).unwrap_or(serde_json::Value::Null)
    }

    fn from_json(v: &serde_json::Value) -> Result<Self> {
        match v {
            serde_json::Value::Number(n) => n.as_f64().ok_or_else(|| Error::Parse(format!("bad number {n}"))),
            serde_json::Value::String(s) => {
                if let Ok(x) = s.trim().parse::<f64>() {
                    Ok(x)
                } else {
                    parse_rational(s).map(|r| Scalar::to_f64(&r))
                }
            }
            other => Err(Error::Parse(format!("bad float entry {other}"))),
        }
    }
}

pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Converts an integer matrix into any scalar field.
pub fn int_mat<T: Scalar>(rows: &[&[i64]]) -> Mat<T> {
    Mat::from_fn(rows.len(), rows.first().map_or(0, |r| r.len()), |i, j| T::from_i64(rows[i][j]))
}

pub fn to_float_mat<T: Scalar>(a: &Mat<T>) -> Mat<f64> {
    a.map(|x| x.to_f64())
}

pub fn to_field_mat<T: Scalar>(a: &Mat<f64>) -> Mat<T> {
    a.map(|x| T::from_f64(*x))
}

pub fn frob<T: Scalar>(a: &Mat<T>) -> f64 {
    a.frob_sq().to_f64().sqrt()
}
