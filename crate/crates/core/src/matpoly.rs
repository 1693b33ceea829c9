//! Matrix polynomials with an explicit grade, pencils, and the structured
//! builder matrices (Λ, H, S, R, I_{m,n}).

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::scalar::{Scalar, Tol};

/// `P(λ) = Σ λ^i A_i` with coefficients stored ascending; `grade = coeffs.len() - 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatPoly<T> {
    m: usize,
    n: usize,
    coeffs: Vec<Mat<T>>,
}

impl<T: Scalar> MatPoly<T> {
    pub fn new(m: usize, n: usize, coeffs: Vec<Mat<T>>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::dim("a matrix polynomial needs at least one coefficient"));
        }
        for (i, c) in coeffs.iter().enumerate() {
            if c.shape() != (m, n) {
                return Err(Error::dim(format!("coefficient {i} is {}x{}, expected {m}x{n}", c.rows(), c.cols())));
            }
        }
        Ok(MatPoly { m, n, coeffs })
    }

    /// Panicking constructor for internally consistent data.
    pub fn from_coeffs(coeffs: Vec<Mat<T>>) -> Self {
        let (m, n) = coeffs.first().expect("at least one coefficient").shape();
        MatPoly::new(m, n, coeffs).expect("consistent coefficient shapes")
    }

    pub fn zero(m: usize, n: usize, grade: usize) -> Self {
        MatPoly { m, n, coeffs: vec![Mat::zeros(m, n); grade + 1] }
    }

    pub fn constant(a: Mat<T>) -> Self {
        let (m, n) = a.shape();
        MatPoly { m, n, coeffs: vec![a] }
    }

    /// `λ·x + y`.
    pub fn linear(x: Mat<T>, y: Mat<T>) -> Self {
        MatPoly::from_coeffs(vec![y, x])
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    pub fn grade(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Mat<T>] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Mat<T> {
        self.coeffs.get(i).cloned().unwrap_or_else(|| Mat::zeros(self.m, self.n))
    }

    /// Largest `i` with `A_i ≠ 0`; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        (0..self.coeffs.len()).rev().find(|&i| !self.coeffs[i].is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    /// Same polynomial with a different grade; fails if nonzero terms would be dropped.
    pub fn with_grade(&self, grade: usize) -> Result<Self> {
        if let Some(d) = self.degree() {
            if d > grade {
                return Err(Error::dim(format!("degree {d} exceeds requested grade {grade}")));
            }
        }
        let coeffs = (0..=grade).map(|i| self.coeff(i)).collect();
        Ok(MatPoly { m: self.m, n: self.n, coeffs })
    }

    /// Grade lowered to the degree (grade 0 for the zero polynomial).
    pub fn trimmed(&self) -> Self {
        let d = self.degree().unwrap_or(0);
        self.with_grade(d).expect("degree fits")
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &T) -> Mat<T> {
        let mut acc = self.coeffs[self.grade()].clone();
        for i in (0..self.grade()).rev() {
            acc = acc.scale(x).add_mat(&self.coeffs[i]);
        }
        acc
    }

    /// `rev_k P(λ) = λ^k P(1/λ)` with `k` the grade.
    pub fn reversal(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        MatPoly { m: self.m, n: self.n, coeffs }
    }

    pub fn transpose(&self) -> Self {
        MatPoly { m: self.n, n: self.m, coeffs: self.coeffs.iter().map(Mat::transpose).collect() }
    }

    /// `Σ ‖A_i‖_F²`, exact on the rational path.
    pub fn frob_sq(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |acc, c| acc + c.frob_sq())
    }

    pub fn frob_norm(&self) -> f64 {
        self.frob_sq().to_f64().sqrt()
    }

    pub fn map_field<U: Scalar>(&self, f: impl Fn(&T) -> U) -> MatPoly<U> {
        MatPoly { m: self.m, n: self.n, coeffs: self.coeffs.iter().map(|c| c.map(&f)).collect() }
    }

    pub fn to_float(&self) -> MatPoly<f64> {
        self.map_field(|x| x.to_f64())
    }

    pub fn scale(&self, s: &T) -> Self {
        MatPoly { m: self.m, n: self.n, coeffs: self.coeffs.iter().map(|c| c.scale(s)).collect() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-T::one())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.m, self.n) != (other.m, other.n) {
            return Err(Error::dim("polynomial sum shape mismatch"));
        }
        let g = self.grade().max(other.grade());
        let coeffs = (0..=g).map(|i| self.coeff(i).add_mat(&other.coeff(i))).collect();
        Ok(MatPoly { m: self.m, n: self.n, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Product with grade `grade(P) + grade(Q)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.m {
            return Err(Error::dim(format!("polynomial product {}x{} by {}x{}", self.m, self.n, other.m, other.n)));
        }
        let g = self.grade() + other.grade();
        let mut coeffs = vec![Mat::zeros(self.m, other.n); g + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add_mat(&(a * b));
            }
        }
        Ok(MatPoly { m: self.m, n: other.n, coeffs })
    }

    pub fn left_mul_const(&self, a: &Mat<T>) -> Self {
        MatPoly::from_coeffs_shape(a.rows(), self.n, self.coeffs.iter().map(|c| a * c).collect())
    }

    pub fn right_mul_const(&self, a: &Mat<T>) -> Self {
        MatPoly::from_coeffs_shape(self.m, a.cols(), self.coeffs.iter().map(|c| c * a).collect())
    }

    fn from_coeffs_shape(m: usize, n: usize, coeffs: Vec<Mat<T>>) -> Self {
        MatPoly { m, n, coeffs }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        MatPoly::from_coeffs_shape(idx.len(), self.n, self.coeffs.iter().map(|c| c.select_rows(idx)).collect())
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        MatPoly::from_coeffs_shape(self.m, idx.len(), self.coeffs.iter().map(|c| c.select_cols(idx)).collect())
    }

    pub fn submatrix(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        MatPoly::from_coeffs_shape(nr, nc, self.coeffs.iter().map(|c| c.submatrix(r0, c0, nr, nc)).collect())
    }

    pub fn hstack(parts: &[&Self]) -> Self {
        let g = parts.iter().map(|p| p.grade()).max().unwrap_or(0);
        let coeffs = (0..=g)
            .map(|i| {
                let cs: Vec<Mat<T>> = parts.iter().map(|p| p.coeff(i)).collect();
                let refs: Vec<&Mat<T>> = cs.iter().collect();
                Mat::hstack(&refs)
            })
            .collect();
        MatPoly::from_coeffs(coeffs)
    }

    pub fn vstack(parts: &[&Self]) -> Self {
        let g = parts.iter().map(|p| p.grade()).max().unwrap_or(0);
        let coeffs = (0..=g)
            .map(|i| {
                let cs: Vec<Mat<T>> = parts.iter().map(|p| p.coeff(i)).collect();
                let refs: Vec<&Mat<T>> = cs.iter().collect();
                Mat::vstack(&refs)
            })
            .collect();
        MatPoly::from_coeffs(coeffs)
    }

    pub fn block_diag(a: &Self, b: &Self) -> Self {
        let g = a.grade().max(b.grade());
        let coeffs = (0..=g).map(|i| Mat::block_diag(&a.coeff(i), &b.coeff(i))).collect();
        MatPoly::from_coeffs(coeffs)
    }

    /// `C ⊗ P` for a constant matrix `C`.
    pub fn kron_const_left(c: &Mat<T>, p: &Self) -> Self {
        MatPoly::from_coeffs_shape(c.rows() * p.m, c.cols() * p.n, p.coeffs.iter().map(|a| c.kron(a)).collect())
    }

    /// `P ⊗ C` for a constant matrix `C`.
    pub fn kron_const_right(p: &Self, c: &Mat<T>) -> Self {
        MatPoly::from_coeffs_shape(p.m * c.rows(), p.n * c.cols(), p.coeffs.iter().map(|a| a.kron(c)).collect())
    }

    /// Block-Toeplitz convolution matrix `C_j(P)` of size `(k+j+1)m × (j+1)n`.
    /// Block column `i` holds `A_k, …, A_0` starting at block row `i`.
    pub fn conv_matrix(&self, j: usize) -> Mat<T> {
        let k = self.grade();
        let (m, n) = (self.m, self.n);
        let mut out = Mat::zeros((k + j + 1) * m, (j + 1) * n);
        for i in 0..=j {
            for t in 0..=k {
                out.set_block((i + t) * m, i * n, &self.coeffs[k - t]);
            }
        }
        out
    }

    /// Descending coefficient stack `[A_k; …; A_0]`, i.e. `C_0(P)`.
    pub fn stacked_desc(&self) -> Mat<T> {
        self.conv_matrix(0)
    }

    /// Inverse of [`stacked_desc`](Self::stacked_desc) for a given row block size.
    pub fn from_stacked_desc(s: &Mat<T>, m: usize) -> Self {
        assert!(m > 0 && s.rows().is_multiple_of(m), "stack height not a multiple of block rows");
        let blocks = s.rows() / m;
        let coeffs = (0..blocks).rev().map(|b| s.submatrix(b * m, 0, m, s.cols())).collect();
        MatPoly::from_coeffs_shape(m, s.cols(), coeffs)
    }

    /// Rank over the rational-function field.
    pub fn normal_rank(&self, tol: Tol) -> usize {
        let full = self.m.min(self.n);
        if full == 0 {
            return 0;
        }
        let count = self.grade() * full + 1;
        let mut best = 0;
        for i in 0..count {
            let x = if T::is_exact() { T::from_i64(i as i64 + 1) } else { T::from_f64(sample_point(i, count)) };
            best = best.max(T::rank(&self.eval(&x), tol));
            if best == full {
                break;
            }
        }
        best
    }

    pub fn approx_eq(&self, other: &Self, tol: Tol) -> bool {
        if (self.m, self.n) != (other.m, other.n) {
            return false;
        }
        let scale = self.frob_norm().max(other.frob_norm());
        match self.sub(other) {
            Ok(d) => d.coeffs.iter().all(|c| T::near_zero(c, scale, tol)),
            Err(_) => false,
        }
    }

    /// Equal as polynomials regardless of grade padding.
    pub fn same_poly(&self, other: &Self) -> bool {
        (self.m, self.n) == (other.m, other.n)
            && (0..=self.grade().max(other.grade())).all(|i| self.coeff(i) == other.coeff(i))
    }
}

/// Deterministic float sample points in `(-1.3, 1.3)` avoiding obvious special values.
fn sample_point(i: usize, count: usize) -> f64 {
    let t = (i as f64 + 0.5) / count as f64;
    1.3 * (std::f64::consts::PI * t).cos() + 0.0123
}

/// A pencil `λX + Y`.
#[derive(Clone, Debug, PartialEq)]
pub struct Pencil<T> {
    pub x: Mat<T>,
    pub y: Mat<T>,
}

impl<T: Scalar> Pencil<T> {
    pub fn new(x: Mat<T>, y: Mat<T>) -> Result<Self> {
        if x.shape() != y.shape() {
            return Err(Error::dim("pencil X and Y shapes differ"));
        }
        Ok(Pencil { x, y })
    }

    pub fn zeros(r: usize, c: usize) -> Self {
        Pencil { x: Mat::zeros(r, c), y: Mat::zeros(r, c) }
    }

    pub fn rows(&self) -> usize {
        self.x.rows()
    }

    pub fn cols(&self) -> usize {
        self.x.cols()
    }

    pub fn to_poly(&self) -> MatPoly<T> {
        MatPoly::linear(self.x.clone(), self.y.clone())
    }

    pub fn from_poly(p: &MatPoly<T>) -> Result<Self> {
        if p.grade() > 1 {
            let p1 = p.with_grade(1)?;
            return Ok(Pencil { x: p1.coeff(1), y: p1.coeff(0) });
        }
        Ok(Pencil { x: p.coeff(1), y: p.coeff(0) })
    }

    pub fn transpose(&self) -> Self {
        Pencil { x: self.x.transpose(), y: self.y.transpose() }
    }

    /// `rev_1 L = λY + X`.
    pub fn reversal(&self) -> Self {
        Pencil { x: self.y.clone(), y: self.x.clone() }
    }

    pub fn left_mul(&self, a: &Mat<T>) -> Self {
        Pencil { x: a * &self.x, y: a * &self.y }
    }

    pub fn right_mul(&self, a: &Mat<T>) -> Self {
        Pencil { x: &self.x * a, y: &self.y * a }
    }

    pub fn add(&self, other: &Self) -> Self {
        Pencil { x: &self.x + &other.x, y: &self.y + &other.y }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Pencil { x: &self.x - &other.x, y: &self.y - &other.y }
    }

    pub fn scale(&self, s: &T) -> Self {
        Pencil { x: self.x.scale(s), y: self.y.scale(s) }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Pencil { x: self.x.select_rows(idx), y: self.y.select_rows(idx) }
    }

    pub fn submatrix(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        Pencil { x: self.x.submatrix(r0, c0, nr, nc), y: self.y.submatrix(r0, c0, nr, nc) }
    }

    /// `√(‖X‖_F² + ‖Y‖_F²)`.
    pub fn frob_norm(&self) -> f64 {
        (self.x.frob_sq() + self.y.frob_sq()).to_f64().sqrt()
    }

    pub fn to_float(&self) -> Pencil<f64> {
        Pencil { x: self.x.map(|v| v.to_f64()), y: self.y.map(|v| v.to_f64()) }
    }

    pub fn map_field<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Pencil<U> {
        Pencil { x: self.x.map(&f), y: self.y.map(&f) }
    }

    pub fn approx_eq(&self, other: &Self, tol: Tol) -> bool {
        let scale = self.frob_norm().max(other.frob_norm());
        self.x.shape() == other.x.shape()
            && T::near_zero(&(&self.x - &other.x), scale, tol)
            && T::near_zero(&(&self.y - &other.y), scale, tol)
    }
}

/// Identifiers for the structured builder matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StructuredKind {
    /// `Λ_k(λ) ⊗ I_p`, `kp × p`.
    Lambda { k: usize, p: usize },
    /// `H_j(λ) ⊗ I_p`, `jp × (j+1)p`.
    H { j: usize, p: usize },
    /// `S_k(λ) ⊗ I_n`, `kn × (k−1)n`.
    ShearS { k: usize, n: usize },
    /// `R_k ⊗ I_n`, the block flip.
    FlipR { k: usize, n: usize },
    /// `I_{m,n}`.
    RectIdentity { m: usize, n: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Structured<T> {
    Poly(MatPoly<T>),
    Const(Mat<T>),
}

pub fn build_structured<T: Scalar>(kind: StructuredKind) -> Result<Structured<T>> {
    let positive = match kind {
        StructuredKind::Lambda { k, p } => k > 0 && p > 0,
        StructuredKind::H { j, p } => j > 0 && p > 0,
        StructuredKind::ShearS { k, n } => k > 1 && n > 0,
        StructuredKind::FlipR { k, n } => k > 0 && n > 0,
        StructuredKind::RectIdentity { m, n } => m > 0 && n > 0,
    };
    if !positive {
        return Err(Error::Invalid(format!("non-positive size in {kind:?}")));
    }
    Ok(match kind {
        StructuredKind::Lambda { k, p } => Structured::Poly(lambda_kp(k, p)),
        StructuredKind::H { j, p } => Structured::Poly(h_jp(j, p)),
        StructuredKind::ShearS { k, n } => Structured::Poly(shear_s(k, n)),
        StructuredKind::FlipR { k, n } => Structured::Const(flip_r(k, n)),
        StructuredKind::RectIdentity { m, n } => Structured::Const(Mat::rect_identity(m, n)),
    })
}

/// `Λ_k(λ) ⊗ I_p = [λ^{k−1} I; …; λ I; I]`.
pub fn lambda_kp<T: Scalar>(k: usize, p: usize) -> MatPoly<T> {
    let coeffs = (0..k)
        .map(|i| {
            let mut c = Mat::zeros(k * p, p);
            c.set_block((k - 1 - i) * p, 0, &Mat::identity(p));
            c
        })
        .collect();
    MatPoly::from_coeffs(coeffs)
}

/// `H_j(λ) ⊗ I_p`: `−I` on the block diagonal, `λI` on the block superdiagonal.
pub fn h_jp<T: Scalar>(j: usize, p: usize) -> MatPoly<T> {
    let mut x = Mat::zeros(j * p, (j + 1) * p);
    let mut y = Mat::zeros(j * p, (j + 1) * p);
    let id = Mat::identity(p);
    for i in 0..j {
        y.set_block(i * p, i * p, &id.neg_mat());
        x.set_block(i * p, (i + 1) * p, &id);
    }
    MatPoly::linear(x, y)
}

/// `S_k(λ) ⊗ I_n` with `S_k(i, j) = λ^{j−i}` for `j ≥ i` and a zero last row.
pub fn shear_s<T: Scalar>(k: usize, n: usize) -> MatPoly<T> {
    assert!(k >= 2, "S_k needs k >= 2");
    let id = Mat::identity(n);
    let coeffs = (0..=k - 2)
        .map(|d| {
            let mut c = Mat::zeros(k * n, (k - 1) * n);
            for i in 0..k - 1 {
                let j = i + d;
                if j < k - 1 {
                    c.set_block(i * n, j * n, &id);
                }
            }
            c
        })
        .collect();
    MatPoly::from_coeffs(coeffs)
}

/// `R_k ⊗ I_n`, reversing the block order.
pub fn flip_r<T: Scalar>(k: usize, n: usize) -> Mat<T> {
    let mut r = Mat::zeros(k * n, k * n);
    let id = Mat::identity(n);
    for i in 0..k {
        r.set_block(i * n, (k - 1 - i) * n, &id);
    }
    r
}

/// `I_{k} ⊗ I_{m,n}`.
pub fn block_rect_identity<T: Scalar>(k: usize, m: usize, n: usize) -> Mat<T> {
    Mat::<T>::identity(k).kron(&Mat::rect_identity(m, n))
}

/// Polynomial `Σ λ^i v_i` for a coefficient list of vectors (ascending).
pub fn vec_poly<T: Scalar>(coeffs: Vec<Vec<T>>) -> MatPoly<T> {
    MatPoly::from_coeffs(coeffs.into_iter().map(Mat::column).collect())
}

/// Scalar polynomial `Σ λ^i c_i` as a 1×1 matrix polynomial.
pub fn scalar_poly<T: Scalar>(c: &[T]) -> MatPoly<T> {
    MatPoly::from_coeffs(c.iter().map(|x| Mat::from_vec(1, 1, vec![x.clone()])).collect())
}

/// Exact test that a square polynomial matrix has a nonzero constant determinant.
/// Evaluates the determinant at more points than its degree bound allows.
pub fn constant_det<T: Scalar>(p: &MatPoly<T>) -> Option<T> {
    if p.rows() != p.cols() {
        return None;
    }
    let bound = p.rows() * p.grade();
    let det_at = |x: T| -> T {
        let e = p.eval(&x);
        if T::is_exact() {
            crate::linalg::exact_det(&e)
        } else {
            let na = crate::linalg::to_na(&e.map(|v| v.to_f64()));
            T::from_f64(na.determinant())
        }
    };
    let d0 = det_at(T::zero());
    if d0.is_zero() {
        return None;
    }
    for i in 1..=bound {
        let d = det_at(T::from_i64(i as i64));
        let same =
            if T::is_exact() { d == d0 } else { (d.to_f64() - d0.to_f64()).abs() <= 1e-8 * d0.to_f64().abs().max(1.0) };
        if !same {
            return None;
        }
    }
    Some(d0)
}

pub fn is_one<T: Scalar>(x: &T) -> bool {
    x.is_one()
}
