//! Members of the ansatz spaces L1(P) and L2(P).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matpoly::{block_rect_identity, lambda_kp, MatPoly, Pencil};
use crate::matrix::Mat;
use crate::scalar::{Scalar, Tol};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    L1,
    L2,
}

impl std::str::FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l1" => Ok(Side::L1),
            "l2" => Ok(Side::L2),
            other => Err(Error::Parse(format!("unknown side {other:?}"))),
        }
    }
}

/// A pencil together with the space it belongs to and its ansatz vector.
#[derive(Clone, Debug, PartialEq)]
pub struct AnsatzPencil<T> {
    pub pencil: Pencil<T>,
    pub side: Side,
    pub ansatz: Vec<T>,
    /// Sizes `(m, n, k)` of the polynomial the pencil was built from.
    pub m: usize,
    pub n: usize,
    pub k: usize,
}

impl<T: Scalar> AnsatzPencil<T> {
    /// The `L2` member `L` seen as the `L1(Pᵀ)` member `Lᵀ`, and vice versa.
    pub fn transposed(&self) -> Self {
        AnsatzPencil {
            pencil: self.pencil.transpose(),
            side: match self.side {
                Side::L1 => Side::L2,
                Side::L2 => Side::L1,
            },
            ansatz: self.ansatz.clone(),
            m: self.n,
            n: self.m,
            k: self.k,
        }
    }
}

fn check_grade<T: Scalar>(p: &MatPoly<T>) -> Result<usize> {
    let k = p.grade();
    if k < 2 {
        return Err(Error::Invalid(format!("ansatz spaces need grade k >= 2, got {k}")));
    }
    Ok(k)
}

fn col<T: Scalar>(v: &[T]) -> Mat<T> {
    Mat::column(v.to_vec())
}

/// `X = [v⊗A_k | −W]`, `Y = [W + v⊗[A_{k−1} … A_1] | v⊗A_0]`.
pub fn build_l1<T: Scalar>(p: &MatPoly<T>, v: &[T], w: &Mat<T>) -> Result<AnsatzPencil<T>> {
    let k = check_grade(p)?;
    let (m, n) = (p.rows(), p.cols());
    if v.len() != k {
        return Err(Error::dim(format!("ansatz vector has length {}, expected {k}", v.len())));
    }
    if w.shape() != (k * m, (k - 1) * n) {
        return Err(Error::dim(format!("W is {}x{}, expected {}x{}", w.rows(), w.cols(), k * m, (k - 1) * n)));
    }
    let vc = col(v);
    let mids: Vec<Mat<T>> = (1..k).rev().map(|i| p.coeff(i)).collect();
    let mid_refs: Vec<&Mat<T>> = mids.iter().collect();
    let mid = Mat::hstack(&mid_refs);
    let x = Mat::hstack(&[&vc.kron(&p.coeff(k)), &w.neg_mat()]);
    let y = Mat::hstack(&[&(w + &vc.kron(&mid)), &vc.kron(&p.coeff(0))]);
    Ok(AnsatzPencil { pencil: Pencil { x, y }, side: Side::L1, ansatz: v.to_vec(), m, n, k })
}

/// Transpose dual of [`build_l1`]: `X = [wᵀ⊗A_k; −Ŵ]`, `Y = [Ŵ + wᵀ⊗[A_{k−1}; …; A_1]; wᵀ⊗A_0]`.
pub fn build_l2<T: Scalar>(p: &MatPoly<T>, w: &[T], what: &Mat<T>) -> Result<AnsatzPencil<T>> {
    let k = check_grade(p)?;
    let (m, n) = (p.rows(), p.cols());
    if what.shape() != ((k - 1) * m, k * n) {
        return Err(Error::dim(format!(
            "W-hat is {}x{}, expected {}x{}",
            what.rows(),
            what.cols(),
            (k - 1) * m,
            k * n
        )));
    }
    Ok(build_l1(&p.transpose(), w, &what.transpose())?.transposed())
}

/// `W = [0; −I_{k−1} ⊗ I_{m,n}]`.
pub fn companion_w<T: Scalar>(m: usize, n: usize, k: usize) -> Mat<T> {
    let mut w = Mat::zeros(k * m, (k - 1) * n);
    w.set_block(m, 0, &block_rect_identity::<T>(k - 1, m, n).neg_mat());
    w
}

/// The companion g-form `C₁ᵍ(λ) ∈ L1(P)` with ansatz vector `e₁`.
pub fn companion_c1g<T: Scalar>(p: &MatPoly<T>) -> Result<AnsatzPencil<T>> {
    let k = check_grade(p)?;
    let mut e1 = vec![T::zero(); k];
    e1[0] = T::one();
    build_l1(p, &e1, &companion_w(p.rows(), p.cols(), k))
}

/// The companion g-form `C₂ᵍ(λ) ∈ L2(P)` with ansatz vector `e₁`.
pub fn companion_c2g<T: Scalar>(p: &MatPoly<T>) -> Result<AnsatzPencil<T>> {
    Ok(companion_c1g(&p.transpose())?.transposed())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShiftSide {
    Column,
    Row,
}

/// Column shifted sum `[X 0] + [0 Y]` (block columns of width `n`) or the row
/// analogue `[X; 0] + [0; Y]` (block rows of height `m`).
pub fn shifted_sum<T: Scalar>(x: &Mat<T>, y: &Mat<T>, side: ShiftSide, m: usize, n: usize) -> Result<Mat<T>> {
    if x.shape() != y.shape() {
        return Err(Error::dim("shifted sum of differently shaped matrices"));
    }
    let (r, c) = x.shape();
    if m == 0 || n == 0 || r % m != 0 || c % n != 0 || r / m != c / n {
        return Err(Error::dim(format!("{r}x{c} is not a square grid of {m}x{n} blocks")));
    }
    Ok(match side {
        ShiftSide::Column => {
            let mut out = Mat::zeros(r, c + n);
            out.set_block(0, 0, x);
            let shifted = out.submatrix(0, n, r, c).add_mat(y);
            out.set_block(0, n, &shifted);
            out
        }
        ShiftSide::Row => {
            let mut out = Mat::zeros(r + m, c);
            out.set_block(0, 0, x);
            let shifted = out.submatrix(m, 0, r, c).add_mat(y);
            out.set_block(m, 0, &shifted);
            out
        }
    })
}

/// `[A_k A_{k−1} … A_0]`.
pub fn coefficient_row<T: Scalar>(p: &MatPoly<T>) -> Mat<T> {
    let cs: Vec<Mat<T>> = (0..=p.grade()).rev().map(|i| p.coeff(i)).collect();
    let refs: Vec<&Mat<T>> = cs.iter().collect();
    Mat::hstack(&refs)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Membership<T> {
    Member(Vec<T>),
    NotMember,
    /// `P = 0`: every pencil annihilating `Λ_k ⊗ I` fits every ansatz vector.
    Degenerate,
}

impl<T> Membership<T> {
    pub fn vector(self) -> Option<Vec<T>> {
        match self {
            Membership::Member(v) => Some(v),
            _ => None,
        }
    }
}

/// Recovers the ansatz vector from the shifted sum, then verifies the fit.
pub fn ansatz_membership<T: Scalar>(l: &Pencil<T>, p: &MatPoly<T>, side: Side, tol: Tol) -> Result<Membership<T>> {
    if side == Side::L2 {
        return ansatz_membership(&l.transpose(), &p.transpose(), Side::L1, tol);
    }
    let k = check_grade(p)?;
    let (m, n) = (p.rows(), p.cols());
    if (l.rows(), l.cols()) != (k * m, k * n) {
        return Err(Error::dim(format!("pencil is {}x{}, expected {}x{}", l.rows(), l.cols(), k * m, k * n)));
    }
    let b = coefficient_row(p);
    let bb = b.frob_sq();
    if bb.is_zero() {
        return Ok(Membership::Degenerate);
    }
    let s = shifted_sum(&l.x, &l.y, ShiftSide::Column, m, n)?;
    let mut v = Vec::with_capacity(k);
    for i in 0..k {
        let block = s.submatrix(i * m, 0, m, b.cols());
        let ip = block.data().iter().zip(b.data()).fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone());
        v.push(ip / bb.clone());
    }
    let fit = Mat::column(v.clone()).kron(&b);
    let scale = l.frob_norm().max(b.frob_sq().to_f64().sqrt());
    if T::near_zero(&(&s - &fit), scale, tol) {
        Ok(Membership::Member(v))
    } else {
        Ok(Membership::NotMember)
    }
}

/// `L(λ)(Λ_k ⊗ I_n) − v ⊗ P(λ)` (L1) or `(Λ_kᵀ ⊗ I_m)L(λ) − wᵀ ⊗ P(λ)` (L2).
pub fn ansatz_residual<T: Scalar>(l: &AnsatzPencil<T>, p: &MatPoly<T>) -> Result<MatPoly<T>> {
    let k = p.grade();
    match l.side {
        Side::L1 => {
            let lhs = l.pencil.to_poly().mul(&lambda_kp(k, p.cols()))?;
            let rhs = MatPoly::kron_const_left(&Mat::column(l.ansatz.clone()), p);
            lhs.sub(&rhs)
        }
        Side::L2 => {
            let lhs = lambda_kp::<T>(k, p.rows()).transpose().mul(&l.pencil.to_poly())?;
            let rhs = MatPoly::kron_const_left(&Mat::column(l.ansatz.clone()).transpose(), p);
            lhs.sub(&rhs)
        }
    }
}

/// `k(k−1)mn + k`.
pub fn space_dimension(m: usize, n: usize, k: usize) -> usize {
    k * (k - 1) * m * n + k
}

/// Rank of the vectorized generators `{L(e_i, 0)} ∪ {L(0, E_rs)}` of the space.
pub fn generator_rank<T: Scalar>(p: &MatPoly<T>, side: Side, tol: Tol) -> Result<usize> {
    let k = check_grade(p)?;
    let (m, n) = (p.rows(), p.cols());
    let (wr, wc) = match side {
        Side::L1 => (k * m, (k - 1) * n),
        Side::L2 => ((k - 1) * m, k * n),
    };
    let build = |v: &[T], w: &Mat<T>| match side {
        Side::L1 => build_l1(p, v, w),
        Side::L2 => build_l2(p, v, w),
    };
    let mut gens: Vec<Vec<T>> = Vec::new();
    let push = |g: &AnsatzPencil<T>, gens: &mut Vec<Vec<T>>| {
        let mut flat = g.pencil.x.vec_colmajor();
        flat.extend(g.pencil.y.vec_colmajor());
        gens.push(flat);
    };
    let zero_w = Mat::zeros(wr, wc);
    for i in 0..k {
        let mut e = vec![T::zero(); k];
        e[i] = T::one();
        push(&build(&e, &zero_w)?, &mut gens);
    }
    let zero_v = vec![T::zero(); k];
    for r in 0..wr {
        for c in 0..wc {
            let mut w = zero_w.clone();
            w[(r, c)] = T::one();
            push(&build(&zero_v, &w)?, &mut gens);
        }
    }
    let len = gens[0].len();
    let g = Mat::from_fn(gens.len(), len, |i, j| gens[i][j].clone());
    Ok(T::rank(&g, tol))
}
