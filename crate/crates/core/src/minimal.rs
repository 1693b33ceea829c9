//! Minimal bases of polynomial nullspaces and recovery maps between a
//! polynomial and its (trimmed) linearizations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::matpoly::{shear_s, MatPoly};
use crate::matrix::Mat;
use crate::reduction::{kron_lower, trim, TrimResult};
use crate::scalar::{Scalar, Tol};
use crate::spaces::{AnsatzPencil, Side};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisSide {
    Left,
    Right,
}

impl BasisSide {
    pub fn flip(self) -> Self {
        match self {
            BasisSide::Left => BasisSide::Right,
            BasisSide::Right => BasisSide::Left,
        }
    }
}

impl std::str::FromStr for BasisSide {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "left" => Ok(BasisSide::Left),
            "right" => Ok(BasisSide::Right),
            other => Err(Error::Parse(format!("unknown side '{other}'"))),
        }
    }
}

/// Vector polynomials (as `p×1` matrix polynomials) with ascending degrees.
/// Left vectors `y` satisfy `yᵀP = 0` and are stored as columns.
#[derive(Clone, Debug, PartialEq)]
pub struct MinimalBasis<T> {
    pub side: BasisSide,
    pub vectors: Vec<MatPoly<T>>,
    pub indices: Vec<usize>,
}

impl<T: Scalar> MinimalBasis<T> {
    fn from_pairs(side: BasisSide, mut pairs: Vec<(MatPoly<T>, usize)>) -> Self {
        pairs.sort_by_key(|(_, d)| *d);
        let indices = pairs.iter().map(|(_, d)| *d).collect();
        MinimalBasis { side, vectors: pairs.into_iter().map(|(v, _)| v).collect(), indices }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn degree_sum(&self) -> usize {
        self.indices.iter().sum()
    }
}

fn oriented<T: Scalar>(p: &MatPoly<T>, side: BasisSide) -> MatPoly<T> {
    match side {
        BasisSide::Right => p.clone(),
        BasisSide::Left => p.transpose(),
    }
}

/// Degree of a vector polynomial (zero for the zero vector).
pub fn vec_degree<T: Scalar>(x: &MatPoly<T>) -> usize {
    x.degree().unwrap_or(0)
}

/// Descending coefficient stack `[x_d; …; x_0]` of a vector polynomial.
fn desc_stack<T: Scalar>(x: &MatPoly<T>, d: usize) -> Vec<T> {
    (0..=d).rev().flat_map(|i| x.coeff(i).col(0)).collect()
}

fn from_desc<T: Scalar>(s: Vec<T>, len: usize) -> MatPoly<T> {
    MatPoly::from_stacked_desc(&Mat::column(s), len).trimmed()
}

fn shifted<T: Scalar>(x: &MatPoly<T>, j: usize) -> MatPoly<T> {
    let mut coeffs = vec![Mat::zeros(x.rows(), 1); j];
    coeffs.extend(x.coeffs().iter().cloned());
    MatPoly::from_coeffs(coeffs)
}

/// Leading coefficient vectors as rows.
fn lead_matrix<T: Scalar>(vs: &[MatPoly<T>], len: usize) -> Mat<T> {
    let rows: Vec<Vec<T>> = vs.iter().map(|v| v.coeff(vec_degree(v)).col(0)).collect();
    if rows.is_empty() {
        Mat::zeros(0, len)
    } else {
        Mat::from_rows(rows)
    }
}

fn normalize<T: Scalar>(s: &mut [T], tol: Tol) {
    // ascending coefficient order: the stack is descending, so scan blocks from the end
    let scale = s.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max);
    let pick = |x: &T| {
        if T::is_exact() {
            !x.is_zero()
        } else {
            x.to_f64().abs() > tol.verify_rel * scale.max(f64::MIN_POSITIVE)
        }
    };
    let Some(pivot) = s.iter().rev().find(|x| pick(x)).cloned() else {
        return;
    };
    let factor = if T::is_exact() {
        T::one() / pivot
    } else {
        let norm = s.iter().map(|x| x.to_f64().powi(2)).sum::<f64>().sqrt();
        T::from_f64(pivot.to_f64().signum() / norm)
    };
    for x in s.iter_mut() {
        *x = x.clone() * factor.clone();
    }
}

/// Exact path only: reduce `v` modulo the row space of `span` using its RREF.
fn reduce_mod_span<T: Scalar>(v: &mut [T], span: &Mat<T>) {
    if !T::is_exact() || span.rows() == 0 {
        return;
    }
    let (r, piv) = linalg::rref(span);
    for (i, &pc) in piv.iter().enumerate() {
        let c = v[pc].clone();
        if c.is_zero() {
            continue;
        }
        for (j, vj) in v.iter_mut().enumerate() {
            *vj = vj.clone() - c.clone() * r[(i, j)].clone();
        }
    }
}

/// Minimal basis of the right (or left) nullspace, grown degree by degree from
/// convolution-matrix nullspaces.
pub fn minimal_basis<T: Scalar>(p: &MatPoly<T>, side: BasisSide, tol: Tol) -> Result<MinimalBasis<T>> {
    let q = oriented(p, side);
    let len = q.cols();
    let target = len - q.normal_rank(tol);
    let bound = q.grade() * q.rows().min(q.cols());
    let mut acc: Vec<(MatPoly<T>, usize)> = Vec::new();
    let mut d = 0;
    while acc.len() < target {
        if d > bound {
            return Err(Error::verify(format!(
                "nullspace growth stalled at degree {d} with {} of {target} vectors",
                acc.len()
            )));
        }
        let null = T::nullspace(&q.conv_matrix(d), tol);
        let shift_rows: Vec<Vec<T>> =
            acc.iter().flat_map(|(x, e)| (0..=d - e).map(move |j| desc_stack(&shifted(x, j), d))).collect();
        let span = if shift_rows.is_empty() { Mat::zeros(0, (d + 1) * len) } else { Mat::from_rows(shift_rows) };
        let vs: Vec<MatPoly<T>> = acc.iter().map(|(x, _)| x.clone()).collect();
        let mut lead = lead_matrix(&vs, len);
        let mut lead_rank = T::rank(&lead, tol);
        for c in 0..null.cols() {
            if acc.len() == target {
                break;
            }
            let mut cand = null.col(c);
            let top = Mat::from_rows(vec![cand[..len].to_vec()]);
            let ext = Mat::vstack(&[&lead, &top]);
            let r = T::rank(&ext, tol);
            if r == lead_rank {
                continue;
            }
            reduce_mod_span(&mut cand, &span);
            normalize(&mut cand, tol);
            let x = from_desc(cand, len);
            lead = Mat::vstack(&[&lead, &Mat::from_rows(vec![x.coeff(d).col(0)])]);
            lead_rank = r;
            acc.push((x, d));
        }
        d += 1;
    }
    Ok(MinimalBasis::from_pairs(side, acc))
}

/// `dim` of the degree-`≤ d` nullspace for `d = 0..=upto`.
pub fn nullity_profile<T: Scalar>(p: &MatPoly<T>, side: BasisSide, upto: usize, tol: Tol) -> Vec<usize> {
    let q = oriented(p, side);
    (0..=upto)
        .map(|d| {
            let c = q.conv_matrix(d);
            c.cols() - T::rank(&c, tol)
        })
        .collect()
}

/// Profile predicted by a set of minimal indices: `Σ_{ε ≤ d} (d − ε + 1)`.
pub fn predicted_profile(indices: &[usize], upto: usize) -> Vec<usize> {
    (0..=upto).map(|d| indices.iter().filter(|&&e| e <= d).map(|&e| d - e + 1).sum()).collect()
}

fn annihilates<T: Scalar>(q: &MatPoly<T>, x: &MatPoly<T>, tol: Tol) -> Result<bool> {
    let prod = q.mul(x)?;
    let scale = q.frob_norm() * x.frob_norm();
    Ok(prod.coeffs().iter().all(|c| T::near_zero(c, scale, tol)))
}

/// Checks membership, count, row-reducedness and the nullity profile.
pub fn certify_minimal<T: Scalar>(p: &MatPoly<T>, basis: &MinimalBasis<T>, tol: Tol) -> Result<()> {
    let q = oriented(p, basis.side);
    let len = q.cols();
    let expected = len - q.normal_rank(tol);
    if basis.len() != expected {
        return Err(Error::verify(format!("basis has {} vectors, nullity is {expected}", basis.len())));
    }
    for (x, &e) in basis.vectors.iter().zip(&basis.indices) {
        if x.rows() != len || vec_degree(x) != e {
            return Err(Error::verify("basis vector shape or degree disagrees with its index"));
        }
        if !annihilates(&q, x, tol)? {
            return Err(Error::verify("basis vector is not in the nullspace"));
        }
    }
    if basis.indices.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::verify("indices are not ascending"));
    }
    let lead = lead_matrix(&basis.vectors, len);
    if T::rank(&lead, tol) != basis.len() {
        return Err(Error::verify("leading coefficients are dependent"));
    }
    let upto = basis.indices.last().map_or(0, |&e| e + 1);
    let got = nullity_profile(p, basis.side, upto, tol);
    let want = predicted_profile(&basis.indices, upto);
    if got != want {
        return Err(Error::verify(format!("nullity profile {got:?} differs from predicted {want:?}")));
    }
    Ok(())
}

/// `Λ_k(λ) ⊗ x(λ)`.
pub fn embed_right<T: Scalar>(x: &MatPoly<T>, k: usize) -> MatPoly<T> {
    let blocks: Vec<MatPoly<T>> = (0..k).map(|i| shifted(x, k - 1 - i)).collect();
    let g = blocks.iter().map(|b| b.grade()).max().unwrap_or(0);
    let padded: Vec<MatPoly<T>> = blocks.iter().map(|b| b.with_grade(g).expect("grade grows")).collect();
    MatPoly::vstack(&padded.iter().collect::<Vec<_>>()).trimmed()
}

/// `(vᵀ ⊗ I_m)·y`.
pub fn project_ansatz<T: Scalar>(v: &[T], y: &MatPoly<T>, m: usize) -> Result<MatPoly<T>> {
    if y.rows() != v.len() * m || y.cols() != 1 {
        return Err(Error::dim(format!("expected a {}-vector, got {}x{}", v.len() * m, y.rows(), y.cols())));
    }
    let proj = Mat::from_rows(vec![v.to_vec()]).kron(&Mat::identity(m));
    Ok(y.left_mul_const(&proj).trimmed())
}

fn l1_poly<T: Scalar>(tr: &TrimResult<T>, p: &MatPoly<T>) -> MatPoly<T> {
    match tr.side {
        Side::L1 => p.clone(),
        Side::L2 => p.transpose(),
    }
}

/// Lifts `q ∈ N_l(P)` to `y ∈ N_l(L)` with `(vᵀ⊗I)y = q` and `deg y = deg q`.
///
/// `tr` must come from trimming the L1 member `L` (it supplies `M`, `α`, `Z` and the
/// top block of `(M⊗I)L`). For an L2 trim, `P` is taken as `Pᵀ`.
pub fn lift_left<T: Scalar>(q: &MatPoly<T>, tr: &TrimResult<T>, p: &MatPoly<T>, tol: Tol) -> Result<MatPoly<T>> {
    let p = l1_poly(tr, p);
    let (m, n, k) = (tr.m, tr.n, tr.k);
    if q.rows() != m || q.cols() != 1 {
        return Err(Error::dim(format!("q must be a {m}-vector")));
    }
    if q.is_zero() {
        return Ok(MatPoly::zero(k * m, 1, 0));
    }
    let qt = q.transpose();
    if !annihilates(&p.transpose(), q, tol)? {
        return Err(Error::Invalid("q is not in the left nullspace of P".into()));
    }
    let delta = vec_degree(q);
    let top = tr.a_block().to_poly();
    let zt = tr.z.transpose();
    let ztz_inv = T::inverse(&(&zt * &tr.z), tol).ok_or_else(|| Error::pre("Z lacks full column rank"))?;
    let z_pinv = &ztz_inv * &zt;
    let w = qt.mul(&top)?.mul(&shear_s(k, n))?;
    let qtil = w.right_mul_const(&z_pinv).neg();
    let scale = qtil.frob_norm() * linalg::dot(tr.z.data(), tr.z.data()).to_f64().sqrt();
    for i in delta + 1..=qtil.grade() {
        let t = &qtil.coeff(i) * &tr.z;
        if !T::near_zero(&t, scale, tol) {
            return Err(Error::verify(format!("coefficient of degree {i} is not annihilated by Z")));
        }
    }
    let qtil = MatPoly::from_coeffs((0..=delta).map(|i| qtil.coeff(i)).collect());
    let yhat = MatPoly::vstack(&[&q.with_grade(delta)?, &qtil.transpose()]);
    // ŷᵀ·(M⊗I)L must vanish
    let lower = kron_lower::<T>(n, k).left_mul(&tr.z);
    let lhat = crate::matpoly::Pencil {
        x: Mat::vstack(&[&tr.a_block().x, &lower.x]),
        y: Mat::vstack(&[&tr.a_block().y, &lower.y]),
    };
    if !annihilates(&lhat.to_poly().transpose(), &yhat, tol)? {
        return Err(Error::verify("lifted vector is not in the left nullspace of L"));
    }
    let inv_alpha = T::one() / tr.alpha.clone();
    let y = yhat.left_mul_const(&tr.m_mat.transpose().kron(&Mat::identity(m))).scale(&inv_alpha).trimmed();
    if vec_degree(&y) != delta {
        return Err(Error::verify("lift did not preserve the degree"));
    }
    Ok(y)
}

/// Minimal basis of `N_l(L)` whose first `c = (k−1)(m−n)` vectors are the constant
/// vectors `(Mᵀ⊗I)[0; v_j]` spanning `N(L_v)`.
pub fn special_left_basis<T: Scalar>(l: &AnsatzPencil<T>, tr: &TrimResult<T>, tol: Tol) -> Result<MinimalBasis<T>> {
    let l1 = match l.side {
        Side::L1 => l.clone(),
        Side::L2 => l.transposed(),
    };
    let (m, k) = (tr.m, tr.k);
    if l1.m != m || l1.k != k || tr.m < tr.n {
        return Err(Error::pre("special left basis needs m >= n and a trim of the same member"));
    }
    let lp = l1.pencil.to_poly();
    let mb = minimal_basis(&lp, BasisSide::Left, tol)?;
    let mk_t = tr.m_mat.transpose().kron(&Mat::identity(m));
    let kernel: Vec<MatPoly<T>> = (0..tr.q2.cols())
        .map(|j| {
            let mut col = vec![T::zero(); m];
            col.extend(tr.q2.col(j));
            MatPoly::constant(&mk_t * &Mat::column(col))
        })
        .collect();
    let mut chosen: Vec<MatPoly<T>> = kernel.clone();
    let mut rest: Vec<(MatPoly<T>, usize)> = Vec::new();
    let (zeros, positive): (Vec<_>, Vec<_>) =
        mb.vectors.iter().zip(&mb.indices).map(|(v, &d)| (v.clone(), d)).partition(|(_, d)| *d == 0);
    let mut lead_set: Vec<MatPoly<T>> = kernel.clone();
    lead_set.extend(positive.iter().map(|(v, _)| v.clone()));
    let len = k * m;
    let mut rank = T::rank(&lead_matrix(&lead_set, len), tol);
    if rank != lead_set.len() {
        return Err(Error::verify("kernel vectors collide with positive-degree basis vectors"));
    }
    for (z, _) in zeros {
        if lead_set.len() == mb.len() {
            break;
        }
        let mut trial = lead_set.clone();
        trial.push(z.clone());
        let r = T::rank(&lead_matrix(&trial, len), tol);
        if r > rank {
            rank = r;
            lead_set = trial;
            rest.push((z, 0));
        }
    }
    if lead_set.len() != mb.len() {
        return Err(Error::verify("greedy completion did not reach a basis"));
    }
    rest.extend(positive);
    rest.sort_by_key(|(_, d)| *d);
    let mut indices = vec![0; chosen.len()];
    for (v, d) in rest {
        chosen.push(v);
        indices.push(d);
    }
    let out = MinimalBasis { side: BasisSide::Left, vectors: chosen, indices };
    certify_minimal(&lp, &out, tol)?;
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecoveryMode {
    GlinL1,
    GlinL2,
    TrimmedL1,
    TrimmedL2,
}

impl std::str::FromStr for RecoveryMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "glin_l1" => Ok(RecoveryMode::GlinL1),
            "glin_l2" => Ok(RecoveryMode::GlinL2),
            "trimmed_l1" => Ok(RecoveryMode::TrimmedL1),
            "trimmed_l2" => Ok(RecoveryMode::TrimmedL2),
            other => Err(Error::Parse(format!("unknown recovery mode '{other}'"))),
        }
    }
}

/// Where the linearization came from.
#[derive(Clone, Copy, Debug)]
pub enum Source<'a, T> {
    Member(&'a AnsatzPencil<T>),
    Trimmed(&'a TrimResult<T>),
}

/// Recovers a minimal basis of `N_r(P)` or `N_l(P)` from one of the linearization.
pub fn recover_minimal<T: Scalar>(
    source: Source<'_, T>,
    p: &MatPoly<T>,
    side: BasisSide,
    mode: RecoveryMode,
    tol: Tol,
) -> Result<MinimalBasis<T>> {
    let basis = match (mode, source) {
        (RecoveryMode::GlinL1, Source::Member(l)) if l.side == Side::L1 => match side {
            BasisSide::Right => strip_right(&l.pencil.to_poly(), l.k, l.n, tol)?,
            BasisSide::Left => glin_left_l1(l, tol)?,
        },
        (RecoveryMode::GlinL2, Source::Member(l)) if l.side == Side::L2 => {
            let l1 = l.transposed();
            let mut b = match side {
                BasisSide::Right => glin_left_l1(&l1, tol)?,
                BasisSide::Left => strip_right(&l1.pencil.to_poly(), l1.k, l1.n, tol)?,
            };
            b.side = side;
            b
        }
        (RecoveryMode::TrimmedL1, Source::Trimmed(tr)) if tr.side == Side::L1 => match side {
            BasisSide::Right => strip_right(&tr.lt.to_poly(), tr.k, tr.n, tol)?,
            BasisSide::Left => trimmed_left_l1(tr, tol)?,
        },
        (RecoveryMode::TrimmedL2, Source::Trimmed(tr)) if tr.side == Side::L2 => {
            let mut b = match side {
                BasisSide::Right => trimmed_left_l1(tr, tol)?,
                BasisSide::Left => strip_right(&tr.lt.to_poly(), tr.k, tr.n, tol)?,
            };
            b.side = side;
            b
        }
        _ => return Err(Error::Invalid(format!("source does not match recovery mode {mode:?}"))),
    };
    let q = oriented(p, side);
    let expected = q.cols() - q.normal_rank(tol);
    if basis.len() != expected {
        return Err(Error::verify(format!("recovered {} vectors, expected {expected}", basis.len())));
    }
    certify_minimal(p, &basis, tol)?;
    Ok(basis)
}

fn poly_close<T: Scalar>(a: &MatPoly<T>, b: &MatPoly<T>, tol: Tol) -> bool {
    let g = a.grade().max(b.grade());
    match (a.with_grade(g), b.with_grade(g)) {
        (Ok(a), Ok(b)) => a.approx_eq(&b, tol),
        _ => false,
    }
}

/// Right vectors of an L1-oriented linearization have the form `Λ_k ⊗ x`.
fn strip_right<T: Scalar>(lp: &MatPoly<T>, k: usize, n: usize, tol: Tol) -> Result<MinimalBasis<T>> {
    let mb = minimal_basis(lp, BasisSide::Right, tol)?;
    let mut pairs = Vec::new();
    for (v, &e) in mb.vectors.iter().zip(&mb.indices) {
        let x = v.select_rows(&((k - 1) * n..k * n).collect::<Vec<_>>()).trimmed();
        if e < k - 1 || !poly_close(&embed_right(&x, k), v, tol) {
            return Err(Error::structure("right nullvector of the linearization is not of the form Λ_k ⊗ x"));
        }
        pairs.push((x, e - (k - 1)));
    }
    Ok(MinimalBasis::from_pairs(BasisSide::Right, pairs))
}

fn glin_left_l1<T: Scalar>(l: &AnsatzPencil<T>, tol: Tol) -> Result<MinimalBasis<T>> {
    if l.m < l.n {
        return Err(Error::pre("left recovery from an L1 member needs m >= n"));
    }
    let tr = trim(l, None, tol)?;
    let sb = special_left_basis(l, &tr, tol)?;
    let c = tr.q2.cols();
    let mut pairs = Vec::new();
    for (y, &d) in sb.vectors.iter().zip(&sb.indices).skip(c) {
        let q = project_ansatz(&l.ansatz, y, l.m)?;
        if vec_degree(&q) != d || q.is_zero() {
            return Err(Error::verify("projection changed the degree of a left basis vector"));
        }
        pairs.push((q, d));
    }
    Ok(MinimalBasis::from_pairs(BasisSide::Left, pairs))
}

fn trimmed_left_l1<T: Scalar>(tr: &TrimResult<T>, tol: Tol) -> Result<MinimalBasis<T>> {
    let mb = minimal_basis(&tr.lt.to_poly(), BasisSide::Left, tol)?;
    let dt = tr.d.transpose();
    let mut pairs = Vec::new();
    for (y, &d) in mb.vectors.iter().zip(&mb.indices) {
        let q = project_ansatz(&tr.ansatz, &y.left_mul_const(&dt), tr.m)?;
        if vec_degree(&q) != d || q.is_zero() {
            return Err(Error::verify("projection changed the degree of a left basis vector"));
        }
        pairs.push((q, d));
    }
    Ok(MinimalBasis::from_pairs(BasisSide::Left, pairs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matpoly::vec_poly;
    use crate::scalar::{int_mat, Rat};
    use crate::spaces::{companion_c1g, companion_c2g};

    fn r(x: i64) -> Rat {
        Rat::from_i64(x)
    }

    fn example2() -> MatPoly<Rat> {
        MatPoly::from_coeffs(vec![
            int_mat(&[&[0, 0], &[0, 1], &[0, 0]]),
            int_mat(&[&[0, 1], &[1, 0], &[0, 0]]),
            int_mat(&[&[1, 0], &[0, 0], &[0, 0]]),
        ])
    }

    #[test]
    fn row_syzygy() {
        let p = MatPoly::from_coeffs(vec![int_mat::<Rat>(&[&[1, 0]]), int_mat(&[&[0, 1]])]);
        let mb = minimal_basis(&p, BasisSide::Right, Tol::default()).unwrap();
        assert_eq!(mb.indices, vec![1]);
        assert!(
            mb.vectors[0].same_poly(&vec_poly(vec![vec![r(1), r(0)], vec![r(0), r(-1)]]))
                || mb.vectors[0].same_poly(&vec_poly(vec![vec![r(0), r(1)], vec![r(-1), r(0)]]))
        );
        certify_minimal(&p, &mb, Tol::default()).unwrap();
    }

    #[test]
    fn example2_bases() {
        let p = example2();
        let t = Tol::default();
        let right = minimal_basis(&p, BasisSide::Right, t).unwrap();
        assert_eq!(right.indices, vec![1]);
        assert!(right.vectors[0].same_poly(&vec_poly(vec![vec![r(1), r(0)], vec![r(0), r(-1)]])));
        let left = minimal_basis(&p, BasisSide::Left, t).unwrap();
        assert_eq!(left.indices, vec![0, 1]);
        assert!(left.vectors[0].same_poly(&vec_poly(vec![vec![r(0), r(0), r(1)]])));
        assert!(left.vectors[1].same_poly(&vec_poly(vec![vec![r(1), r(0), r(0)], vec![r(0), r(-1), r(0)]])));
        certify_minimal(&p, &right, t).unwrap();
        certify_minimal(&p, &left, t).unwrap();
    }

    #[test]
    fn nonsingular_has_empty_bases() {
        let p = MatPoly::constant(int_mat::<Rat>(&[&[1, 2], &[3, 4]]));
        assert!(minimal_basis(&p, BasisSide::Right, Tol::default()).unwrap().is_empty());
        assert!(minimal_basis(&p, BasisSide::Left, Tol::default()).unwrap().is_empty());
    }

    #[test]
    fn embed_example() {
        let x = vec_poly(vec![vec![r(1), r(0)], vec![r(0), r(-1)]]);
        let e = embed_right(&x, 2);
        let want =
            vec_poly(vec![vec![r(0), r(0), r(1), r(0)], vec![r(1), r(0), r(0), r(-1)], vec![r(0), r(-1), r(0), r(0)]]);
        assert!(e.same_poly(&want));
        assert!(embed_right(&MatPoly::<Rat>::zero(2, 1, 0), 3).is_zero());
    }

    #[test]
    fn companion_recovery_example2() {
        let p = example2();
        let t = Tol::default();
        let l = companion_c1g(&p).unwrap();
        let right = recover_minimal(Source::Member(&l), &p, BasisSide::Right, RecoveryMode::GlinL1, t).unwrap();
        assert_eq!(right.indices, vec![1]);
        let lmb = minimal_basis(&l.pencil.to_poly(), BasisSide::Left, t).unwrap();
        assert_eq!(lmb.indices, vec![0, 0, 1]);
        let left = recover_minimal(Source::Member(&l), &p, BasisSide::Left, RecoveryMode::GlinL1, t).unwrap();
        assert_eq!(left.indices, vec![0, 1]);
    }

    #[test]
    fn special_basis_leads_with_kernel() {
        let p = example2();
        let t = Tol::default();
        let l = companion_c1g(&p).unwrap();
        let tr = trim(&l, None, t).unwrap();
        let sb = special_left_basis(&l, &tr, t).unwrap();
        assert_eq!(sb.indices, vec![0, 0, 1]);
        let proj = project_ansatz(&l.ansatz, &sb.vectors[0], 3).unwrap();
        assert!(proj.is_zero());
    }

    #[test]
    fn lift_round_trip() {
        let p = example2();
        let t = Tol::default();
        let l = companion_c1g(&p).unwrap();
        let tr = trim(&l, None, t).unwrap();
        let lp = l.pencil.to_poly();
        for q in
            [vec_poly(vec![vec![r(0), r(0), r(1)]]), vec_poly(vec![vec![r(1), r(0), r(0)], vec![r(0), r(-1), r(0)]])]
        {
            let y = lift_left(&q, &tr, &p, t).unwrap();
            assert_eq!(vec_degree(&y), vec_degree(&q));
            assert!(project_ansatz(&l.ansatz, &y, 3).unwrap().same_poly(&q.trimmed()));
            assert!(lp.transpose().mul(&y).unwrap().is_zero());
        }
        assert!(lift_left(&vec_poly(vec![vec![r(1), r(0), r(0)]]), &tr, &p, t).is_err());
    }

    #[test]
    fn trimmed_and_transposed_recovery() {
        let p = example2();
        let t = Tol::default();
        let tr = trim(&companion_c1g(&p).unwrap(), None, t).unwrap();
        let left = recover_minimal(Source::Trimmed(&tr), &p, BasisSide::Left, RecoveryMode::TrimmedL1, t).unwrap();
        assert_eq!(left.indices, vec![0, 1]);
        let right = recover_minimal(Source::Trimmed(&tr), &p, BasisSide::Right, RecoveryMode::TrimmedL1, t).unwrap();
        assert_eq!(right.indices, vec![1]);

        let pt = p.transpose();
        let l2 = companion_c2g(&pt).unwrap();
        let right2 = recover_minimal(Source::Member(&l2), &pt, BasisSide::Right, RecoveryMode::GlinL2, t).unwrap();
        assert_eq!(right2.indices, vec![0, 1]);
        let left2 = recover_minimal(Source::Member(&l2), &pt, BasisSide::Left, RecoveryMode::GlinL2, t).unwrap();
        assert_eq!(left2.indices, vec![1]);
        let tr2 = trim(&l2, None, t).unwrap();
        let right3 = recover_minimal(Source::Trimmed(&tr2), &pt, BasisSide::Right, RecoveryMode::TrimmedL2, t).unwrap();
        assert_eq!(right3.indices, vec![0, 1]);
        assert!(recover_minimal(Source::Trimmed(&tr2), &pt, BasisSide::Right, RecoveryMode::TrimmedL1, t).is_err());
    }
}
