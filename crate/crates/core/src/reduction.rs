//! Z-blocks, Z-rank, unimodular witnesses and trimming into strong linearizations.

use crate::error::{Error, Result};
use crate::linalg;
use crate::matpoly::{block_rect_identity, constant_det, lambda_kp, MatPoly, Pencil};
use crate::matrix::Mat;
use crate::scalar::{Scalar, Tol};
use crate::spaces::{AnsatzPencil, Side};

/// Returns `(M, α)` with `M·v = α·e₁`, `M` nonsingular and `α ≠ 0`.
///
/// `M = I` when `v ∥ e₁`. Otherwise, exact path: `M = [[1, 0], [−v₂…−v_k, v₁ I]]`,
/// preceded by a row swap when `v₁ = 0`; float path: a Householder reflector with `α = ‖v‖₂`.
pub fn reflector_for<T: Scalar>(v: &[T]) -> Result<(Mat<T>, T)> {
    let k = v.len();
    let Some(p) = v.iter().position(|x| !x.is_zero()) else {
        return Err(Error::pre("ansatz vector is zero"));
    };
    if v[1..].iter().all(|x| x.is_zero()) {
        return Ok((Mat::identity(k), v[0].clone()));
    }
    if T::is_exact() {
        let mut swap = Mat::<T>::identity(k);
        swap.swap_rows(0, p);
        let mut w = v.to_vec();
        w.swap(0, p);
        let mut m0 = Mat::<T>::identity(k);
        for i in 1..k {
            m0[(i, 0)] = -w[i].clone();
            m0[(i, i)] = w[0].clone();
        }
        return Ok((&m0 * &swap, w[0].clone()));
    }
    let vf: Vec<f64> = v.iter().map(|x| x.to_f64()).collect();
    let norm = vf.iter().map(|x| x * x).sum::<f64>().sqrt();
    let tail: f64 = vf[1..].iter().map(|x| x * x).sum();
    let mut u = vf.clone();
    u[0] = if vf[0] > 0.0 { -tail / (vf[0] + norm) } else { vf[0] - norm };
    let uu: f64 = u.iter().map(|x| x * x).sum();
    let h = Mat::from_fn(k, k, |i, j| {
        let d = if i == j { 1.0 } else { 0.0 };
        T::from_f64(d - 2.0 * u[i] * u[j] / uu)
    });
    Ok((h, T::from_f64(norm)))
}

/// Checks `M·v = α·e₁` for a user-supplied `M`; returns `α`.
pub fn alpha_for<T: Scalar>(m: &Mat<T>, v: &[T], tol: Tol) -> Result<T> {
    if m.shape() != (v.len(), v.len()) {
        return Err(Error::dim("M must be k x k"));
    }
    let mv = m * &Mat::column(v.to_vec());
    let alpha = mv[(0, 0)].clone();
    let tail = mv.submatrix(1, 0, v.len() - 1, 1);
    let scale = linalg::dot(v, v).to_f64().sqrt();
    if alpha.is_zero() || !T::near_zero(&tail, scale, tol) {
        return Err(Error::pre("M does not map the ansatz vector to a nonzero multiple of e1"));
    }
    if T::inverse(m, tol).is_none() {
        return Err(Error::pre("M is singular"));
    }
    Ok(alpha)
}

/// Blocks of `(M ⊗ I_m)·L(λ) = λ[[αA_k, X₁₂], [0, −Z]] + [[Y₁₁, αA₀], [Z, 0]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZData<T> {
    pub m_mat: Mat<T>,
    pub alpha: T,
    pub z: Mat<T>,
    pub x12: Mat<T>,
    pub y11: Mat<T>,
    /// `(M ⊗ I_m)·L`.
    pub lhat: Pencil<T>,
}

/// Z-block data of an L1 member for a given admissible `M`.
pub fn z_data<T: Scalar>(l: &AnsatzPencil<T>, m_mat: &Mat<T>, alpha: &T, tol: Tol) -> Result<ZData<T>> {
    if l.side != Side::L1 {
        return Err(Error::Invalid("z_data expects an L1 member; transpose L2 members first".into()));
    }
    let (m, n, k) = (l.m, l.n, l.k);
    let lhat = l.pencil.left_mul(&m_mat.kron(&Mat::identity(m)));
    let rows = (k - 1) * m;
    let z = lhat.y.submatrix(m, 0, rows, (k - 1) * n);
    let x_ll = lhat.x.submatrix(m, 0, rows, n);
    let y_lr = lhat.y.submatrix(m, (k - 1) * n, rows, n);
    let x_lr = lhat.x.submatrix(m, n, rows, (k - 1) * n);
    let scale = lhat.frob_norm();
    if !T::near_zero(&x_ll, scale, tol) || !T::near_zero(&y_lr, scale, tol) {
        return Err(Error::structure("lower blocks of (M⊗I)L carry entries outside the Z pattern"));
    }
    if !T::near_zero(&(&x_lr + &z), scale, tol) {
        return Err(Error::structure("lower-right block of (M⊗I)X is not −Z"));
    }
    Ok(ZData {
        m_mat: m_mat.clone(),
        alpha: alpha.clone(),
        x12: lhat.x.submatrix(0, n, m, (k - 1) * n),
        y11: lhat.y.submatrix(0, 0, m, (k - 1) * n),
        z,
        lhat,
    })
}

/// The Z-block; for an L2 member this is the transpose of the Z-block of `Lᵀ ∈ L1(Pᵀ)`.
pub fn z_block<T: Scalar>(l: &AnsatzPencil<T>, m_mat: &Mat<T>, alpha: &T, tol: Tol) -> Result<Mat<T>> {
    match l.side {
        Side::L1 => Ok(z_data(l, m_mat, alpha, tol)?.z),
        Side::L2 => Ok(z_data(&l.transposed(), m_mat, alpha, tol)?.z.transpose()),
    }
}

fn l1_view<T: Scalar>(l: &AnsatzPencil<T>) -> AnsatzPencil<T> {
    match l.side {
        Side::L1 => l.clone(),
        Side::L2 => l.transposed(),
    }
}

/// Rank of the Z-block using the default reflector.
pub fn z_rank<T: Scalar>(l: &AnsatzPencil<T>, tol: Tol) -> Result<usize> {
    let (m_mat, _) = reflector_for(&l.ansatz)?;
    z_rank_with(l, &m_mat, tol)
}

/// Rank of the Z-block for a caller-chosen admissible `M`.
pub fn z_rank_with<T: Scalar>(l: &AnsatzPencil<T>, m_mat: &Mat<T>, tol: Tol) -> Result<usize> {
    let alpha = alpha_for(m_mat, &l.ansatz, tol)?;
    let z = z_block(l, m_mat, &alpha, tol)?;
    Ok(T::rank(&z, tol))
}

pub fn full_z_rank<T: Scalar>(l: &AnsatzPencil<T>, tol: Tol) -> Result<bool> {
    Ok(z_rank(l, tol)? == (l.k - 1) * l.m.min(l.n))
}

/// Unimodular `E(λ)`, `F(λ)` with `E·L·F = diag(P, I_{k−1} ⊗ I_{m,n})`.
#[derive(Clone, Debug, PartialEq)]
pub struct Witnesses<T> {
    pub e: MatPoly<T>,
    pub f: MatPoly<T>,
    pub det_e: T,
    pub det_f: T,
}

/// `diag(P, I_{k−1} ⊗ I_{m,n})`.
pub fn glin_target<T: Scalar>(p: &MatPoly<T>) -> MatPoly<T> {
    let (m, n, k) = (p.rows(), p.cols(), p.grade());
    MatPoly::block_diag(p, &MatPoly::constant(block_rect_identity(k - 1, m, n)))
}

/// Builds the witnesses from the constructive proof and verifies them.
pub fn g_lin_witnesses<T: Scalar>(l: &AnsatzPencil<T>, p: &MatPoly<T>, tol: Tol) -> Result<Witnesses<T>> {
    if l.side == Side::L2 {
        let w = g_lin_witnesses(&l.transposed(), &p.transpose(), tol)?;
        let out = Witnesses { e: w.f.transpose(), f: w.e.transpose(), det_e: w.det_f, det_f: w.det_e };
        verify_witnesses(&l.pencil, p, &out.e, &out.f, tol)?;
        return Ok(out);
    }
    let (m, n, k) = (l.m, l.n, l.k);
    if m < n {
        return Err(Error::pre("L1 witnesses need m >= n; use the L2 route for wide polynomials"));
    }
    let (m_mat, alpha) = reflector_for(&l.ansatz)?;
    let zd = z_data(l, &m_mat, &alpha, tol)?;
    let zn = (k - 1) * n;
    if T::rank(&zd.z, tol) < zn {
        return Err(Error::pre("Z is rank deficient"));
    }
    let lhat = zd.lhat.to_poly();

    let f = chain_f::<T>(n, k, &alpha);
    let lf = lhat.mul(&f)?;
    let w_poly = lf.submatrix(0, n, m, zn);
    let lower_left = lf.submatrix(m, 0, (k - 1) * m, n);
    let lower_right = lf.submatrix(m, n, (k - 1) * m, zn);
    let scale = lhat.frob_norm();
    if !lower_left.coeffs().iter().all(|c| T::near_zero(c, scale, tol))
        || !lower_right.approx_eq(&MatPoly::constant(zd.z.clone()), tol)
    {
        return Err(Error::verify("column reduction did not produce [[P, W], [0, Z]]"));
    }

    let zt = zd.z.transpose();
    let ztz_inv = T::inverse(&(&zt * &zd.z), tol).ok_or_else(|| Error::pre("ZᵀZ is singular"))?;
    let z_pinv = &ztz_inv * &zt;
    let elim = w_poly.right_mul_const(&z_pinv).neg();
    let e1 = MatPoly::vstack(&[
        &MatPoly::hstack(&[&MatPoly::constant(Mat::identity(m)), &elim]),
        &MatPoly::hstack(&[
            &MatPoly::constant(Mat::zeros((k - 1) * m, m)),
            &MatPoly::constant(Mat::identity((k - 1) * m)),
        ]),
    ]);

    let eprime = completion_for_rect_identity(&zd.z, m, n, k, tol)?;
    let eprime_inv = T::inverse(&eprime, tol).ok_or_else(|| Error::verify("completion of Z is singular"))?;
    let left = Mat::block_diag(&Mat::identity(m), &eprime_inv);
    let e = e1.left_mul_const(&left).right_mul_const(&m_mat.kron(&Mat::identity(m)));

    verify_witnesses(&l.pencil, p, &e, &f, tol)?;
    let det_e = constant_det(&e).ok_or_else(|| Error::verify("det E is not a nonzero constant"))?;
    let det_f = constant_det(&f).ok_or_else(|| Error::verify("det F is not a nonzero constant"))?;
    Ok(Witnesses { e, f, det_e, det_f })
}

/// `G·T₁⋯T_{k−2}·Π·diag(I_n/α, I)`: `G` replaces the last block column of the identity
/// by `Λ_k ⊗ I_n`, `T_i` adds `λ·(block column i−1)` to block column `i`, and `Π`
/// moves the last block column to the front.
fn chain_f<T: Scalar>(n: usize, k: usize, alpha: &T) -> MatPoly<T> {
    let kn = k * n;
    let mut g = MatPoly::constant(Mat::identity(kn)).with_grade(k - 1).expect("grade raise");
    let lam = lambda_kp::<T>(k, n);
    let idx: Vec<usize> = (0..(k - 1) * n).collect();
    g = MatPoly::hstack(&[&g.select_cols(&idx), &lam]);
    let mut f = g;
    for i in 1..k - 1 {
        let mut x = Mat::zeros(kn, kn);
        x.set_block((i - 1) * n, i * n, &Mat::identity(n));
        let t = MatPoly::linear(x, Mat::identity(kn));
        f = f.mul(&t).expect("square factors");
    }
    let perm: Vec<usize> = ((k - 1) * n..kn).chain(0..(k - 1) * n).collect();
    f = f.select_cols(&perm);
    let mut scale = Mat::<T>::identity(kn);
    let inv_alpha = T::one() / alpha.clone();
    for i in 0..n {
        scale[(i, i)] = inv_alpha.clone();
    }
    f.right_mul_const(&scale).trimmed()
}

/// Constant `E'` with `E'·(I_{k−1} ⊗ I_{m,n}) = Z`: the columns hit by the rectangular
/// identity are the columns of `Z`, the rest span its left nullspace.
fn completion_for_rect_identity<T: Scalar>(z: &Mat<T>, m: usize, n: usize, k: usize, tol: Tol) -> Result<Mat<T>> {
    let rows = (k - 1) * m;
    let null = linalg::orthogonalize(&linalg::left_nullspace(z, tol));
    if null.cols() != rows - (k - 1) * n {
        return Err(Error::pre("Z does not have full column rank"));
    }
    let mut e = Mat::zeros(rows, rows);
    let mut next = 0;
    for i in 0..k - 1 {
        for r in 0..m {
            let col = if r < n {
                z.submatrix(0, i * n + r, rows, 1)
            } else {
                next += 1;
                null.submatrix(0, next - 1, rows, 1)
            };
            e.set_block(0, i * m + r, &col);
        }
    }
    Ok(e)
}

/// Checks `E·L·F = diag(P, I_{k−1} ⊗ I_{m,n})` and that `det E`, `det F` are nonzero constants.
pub fn verify_witnesses<T: Scalar>(
    l: &Pencil<T>,
    p: &MatPoly<T>,
    e: &MatPoly<T>,
    f: &MatPoly<T>,
    tol: Tol,
) -> Result<()> {
    let prod = e.mul(&l.to_poly())?.mul(f)?;
    let target = glin_target(p);
    let ok = if T::is_exact() { prod.same_poly(&target) } else { prod.trimmed().approx_eq(&target.trimmed(), tol) };
    if !ok {
        return Err(Error::verify("E·L·F differs from diag(P, I_{k-1} ⊗ I_{m,n})"));
    }
    if constant_det(e).is_none() {
        return Err(Error::verify("det E is not a nonzero constant"));
    }
    if constant_det(f).is_none() {
        return Err(Error::verify("det F is not a nonzero constant"));
    }
    Ok(())
}

/// Every factor produced by trimming. Fields describe the L1 member that was
/// trimmed; for an L2 input that is `Lᵀ ∈ L1(Pᵀ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrimResult<T> {
    pub side: Side,
    /// Sizes `(m, n, k)` in the L1 orientation.
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub ansatz: Vec<T>,
    pub m_mat: Mat<T>,
    pub alpha: T,
    pub z: Mat<T>,
    /// `Z = Q₁·R̃`.
    pub q1: Mat<T>,
    /// Basis of the left nullspace of `Z` (orthogonal columns).
    pub q2: Mat<T>,
    /// Rows `qdᵀ` of the default `D`; equals `Q₁` on the float path and the
    /// unnormalized orthogonal factor on the exact path.
    pub qd: Mat<T>,
    pub r_tilde: Mat<T>,
    pub x12: Mat<T>,
    pub y11: Mat<T>,
    pub d: Mat<T>,
    pub d_tilde: Mat<T>,
    pub lt: Pencil<T>,
    pub lhat_t: Pencil<T>,
    pub kcore: Pencil<T>,
    pub default_d: bool,
}

impl<T: Scalar> TrimResult<T> {
    pub fn to_float(&self) -> TrimResult<f64> {
        let f = |a: &Mat<T>| a.map(|x| x.to_f64());
        TrimResult {
            side: self.side,
            m: self.m,
            n: self.n,
            k: self.k,
            ansatz: self.ansatz.iter().map(|x| x.to_f64()).collect(),
            m_mat: f(&self.m_mat),
            alpha: self.alpha.to_f64(),
            z: f(&self.z),
            q1: f(&self.q1),
            q2: f(&self.q2),
            qd: f(&self.qd),
            r_tilde: f(&self.r_tilde),
            x12: f(&self.x12),
            y11: f(&self.y11),
            d: f(&self.d),
            d_tilde: f(&self.d_tilde),
            lt: self.lt.to_float(),
            lhat_t: self.lhat_t.to_float(),
            kcore: self.kcore.to_float(),
            default_d: self.default_d,
        }
    }

    /// `L_t` in the orientation of the original input.
    pub fn lt_oriented(&self) -> Pencil<T> {
        match self.side {
            Side::L1 => self.lt.clone(),
            Side::L2 => self.lt.transpose(),
        }
    }

    /// Top `m` rows of `L̂_t`: `λ[αA_k, X₁₂] + [Y₁₁, αA₀]`.
    pub fn a_block(&self) -> Pencil<T> {
        self.lhat_t.submatrix(0, 0, self.m, self.k * self.n)
    }

    /// Bottom `(k−1)n` rows of `L̂_t`: `λ[0, −R̃] + [R̃, 0]`.
    pub fn b_block(&self) -> Pencil<T> {
        self.lhat_t.submatrix(self.m, 0, (self.k - 1) * self.n, self.k * self.n)
    }
}

/// `λ[0 | −I] + [I | 0]`, the constant-free Kronecker part with `R̃ = I`.
pub fn kron_lower<T: Scalar>(n: usize, k: usize) -> Pencil<T> {
    let zn = (k - 1) * n;
    let mut x = Mat::zeros(zn, k * n);
    let mut y = Mat::zeros(zn, k * n);
    x.set_block(0, n, &Mat::<T>::identity(zn).neg_mat());
    y.set_block(0, 0, &Mat::identity(zn));
    Pencil { x, y }
}

struct Qr<T> {
    q1: Mat<T>,
    q2: Mat<T>,
    qd: Mat<T>,
}

fn qr_of_z<T: Scalar>(z: &Mat<T>, tol: Tol) -> Qr<T> {
    let rows = z.rows();
    if T::is_exact() {
        let mut qd = linalg::orthogonalize(z);
        linalg::normalize_column_signs(&mut qd);
        let mut q2 = linalg::orthogonalize(&linalg::left_nullspace(z, tol));
        linalg::normalize_column_signs(&mut q2);
        let q1 = Mat::from_fn(rows, qd.cols(), |i, j| {
            let nn = linalg::dot(&qd.col(j), &qd.col(j));
            qd[(i, j)].clone() / nn
        });
        Qr { q1, q2, qd }
    } else {
        let zf = z.map(|x| x.to_f64());
        let (q, _r, _perm) = linalg::qr_pivoted(&zf);
        let zr = T::rank(z, tol);
        let mut qf = q;
        linalg::normalize_column_signs(&mut qf);
        let q1: Mat<T> = qf.submatrix(0, 0, rows, zr).map(|x| T::from_f64(*x));
        let q2: Mat<T> = qf.submatrix(0, zr, rows, rows - zr).map(|x| T::from_f64(*x));
        Qr { qd: q1.clone(), q1, q2 }
    }
}

/// Trims a full-Z-rank member into `L_t = D·L`. `D = None` selects the default
/// `diag(I_m, Q*)·(M ⊗ I_m)` restricted to its first `m + (k−1)n` rows.
pub fn trim<T: Scalar>(l: &AnsatzPencil<T>, d: Option<&Mat<T>>, tol: Tol) -> Result<TrimResult<T>> {
    trim_with(l, d, None, tol)
}

/// As [`trim`] with an optional caller-chosen admissible `M`.
pub fn trim_with<T: Scalar>(
    l: &AnsatzPencil<T>,
    d: Option<&Mat<T>>,
    m_choice: Option<&Mat<T>>,
    tol: Tol,
) -> Result<TrimResult<T>> {
    let side = l.side;
    let l1 = l1_view(l);
    let d_l1 = d.map(|dm| if side == Side::L2 { dm.transpose() } else { dm.clone() });
    let (m, n, k) = (l1.m, l1.n, l1.k);
    if m < n {
        return Err(Error::pre(match side {
            Side::L1 => "trimming an L1 member needs m >= n",
            Side::L2 => "trimming an L2 member needs m <= n",
        }));
    }
    let (m_mat, alpha) = match m_choice {
        Some(mm) => (mm.clone(), alpha_for(mm, &l1.ansatz, tol)?),
        None => reflector_for(&l1.ansatz)?,
    };
    let zd = z_data(&l1, &m_mat, &alpha, tol)?;
    let zn = (k - 1) * n;
    if T::rank(&zd.z, tol) < zn {
        return Err(Error::pre("Z is rank deficient; trimming needs full Z-rank"));
    }
    let qr = qr_of_z(&zd.z, tol);
    let r_tilde = &qr.qd.transpose() * &zd.z;
    let mk = m_mat.kron(&Mat::identity(m));
    let default_d = Mat::block_diag(&Mat::identity(m), &qr.qd.transpose()).matmul(&mk);
    let rows = m + zn;

    let (dm, is_default) = match d_l1 {
        None => (default_d, true),
        Some(dm) => {
            if dm.shape() != (rows, k * m) {
                return Err(Error::dim(format!("D must be {}x{}", rows, k * m)));
            }
            let q2rows = Mat::hstack(&[&Mat::zeros(qr.q2.cols(), m), &qr.q2.transpose()]).matmul(&mk);
            let stacked = Mat::vstack(&[&dm, &q2rows]);
            if T::rank(&stacked, tol) < k * m {
                return Err(Error::pre("D stacked over [0 Q2*](M⊗I) is singular"));
            }
            (dm, false)
        }
    };

    let q2_check = Mat::hstack(&[&Mat::zeros(qr.q2.cols(), m), &qr.q2.transpose()]).matmul(&mk);
    let annihilated = l1.pencil.left_mul(&q2_check);
    if !T::near_zero(&annihilated.x, l1.pencil.frob_norm(), tol)
        || !T::near_zero(&annihilated.y, l1.pencil.frob_norm(), tol)
    {
        return Err(Error::verify("[0 Q2*](M⊗I)·L is not zero"));
    }

    let lt = l1.pencil.left_mul(&dm);
    let m_inv = T::inverse(&m_mat, tol).ok_or_else(|| Error::pre("M is singular"))?;
    let e1 = m_inv.kron(&Mat::identity(m)).matmul(&Mat::block_diag(&Mat::identity(m), &qr.q1));
    let d_tilde = &dm * &e1;
    if T::inverse(&d_tilde, tol).is_none() {
        return Err(Error::pre("D-tilde is singular"));
    }

    let a_block = zd.lhat.submatrix(0, 0, m, k * n);
    let lower = kron_lower::<T>(n, k);
    let b_block = lower.left_mul(&r_tilde);
    let lhat_t = Pencil { x: Mat::vstack(&[&a_block.x, &b_block.x]), y: Mat::vstack(&[&a_block.y, &b_block.y]) };
    if !lt.approx_eq(&lhat_t.left_mul(&d_tilde), tol) {
        return Err(Error::verify("L_t differs from D-tilde · L-hat_t"));
    }
    let kcore = Pencil { x: Mat::vstack(&[&a_block.x, &lower.x]), y: Mat::vstack(&[&a_block.y, &lower.y]) };

    let tr = TrimResult {
        side,
        m,
        n,
        k,
        ansatz: l1.ansatz.clone(),
        m_mat,
        alpha,
        z: zd.z,
        q1: qr.q1,
        q2: qr.q2,
        qd: qr.qd,
        r_tilde,
        x12: zd.x12,
        y11: zd.y11,
        d: dm,
        d_tilde,
        lt,
        lhat_t,
        kcore,
        default_d: is_default,
    };
    kronecker_core(&tr, tol)?;
    Ok(tr)
}

/// `K(λ)` with `L_t = D̃·diag(I_m, R̃)·K`, verified.
pub fn kronecker_core<T: Scalar>(tr: &TrimResult<T>, tol: Tol) -> Result<Pencil<T>> {
    let scale = Mat::block_diag(&Mat::identity(tr.m), &tr.r_tilde);
    let rebuilt = tr.kcore.left_mul(&(&tr.d_tilde * &scale));
    if !tr.lt.approx_eq(&rebuilt, tol) {
        return Err(Error::verify("L_t differs from D-tilde · diag(I, R-tilde) · K"));
    }
    Ok(tr.kcore.clone())
}
