//! Dense linear-algebra kernels: exact elimination over the rationals and
//! SVD/QR based routines for doubles.

use nalgebra::DMatrix;

use crate::matrix::Mat;
use crate::scalar::{Scalar, Tol};

/// Reduced row echelon form with the pivot columns, using exact zero tests.
pub fn rref<T: Scalar>(a: &Mat<T>) -> (Mat<T>, Vec<usize>) {
    let mut r = a.clone();
    let (rows, cols) = r.shape();
    let mut pivots = Vec::new();
    let mut pr = 0;
    for c in 0..cols {
        if pr == rows {
            break;
        }
        let Some(p) = (pr..rows).find(|&i| !r[(i, c)].is_zero()) else {
            continue;
        };
        r.swap_rows(pr, p);
        let inv = T::one() / r[(pr, c)].clone();
        for j in c..cols {
            let v = r[(pr, j)].clone() * inv.clone();
            r[(pr, j)] = v;
        }
        for i in 0..rows {
            if i == pr || r[(i, c)].is_zero() {
                continue;
            }
            let f = r[(i, c)].clone();
            for j in c..cols {
                if r[(pr, j)].is_zero() {
                    continue;
                }
                let v = r[(i, j)].clone() - f.clone() * r[(pr, j)].clone();
                r[(i, j)] = v;
            }
        }
        pivots.push(c);
        pr += 1;
    }
    (r, pivots)
}

/// Nullspace basis ordered by free column; each vector has a unit entry at its free column.
pub fn exact_nullspace<T: Scalar>(a: &Mat<T>) -> Mat<T> {
    let (r, pivots) = rref(a);
    let cols = a.cols();
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut out = Mat::zeros(cols, free.len());
    for (k, &f) in free.iter().enumerate() {
        out[(f, k)] = T::one();
        for (i, &p) in pivots.iter().enumerate() {
            out[(p, k)] = -r[(i, f)].clone();
        }
    }
    out
}

pub fn exact_inverse<T: Scalar>(a: &Mat<T>) -> Option<Mat<T>> {
    let n = a.rows();
    if n != a.cols() {
        return None;
    }
    let aug = Mat::hstack(&[a, &Mat::identity(n)]);
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(r.submatrix(0, n, n, n))
}

pub fn exact_det<T: Scalar>(a: &Mat<T>) -> T {
    let n = a.rows();
    assert_eq!(n, a.cols(), "determinant of a non-square matrix");
    let mut m = a.clone();
    let mut det = T::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
            return T::zero();
        };
        if p != c {
            m.swap_rows(p, c);
            det = -det;
        }
        let piv = m[(c, c)].clone();
        det = det * piv.clone();
        for i in c + 1..n {
            if m[(i, c)].is_zero() {
                continue;
            }
            let f = m[(i, c)].clone() / piv.clone();
            for j in c..n {
                let v = m[(i, j)].clone() - f.clone() * m[(c, j)].clone();
                m[(i, j)] = v;
            }
        }
    }
    det
}

/// Moore–Penrose solution via the full-rank factorization `A = C·R`.
pub fn exact_min_norm_solve<T: Scalar>(a: &Mat<T>, b: &Mat<T>) -> Mat<T> {
    assert_eq!(a.rows(), b.rows(), "min-norm solve row mismatch");
    let (r, pivots) = rref(a);
    let rk = pivots.len();
    if rk == 0 {
        return Mat::zeros(a.cols(), b.cols());
    }
    let rr = r.submatrix(0, 0, rk, a.cols());
    let c = a.select_cols(&pivots);
    let ct = c.transpose();
    let rt = rr.transpose();
    let ctc_inv = exact_inverse(&(&ct * &c)).expect("pivot columns are independent");
    let rrt_inv = exact_inverse(&(&rr * &rt)).expect("rref rows are independent");
    let y = &ctc_inv * &(&ct * b);
    &rt * &(&rrt_inv * &y)
}

pub fn to_na(a: &Mat<f64>) -> DMatrix<f64> {
    DMatrix::from_row_slice(a.rows(), a.cols(), a.data())
}

pub fn from_na(a: &DMatrix<f64>) -> Mat<f64> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

/// All `min(r,c)` singular values in descending order.
pub fn singular_values(a: &Mat<f64>) -> Vec<f64> {
    if a.rows() == 0 || a.cols() == 0 {
        return Vec::new();
    }
    let sv = to_na(a).singular_values();
    let mut v: Vec<f64> = sv.iter().copied().collect();
    v.sort_by(|x, y| y.total_cmp(x));
    v
}

pub fn sigma_min(a: &Mat<f64>) -> f64 {
    singular_values(a).last().copied().unwrap_or(0.0)
}

pub fn sigma_max(a: &Mat<f64>) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

/// Spectral condition number; infinite for singular input.
pub fn cond2(a: &Mat<f64>) -> f64 {
    let sv = singular_values(a);
    match (sv.first(), sv.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    }
}

/// Rank decision details for the float path.
#[derive(Clone, Debug)]
pub struct RankInfo {
    pub rank: usize,
    pub threshold: f64,
    /// Some singular value lies within a factor 10 of the threshold.
    pub borderline: bool,
}

pub fn float_rank_info(a: &Mat<f64>, tol: Tol) -> RankInfo {
    let sv = singular_values(a);
    let smax = sv.first().copied().unwrap_or(0.0);
    let threshold = tol.rank_threshold(a.rows(), a.cols(), smax);
    if smax == 0.0 {
        return RankInfo { rank: 0, threshold, borderline: false };
    }
    let rank = sv.iter().filter(|&&s| s > threshold).count();
    let borderline = sv.iter().any(|&s| s > threshold / 10.0 && s < threshold * 10.0);
    RankInfo { rank, threshold, borderline }
}

pub fn float_rank(a: &Mat<f64>, tol: Tol) -> usize {
    float_rank_info(a, tol).rank
}

/// Full SVD `A = U·Σ·Vᵀ` with square `U` and `V`; singular values descending.
pub fn full_svd(a: &Mat<f64>) -> (Mat<f64>, Vec<f64>, Mat<f64>) {
    let (r, c) = a.shape();
    let n = r.max(c);
    let mut padded = Mat::zeros(n, n);
    padded.set_block(0, 0, a);
    let svd = to_na(&padded).svd(true, true);
    let u = svd.u.expect("u requested");
    let vt = svd.v_t.expect("v_t requested");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let sv: Vec<f64> = order.iter().take(r.min(c)).map(|&i| svd.singular_values[i]).collect();
    let uu = Mat::from_fn(r, r, |i, j| u[(i, order[j])]);
    let vv = Mat::from_fn(c, c, |i, j| vt[(order[j], i)]);
    (uu, sv, vv)
}

pub fn float_nullspace(a: &Mat<f64>, tol: Tol) -> Mat<f64> {
    let (_, c) = a.shape();
    if c == 0 {
        return Mat::zeros(0, 0);
    }
    if a.rows() == 0 {
        return Mat::identity(c);
    }
    let info = float_rank_info(a, tol);
    let (_, _, v) = full_svd(a);
    let idx: Vec<usize> = (info.rank..c).collect();
    v.select_cols(&idx)
}

pub fn float_inverse(a: &Mat<f64>, tol: Tol) -> Option<Mat<f64>> {
    if a.rows() != a.cols() {
        return None;
    }
    if a.rows() == 0 {
        return Some(Mat::zeros(0, 0));
    }
    if float_rank(a, tol) < a.rows() {
        return None;
    }
    to_na(a).try_inverse().map(|m| from_na(&m))
}

pub fn float_min_norm_solve(a: &Mat<f64>, b: &Mat<f64>, tol: Tol) -> Mat<f64> {
    assert_eq!(a.rows(), b.rows(), "min-norm solve row mismatch");
    let (r, c) = a.shape();
    if r == 0 || c == 0 {
        return Mat::zeros(c, b.cols());
    }
    let (u, sv, v) = full_svd(a);
    let smax = sv.first().copied().unwrap_or(0.0);
    let thr = tol.rank_threshold(r, c, smax);
    let ut_b = &u.transpose() * b;
    let mut y = Mat::zeros(c, b.cols());
    for (i, &s) in sv.iter().enumerate() {
        if s > thr {
            for j in 0..b.cols() {
                y[(i, j)] = ut_b[(i, j)] / s;
            }
        }
    }
    &v * &y
}

/// Householder QR with column pivoting: `A·Π = Q·R`, `Q` square orthogonal.
/// Returns `(Q, R, perm)` where column `j` of `A·Π` is column `perm[j]` of `A`.
pub fn qr_pivoted(a: &Mat<f64>) -> (Mat<f64>, Mat<f64>, Vec<usize>) {
    let (m, n) = a.shape();
    let mut r = a.clone();
    let mut q = Mat::<f64>::identity(m);
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..m.min(n) {
        let norms: Vec<f64> = (k..n).map(|j| (k..m).map(|i| r[(i, j)] * r[(i, j)]).sum::<f64>()).collect();
        let (best, _) = norms.iter().enumerate().fold((0, -1.0), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
        let p = k + best;
        r.swap_cols(k, p);
        perm.swap(k, p);
        let x: Vec<f64> = (k..m).map(|i| r[(i, k)]).collect();
        let alpha = x.iter().map(|t| t * t).sum::<f64>().sqrt();
        if alpha == 0.0 {
            continue;
        }
        let sign = if x[0] >= 0.0 { 1.0 } else { -1.0 };
        let mut u = x.clone();
        u[0] += sign * alpha;
        let unorm2: f64 = u.iter().map(|t| t * t).sum();
        // apply H = I - 2uuᵀ/(uᵀu) to R (left) and accumulate Q = Q·H
        for j in 0..n {
            let dot: f64 = (k..m).map(|i| u[i - k] * r[(i, j)]).sum();
            let f = 2.0 * dot / unorm2;
            for i in k..m {
                r[(i, j)] -= f * u[i - k];
            }
        }
        for i in 0..m {
            let dot: f64 = (k..m).map(|l| q[(i, l)] * u[l - k]).sum();
            let f = 2.0 * dot / unorm2;
            for l in k..m {
                q[(i, l)] -= f * u[l - k];
            }
        }
        for i in k + 1..m {
            r[(i, k)] = 0.0;
        }
    }
    (q, r, perm)
}

/// Gram–Schmidt on the columns without normalization; zero columns are dropped.
pub fn orthogonalize<T: Scalar>(a: &Mat<T>) -> Mat<T> {
    let mut cols: Vec<Vec<T>> = Vec::new();
    for j in 0..a.cols() {
        let mut v = a.col(j);
        for q in &cols {
            let qq = dot(q, q);
            let f = dot(q, &v) / qq;
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi = vi.clone() - f.clone() * qi.clone();
            }
        }
        let keep = if T::is_exact() {
            v.iter().any(|x| !x.is_zero())
        } else {
            dot(&v, &v).to_f64().sqrt() > 1e-12 * (dot(&a.col(j), &a.col(j)).to_f64().sqrt())
        };
        if keep {
            cols.push(v);
        }
    }
    Mat::from_fn(a.rows(), cols.len(), |i, j| cols[j][i].clone())
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Flips each column so that its largest-magnitude entry is positive; returns the signs.
pub fn normalize_column_signs<T: Scalar>(q: &mut Mat<T>) -> Vec<T> {
    let mut signs = Vec::with_capacity(q.cols());
    for j in 0..q.cols() {
        let mut best = 0;
        let mut bestv = -1.0;
        for i in 0..q.rows() {
            let v = q[(i, j)].to_f64().abs();
            if v > bestv + 1e-300 {
                bestv = v;
                best = i;
            }
        }
        let neg = q.rows() > 0 && q[(best, j)].to_f64() < 0.0;
        let s = if neg { -T::one() } else { T::one() };
        if neg {
            for i in 0..q.rows() {
                let v = -q[(i, j)].clone();
                q[(i, j)] = v;
            }
        }
        signs.push(s);
    }
    signs
}

/// Left nullspace basis: columns `y` with `yᵀ·A = 0`.
pub fn left_nullspace<T: Scalar>(a: &Mat<T>, tol: Tol) -> Mat<T> {
    T::nullspace(&a.transpose(), tol)
}

pub fn is_identity<T: Scalar>(a: &Mat<T>) -> bool {
    a.rows() == a.cols()
        && (0..a.rows()).all(|i| (0..a.cols()).all(|j| if i == j { a[(i, j)].is_one() } else { a[(i, j)].is_zero() }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int_mat, rat, Rat};

    #[test]
    fn rref_rank_and_nullspace() {
        let a: Mat<Rat> = int_mat(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(Rat::rank(&a, Tol::default()), 2);
        let n = exact_nullspace(&a);
        assert_eq!(n.cols(), 1);
        assert!((&a * &n).is_zero());
    }

    #[test]
    fn inverse_and_det() {
        let a: Mat<Rat> = int_mat(&[&[2, 1], &[1, 1]]);
        let inv = exact_inverse(&a).unwrap();
        assert!(is_identity(&(&a * &inv)));
        assert_eq!(exact_det(&a), rat(1, 1));
        let s: Mat<Rat> = int_mat(&[&[1, 2], &[2, 4]]);
        assert!(exact_inverse(&s).is_none());
        assert_eq!(exact_det(&s), rat(0, 1));
    }

    #[test]
    fn min_norm_matches_pseudoinverse() {
        // x + y = 2 has minimum-norm solution (1, 1)
        let a: Mat<Rat> = int_mat(&[&[1, 1]]);
        let b: Mat<Rat> = int_mat(&[&[2]]);
        let x = exact_min_norm_solve(&a, &b);
        assert_eq!(x, int_mat(&[&[1], &[1]]));
        let xf = float_min_norm_solve(&to_f(&a), &to_f(&b), Tol::default());
        assert!((xf[(0, 0)] - 1.0).abs() < 1e-14 && (xf[(1, 0)] - 1.0).abs() < 1e-14);
    }

    fn to_f(a: &Mat<Rat>) -> Mat<f64> {
        a.map(|x| x.to_f64())
    }

    #[test]
    fn float_nullspace_of_wide_matrix() {
        let a = Mat::from_rows(vec![vec![1.0, 2.0, 3.0]]);
        let n = float_nullspace(&a, Tol::default());
        assert_eq!(n.cols(), 2);
        assert!(crate::scalar::frob(&(&a * &n)) < 1e-14);
    }

    #[test]
    fn pivoted_qr_reconstructs() {
        let a = Mat::from_rows(vec![vec![1.0, 4.0], vec![2.0, 5.0], vec![3.0, 6.0]]);
        let (q, r, perm) = qr_pivoted(&a);
        let ap = a.select_cols(&perm);
        let diff = &(&q * &r) - &ap;
        assert!(crate::scalar::frob(&diff) < 1e-12);
        assert!(crate::scalar::frob(&(&(&q.transpose() * &q) - &Mat::identity(3))) < 1e-12);
        assert_eq!(r[(1, 0)], 0.0);
    }
}
