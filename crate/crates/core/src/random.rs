//! Seeded generators for matrices, polynomials, ansatz members and planted
//! singular polynomials.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matpoly::{MatPoly, Pencil};
use crate::matrix::Mat;
use crate::scalar::Scalar;
use crate::spaces::{build_l1, build_l2, AnsatzPencil, Side};

/// Generator for `(seed, stream)`; streams give independent per-trial sequences.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub fn normal_mat<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Mat<f64> {
    Mat::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

pub fn normal_pencil<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Pencil<f64> {
    let x = normal_mat(rng, rows, cols);
    let y = normal_mat(rng, rows, cols);
    Pencil { x, y }
}

/// Rescales to Frobenius norm `target`; a zero pencil is returned unchanged.
pub fn rescale_pencil(p: &Pencil<f64>, target: f64) -> Pencil<f64> {
    let norm = p.frob_norm();
    if norm == 0.0 {
        return p.clone();
    }
    p.scale(&(target / norm))
}

pub fn normal_poly<R: Rng>(rng: &mut R, m: usize, n: usize, k: usize) -> MatPoly<f64> {
    MatPoly::from_coeffs((0..=k).map(|_| normal_mat(rng, m, n)).collect())
}

/// Entries uniform in `[−bound, bound]`.
pub fn int_mat<T: Scalar, R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> Mat<T> {
    Mat::from_fn(rows, cols, |_, _| T::from_i64(rng.random_range(-bound..=bound)))
}

/// Integer polynomial of grade `k` with a nonzero leading coefficient.
pub fn int_poly<T: Scalar, R: Rng>(rng: &mut R, m: usize, n: usize, k: usize, bound: i64) -> MatPoly<T> {
    let mut coeffs: Vec<Mat<T>> = (0..=k).map(|_| int_mat(rng, m, n, bound)).collect();
    while coeffs[k].is_zero() {
        coeffs[k] = int_mat(rng, m, n, bound);
    }
    MatPoly::from_coeffs(coeffs)
}

pub fn nonzero_int_vec<T: Scalar, R: Rng>(rng: &mut R, len: usize, bound: i64) -> Vec<T> {
    loop {
        let v: Vec<i64> = (0..len).map(|_| rng.random_range(-bound..=bound)).collect();
        if v.iter().any(|&x| x != 0) {
            return v.into_iter().map(T::from_i64).collect();
        }
    }
}

/// Member of `L1(P)` or `L2(P)` with random integer ansatz vector and `W`.
pub fn int_member<T: Scalar, R: Rng>(rng: &mut R, p: &MatPoly<T>, side: Side, bound: i64) -> Result<AnsatzPencil<T>> {
    let (m, n, k) = (p.rows(), p.cols(), p.grade());
    let v = nonzero_int_vec(rng, k, bound);
    match side {
        Side::L1 => build_l1(p, &v, &int_mat(rng, k * m, (k - 1) * n, bound)),
        Side::L2 => build_l2(p, &v, &int_mat(rng, (k - 1) * m, k * n, bound)),
    }
}

/// Member with standard-normal ansatz vector and `W`.
pub fn normal_member<R: Rng>(rng: &mut R, p: &MatPoly<f64>, side: Side) -> Result<AnsatzPencil<f64>> {
    let (m, n, k) = (p.rows(), p.cols(), p.grade());
    let v = normal_mat(rng, k, 1).col(0);
    match side {
        Side::L1 => build_l1(p, &v, &normal_mat(rng, k * m, (k - 1) * n)),
        Side::L2 => build_l2(p, &v, &normal_mat(rng, (k - 1) * m, k * n)),
    }
}

/// A singular polynomial with one planted minimal index.
#[derive(Clone, Debug)]
pub struct Planted<T> {
    pub poly: MatPoly<T>,
    /// The planted null vector: right for `L1`, left (as a column) for `L2`.
    pub nullvector: MatPoly<T>,
    pub index: usize,
}

/// Unimodular constant matrix: a product of random unit triangular factors.
fn unimodular<T: Scalar, R: Rng>(rng: &mut R, n: usize) -> Mat<T> {
    let lo = Mat::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => T::one(),
        std::cmp::Ordering::Greater => T::from_i64(rng.random_range(-1..=1)),
        std::cmp::Ordering::Less => T::zero(),
    });
    let up = Mat::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => T::one(),
        std::cmp::Ordering::Less => T::from_i64(rng.random_range(-1..=1)),
        std::cmp::Ordering::Greater => T::zero(),
    });
    &lo * &up
}

/// `P = P₀·[I_{n'−1} | −y]·T` of grade `k` with a right null vector `T⁻¹[y; 1]`
/// of degree `deg y`, where `(m', n')` is `(m, n)` for `L1` and `(n, m)` for
/// `L2`; the `L2` variant is transposed so that the planted vector is a left one.
pub fn planted_singular<T: Scalar, R: Rng>(
    rng: &mut R,
    m: usize,
    n: usize,
    k: usize,
    side: Side,
    bound: i64,
) -> Result<Planted<T>> {
    let (mm, nn) = match side {
        Side::L1 => (m, n),
        Side::L2 => (n, m),
    };
    if nn < 2 || mm < nn {
        return Err(Error::pre("planting needs at least two columns and rows >= columns in the L1 orientation"));
    }
    if k < 1 {
        return Err(Error::pre("planting needs grade k >= 1"));
    }
    let dy = rng.random_range(0..k);
    let p0 = int_poly::<T, R>(rng, mm, nn - 1, k - dy, bound);
    let mut ycoeffs: Vec<Mat<T>> = (0..=dy).map(|_| int_mat(rng, nn - 1, 1, bound)).collect();
    while ycoeffs[dy].is_zero() {
        ycoeffs[dy] = int_mat(rng, nn - 1, 1, bound);
    }
    let y = MatPoly::from_coeffs(ycoeffs);
    let ident = MatPoly::constant(Mat::identity(nn - 1));
    let kernel_form = MatPoly::hstack(&[&ident.with_grade(dy)?, &y.neg()]);
    let t = unimodular::<T, R>(rng, nn);
    let poly = p0.mul(&kernel_form)?.right_mul_const(&t).with_grade(k)?;
    let t_inv = T::inverse(&t, Default::default()).ok_or_else(|| Error::verify("unimodular factor is singular"))?;
    let one = MatPoly::constant(Mat::from_vec(1, 1, vec![T::one()])).with_grade(dy)?;
    let nullvector = MatPoly::vstack(&[&y, &one]).left_mul_const(&t_inv);
    let poly = match side {
        Side::L1 => poly,
        Side::L2 => poly.transpose(),
    };
    Ok(Planted { poly, nullvector, index: dy })
}
