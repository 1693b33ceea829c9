//! Smith normal form over `F[λ]` with unimodular transformations.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matpoly::MatPoly;
use crate::matrix::Mat;
use crate::scalar::Scalar;
use crate::upoly::UPoly;

pub type PolyMat<T> = Mat<UPoly<T>>;

/// `U·P·V = S` with `S = diag(d_1, …, d_r, 0, …)`.
#[derive(Clone, Debug)]
pub struct SmithForm<T> {
    pub u: MatPoly<T>,
    pub s: MatPoly<T>,
    pub v: MatPoly<T>,
    /// Monic nonzero diagonal entries, each dividing the next.
    pub invariants: Vec<UPoly<T>>,
}

impl<T: Scalar> SmithForm<T> {
    pub fn rank(&self) -> usize {
        self.invariants.len()
    }
}

pub fn to_poly_matrix<T: Scalar>(p: &MatPoly<T>) -> PolyMat<T> {
    Mat::from_fn(p.rows(), p.cols(), |i, j| UPoly::new(p.coeffs().iter().map(|c| c[(i, j)].clone()).collect()))
}

pub fn from_poly_matrix<T: Scalar>(a: &PolyMat<T>) -> MatPoly<T> {
    let g = a.data().iter().filter_map(|x| x.degree()).max().unwrap_or(0);
    let coeffs = (0..=g).map(|d| Mat::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)].coeff(d))).collect();
    MatPoly::from_coeffs(coeffs).with_grade(g).expect("grade covers degree")
}

fn require_exact<T: Scalar>() -> Result<()> {
    if T::is_exact() {
        Ok(())
    } else {
        Err(Error::Unsupported("Smith form requires an exact field".into()))
    }
}

/// Full Smith form with transformation matrices.
pub fn smith_form<T: Scalar>(p: &MatPoly<T>) -> Result<SmithForm<T>> {
    require_exact::<T>()?;
    let mut a = to_poly_matrix(p);
    let mut u = Mat::identity(p.rows());
    let mut v = Mat::identity(p.cols());
    let invariants = reduce(&mut a, Some(&mut u), Some(&mut v));
    Ok(SmithForm { u: from_poly_matrix(&u), s: from_poly_matrix(&a), v: from_poly_matrix(&v), invariants })
}

/// Invariant factors only; skips transformation bookkeeping.
pub fn invariant_factors<T: Scalar>(p: &MatPoly<T>) -> Result<Vec<UPoly<T>>> {
    require_exact::<T>()?;
    let mut a = to_poly_matrix(p);
    Ok(reduce(&mut a, None, None))
}

fn row_axpy<T: Scalar>(a: &mut PolyMat<T>, dst: usize, src: usize, q: &UPoly<T>) {
    // row_dst -= q · row_src
    for j in 0..a.cols() {
        if a[(src, j)].is_zero() {
            continue;
        }
        let v = a[(dst, j)].clone() - q.clone() * a[(src, j)].clone();
        a[(dst, j)] = v;
    }
}

fn col_axpy<T: Scalar>(a: &mut PolyMat<T>, dst: usize, src: usize, q: &UPoly<T>) {
    for i in 0..a.rows() {
        if a[(i, src)].is_zero() {
            continue;
        }
        let v = a[(i, dst)].clone() - a[(i, src)].clone() * q.clone();
        a[(i, dst)] = v;
    }
}

fn scale_row<T: Scalar>(a: &mut PolyMat<T>, i: usize, s: &T) {
    for j in 0..a.cols() {
        let v = a[(i, j)].scale(s);
        a[(i, j)] = v;
    }
}

fn reduce<T: Scalar>(
    a: &mut PolyMat<T>,
    mut u: Option<&mut PolyMat<T>>,
    mut v: Option<&mut PolyMat<T>>,
) -> Vec<UPoly<T>> {
    let (r, c) = a.shape();
    let mut inv = Vec::new();
    for t in 0..r.min(c) {
        loop {
            let mut best: Option<(usize, usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    if let Some(d) = a[(i, j)].degree() {
                        if best.is_none_or(|b| d < b.2) {
                            best = Some((i, j, d));
                        }
                    }
                }
            }
            let Some((pi, pj, _)) = best else {
                return inv;
            };
            a.swap_rows(t, pi);
            a.swap_cols(t, pj);
            if let Some(u) = u.as_deref_mut() {
                u.swap_rows(t, pi);
            }
            if let Some(v) = v.as_deref_mut() {
                v.swap_cols(t, pj);
            }
            let s = T::one() / a[(t, t)].lc();
            scale_row(a, t, &s);
            if let Some(u) = u.as_deref_mut() {
                scale_row(u, t, &s);
            }
            let piv = a[(t, t)].clone();

            let mut dirty = false;
            for i in t + 1..r {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let (q, rem) = a[(i, t)].divrem(&piv);
                row_axpy(a, i, t, &q);
                if let Some(u) = u.as_deref_mut() {
                    row_axpy(u, i, t, &q);
                }
                dirty |= !rem.is_zero();
            }
            for j in t + 1..c {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let (q, rem) = a[(t, j)].divrem(&piv);
                col_axpy(a, j, t, &q);
                if let Some(v) = v.as_deref_mut() {
                    col_axpy(v, j, t, &q);
                }
                dirty |= !rem.is_zero();
            }
            if dirty {
                continue;
            }
            // Pivot row and column are clear; enforce divisibility of the trailing block.
            let bad = (t + 1..r).flat_map(|i| (t + 1..c).map(move |j| (i, j))).find(|&(i, j)| !piv.divides(&a[(i, j)]));
            match bad {
                Some((i, _)) => {
                    let neg_one = -UPoly::one();
                    row_axpy(a, t, i, &neg_one);
                    if let Some(u) = u.as_deref_mut() {
                        row_axpy(u, t, i, &neg_one);
                    }
                }
                None => break,
            }
        }
        inv.push(a[(t, t)].clone());
    }
    inv
}

/// Checks `U·P·V = S`, constant nonzero determinants, diagonal shape and the divisibility chain.
pub fn verify_smith<T: Scalar>(p: &MatPoly<T>, sf: &SmithForm<T>) -> Result<()> {
    let pu = to_poly_matrix(&sf.u);
    let pp = to_poly_matrix(p);
    let pv = to_poly_matrix(&sf.v);
    let ps = to_poly_matrix(&sf.s);
    if pu.matmul(&pp).matmul(&pv) != ps {
        return Err(Error::verify("U·P·V differs from S"));
    }
    for (name, m) in [("U", &pu), ("V", &pv)] {
        let d = poly_det(m);
        if !d.is_unit() {
            return Err(Error::verify(format!("det {name} = {d} is not a nonzero constant")));
        }
    }
    for i in 0..ps.rows() {
        for j in 0..ps.cols() {
            let expect = if i == j && i < sf.invariants.len() { sf.invariants[i].clone() } else { UPoly::zero() };
            if ps[(i, j)] != expect {
                return Err(Error::verify(format!("S({i},{j}) breaks diagonal form")));
            }
        }
    }
    for w in sf.invariants.windows(2) {
        if !w[0].divides(&w[1]) {
            return Err(Error::verify(format!("{} does not divide {}", w[0], w[1])));
        }
    }
    if sf.invariants.iter().any(|d| d.lc() != T::one()) {
        return Err(Error::verify("invariant factor not monic"));
    }
    Ok(())
}

/// Determinant over `F[λ]` via fraction-free Bareiss elimination.
pub fn poly_det<T: Scalar>(a: &PolyMat<T>) -> UPoly<T> {
    let n = a.rows();
    assert_eq!(n, a.cols(), "determinant of a non-square matrix");
    if n == 0 {
        return UPoly::one();
    }
    let mut m = a.clone();
    let mut sign = T::one();
    let mut prev = UPoly::one();
    for k in 0..n - 1 {
        if m[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                Some(i) => {
                    m.swap_rows(k, i);
                    sign = -sign;
                }
                None => return UPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[(i, j)].clone() * m[(k, k)].clone() - m[(i, k)].clone() * m[(k, j)].clone();
                m[(i, j)] = num.exact_div(&prev);
            }
        }
        prev = m[(k, k)].clone();
    }
    m[(n - 1, n - 1)].scale(&sign)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;

    fn up(c: &[i64]) -> UPoly<Rat> {
        UPoly::new(c.iter().map(|&x| Rat::from_i64(x)).collect())
    }

    fn pm(entries: Vec<Vec<UPoly<Rat>>>) -> MatPoly<Rat> {
        from_poly_matrix(&Mat::from_rows(entries))
    }

    #[test]
    fn diagonal_example() {
        let p = pm(vec![vec![up(&[0, 1]), up(&[])], vec![up(&[]), up(&[0, -1, 1])]]);
        let sf = smith_form(&p).unwrap();
        verify_smith(&p, &sf).unwrap();
        assert_eq!(sf.invariants, vec![up(&[0, 1]), up(&[0, -1, 1])]);
    }

    #[test]
    fn coprime_diagonal_merges() {
        // diag(λ, λ−1) has invariant factors 1, λ(λ−1)
        let p = pm(vec![vec![up(&[0, 1]), up(&[])], vec![up(&[]), up(&[-1, 1])]]);
        let sf = smith_form(&p).unwrap();
        verify_smith(&p, &sf).unwrap();
        assert_eq!(sf.invariants, vec![up(&[1]), up(&[0, -1, 1])]);
    }

    #[test]
    fn identity_is_fixed() {
        let p = MatPoly::constant(Mat::<Rat>::identity(3));
        let sf = smith_form(&p).unwrap();
        verify_smith(&p, &sf).unwrap();
        assert_eq!(to_poly_matrix(&sf.u), Mat::identity(3));
        assert_eq!(to_poly_matrix(&sf.v), Mat::identity(3));
    }

    #[test]
    fn rank_one_rectangular() {
        // [[λ², λ], [λ, 1], [0, 0]]
        let p = pm(vec![vec![up(&[0, 0, 1]), up(&[0, 1])], vec![up(&[0, 1]), up(&[1])], vec![up(&[]), up(&[])]]);
        let sf = smith_form(&p).unwrap();
        verify_smith(&p, &sf).unwrap();
        assert_eq!(sf.invariants, vec![up(&[1])]);
        assert_eq!(invariant_factors(&p).unwrap(), vec![up(&[1])]);
    }

    #[test]
    fn float_rejected() {
        let p = MatPoly::constant(Mat::<f64>::identity(2));
        assert!(matches!(smith_form(&p), Err(Error::Unsupported(_))));
    }

    #[test]
    fn bareiss_det() {
        let a = Mat::from_rows(vec![vec![up(&[0, 1]), up(&[1])], vec![up(&[2]), up(&[0, 1])]]);
        assert_eq!(poly_det(&a), up(&[-2, 0, 1]));
    }
}
