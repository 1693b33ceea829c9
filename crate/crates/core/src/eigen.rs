//! Complete eigenstructure and certified (g-)linearization checks.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::{factor, Factorization};
use crate::linalg;
use crate::matpoly::{MatPoly, Pencil};
use crate::matrix::Mat;
use crate::minimal::{minimal_basis, BasisSide};
use crate::reduction::glin_target;
use crate::scalar::{Rat, Scalar, Tol};
use crate::smith::invariant_factors;
use crate::upoly::UPoly;

/// An eigenvalue given by its monic irreducible factor, with the exponents of
/// that factor across the invariant factors (ascending).
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteEigen {
    pub factor: UPoly<Rat>,
    pub partition: Vec<usize>,
}

impl FiniteEigen {
    /// The eigenvalue itself when the factor is linear.
    pub fn root(&self) -> Option<Rat> {
        (self.factor.deg_i() == 1).then(|| -self.factor.coeff(0))
    }

    pub fn algebraic_degree(&self) -> usize {
        self.factor.deg_i().max(0) as usize * self.partition.iter().sum::<usize>()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigStructure {
    pub nrank: usize,
    pub grade: usize,
    pub finite: Vec<FiniteEigen>,
    /// Partition of the elementary divisors at infinity.
    pub infinite: Vec<usize>,
    pub right_indices: Vec<usize>,
    pub left_indices: Vec<usize>,
    /// False if some factor could not be proven irreducible.
    pub certified: bool,
}

impl EigStructure {
    /// `Σ finite + Σ infinite + Σ right + Σ left`.
    pub fn index_sum(&self) -> usize {
        self.finite.iter().map(|f| f.algebraic_degree()).sum::<usize>()
            + self.infinite.iter().sum::<usize>()
            + self.right_indices.iter().sum::<usize>()
            + self.left_indices.iter().sum::<usize>()
    }

    /// The index sum equals `grade · nrank`.
    pub fn index_sum_consistent(&self) -> bool {
        self.index_sum() == self.grade * self.nrank
    }

    pub fn has_infinite(&self) -> bool {
        !self.infinite.is_empty()
    }
}

/// Groups the invariant factors' irreducible factors into per-eigenvalue partitions.
pub fn elementary_divisors(inv: &[UPoly<Rat>]) -> (Vec<FiniteEigen>, bool) {
    let mut out: Vec<FiniteEigen> = Vec::new();
    let mut certified = true;
    let facs: Vec<Factorization> = inv.iter().map(factor).collect();
    for f in &facs {
        certified &= f.certified;
        for (g, _) in &f.factors {
            if !out.iter().any(|e| &e.factor == g) {
                out.push(FiniteEigen { factor: g.clone(), partition: Vec::new() });
            }
        }
    }
    for e in out.iter_mut() {
        for f in &facs {
            if let Some((_, mult)) = f.factors.iter().find(|(g, _)| g == &e.factor) {
                e.partition.push(*mult);
            }
        }
    }
    let order = facs.last().map(|f| f.factors.iter().map(|(g, _)| g.clone()).collect::<Vec<_>>());
    if let Some(order) = order {
        out.sort_by_key(|e| order.iter().position(|g| g == &e.factor).unwrap_or(usize::MAX));
    }
    (out, certified)
}

/// Partition at zero: the exponents of `λ` across the invariant factors.
fn zero_partition<T: Scalar>(inv: &[UPoly<T>]) -> Vec<usize> {
    inv.iter().map(|d| d.zero_multiplicity()).filter(|&e| e > 0).collect()
}

/// Finite and infinite elementary divisors plus minimal indices.
pub fn complete_eigenstructure(p: &MatPoly<Rat>, tol: Tol) -> Result<EigStructure> {
    let inv = invariant_factors(p)?;
    let (finite, certified) = elementary_divisors(&inv);
    let inv_rev = invariant_factors(&p.reversal())?;
    let right = minimal_basis(p, BasisSide::Right, tol)?;
    let left = minimal_basis(p, BasisSide::Left, tol)?;
    Ok(EigStructure {
        nrank: inv.len(),
        grade: p.grade(),
        finite,
        infinite: zero_partition(&inv_rev),
        right_indices: right.indices,
        left_indices: left.indices,
        certified,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub reason: Option<String>,
    pub nrank_pencil: usize,
    pub nrank_target: usize,
    pub finite_match: bool,
    /// `None` when the strong test was not requested or not reached.
    pub infinite_match: Option<bool>,
}

fn compare<T: Scalar>(l: &MatPoly<T>, target: &MatPoly<T>) -> Result<(usize, usize, bool)> {
    let a = invariant_factors(l)?;
    let b = invariant_factors(target)?;
    Ok((a.len(), b.len(), a == b))
}

fn verdict<T: Scalar>(
    l: &Pencil<T>,
    target: &MatPoly<T>,
    target_rev: impl FnOnce() -> MatPoly<T>,
    strong: bool,
) -> Result<Verdict> {
    let (rl, rt, same) = compare(&l.to_poly(), target)?;
    let mut v = Verdict {
        holds: same,
        reason: None,
        nrank_pencil: rl,
        nrank_target: rt,
        finite_match: same,
        infinite_match: None,
    };
    if !same {
        v.reason = Some(if rl != rt { "normal rank mismatch" } else { "finite eigenstructure mismatch" }.into());
        return Ok(v);
    }
    if strong {
        let (_, _, same_rev) = compare(&l.reversal().to_poly(), &target_rev())?;
        v.infinite_match = Some(same_rev);
        if !same_rev {
            v.holds = false;
            v.reason = Some("infinite eigenvalue mismatch".into());
        }
    }
    Ok(v)
}

/// `L` and `diag(P, I_{k−1} ⊗ I_{m,n})` have the same Smith form; `strong` repeats the
/// test for `rev₁L` against `diag(rev_k P, I_{k−1} ⊗ I_{m,n})`.
pub fn check_g_linearization<T: Scalar>(l: &Pencil<T>, p: &MatPoly<T>, strong: bool) -> Result<Verdict> {
    let (m, n, k) = (p.rows(), p.cols(), p.grade());
    if l.rows() != k * m || l.cols() != k * n {
        return Err(Error::dim(format!("pencil is {}x{}, expected {}x{}", l.rows(), l.cols(), k * m, k * n)));
    }
    verdict(l, &glin_target(p), || glin_target(&p.reversal()), strong)
}

/// `L` and `diag(P, I_s)` have the same Smith form, `s = rows(L) − m = cols(L) − n`.
pub fn check_linearization<T: Scalar>(l: &Pencil<T>, p: &MatPoly<T>, strong: bool) -> Result<Verdict> {
    let (m, n) = (p.rows(), p.cols());
    if l.rows() < m || l.cols() < n || l.rows() - m != l.cols() - n {
        return Err(Error::dim(format!(
            "pencil is {}x{}, cannot pad a {m}x{n} polynomial by an identity",
            l.rows(),
            l.cols()
        )));
    }
    let s = l.rows() - m;
    let pad = |q: &MatPoly<T>| MatPoly::block_diag(q, &MatPoly::constant(Mat::identity(s)));
    verdict(l, &pad(p), || pad(&p.reversal()), strong)
}

/// Numerical spectrum of a regular square polynomial.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FloatSpectrum {
    /// `(re, im, multiplicity)`, sorted by real then imaginary part.
    pub finite: Vec<(f64, f64, usize)>,
    pub infinite: usize,
    pub shift: f64,
}

/// Eigenvalues of a regular square polynomial through its companion pencil.
///
/// With `B = Y + μX` nonsingular, `det(λX + Y) = 0` iff `θ = −1/(λ − μ)` is an
/// eigenvalue of `B⁻¹X`; `θ ≈ 0` marks an infinite eigenvalue.
pub fn solve_regular(p: &MatPoly<f64>, tol: Tol) -> Result<FloatSpectrum> {
    let (m, n) = (p.rows(), p.cols());
    if m != n {
        return Err(Error::Unsupported("numerical solve handles square polynomials only".into()));
    }
    if p.normal_rank(tol) < n {
        return Err(Error::Unsupported("numerical solve handles regular polynomials only; use the exact path".into()));
    }
    let l = crate::spaces::companion_c1g(p)?.pencil;
    let shifts = [0.6180339887, -1.3247179572, 2.1673, -0.4142135624, 3.3166247904];
    let mut chosen = None;
    for &mu in &shifts {
        let b = &l.y + &l.x.scale(&mu);
        let bf = linalg::to_na(&b);
        let cond = linalg::cond2(&b);
        if cond.is_finite() && cond < 1e10 {
            if let Some(binv) = bf.try_inverse() {
                chosen = Some((mu, binv));
                break;
            }
        }
    }
    let Some((mu, binv)) = chosen else {
        return Err(Error::verify("no well-conditioned spectral shift found"));
    };
    let a: DMatrix<f64> = binv * linalg::to_na(&l.x);
    let theta = a.complex_eigenvalues();
    let zero_tol = 1e-10 * a.norm().max(1.0);
    let mut infinite = 0;
    let mut roots: Vec<(f64, f64)> = Vec::new();
    for t in theta.iter() {
        if t.norm() <= zero_tol {
            infinite += 1;
        } else {
            let lam = nalgebra::Complex::new(mu, 0.0) - nalgebra::Complex::new(1.0, 0.0) / t;
            roots.push((lam.re, lam.im));
        }
    }
    Ok(FloatSpectrum { finite: cluster(roots), infinite, shift: mu })
}

fn cluster(mut roots: Vec<(f64, f64)>) -> Vec<(f64, f64, usize)> {
    roots.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut out: Vec<(f64, f64, usize, f64, f64)> = Vec::new();
    for (re, im) in roots {
        let close = out.iter_mut().find(|c| {
            let (cr, ci) = (c.3 / c.2 as f64, c.4 / c.2 as f64);
            ((cr - re).powi(2) + (ci - im).powi(2)).sqrt() <= 1e-6 * (1.0 + re.hypot(im))
        });
        match close {
            Some(c) => {
                c.2 += 1;
                c.3 += re;
                c.4 += im;
            }
            None => out.push((re, im, 1, re, im)),
        }
    }
    out.into_iter()
        .map(|(_, _, k, sr, si)| {
            let clean = |x: f64| if x.abs() < 1e-12 { 0.0 } else { x };
            (clean(sr / k as f64), clean(si / k as f64), k)
        })
        .collect()
}
