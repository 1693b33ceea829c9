//! Factorization of univariate rational polynomials into monic irreducibles.
//!
//! Square-free decomposition (Yun), then rational roots, then Kronecker's
//! interpolation search for higher-degree factors. The integer searches are
//! bounded; when a bound trips the remaining factor is reported uncertified.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalar::Rat;
use crate::upoly::UPoly;

/// Largest integer whose divisors are enumerated by trial division.
const DIVISOR_LIMIT: u64 = 1_000_000_000_000;
/// Cap on candidate evaluations in a single search.
const SEARCH_LIMIT: usize = 200_000;

#[derive(Clone, Debug, PartialEq)]
pub struct Factorization {
    /// Monic factors with multiplicities, sorted by degree then coefficients.
    pub factors: Vec<(UPoly<Rat>, usize)>,
    /// False when some factor could not be proven irreducible within the search bounds.
    pub certified: bool,
}

/// Yun's square-free decomposition of a nonzero polynomial: `f = c·Π a_i^i`.
pub fn square_free(f: &UPoly<Rat>) -> Vec<(UPoly<Rat>, usize)> {
    let f = f.monic();
    if f.is_constant() {
        return Vec::new();
    }
    let df = f.derivative();
    let a0 = UPoly::gcd(&f, &df);
    let mut b = f.exact_div(&a0);
    let mut c = df.exact_div(&a0);
    let mut d = c.clone() - b.derivative();
    let mut out = Vec::new();
    let mut i = 1;
    while !b.is_constant() {
        let a = UPoly::gcd(&b, &d);
        b = b.exact_div(&a);
        c = d.exact_div(&a);
        d = c.clone() - b.derivative();
        if !a.is_constant() {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

/// Complete factorization of a nonzero polynomial.
pub fn factor(f: &UPoly<Rat>) -> Factorization {
    let mut factors = Vec::new();
    let mut certified = true;
    let z = f.zero_multiplicity();
    if z > 0 {
        factors.push((UPoly::x(), z));
    }
    let rest = UPoly::new(f.coeffs()[z..].to_vec());
    for (a, mult) in square_free(&rest) {
        let (irr, ok) = irreducible_factors(&a);
        certified &= ok;
        factors.extend(irr.into_iter().map(|g| (g, mult)));
    }
    factors.sort_by(|a, b| factor_order(&a.0, &b.0));
    Factorization { factors, certified }
}

fn factor_order(a: &UPoly<Rat>, b: &UPoly<Rat>) -> std::cmp::Ordering {
    a.deg_i().cmp(&b.deg_i()).then_with(|| {
        // linear factors λ − r sort by r
        let ka: Vec<Rat> = a.coeffs().iter().rev().map(|x| -x.clone()).collect();
        let kb: Vec<Rat> = b.coeffs().iter().rev().map(|x| -x.clone()).collect();
        ka.cmp(&kb)
    })
}

/// Splits a square-free polynomial into monic irreducible factors.
fn irreducible_factors(f: &UPoly<Rat>) -> (Vec<UPoly<Rat>>, bool) {
    let mut out = Vec::new();
    let mut certified = true;
    let mut rest = f.monic();
    match rational_roots(&rest) {
        Some(roots) => {
            for r in roots {
                let lin = UPoly::linear_root(r);
                rest = rest.exact_div(&lin);
                out.push(lin);
            }
        }
        None => certified = false,
    }
    let mut stack = vec![rest];
    while let Some(g) = stack.pop() {
        let d = g.deg_i();
        if d <= 0 {
            continue;
        }
        if d <= 3 && certified {
            // no rational roots left, so degree ≤ 3 is irreducible
            out.push(g);
            continue;
        }
        match kronecker_split(&g) {
            Search::Split(a, b) => {
                stack.push(a);
                stack.push(b);
            }
            Search::Irreducible => out.push(g),
            Search::GaveUp => {
                certified = false;
                out.push(g);
            }
        }
    }
    (out, certified)
}

/// Clears denominators and content: returns integer coefficients, ascending.
pub fn primitive_part(f: &UPoly<Rat>) -> Vec<BigInt> {
    let l = f.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut ints: Vec<BigInt> = f.coeffs().iter().map(|c| c.numer() * (&l / c.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !g.is_zero() {
        for c in ints.iter_mut() {
            *c = &*c / &g;
        }
    }
    if ints.last().is_some_and(|c| c.is_negative()) {
        for c in ints.iter_mut() {
            *c = -&*c;
        }
    }
    ints
}

fn positive_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n == 0 || n > DIVISOR_LIMIT {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Some(small.into_iter().map(BigInt::from).collect())
}

/// All rational roots of a polynomial with nonzero constant term, or `None` if the
/// candidate set exceeds the search bounds.
fn rational_roots(f: &UPoly<Rat>) -> Option<Vec<Rat>> {
    if f.deg_i() < 1 {
        return Some(Vec::new());
    }
    let ints = primitive_part(f);
    let a0 = ints.first()?;
    let an = ints.last()?;
    if a0.is_zero() {
        return None;
    }
    let ps = positive_divisors(a0)?;
    let qs = positive_divisors(an)?;
    if ps.len().saturating_mul(qs.len()) > SEARCH_LIMIT {
        return None;
    }
    let mut roots = Vec::new();
    for p in &ps {
        for q in &qs {
            if !p.gcd(q).is_one() {
                continue;
            }
            for sign in [1, -1] {
                let r = Rat::new(p * BigInt::from(sign), q.clone());
                if f.eval(&r).is_zero() {
                    roots.push(r);
                }
            }
        }
    }
    roots.sort();
    Some(roots)
}

enum Search {
    Split(UPoly<Rat>, UPoly<Rat>),
    Irreducible,
    GaveUp,
}

/// Kronecker's method on a square-free polynomial without rational roots.
fn kronecker_split(f: &UPoly<Rat>) -> Search {
    let ints = primitive_part(f);
    let fi = UPoly::new(ints.iter().map(|c| Rat::from_integer(c.clone())).collect());
    let d = fi.deg_i() as usize;
    for s in 2..=d / 2 {
        let xs: Vec<i64> = (0..=s as i64).map(|i| if i % 2 == 0 { -(i / 2) } else { i / 2 + 1 }).collect();
        let mut divs = Vec::with_capacity(xs.len());
        let mut total: usize = 1;
        for (idx, &x) in xs.iter().enumerate() {
            let y = fi.eval(&Rat::from_integer(BigInt::from(x)));
            let Some(pos) = positive_divisors(&y.to_integer()) else {
                return Search::GaveUp;
            };
            let cand: Vec<BigInt> =
                if idx == 0 { pos } else { pos.iter().flat_map(|p| [p.clone(), -p.clone()]).collect() };
            total = total.saturating_mul(cand.len());
            divs.push(cand);
        }
        if total > SEARCH_LIMIT {
            return Search::GaveUp;
        }
        let basis = lagrange_basis(&xs);
        let mut idx = vec![0usize; xs.len()];
        loop {
            let g = idx
                .iter()
                .enumerate()
                .fold(UPoly::zero(), |acc, (i, &k)| acc + basis[i].scale(&Rat::from_integer(divs[i][k].clone())));
            if g.deg_i() == s as isize && g.coeffs().iter().all(|c| c.is_integer()) {
                let (q, r) = fi.divrem(&g);
                if r.is_zero() {
                    return Search::Split(g.monic(), q.monic());
                }
            }
            // odometer increment
            let mut pos = 0;
            loop {
                if pos == idx.len() {
                    break;
                }
                idx[pos] += 1;
                if idx[pos] < divs[pos].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == idx.len() {
                break;
            }
        }
    }
    Search::Irreducible
}

fn lagrange_basis(xs: &[i64]) -> Vec<UPoly<Rat>> {
    xs.iter()
        .enumerate()
        .map(|(i, &xi)| {
            xs.iter().enumerate().filter(|&(j, _)| j != i).fold(UPoly::one(), |acc, (_, &xj)| {
                let denom = Rat::from_integer(BigInt::from(xi - xj));
                let lin = UPoly::new(vec![Rat::from_integer(BigInt::from(-xj)) / denom.clone(), Rat::one() / denom]);
                acc * lin
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn p(c: &[i64]) -> UPoly<Rat> {
        UPoly::new(c.iter().map(|&x| Rat::from_i64(x)).collect())
    }

    fn product(f: &Factorization) -> UPoly<Rat> {
        f.factors.iter().fold(UPoly::one(), |acc, (g, e)| acc * g.pow(*e))
    }

    #[test]
    fn yun_multiplicities() {
        // (x-1)^2 (x+2)^3
        let f = p(&[-1, 1]).pow(2) * p(&[2, 1]).pow(3);
        let sf = square_free(&f);
        assert_eq!(sf, vec![(p(&[-1, 1]), 2), (p(&[2, 1]), 3)]);
    }

    #[test]
    fn mixed_factorization() {
        // x^2 (2x - 1) (x^2 + 1)^2 (x^2 - 2)
        let f = p(&[0, 1]).pow(2) * p(&[-1, 2]) * p(&[1, 0, 1]).pow(2) * p(&[-2, 0, 1]);
        let fac = factor(&f);
        assert!(fac.certified);
        assert_eq!(product(&fac), f.monic());
        let degs: Vec<(isize, usize)> = fac.factors.iter().map(|(g, e)| (g.deg_i(), *e)).collect();
        assert_eq!(degs, vec![(1, 2), (1, 1), (2, 2), (2, 1)]);
    }

    #[test]
    fn quartic_splits_into_quadratics() {
        // (x^2 + x + 1)(x^2 - 3) has no rational roots
        let f = p(&[1, 1, 1]) * p(&[-3, 0, 1]);
        let fac = factor(&f);
        assert!(fac.certified);
        assert_eq!(fac.factors.len(), 2);
        assert_eq!(product(&fac), f);
    }

    #[test]
    fn irreducible_quartic() {
        let f = p(&[1, 0, 0, 0, 1]);
        let fac = factor(&f);
        assert!(fac.certified);
        assert_eq!(fac.factors, vec![(f, 1)]);
    }
}
