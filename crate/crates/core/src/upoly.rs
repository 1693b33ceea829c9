//! Dense univariate polynomials over a scalar field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::Scalar;

/// `Σ c_i λ^i`, ascending, without trailing zeros.
#[derive(Clone, PartialEq)]
pub struct UPoly<T> {
    c: Vec<T>,
}

impl<T: Scalar> UPoly<T> {
    pub fn new(mut c: Vec<T>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UPoly { c }
    }

    pub fn constant(x: T) -> Self {
        UPoly::new(vec![x])
    }

    /// `λ − a`.
    pub fn linear_root(a: T) -> Self {
        UPoly::new(vec![-a, T::one()])
    }

    pub fn x() -> Self {
        UPoly::new(vec![T::zero(), T::one()])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> T {
        self.c.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    /// Degree with `-1` for zero, convenient for comparisons.
    pub fn deg_i(&self) -> isize {
        self.c.len() as isize - 1
    }

    pub fn lc(&self) -> T {
        self.c.last().cloned().unwrap_or_else(T::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn is_unit(&self) -> bool {
        self.c.len() == 1
    }

    pub fn scale(&self, s: &T) -> Self {
        UPoly::new(self.c.iter().map(|x| x.clone() * s.clone()).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = T::one() / self.lc();
        self.scale(&inv)
    }

    pub fn eval(&self, x: &T) -> T {
        self.c.iter().rev().fold(T::zero(), |acc, a| acc * x.clone() + a.clone())
    }

    pub fn derivative(&self) -> Self {
        UPoly::new(self.c.iter().enumerate().skip(1).map(|(i, a)| a.clone() * T::from_i64(i as i64)).collect())
    }

    /// Euclidean division `self = q·d + r` with `deg r < deg d`.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.c.len() - 1;
        if self.c.len() < d.c.len() {
            return (UPoly::zero(), self.clone());
        }
        let mut r = self.c.clone();
        let mut q = vec![T::zero(); r.len() - dd];
        let inv = T::one() / d.lc();
        for i in (0..q.len()).rev() {
            let coef = r[i + dd].clone() * inv.clone();
            if coef.is_zero() {
                continue;
            }
            for (j, dj) in d.c.iter().enumerate() {
                let v = r[i + j].clone() - coef.clone() * dj.clone();
                r[i + j] = v;
            }
            q[i] = coef;
        }
        r.truncate(dd);
        (UPoly::new(q), UPoly::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.rem(self).is_zero()
    }

    /// Exact quotient; panics when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Self {
        let (q, r) = self.divrem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(a: &Self, b: &Self) -> Self {
        let mut x = a.clone();
        let mut y = b.clone();
        while !y.is_zero() {
            let r = x.rem(&y);
            x = y;
            y = r.monic();
        }
        x.monic()
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut out = UPoly::one();
        for _ in 0..e {
            out = out * self.clone();
        }
        out
    }

    /// Multiplicity of the root `0`.
    pub fn zero_multiplicity(&self) -> usize {
        self.c.iter().take_while(|x| x.is_zero()).count()
    }

    pub fn map_field<U: Scalar>(&self, f: impl Fn(&T) -> U) -> UPoly<U> {
        UPoly::new(self.c.iter().map(f).collect())
    }
}

impl<T: fmt::Debug> fmt::Debug for UPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("UPoly").field(&self.c).finish()
    }
}

impl<T: Scalar> fmt::Display for UPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let s = a.to_string();
            let (neg, body) = match s.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, s),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = body == "1";
            match i {
                0 => write!(f, "{body}")?,
                1 if unit => write!(f, "x")?,
                1 => write!(f, "{body}*x")?,
                _ if unit => write!(f, "x^{i}")?,
                _ => write!(f, "{body}*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl<T: Scalar> Zero for UPoly<T> {
    fn zero() -> Self {
        UPoly { c: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
}

impl<T: Scalar> One for UPoly<T> {
    fn one() -> Self {
        UPoly { c: vec![T::one()] }
    }
}

impl<T: Scalar> Add for UPoly<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let n = self.c.len().max(rhs.c.len());
        UPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<T: Scalar> Sub for UPoly<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let n = self.c.len().max(rhs.c.len());
        UPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<T: Scalar> Neg for UPoly<T> {
    type Output = Self;
    fn neg(self) -> Self {
        UPoly { c: self.c.into_iter().map(|x| -x).collect() }
    }
}

impl<T: Scalar> Mul for UPoly<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![T::zero(); self.c.len() + rhs.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                let v = out[i + j].clone() + a.clone() * b.clone();
                out[i + j] = v;
            }
        }
        UPoly::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;

    fn p(c: &[i64]) -> UPoly<Rat> {
        UPoly::new(c.iter().map(|&x| Rat::from_i64(x)).collect())
    }

    #[test]
    fn division_and_gcd() {
        // (x-1)(x-2) and (x-1)(x+3)
        let a = p(&[2, -3, 1]);
        let b = p(&[-3, 2, 1]);
        assert_eq!(UPoly::gcd(&a, &b), p(&[-1, 1]));
        let (q, r) = a.divrem(&p(&[-1, 1]));
        assert_eq!(q, p(&[-2, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn display_form() {
        assert_eq!(p(&[-1, 0, 1]).to_string(), "x^2 - 1");
        assert_eq!(p(&[0, 2]).to_string(), "2*x");
        assert_eq!(UPoly::<Rat>::zero().to_string(), "0");
    }

    #[test]
    fn derivative_and_eval() {
        let a = p(&[1, 2, 3]);
        assert_eq!(a.derivative(), p(&[2, 6]));
        assert_eq!(a.eval(&Rat::from_i64(2)), Rat::from_i64(17));
        assert_eq!(p(&[0, 0, 5]).zero_multiplicity(), 2);
    }
}
