//! Truncated formal power series in one variable `t` over exact rationals.
//!
//! A series of order `N` stores `c_0..=c_N`; everything above degree `N` is
//! unknown and discarded. Binary operations truncate to the smaller order.
//! A series may additionally be flagged as an exact polynomial, meaning the
//! discarded tail is known to be zero; only such series may be composed with
//! an inner series that has a nonzero constant term.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::numerics::Rational;

#[derive(Clone, Debug)]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
    polynomial: bool,
}

/// Outcome of a coefficientwise comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Comparison {
    Equal,
    Mismatch { power: usize, lhs: Rational, rhs: Rational },
}

impl Comparison {
    pub fn is_equal(&self) -> bool {
        matches!(self, Comparison::Equal)
    }
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![Rational::new(); order + 1], polynomial: false }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::from(1), order)
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        Self::monomial(c, 0, order)
    }

    /// `c * t^degree`, or zero when `degree > order`.
    pub fn monomial(c: Rational, degree: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if degree <= order {
            s.coeffs[degree] = c;
        }
        s
    }

    /// The series `t` itself.
    pub fn variable(order: usize) -> Self {
        Self::monomial(Rational::from(1), 1, order)
    }

    /// Builds a series from explicit coefficients; the order is `len - 1`.
    ///
    /// Panics on an empty vector.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least c_0");
        Self { coeffs, polynomial: false }
    }

    /// An exact polynomial, padded with zeros up to `order`.
    ///
    /// Coefficients above `order` must be zero; they are dropped otherwise and
    /// the polynomial flag is not set.
    pub fn polynomial(coeffs: &[Rational], order: usize) -> Self {
        let mut s = Self::zero(order);
        let mut exact = true;
        for (k, c) in coeffs.iter().enumerate() {
            if k <= order {
                s.coeffs[k] = c.clone();
            } else if *c != 0 {
                exact = false;
            }
        }
        s.polynomial = exact;
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_polynomial(&self) -> bool {
        self.polynomial
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Result<&Rational> {
        self.coeffs
            .get(k)
            .ok_or(Error::IndexOutOfRange { index: k, order: self.order() })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == 0)
    }

    /// Drops every term above `order` (never extends).
    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        let tail_zero = self.coeffs[order + 1..].iter().all(|c| *c == 0);
        Self {
            coeffs: self.coeffs[..=order].to_vec(),
            polynomial: self.polynomial && tail_zero,
        }
    }

    /// Adds `delta` to the coefficient of `t^k`; out-of-range `k` is ignored.
    pub fn bump(&mut self, k: usize, delta: &Rational) {
        if let Some(c) = self.coeffs.get_mut(k) {
            *c += delta;
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|x| Rational::from(x * c)).collect(),
            polynomial: self.polynomial,
        }
    }

    /// Multiplies by `t^k`, keeping the order.
    pub fn shift(&self, k: usize) -> Self {
        let mut out = Self::zero(self.order());
        for (i, c) in self.coeffs.iter().enumerate() {
            if i + k > self.order() {
                break;
            }
            out.coeffs[i + k] = c.clone();
        }
        let dropped = &self.coeffs[self.coeffs.len().saturating_sub(k)..];
        out.polynomial = self.polynomial && dropped.iter().all(|c| *c == 0);
        out
    }

    /// Multiplies in place by `1 - c t`.
    pub fn mul_linear(&mut self, c: &Rational) {
        if *c == 0 {
            return;
        }
        for k in (1..self.coeffs.len()).rev() {
            let prev = Rational::from(&self.coeffs[k - 1] * c);
            self.coeffs[k] -= prev;
        }
        self.polynomial = false;
    }

    /// Divides in place by `1 - c t` (multiplication by a geometric series).
    pub fn div_linear(&mut self, c: &Rational) {
        if *c == 0 {
            return;
        }
        for k in 1..self.coeffs.len() {
            let prev = Rational::from(&self.coeffs[k - 1] * c);
            self.coeffs[k] += prev;
        }
        self.polynomial = false;
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = Self::zero(order);
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                out.coeffs[i + j] += Rational::from(a * b);
            }
        }
        out
    }

    /// Multiplicative inverse to the same order.
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if *c0 == 0 {
            return Err(Error::ZeroConstantTerm);
        }
        let inv0 = Rational::from(c0.recip_ref());
        let mut out = Self::zero(self.order());
        out.coeffs[0] = inv0.clone();
        for k in 1..=self.order() {
            let mut acc = Rational::new();
            for i in 1..=k {
                acc += Rational::from(&self.coeffs[i] * &out.coeffs[k - i]);
            }
            out.coeffs[k] = -acc * &inv0;
        }
        Ok(out)
    }

    /// `self(inner(t))`, treating `self` as the outer series.
    ///
    /// The inner series must have a zero constant term unless `self` is an
    /// exact polynomial.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        let inner_const = inner.coeffs[0] != 0;
        if inner_const && !self.polynomial {
            return Err(Error::NonzeroInnerConstant);
        }
        let order = if self.polynomial { inner.order() } else { inner.order().min(self.order()) };
        let inner = inner.truncate(order);
        // Horner; for zero-constant inners the terms above `order` cannot contribute.
        let top = if self.polynomial { self.degree() } else { order.min(self.order()) };
        let mut acc = Self::zero(order);
        for k in (0..=top).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] += &self.coeffs[k];
        }
        Ok(acc)
    }

    /// Highest index with a nonzero coefficient (0 for the zero series).
    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| *c != 0).unwrap_or(0)
    }

    /// Compares `c_0..=c_m` of both series.
    pub fn equal_to_order(&self, other: &Self, m: usize) -> Result<Comparison> {
        let available = self.order().min(other.order());
        if m > available {
            return Err(Error::OrderExceeded { requested: m, available });
        }
        let mismatch = (0..=m).find(|&k| self.coeffs[k] != other.coeffs[k]);
        Ok(match mismatch {
            None => Comparison::Equal,
            Some(k) => Comparison::Mismatch {
                power: k,
                lhs: self.coeffs[k].clone(),
                rhs: other.coeffs[k].clone(),
            },
        })
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        let order = self.order().min(other.order());
        Self {
            coeffs: (0..=order).map(|k| f(&self.coeffs[k], &other.coeffs[k])).collect(),
            polynomial: false,
        }
    }
}

/// Equality is coefficientwise; the polynomial flag is metadata.
impl PartialEq for TruncatedSeries {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Eq for TruncatedSeries {}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: Self) -> TruncatedSeries {
        self.zip_with(rhs, |a, b| Rational::from(a + b))
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: Self) -> TruncatedSeries {
        self.zip_with(rhs, |a, b| Rational::from(a - b))
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: Self) -> TruncatedSeries {
        TruncatedSeries::mul(self, rhs)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        self.scale(&Rational::from(-1))
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})t")?,
                _ => write!(f, "({c})t^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.order() + 1)
    }
}
