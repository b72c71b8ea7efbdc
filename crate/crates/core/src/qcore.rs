//! q-numbers, q-factorials, q-binomial coefficients and q-Pochhammer symbols.
//!
//! Scalar symbols are exact rationals. Symbols whose argument contains the
//! formal variable `t` are returned as truncated series; the infinite ones use
//! Euler's coefficient formulas, which are exact termwise, rather than a
//! truncated product.

use rug::ops::Pow;

use crate::error::{Error, Result};
use crate::numerics::Rational;
use crate::series::TruncatedSeries;

/// The base of all q-objects.
///
/// Normally built from `p = q^(1/2)` so that every half-integer power of `q`
/// is an exact rational. [`QBase::from_q`] builds a base without a known
/// square root; half powers then fail with [`Error::HalfPowerUnavailable`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QBase {
    p: Option<Rational>,
    q: Rational,
}

fn check_unit_interval(name: &'static str, x: &Rational) -> Result<()> {
    if *x <= 0 || *x >= 1 {
        return Err(Error::InvalidBase { name, value: x.to_string() });
    }
    Ok(())
}

impl QBase {
    /// Base with `q = p^2`, requiring `0 < p < 1`.
    pub fn new(p: Rational) -> Result<Self> {
        check_unit_interval("p", &p)?;
        let q = Rational::from(p.square_ref());
        Ok(Self { p: Some(p), q })
    }

    /// Base given by `q` alone, requiring `0 < q < 1`.
    pub fn from_q(q: Rational) -> Result<Self> {
        check_unit_interval("q", &q)?;
        Ok(Self { p: None, q })
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn p(&self) -> Result<&Rational> {
        self.p.as_ref().ok_or(Error::HalfPowerUnavailable)
    }

    /// `q^k` for any integer `k`.
    pub fn q_pow(&self, k: i64) -> Rational {
        pow_i64(&self.q, k)
    }

    /// `q^(k/2) = p^k`.
    pub fn p_pow(&self, k: i64) -> Result<Rational> {
        Ok(pow_i64(self.p()?, k))
    }

    /// The base `q^2` (with square root `q`).
    pub fn squared(&self) -> Self {
        Self { p: Some(self.q.clone()), q: Rational::from(self.q.square_ref()) }
    }

    /// `(-1)^k q^(k(k-1)/2)`, the factor appearing in Euler's expansion and in
    /// the balancing term of basic hypergeometric series.
    pub fn triangular_sign(&self, k: usize) -> Rational {
        let k = k as i64;
        let v = self.q_pow(k * (k - 1) / 2);
        if k % 2 == 1 {
            -v
        } else {
            v
        }
    }

    /// Smallest `m` in `0..=guard` with `x == q^(-m)`.
    pub fn inverse_power_index(&self, x: &Rational, guard: usize) -> Option<usize> {
        if *x <= 0 {
            return None;
        }
        // q^-m grows monotonically, so stop as soon as it passes x.
        let q_inv = Rational::from(self.q.recip_ref());
        let mut power = Rational::from(1);
        for m in 0..=guard {
            if power == *x {
                return Some(m);
            }
            if power > *x {
                return None;
            }
            power *= &q_inv;
        }
        None
    }
}

pub(crate) fn pow_i64(x: &Rational, k: i64) -> Rational {
    let e = i32::try_from(k).expect("q exponent out of i32 range");
    x.clone().pow(e)
}

/// `[a]_q = (1 - q^a)/(1 - q)`.
pub fn q_number(a: i64, base: &QBase) -> Rational {
    let one = Rational::from(1);
    (&one - base.q_pow(a)) / (one - base.q())
}

/// `[n]_q! = [1]_q [2]_q ... [n]_q`.
pub fn q_factorial(n: u64, base: &QBase) -> Rational {
    (1..=n as i64).fold(Rational::from(1), |acc, k| acc * q_number(k, base))
}

/// Gaussian binomial `(q;q)_n / ((q;q)_k (q;q)_(n-k))`.
pub fn q_binomial(n: u64, k: u64, base: &QBase) -> Result<Rational> {
    if k > n {
        return Err(Error::BinomialRange { n, k });
    }
    let k = k.min(n - k);
    // Multiplicative form avoids building the full (q;q)_n.
    let mut acc = Rational::from(1);
    let one = Rational::from(1);
    for i in 0..k as i64 {
        let num = &one - base.q_pow(n as i64 - i);
        let den = &one - base.q_pow(i + 1);
        acc *= num / den;
    }
    Ok(acc)
}

/// `(a;q)_n = (1 - a)(1 - aq)...(1 - aq^(n-1))`.
pub fn qpoch_scalar(a: &Rational, n: usize, base: &QBase) -> Rational {
    let mut acc = Rational::from(1);
    let mut factor = a.clone();
    for _ in 0..n {
        acc *= Rational::from(1 - &factor);
        factor *= base.q();
    }
    acc
}

/// `(ct;q)_inf`, coefficient of `t^k` is `(-1)^k q^(k(k-1)/2) c^k / (q;q)_k`.
pub fn qpoch_inf_series(c: &Rational, base: &QBase, order: usize) -> TruncatedSeries {
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut c_pow = Rational::from(1);
    let mut qq = Rational::from(1);
    for k in 0..=order {
        if k > 0 {
            c_pow *= c;
            qq *= 1 - base.q_pow(k as i64);
        }
        coeffs.push(base.triangular_sign(k) * Rational::from(&c_pow / &qq));
    }
    TruncatedSeries::from_coeffs(coeffs)
}

/// `1/(ct;q)_inf`, coefficient of `t^k` is `c^k / (q;q)_k`.
pub fn qpoch_inf_reciprocal_series(c: &Rational, base: &QBase, order: usize) -> TruncatedSeries {
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut term = Rational::from(1);
    for k in 0..=order {
        if k > 0 {
            term *= c;
            term /= 1 - base.q_pow(k as i64);
        }
        coeffs.push(term.clone());
    }
    TruncatedSeries::from_coeffs(coeffs)
}

/// `(ct;q)_lambda = (ct;q)_inf / (ctL;q)_inf` with `L = q^lambda`.
pub fn qpoch_lambda_series(c: &Rational, l: &Rational, base: &QBase, order: usize) -> TruncatedSeries {
    let cl = Rational::from(c * l);
    qpoch_inf_series(c, base, order).mul(&qpoch_inf_reciprocal_series(&cl, base, order))
}

/// `(ct;q)_n = (1 - ct)(1 - cqt)...(1 - cq^(n-1)t)`.
pub fn qpoch_finite_in_t(c: &Rational, n: usize, base: &QBase, order: usize) -> TruncatedSeries {
    let mut s = TruncatedSeries::one(order);
    let mut factor = c.clone();
    for _ in 0..n {
        s.mul_linear(&factor);
        factor *= base.q();
    }
    s
}

/// The conjugate pair `(c t^(1/2);q)_k (-c t^(1/2);q)_k = (c^2 t; q^2)_k`.
pub fn qpoch_pair(c: &Rational, k: usize, base: &QBase, order: usize) -> TruncatedSeries {
    let c2 = Rational::from(c.square_ref());
    qpoch_finite_in_t(&c2, k, &base.squared(), order)
}
