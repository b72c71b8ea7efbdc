//! Basic hypergeometric series `r_phi_s` and classical `pFq`.
//!
//! Both come in a scalar flavour (terminating sums over rationals) and a
//! series flavour where parameters or the argument depend on the formal
//! variable `t`.
//!
//! Term `k` of `r_phi_s(a; b; q, x)` is
//!
//! ```text
//!   (a_1;q)_k ... (a_r;q)_k / ((b_1;q)_k ... (b_s;q)_k (q;q)_k)
//!     * ((-1)^k q^(k(k-1)/2))^(1+s-r) * x^k
//! ```
//!
//! where `r` and `s` count each conjugate pair `±c t^(1/2)` as two parameters.

use crate::error::{Error, Result};
use crate::numerics::Rational;
use crate::qcore::QBase;
use crate::series::TruncatedSeries;

/// Default number of terms scanned when looking for a terminating parameter.
pub const DEFAULT_GUARD: usize = 64;

/// One numerator or denominator entry of a basic hypergeometric series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParamAtom {
    Scalar(Rational),
    /// The parameter `0`; `(0;q)_k = 1`.
    Zero,
    /// The parameter `c t`.
    LinearT(Rational),
    /// The two parameters `c t^(1/2)` and `-c t^(1/2)`.
    Pair(Rational),
}

impl ParamAtom {
    fn arity(&self) -> i64 {
        match self {
            ParamAtom::Pair(_) => 2,
            _ => 1,
        }
    }

    fn is_series(&self) -> bool {
        matches!(self, ParamAtom::LinearT(_) | ParamAtom::Pair(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Argument {
    Scalar(Rational),
    /// The argument `c t`.
    LinearT(Rational),
}

/// A basic hypergeometric series `r_phi_s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiSpec {
    pub numerator: Vec<ParamAtom>,
    pub denominator: Vec<ParamAtom>,
    pub argument: Argument,
    pub base: QBase,
}

impl PhiSpec {
    pub fn new(
        numerator: Vec<ParamAtom>,
        denominator: Vec<ParamAtom>,
        argument: Argument,
        base: QBase,
    ) -> Self {
        Self { numerator, denominator, argument, base }
    }

    /// Numerator count `r`, pairs counted twice.
    pub fn r(&self) -> i64 {
        self.numerator.iter().map(ParamAtom::arity).sum()
    }

    /// Denominator count `s`, pairs counted twice.
    pub fn s(&self) -> i64 {
        self.denominator.iter().map(ParamAtom::arity).sum()
    }

    /// Exponent `1 + s - r` of the balancing factor.
    pub fn compensation_exponent(&self) -> i64 {
        1 + self.s() - self.r()
    }

    pub fn is_scalar_mode(&self) -> bool {
        !self.numerator.iter().chain(&self.denominator).any(ParamAtom::is_series)
            && matches!(self.argument, Argument::Scalar(_))
    }

    /// Smallest `m <= guard` such that a scalar numerator equals `q^(-m)`.
    pub fn termination_index(&self, guard: usize) -> Option<usize> {
        self.numerator
            .iter()
            .filter_map(|a| match a {
                ParamAtom::Scalar(c) => self.base.inverse_power_index(c, guard),
                _ => None,
            })
            .min()
    }

    /// Scalar part of the ratio `term_(k+1) / term_k`, excluding the argument.
    fn scalar_ratio(&self, k: usize) -> Result<Rational> {
        let qk = self.base.q_pow(k as i64);
        let mut ratio = Rational::from(1);
        for atom in &self.numerator {
            if let ParamAtom::Scalar(a) = atom {
                ratio *= 1 - Rational::from(a * &qk);
            }
        }
        for atom in &self.denominator {
            if let ParamAtom::Scalar(b) = atom {
                let f = 1 - Rational::from(b * &qk);
                if f == 0 {
                    return Err(Error::VanishingDenominator { term: k + 1 });
                }
                ratio /= f;
            }
        }
        ratio /= 1 - self.base.q_pow(k as i64 + 1);
        // ((-1)^k q^(k(k-1)/2))^e steps by (-q^k)^e
        let e = self.compensation_exponent();
        if e != 0 {
            let step = crate::qcore::pow_i64(&qk, e);
            ratio *= if e % 2 != 0 { -step } else { step };
        }
        Ok(ratio)
    }
}

/// Exact value of a terminating scalar-mode series.
pub fn phi_eval_scalar(spec: &PhiSpec, guard: usize) -> Result<Rational> {
    if !spec.is_scalar_mode() {
        return Err(Error::SeriesAtomInScalarMode);
    }
    let m = spec.termination_index(guard).ok_or(Error::NonTerminating { guard })?;
    let Argument::Scalar(x) = &spec.argument else { unreachable!() };
    let mut term = Rational::from(1);
    let mut sum = Rational::from(1);
    for k in 0..m {
        term *= spec.scalar_ratio(k)? * x;
        if term == 0 {
            break;
        }
        sum += &term;
    }
    Ok(sum)
}

/// The series in `t` defined by a series-mode spec, truncated at `order`.
///
/// With a `c t` argument term `k` starts at `t^k`, so at most `order + 1`
/// terms contribute; with a scalar argument the series must terminate.
pub fn phi_series(spec: &PhiSpec, order: usize) -> Result<TruncatedSeries> {
    let last = match &spec.argument {
        Argument::LinearT(_) => match spec.termination_index(order) {
            Some(m) => m.min(order),
            None => order,
        },
        Argument::Scalar(_) => spec
            .termination_index(DEFAULT_GUARD)
            .ok_or(Error::NonTerminating { guard: DEFAULT_GUARD })?,
    };
    let mut term = TruncatedSeries::one(order);
    let mut total = term.clone();
    for k in 0..last {
        let mut ratio = spec.scalar_ratio(k)?;
        ratio *= match &spec.argument {
            Argument::Scalar(x) | Argument::LinearT(x) => x,
        };
        if ratio == 0 {
            break;
        }
        term = term.scale(&ratio);
        if matches!(spec.argument, Argument::LinearT(_)) {
            term = term.shift(1);
        }
        let qk = spec.base.q_pow(k as i64);
        let q2k = Rational::from(qk.square_ref());
        for atom in &spec.numerator {
            match atom {
                ParamAtom::LinearT(c) => term.mul_linear(&Rational::from(c * &qk)),
                ParamAtom::Pair(c) => term.mul_linear(&(Rational::from(c.square_ref()) * &q2k)),
                _ => {}
            }
        }
        for atom in &spec.denominator {
            match atom {
                ParamAtom::LinearT(c) => term.div_linear(&Rational::from(c * &qk)),
                ParamAtom::Pair(c) => term.div_linear(&(Rational::from(c.square_ref()) * &q2k)),
                _ => {}
            }
        }
        if term.is_zero() {
            break;
        }
        total = &total + &term;
    }
    Ok(total)
}

/// A classical generalized hypergeometric series `pFq(a; b; x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperSpec {
    pub numerator: Vec<Rational>,
    pub denominator: Vec<Rational>,
}

impl HyperSpec {
    pub fn new(numerator: Vec<Rational>, denominator: Vec<Rational>) -> Self {
        Self { numerator, denominator }
    }

    /// Smallest `m <= guard` such that a numerator equals `-m`.
    pub fn termination_index(&self, guard: usize) -> Option<usize> {
        self.numerator
            .iter()
            .filter(|a| a.is_integer() && **a <= 0)
            .filter_map(|a| (-a.numer().clone()).to_usize())
            .filter(|&m| m <= guard)
            .min()
    }

    /// `c_(k+1) / c_k` for the coefficient `c_k = (a)_k / ((b)_k k!)`.
    fn ratio(&self, k: usize) -> Result<Rational> {
        let mut r = Rational::from(1);
        for a in &self.numerator {
            r *= Rational::from(a + k as u64);
        }
        for b in &self.denominator {
            let f = Rational::from(b + k as u64);
            if f == 0 {
                return Err(Error::VanishingDenominator { term: k + 1 });
            }
            r /= f;
        }
        Ok(r / (k as u64 + 1))
    }

    /// Coefficients `c_0..=c_order` of the formal series in its argument. For
    /// a terminating series the result is flagged as an exact polynomial.
    pub fn coefficients(&self, order: usize) -> Result<TruncatedSeries> {
        let stop = self.termination_index(order);
        let last = stop.unwrap_or(order);
        let mut coeffs = Vec::with_capacity(last + 1);
        let mut c = Rational::from(1);
        coeffs.push(c.clone());
        for k in 0..last {
            c *= self.ratio(k)?;
            coeffs.push(c.clone());
        }
        Ok(match stop {
            Some(_) => TruncatedSeries::polynomial(&coeffs, order),
            None => TruncatedSeries::from_coeffs(coeffs),
        })
    }
}

/// Exact value of a terminating classical series at `x`.
pub fn f_eval_scalar(spec: &HyperSpec, x: &Rational, guard: usize) -> Result<Rational> {
    let m = spec.termination_index(guard).ok_or(Error::NonTerminating { guard })?;
    let mut term = Rational::from(1);
    let mut sum = Rational::from(1);
    for k in 0..m {
        term *= spec.ratio(k)? * x;
        if term == 0 {
            break;
        }
        sum += &term;
    }
    Ok(sum)
}

/// Formal composition of `pFq(a; b; u)` with the series `u = inner(t)`.
///
/// `inner` needs a zero constant term unless the series terminates, in which
/// case the outer side is a polynomial and any inner series is allowed.
pub fn f_series(spec: &HyperSpec, inner: &TruncatedSeries, order: usize) -> Result<TruncatedSeries> {
    let inner = inner.truncate(order);
    let degree = spec.termination_index(DEFAULT_GUARD).unwrap_or(order);
    let outer = spec.coefficients(degree.max(order))?;
    outer.compose(&inner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;
    use crate::qcore::{qpoch_finite_in_t, qpoch_inf_reciprocal_series, qpoch_inf_series, qpoch_scalar};
    use ParamAtom::*;

    fn bases() -> Vec<QBase> {
        [(1, 2), (2, 3), (3, 5), (5, 8), (7, 10)]
            .iter()
            .map(|&(n, d)| QBase::new(rat(n, d)).unwrap())
            .collect()
    }

    /// Independent oracle: every term rebuilt from scratch with explicit
    /// finite products and a full series reciprocal; pairs are expanded as
    /// `(c^2 t; q^2)_k`.
    fn phi_series_oracle(spec: &PhiSpec, order: usize) -> TruncatedSeries {
        let base = &spec.base;
        let e = spec.compensation_exponent();
        let mut total = TruncatedSeries::zero(order);
        for k in 0..=order {
            let mut num = TruncatedSeries::one(order);
            let mut den = TruncatedSeries::constant(qpoch_scalar(base.q(), k, base), order);
            for (atoms, acc) in [(&spec.numerator, &mut num), (&spec.denominator, &mut den)] {
                for atom in atoms {
                    *acc = match atom {
                        Scalar(c) => acc.scale(&qpoch_scalar(c, k, base)),
                        Zero => acc.clone(),
                        LinearT(c) => acc.mul(&qpoch_finite_in_t(c, k, base, order)),
                        Pair(c) => {
                            let c2 = Rational::from(c.square_ref());
                            acc.mul(&qpoch_finite_in_t(&c2, k, &base.squared(), order))
                        }
                    };
                }
            }
            let sign = base.triangular_sign(k);
            let balance = if e >= 0 {
                crate::qcore::pow_i64(&sign, e)
            } else {
                crate::qcore::pow_i64(&sign.recip(), -e)
            };
            let (x, shift) = match &spec.argument {
                Argument::Scalar(x) => (x.clone(), 0),
                Argument::LinearT(c) => (c.clone(), k),
            };
            let xk = crate::qcore::pow_i64(&x, k as i64);
            let term = num.mul(&den.reciprocal().unwrap()).scale(&(balance * xk)).shift(shift);
            total = &total + &term;
        }
        total
    }

    #[test]
    fn counts_include_pairs() {
        let b = QBase::new(rat(1, 2)).unwrap();
        let q = b.q().clone();
        let spec = PhiSpec::new(
            vec![Scalar(-q.clone()), Scalar(rat(1, 2)), Scalar(rat(-1, 2)), Zero],
            vec![Scalar(q.clone()), Pair(q.clone()), Pair(rat(1, 2))],
            Argument::LinearT(rat(3, 1)),
            b,
        );
        assert_eq!((spec.r(), spec.s(), spec.compensation_exponent()), (4, 5, 2));
    }

    #[test]
    fn scalar_termination_at_one() {
        let b = QBase::new(rat(2, 3)).unwrap();
        let spec = PhiSpec::new(
            vec![Scalar(rat(1, 1)), Scalar(rat(5, 7))],
            vec![Scalar(rat(1, 3))],
            Argument::Scalar(rat(9, 2)),
            b,
        );
        assert_eq!(phi_eval_scalar(&spec, DEFAULT_GUARD).unwrap(), 1);
    }

    #[test]
    fn scalar_bateman_z_one() {
        for b in bases() {
            let q = b.q().clone();
            let z = rat(3, 7);
            let spec = PhiSpec::new(
                vec![Scalar(b.q_pow(-1)), Scalar(b.q_pow(2))],
                vec![Scalar(q.clone()), Scalar(q.clone())],
                Argument::Scalar(Rational::from(&q * &z)),
                b.clone(),
            );
            let expected = 1 + Rational::from(1 + &q) * &z / Rational::from(1 - &q);
            assert_eq!(phi_eval_scalar(&spec, DEFAULT_GUARD).unwrap(), expected);
        }
    }

    #[test]
    fn scalar_negative_compensation() {
        for b in bases() {
            let q = b.q().clone();
            let (zz, z) = (rat(5, 9), rat(-4, 3));
            let spec = PhiSpec::new(
                vec![Scalar(b.q_pow(-1)), Scalar(zz.clone())],
                vec![],
                Argument::Scalar(q / &z),
                b.clone(),
            );
            assert_eq!(spec.compensation_exponent(), -1);
            let expected = 1 + (1 - zz) / z;
            assert_eq!(phi_eval_scalar(&spec, DEFAULT_GUARD).unwrap(), expected);
        }
    }

    #[test]
    fn scalar_errors() {
        let b = QBase::new(rat(1, 2)).unwrap();
        let nonterm = PhiSpec::new(vec![Scalar(rat(1, 3))], vec![], Argument::Scalar(rat(1, 2)), b.clone());
        assert_eq!(phi_eval_scalar(&nonterm, 10), Err(Error::NonTerminating { guard: 10 }));
        // denominator q^-1 vanishes at the second factor
        let vanishing = PhiSpec::new(
            vec![Scalar(b.q_pow(-3))],
            vec![Scalar(b.q_pow(-1))],
            Argument::Scalar(rat(1, 1)),
            b.clone(),
        );
        assert_eq!(phi_eval_scalar(&vanishing, 10), Err(Error::VanishingDenominator { term: 2 }));
        let series = PhiSpec::new(vec![LinearT(rat(1, 1))], vec![], Argument::Scalar(rat(1, 1)), b);
        assert_eq!(phi_eval_scalar(&series, 10), Err(Error::SeriesAtomInScalarMode));
    }

    #[test]
    fn terminating_results_ignore_guard() {
        let b = QBase::new(rat(3, 5)).unwrap();
        let spec = PhiSpec::new(
            vec![Scalar(b.q_pow(-4)), Scalar(rat(7, 3)), Zero],
            vec![Scalar(rat(-2, 5))],
            Argument::Scalar(rat(3, 2)),
            b,
        );
        let v = phi_eval_scalar(&spec, 4).unwrap();
        for guard in [5, 10, 64, 200] {
            assert_eq!(phi_eval_scalar(&spec, guard).unwrap(), v);
        }
    }

    #[test]
    fn series_constant_only_with_zero_argument() {
        let b = QBase::new(rat(1, 2)).unwrap();
        let spec = PhiSpec::new(vec![Scalar(rat(3, 4))], vec![Scalar(rat(1, 3))], Argument::LinearT(rat(0, 1)), b);
        assert_eq!(phi_series(&spec, 8).unwrap(), TruncatedSeries::one(8));
    }

    #[test]
    fn q_binomial_theorem() {
        for (b, a) in bases().into_iter().zip([rat(1, 3), rat(-2, 5), rat(7, 4), rat(5, 1), rat(-1, 9)]) {
            let spec = PhiSpec::new(vec![Scalar(a.clone())], vec![], Argument::LinearT(rat(1, 1)), b.clone());
            let lhs = phi_series(&spec, 20).unwrap();
            let rhs = qpoch_inf_series(&a, &b, 20).mul(&qpoch_inf_reciprocal_series(&rat(1, 1), &b, 20));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn pairing_matches_explicit_products() {
        for b in bases() {
            let p = b.p().unwrap().clone();
            let q = b.q().clone();
            let spec = PhiSpec::new(
                vec![Scalar(-q.clone()), Scalar(p.clone()), Scalar(-p.clone()), Scalar(rat(2, 7)), Zero],
                vec![Scalar(q.clone()), Pair(p.clone()), Pair(q.clone())],
                Argument::LinearT(rat(1, 1)),
                b.clone(),
            );
            assert_eq!(phi_series(&spec, 12).unwrap(), phi_series_oracle(&spec, 12));

            let spec = PhiSpec::new(
                vec![Scalar(b.q_pow(-3)), Pair(rat(3, 2)), LinearT(rat(-1, 2))],
                vec![LinearT(q.clone()), Scalar(rat(5, 3))],
                Argument::LinearT(rat(-2, 3)),
                b.clone(),
            );
            assert_eq!(phi_series(&spec, 12).unwrap(), phi_series_oracle(&spec, 12));
        }
    }

    #[test]
    fn classical_scalar() {
        for n in [rat(0, 1), rat(3, 1), rat(7, 2), rat(-5, 3)] {
            let spec = HyperSpec::new(vec![rat(-1, 1), rat(2, 1), -n.clone()], vec![rat(1, 1), rat(1, 1)]);
            assert_eq!(f_eval_scalar(&spec, &rat(1, 1), 64).unwrap(), 1 + 2 * n);
        }
        let z = rat(5, 3);
        let spec = HyperSpec::new(vec![rat(-1, 1), z.clone()], vec![]);
        assert_eq!(f_eval_scalar(&spec, &(-z.recip()), 64).unwrap(), 2);
        let spec = HyperSpec::new(vec![rat(0, 1), rat(3, 1)], vec![rat(1, 2)]);
        assert_eq!(f_eval_scalar(&spec, &rat(9, 1), 64).unwrap(), 1);
        let nonterm = HyperSpec::new(vec![rat(1, 2)], vec![rat(1, 1)]);
        assert_eq!(f_eval_scalar(&nonterm, &rat(1, 1), 8), Err(Error::NonTerminating { guard: 8 }));
        let vanishing = HyperSpec::new(vec![rat(-3, 1)], vec![rat(-1, 1)]);
        assert_eq!(f_eval_scalar(&vanishing, &rat(1, 1), 8), Err(Error::VanishingDenominator { term: 2 }));
    }

    #[test]
    fn classical_series() {
        let spec = HyperSpec::new(vec![rat(1, 2)], vec![rat(1, 1)]);
        let zero = TruncatedSeries::zero(6);
        assert_eq!(f_series(&spec, &zero, 6).unwrap(), TruncatedSeries::one(6));

        // u = -4 z t/(1-t)^2
        let z = rat(3, 7);
        let one_minus = TruncatedSeries::polynomial(&[rat(1, 1), rat(-1, 1)], 6);
        let u = TruncatedSeries::monomial(-4 * z.clone(), 1, 6)
            .mul(&one_minus.mul(&one_minus).reciprocal().unwrap());
        let s = f_series(&spec, &u, 6).unwrap();
        assert_eq!(*s.coeff(1).unwrap(), -2 * z.clone());

        // 2F0(lambda, z; -; u) at u = t/(1 - z t)
        let lam = rat(2, 3);
        let spec = HyperSpec::new(vec![lam.clone(), z.clone()], vec![]);
        let mut u = TruncatedSeries::variable(6);
        u.div_linear(&z);
        let s = f_series(&spec, &u, 6).unwrap();
        assert_eq!(*s.coeff(1).unwrap(), lam * z);

        let bad = TruncatedSeries::one(6);
        assert_eq!(f_series(&spec, &bad, 6), Err(Error::NonzeroInnerConstant));
    }

    #[test]
    fn terminating_classical_series_accepts_constant_inner() {
        // 2F1(-2, 1; 3; x) = 1 - 2x/3 + x^2/6, evaluated at x = 1 + t
        let spec = HyperSpec::new(vec![rat(-2, 1), rat(1, 1)], vec![rat(3, 1)]);
        let inner = TruncatedSeries::polynomial(&[rat(1, 1), rat(1, 1)], 4);
        let s = f_series(&spec, &inner, 4).unwrap();
        assert_eq!(s.coeffs(), &[rat(1, 2), rat(-1, 3), rat(1, 6), rat(0, 1), rat(0, 1)]);
    }
}
