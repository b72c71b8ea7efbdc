//! The identity registry: parameter schemas and the two series builders of
//! every generating function, lemma and connection formula.
//!
//! A builder maps `(binding, N)` to a truncated series of order `N`. Left
//! sides are assembled coefficient by coefficient from family values; right
//! sides come from products, reciprocals and compositions, so the two never
//! share an evaluation path.

use std::fmt;

use crate::error::{Error, Result};
use crate::families::{
    bateman, bateman_z, cesaro, cesaro_closed_form, factorial, legendre_polynomial, orth_value, pasternack,
    q_bateman, q_bateman_z, q_cesaro, q_pasternack, q_pasternack_lattice, q_sylvester, rising, sylvester,
    LatticeArgument, OrthPoly, ParamBinding,
};
use crate::hyper::{f_series, phi_series, Argument, HyperSpec, ParamAtom, PhiSpec};
use crate::numerics::Rational;
use crate::qcore::{
    pow_i64, qpoch_finite_in_t, qpoch_inf_reciprocal_series, qpoch_inf_series, qpoch_lambda_series, qpoch_scalar,
    QBase,
};
use crate::series::TruncatedSeries;

pub type Builder = fn(&ParamBinding, usize) -> Result<TruncatedSeries>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamKind {
    /// `p = q^(1/2)` with `0 < p < 1`.
    Base,
    Rational,
    NonzeroRational,
    /// A denominator Pochhammer base; must differ from every `q^-i`.
    DenominatorBase,
    /// A nonnegative integer, sampled from `0..=max`.
    Natural { max: i64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParamSpec {
    pub name: &'static str,
    pub kind: ParamKind,
}

impl fmt::Display for ParamSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ParamKind::Base => write!(f, "{}: 0 < {} < 1", self.name, self.name),
            ParamKind::Rational => write!(f, "{}", self.name),
            ParamKind::NonzeroRational => write!(f, "{}: nonzero", self.name),
            ParamKind::DenominatorBase => write!(f, "{}: not q^-i", self.name),
            ParamKind::Natural { .. } => write!(f, "{}: integer >= 0", self.name),
        }
    }
}

const fn param(name: &'static str, kind: ParamKind) -> ParamSpec {
    ParamSpec { name, kind }
}

const P: ParamSpec = param("p", ParamKind::Base);
const Z: ParamSpec = param("z", ParamKind::Rational);
const Z_NONZERO: ParamSpec = param("z", ParamKind::NonzeroRational);
const A: ParamSpec = param("a", ParamKind::Rational);
const ZQ: ParamSpec = param("Z", ParamKind::Rational);
const L: ParamSpec = param("L", ParamKind::Rational);
const MU: ParamSpec = param("mu", ParamKind::DenominatorBase);
const B: ParamSpec = param("b", ParamKind::Rational);
const LAMBDA: ParamSpec = param("lambda", ParamKind::Rational);
const M: ParamSpec = param("m", ParamKind::Natural { max: 6 });
const J: ParamSpec = param("j", ParamKind::Natural { max: 6 });
const S: ParamSpec = param("s", ParamKind::Natural { max: 6 });
const ELL: ParamSpec = param("l", ParamKind::Natural { max: 3 });

/// Which sampling modes an identity is run in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeSupport {
    FreeOnly,
    Both,
}

pub struct IdentitySpec {
    pub id: &'static str,
    pub description: &'static str,
    pub params: &'static [ParamSpec],
    pub modes: ModeSupport,
    pub note: Option<&'static str>,
    lhs: Builder,
    rhs: Builder,
}

impl IdentitySpec {
    pub fn schema(&self) -> String {
        self.params.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
    }

    /// Checks presence and kind of every schema parameter.
    pub fn check(&self, binding: &ParamBinding) -> Result<()> {
        for spec in self.params {
            let name = spec.name;
            match spec.kind {
                ParamKind::Base => {
                    let base = binding.base()?;
                    base.p()?;
                }
                ParamKind::Rational => {
                    binding.rational(name)?;
                }
                ParamKind::NonzeroRational => {
                    if *binding.rational(name)? == 0 {
                        return Err(invalid(name, "must be nonzero"));
                    }
                }
                ParamKind::DenominatorBase => {
                    let v = binding.rational(name)?;
                    let base = binding.base()?;
                    if base.inverse_power_index(v, 4096).is_some() {
                        return Err(invalid(name, "equals q^-i, a denominator Pochhammer vanishes"));
                    }
                }
                ParamKind::Natural { .. } => {
                    binding.natural(name)?;
                }
            }
        }
        Ok(())
    }

    pub fn build_lhs(&self, binding: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
        self.check(binding)?;
        (self.lhs)(binding, order)
    }

    pub fn build_rhs(&self, binding: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
        self.check(binding)?;
        (self.rhs)(binding, order)
    }
}

fn invalid(name: &str, reason: &str) -> Error {
    Error::InvalidParam { name: name.to_string(), reason: reason.to_string() }
}

/// `sum_(n=0..=order) f(n) t^n`.
fn gf(order: usize, f: impl Fn(usize) -> Result<Rational>) -> Result<TruncatedSeries> {
    (0..=order).map(f).collect::<Result<Vec<_>>>().map(TruncatedSeries::from_coeffs)
}

fn inv_one_minus(c: &Rational, order: usize) -> TruncatedSeries {
    let mut s = TruncatedSeries::one(order);
    s.div_linear(c);
    s
}

fn one() -> Rational {
    Rational::from(1)
}

fn r(v: i64) -> Rational {
    Rational::from(v)
}

fn phi(num: Vec<ParamAtom>, den: Vec<ParamAtom>, arg: Argument, base: &QBase, order: usize) -> Result<TruncatedSeries> {
    phi_series(&PhiSpec::new(num, den, arg, base.clone()), order)
}

fn nat(b: &ParamBinding, name: &str) -> Result<usize> {
    b.natural(name)
}

// q-binomial theorem

fn qbinomial_lhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    let base = b.base()?;
    let a = b.rational("a")?;
    gf(order, |n| Ok(qpoch_scalar(a, n, &base) / qpoch_scalar(base.q(), n, &base)))
}

fn qbinomial_rhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    let base = b.base()?;
    let a = b.rational("a")?;
    Ok(qpoch_inf_series(a, &base, order).mul(&qpoch_inf_reciprocal_series(&one(), &base, order)))
}

// q-Bateman and q-Pasternack

fn qz_lhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    let base = b.base()?;
    let z = b.rational("z")?;
    gf(order, |n| q_bateman_z(n, z, &base))
}

fn qz_rhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    use ParamAtom::*;
    let base = b.base()?;
    let (p, q) = (base.p()?.clone(), base.q().clone());
    let z = b.rational("z")?.clone();
    let num = vec![Scalar(-q.clone()), Scalar(p.clone()), Scalar(-p.clone()), Zero];
    let den = vec![Scalar(q.clone()), Pair(q), Pair(p)];
    let series = phi(num, den, Argument::LinearT(z), &base, order)?;
    Ok(inv_one_minus(&one(), order).mul(&series))
}

fn qb_lhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    let base = b.base()?;
    let a = b.rational("a")?;
    gf(order, |n| q_bateman(n, a, &base))
}

fn qb_rhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    use ParamAtom::*;
    let base = b.base()?;
    let (p, q) = (base.p()?.clone(), base.q().clone());
    let a = b.rational("a")?.clone();
    let num = vec![Scalar(-q.clone()), Scalar(p.clone()), Scalar(-p.clone()), Scalar(a), Zero];
    let den = vec![Scalar(q.clone()), Pair(p), Pair(q)];
    let series = phi(num, den, Argument::LinearT(one()), &base, order)?;
    Ok(inv_one_minus(&one(), order).mul(&series))
}

fn qb_diff_lhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    let base = b.base()?;
    let a = b.rational("a")?;
    let a_over_q = Rational::from(a / base.q());
    gf(order, |n| Ok(q_bateman(n, &a_over_q, &base)? - q_bateman(n, a, &base)?))
}

fn qb_diff_rhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    use ParamAtom::*;
    let base = b.base()?;
    let q = base.q().clone();
    let q2 = base.q_pow(2);
    let p3 = base.p_pow(3)?;
    let a = b.rational("a")?.clone();
    let lead = Rational::from(&a / &q) * Rational::from(1 + &q);
    let prefactor = qpoch_finite_in_t(&one(), 3, &base, order).reciprocal()?.scale(&lead).shift(1);
    let num = vec![Scalar(-q2.clone()), Scalar(p3.clone()), Scalar(-p3.clone()), Scalar(a), Zero];
    let den = vec![Scalar(q2.clone()), Pair(p3), Pair(q2)];
    let series = phi(num, den, Argument::LinearT(q), &base, order)?;
    Ok(prefactor.mul(&series))
}

fn qp_lhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    let base = b.base()?;
    let (mu, bb) = (b.rational("mu")?, b.rational("b")?);
    gf(order, |n| q_pasternack(n, mu, bb, &base))
}

fn qp_rhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    use ParamAtom::*;
    let base = b.base()?;
    let (p, q) = (base.p()?.clone(), base.q().clone());
    let mu = b.rational("mu")?.clone();
    let bb = b.rational("b")?.clone();
    let num = vec![Scalar(-q.clone()), Scalar(p.clone()), Scalar(-p.clone()), Scalar(bb), Zero];
    let den = vec![Scalar(mu), Pair(p), Pair(q)];
    let series = phi(num, den, Argument::LinearT(one()), &base, order)?;
    Ok(inv_one_minus(&one(), order).mul(&series))
}

// q-Sylvester

fn qs_lhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    let base = b.base()?;
    let (z, zq) = (b.rational("z")?, b.rational("Z")?);
    gf(order, |n| q_sylvester(n, z, zq, &base))
}

fn qs_rhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    let base = b.base()?;
    let (z, zq) = (b.rational("z")?, b.rational("Z")?);
    let numer = qpoch_inf_series(zq, &base, order);
    let denom = qpoch_inf_reciprocal_series(&one(), &base, order).mul(&qpoch_inf_reciprocal_series(z, &base, order));
    Ok(numer.mul(&denom))
}

fn qs_lambda_lhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    let base = b.base()?;
    let (z, zq, l) = (b.rational("z")?, b.rational("Z")?, b.rational("L")?);
    gf(order, |n| Ok(qpoch_scalar(l, n, &base) * q_sylvester(n, z, zq, &base)?))
}

fn qs_lambda_rhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    use ParamAtom::*;
    let base = b.base()?;
    let (z, zq, l) = (b.rational("z")?, b.rational("Z")?.clone(), b.rational("L")?.clone());
    let zl = Rational::from(z * &l);
    let prefactor = qpoch_lambda_series(z, &l, &base, order).reciprocal()?;
    let series = phi(vec![Scalar(l), Scalar(zq)], vec![LinearT(zl)], Argument::LinearT(one()), &base, order)?;
    Ok(prefactor.mul(&series))
}

// q-Cesàro

fn qc_lhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    let base = b.base()?;
    let s = nat(b, "s")? as u64;
    let z = b.rational("z")?;
    gf(order, |n| q_cesaro(n, s, z, &base))
}

fn qc_rhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    let base = b.base()?;
    let s = nat(b, "s")?;
    let z = b.rational("z")?;
    let zqs = z * base.q_pow(s as i64);
    let finite = qpoch_finite_in_t(&one(), s + 1, &base, order).reciprocal()?;
    Ok(inv_one_minus(&zqs, order).mul(&finite))
}

fn qcp_rhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    let base = b.base()?;
    let s = nat(b, "s")? as u64;
    let z = b.rational("z")?;
    gf(order, |n| cesaro_closed_form(n, s, z, &base))
}

// q-Pasternack on the lattice z = -2n-1-j

fn lattice(b: &ParamBinding, order: usize, j: usize, weight: impl Fn(usize) -> Rational) -> Result<TruncatedSeries> {
    let base = b.base()?;
    let m = nat(b, "m")?;
    gf(order, |n| Ok(weight(n) * q_pasternack_lattice(m, j, n, LatticeArgument::LatticeIndex, &base)?))
}

fn lattice_lhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    lattice(b, order, nat(b, "j")?, |_| one())
}

fn lattice_rhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    use ParamAtom::*;
    let base = b.base()?;
    let (m, j) = (nat(b, "m")? as i64, nat(b, "j")? as i64);
    let num = vec![Scalar(base.q_pow(-m)), Scalar(base.q_pow(m + 1))];
    let den = vec![Scalar(base.q_pow(j + 1)), LinearT(base.q().clone())];
    let series = phi(num, den, Argument::LinearT(one()), &base, order)?;
    Ok(inv_one_minus(&one(), order).mul(&series))
}

fn lattice_lambda_lhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    let base = b.base()?;
    let l = b.rational("L")?;
    lattice(b, order, nat(b, "j")?, |n| qpoch_scalar(l, n, &base) / qpoch_scalar(base.q(), n, &base))
}

fn lattice_lambda_rhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    use ParamAtom::*;
    let base = b.base()?;
    let (m, j) = (nat(b, "m")? as i64, nat(b, "j")? as i64);
    let l = b.rational("L")?.clone();
    let prefactor = qpoch_inf_series(&l, &base, order).mul(&qpoch_inf_reciprocal_series(&one(), &base, order));
    let num = vec![Scalar(base.q_pow(-m)), Scalar(base.q_pow(m + 1)), Scalar(l.clone())];
    let den = vec![Scalar(base.q().clone()), Scalar(base.q_pow(j + 1)), LinearT(l)];
    let series = phi(num, den, Argument::LinearT(one()), &base, order)?;
    Ok(prefactor.mul(&series))
}

fn lattice_z_lhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    let base = b.base()?;
    lattice(b, order, 0, |n| qpoch_scalar(base.q(), n, &base).recip())
}

fn lattice_z_rhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    use ParamAtom::*;
    let base = b.base()?;
    let m = nat(b, "m")? as i64;
    let q = base.q().clone();
    // Z_m(x; q) as a polynomial in x, then x = t q^-m.
    let num = vec![Scalar(base.q_pow(-m)), Scalar(base.q_pow(m + 1))];
    let zm = phi(num, vec![Scalar(q.clone()), Scalar(q)], Argument::LinearT(base.q_pow(m)), &base, order)?;
    let zm = TruncatedSeries::polynomial(zm.coeffs(), order);
    let inner = TruncatedSeries::monomial(base.q_pow(-m), 1, order);
    Ok(qpoch_inf_reciprocal_series(&one(), &base, order).mul(&zm.compose(&inner)?))
}

// structural lemmas

fn rem_lhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    let base = b.base()?;
    let a = b.rational("a")?;
    gf(order, |n| q_pasternack(n, base.q(), a, &base))
}

// classical families

/// `(1 - c t)^(-lambda)` as `1F0(lambda; -; c t)`.
fn binomial_series(lambda: &Rational, c: &Rational, order: usize) -> Result<TruncatedSeries> {
    let inner = TruncatedSeries::monomial(c.clone(), 1, order);
    f_series(&HyperSpec::new(vec![lambda.clone()], vec![]), &inner, order)
}

fn exp_series(c: &Rational, order: usize) -> Result<TruncatedSeries> {
    let inner = TruncatedSeries::monomial(c.clone(), 1, order);
    f_series(&HyperSpec::new(vec![], vec![]), &inner, order)
}

/// `u = -4t/(1-t)^2`.
fn bateman_argument(order: usize) -> TruncatedSeries {
    let mut u = TruncatedSeries::monomial(r(-4), 1, order);
    u.div_linear(&one());
    u.div_linear(&one());
    u
}

/// `-t/(1-t)`.
fn corollary_argument(order: usize) -> TruncatedSeries {
    let mut u = TruncatedSeries::monomial(r(-1), 1, order);
    u.div_linear(&one());
    u
}

fn cz_lhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    let z = b.rational("z")?;
    gf(order, |n| bateman_z(n, z))
}

fn cz_rhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    let z = b.rational("z")?;
    let spec = HyperSpec::new(vec![Rational::from((1, 2))], vec![one()]);
    let series = f_series(&spec, &bateman_argument(order).scale(z), order)?;
    Ok(inv_one_minus(&one(), order).mul(&series))
}

fn cb_lhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    let z = b.rational("z")?;
    gf(order, |n| bateman(n, z))
}

fn cb_rhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    let z = b.rational("z")?;
    let c = Rational::from(z + 1u32) / 2u32;
    let spec = HyperSpec::new(vec![Rational::from((1, 2)), c], vec![one()]);
    let series = f_series(&spec, &bateman_argument(order), order)?;
    Ok(inv_one_minus(&one(), order).mul(&series))
}

fn cb_diff_lhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    let z = b.rational("z")?;
    let z2 = Rational::from(z - 2u32);
    gf(order, |n| Ok(bateman(n, &z2)? - bateman(n, z)?))
}

fn cb_diff_rhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    let z = b.rational("z")?;
    let c = Rational::from(z + 1u32) / 2u32;
    let spec = HyperSpec::new(vec![Rational::from((3, 2)), c], vec![r(2)]);
    let series = f_series(&spec, &bateman_argument(order), order)?;
    let mut prefactor = TruncatedSeries::monomial(r(2), 1, order);
    for _ in 0..3 {
        prefactor.div_linear(&one());
    }
    Ok(prefactor.mul(&series))
}

fn csyl_lhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    let z = b.rational("z")?;
    gf(order, |n| sylvester(n, z))
}

fn csyl_rhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    let z = b.rational("z")?;
    Ok(exp_series(z, order)?.mul(&binomial_series(z, &one(), order)?))
}

fn csyl_lambda_lhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    let (z, lambda) = (b.rational("z")?, b.rational("lambda")?);
    gf(order, |n| Ok(rising(lambda, n) * sylvester(n, z)?))
}

fn csyl_lambda_rhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    let (z, lambda) = (b.rational("z")?, b.rational("lambda")?);
    let inner = TruncatedSeries::monomial(one(), 1, order).mul(&inv_one_minus(z, order));
    let spec = HyperSpec::new(vec![lambda.clone(), z.clone()], vec![]);
    Ok(binomial_series(lambda, z, order)?.mul(&f_series(&spec, &inner, order)?))
}

fn cces_lhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    let (s, z) = (nat(b, "s")? as u64, b.rational("z")?);
    gf(order, |n| cesaro(n, s, z))
}

fn cces_rhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    let (s, z) = (nat(b, "s")? as i64, b.rational("z")?);
    Ok(binomial_series(&r(s + 1), &one(), order)?.mul(&inv_one_minus(z, order)))
}

fn cces_shift_lhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    let (s, z, l) = (nat(b, "s")? as u64, b.rational("z")?, nat(b, "l")?);
    gf(order, |n| {
        let binom = factorial(n + l) / (factorial(n) * factorial(l));
        Ok(binom * cesaro(n + l, s, z)?)
    })
}

fn cces_shift_rhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    let (s, z, l) = (nat(b, "s")? as i64, b.rational("z")?, nat(b, "l")? as i64);
    // g_l(x) = (1+s)_l / l! * 2F1(-l, 1; -s-l; x) at x = z(1-t)/(1-zt)
    let mut inner = TruncatedSeries::constant(z.clone(), order);
    inner.mul_linear(&one());
    let inner = inner.mul(&inv_one_minus(z, order));
    let spec = HyperSpec::new(vec![r(-l), one()], vec![r(-s - l)]);
    let g = f_series(&spec, &inner, order)?.scale(&(rising(&r(1 + s), l as usize) / factorial(l as usize)));
    let prefactor = binomial_series(&r(s + 1 + l), &one(), order)?.mul(&inv_one_minus(z, order));
    Ok(prefactor.mul(&g))
}

/// Classical Bateman polynomial of degree `m` on the lattice `z = -2n-1`.
fn bateman_on_lattice(m: usize, n: usize) -> Result<Rational> {
    bateman(m, &r(-2 * n as i64 - 1))
}

fn lemma_lhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    let m = nat(b, "m")?;
    gf(order, |n| Ok(bateman_on_lattice(m, n)? / factorial(n)))
}

fn lemma_rhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    let m = nat(b, "m")? as i64;
    let spec = HyperSpec::new(vec![r(-m), r(m + 1)], vec![one(), one()]);
    let zm = f_series(&spec, &TruncatedSeries::monomial(r(-1), 1, order), order)?;
    Ok(exp_series(&one(), order)?.mul(&zm))
}

fn cor1_lhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    let m = nat(b, "m")?;
    gf(order, |n| bateman_on_lattice(m, n))
}

fn cor1_rhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    let m = nat(b, "m")?;
    let legendre = TruncatedSeries::polynomial(&legendre_polynomial(m), m.max(order));
    let mut inner = TruncatedSeries::one(order);
    inner.bump(1, &one());
    let inner = inner.mul(&inv_one_minus(&one(), order));
    Ok(inv_one_minus(&one(), order).mul(&legendre.compose(&inner)?))
}

fn cor2_lhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    let (m, lambda) = (nat(b, "m")?, b.rational("lambda")?);
    gf(order, |n| Ok(bateman_on_lattice(m, n)? * rising(lambda, n) / factorial(n)))
}

fn cor2_rhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    let (m, lambda) = (nat(b, "m")? as i64, b.rational("lambda")?);
    let spec = HyperSpec::new(vec![r(-m), r(m + 1), lambda.clone()], vec![one(), one()]);
    let series = f_series(&spec, &corollary_argument(order), order)?;
    Ok(binomial_series(lambda, &one(), order)?.mul(&series))
}

fn pasternack_on_lattice(m: usize, j: usize, n: usize) -> Result<Rational> {
    pasternack(m, &r(j as i64), &r(-2 * n as i64 - 1 - j as i64))
}

fn cor3_lhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    let (m, j) = (nat(b, "m")?, nat(b, "j")?);
    gf(order, |n| pasternack_on_lattice(m, j, n))
}

fn cor3_rhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    let (m, j) = (nat(b, "m")? as i64, nat(b, "j")? as i64);
    let spec = HyperSpec::new(vec![r(-m), r(m + 1)], vec![r(j + 1)]);
    let series = f_series(&spec, &corollary_argument(order), order)?;
    Ok(inv_one_minus(&one(), order).mul(&series))
}

fn cor4_lhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    let (m, j, lambda) = (nat(b, "m")?, nat(b, "j")?, b.rational("lambda")?);
    gf(order, |n| Ok(pasternack_on_lattice(m, j, n)? * rising(lambda, n) / factorial(n)))
}

fn cor4_rhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    let (m, j, lambda) = (nat(b, "m")? as i64, nat(b, "j")? as i64, b.rational("lambda")?);
    let spec = HyperSpec::new(vec![r(-m), r(m + 1), lambda.clone()], vec![one(), r(j + 1)]);
    let series = f_series(&spec, &corollary_argument(order), order)?;
    Ok(binomial_series(lambda, &one(), order)?.mul(&series))
}

// connection formulas, compared as sequences

fn lag_rhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    let z = b.rational("z")?;
    gf(order, |n| {
        let alpha = -Rational::from(z + n as u64);
        let v = orth_value(&OrthPoly::Laguerre { alpha }, n, z)?;
        Ok(if n % 2 == 0 { v } else { -v })
    })
}

fn cha_rhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    let z = b.rational("z")?;
    gf(order, |n| {
        let c = orth_value(&OrthPoly::Charlier { a: z.clone() }, n, &-z.clone())?;
        Ok(pow_i64(z, n as i64) / factorial(n) * c)
    })
}

fn jac_rhs(b: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    let (s, z) = (nat(b, "s")? as i64, b.rational("z")?);
    let x = Rational::from(2 * z) - 1u32;
    gf(order, |n| {
        let kind = OrthPoly::Jacobi { alpha: r(s + 1), beta: r(-s - n as i64 - 1) };
        orth_value(&kind, n, &x)
    })
}

const LATTICE_NOTE: &str =
    "left side samples the 3phi2 with argument q^n, n the generating index (b = q^-n, mu = q^(j+1))";

macro_rules! identity {
    ($id:expr, $desc:expr, [$($p:expr),*], $modes:expr, $note:expr, $lhs:expr, $rhs:expr) => {
        IdentitySpec {
            id: $id,
            description: $desc,
            params: &[$($p),*],
            modes: $modes,
            note: $note,
            lhs: $lhs,
            rhs: $rhs,
        }
    };
}

use ModeSupport::{Both, FreeOnly};

static REGISTRY: [IdentitySpec; 28] = [
    identity!("Q-GF-2.1", "q-binomial theorem: sum (a;q)_n/(q;q)_n t^n = (at;q)_inf/(t;q)_inf",
        [P, A], Both, None, qbinomial_lhs, qbinomial_rhs),
    identity!("Q-GF-3.1", "q-Bateman-Z generating function as a 4phi5 with conjugate pairs",
        [P, Z], Both, None, qz_lhs, qz_rhs),
    identity!("Q-GF-3.2", "q-Bateman generating function as a 5phi5 with conjugate pairs",
        [P, A], Both, None, qb_lhs, qb_rhs),
    identity!("Q-GF-3.3", "generating function of B_n(a/q) - B_n(a) in q-Bateman form",
        [P, A], Both, None, qb_diff_lhs, qb_diff_rhs),
    identity!("Q-GF-3.4", "q-Pasternack generating function as a 5phi5 with conjugate pairs",
        [P, MU, B], Both, None, qp_lhs, qp_rhs),
    identity!("Q-GF-3.6", "q-Sylvester generating function (Zt;q)_inf/((t;q)_inf (zt;q)_inf)",
        [P, Z_NONZERO, ZQ], Both, None, qs_lhs, qs_rhs),
    identity!("Q-GF-3.7", "q-Sylvester generating function weighted by (L;q)_n",
        [P, Z_NONZERO, ZQ, L], Both, None, qs_lambda_lhs, qs_lambda_rhs),
    identity!("Q-GF-3.8", "q-Cesaro generating function 1/((1 - z q^s t)(t;q)_(s+1))",
        [P, S, Z], Both, None, qc_lhs, qc_rhs),
    identity!("Q-GF-3.9", "q-Pasternack on the lattice z = -2n-1-j, generating function in n",
        [P, M, J], Both, Some(LATTICE_NOTE), lattice_lhs, lattice_rhs),
    identity!("Q-GF-3.10", "lattice q-Pasternack weighted by (L;q)_n/(q;q)_n",
        [P, M, J, L], Both, Some(LATTICE_NOTE), lattice_lambda_lhs, lattice_lambda_rhs),
    identity!("Q-GF-3.11", "lattice q-Bateman weighted by 1/(q;q)_n against Z_m(t q^-m; q)/(t;q)_inf",
        [P, M], Both,
        Some("left side samples the 3phi2 with argument q^n; the right side scales t by q^-m, the only exponent under which the 2phi2 argument is t"),
        lattice_z_lhs, lattice_z_rhs),
    identity!("Q-REM", "q-Pasternack with mu = q, b = a equals q-Bateman",
        [P, A], Both, None, rem_lhs, qb_lhs),
    identity!("Q-QCP", "q-Cesaro closed form sum_k [k+s choose s]_q (z q^s)^(n-k)",
        [P, S, Z], Both, None, qc_lhs, qcp_rhs),
    identity!("C-GF-Z", "Bateman-Z generating function (1-t)^-1 1F1(1/2; 1; -4zt/(1-t)^2)",
        [Z], FreeOnly, None, cz_lhs, cz_rhs),
    identity!("C-GF-B1", "Bateman generating function (1-t)^-1 2F1(1/2, (z+1)/2; 1; -4t/(1-t)^2)",
        [Z], FreeOnly, None, cb_lhs, cb_rhs),
    identity!("C-GF-B2", "generating function of F_n(z-2) - F_n(z)",
        [Z], FreeOnly, None, cb_diff_lhs, cb_diff_rhs),
    identity!("C-GF-SYL1", "Sylvester generating function e^(zt) (1-t)^-z",
        [Z_NONZERO], FreeOnly, None, csyl_lhs, csyl_rhs),
    identity!("C-GF-SYL2", "Sylvester generating function weighted by (lambda)_n",
        [Z_NONZERO, LAMBDA], FreeOnly, None, csyl_lambda_lhs, csyl_lambda_rhs),
    identity!("C-GF-CES1", "Cesaro generating function (1-t)^(-s-1) (1-zt)^-1",
        [S, Z], FreeOnly, None, cces_lhs, cces_rhs),
    identity!("C-GF-CES2", "shifted Cesaro generating function with binomial weight",
        [S, Z, ELL], FreeOnly, None, cces_shift_lhs, cces_shift_rhs),
    identity!("C-L-1.1", "lattice Bateman weighted by 1/n! equals e^t Z_m(-t)",
        [M], FreeOnly, None, lemma_lhs, lemma_rhs),
    identity!("C-COR-1", "lattice Bateman generating function via Legendre P_m((1+t)/(1-t))",
        [M], FreeOnly, None, cor1_lhs, cor1_rhs),
    identity!("C-COR-2", "lattice Bateman weighted by (lambda)_n/n!",
        [M, LAMBDA], FreeOnly, None, cor2_lhs, cor2_rhs),
    identity!("C-COR-3", "lattice Pasternack generating function",
        [M, J], FreeOnly, None, cor3_lhs, cor3_rhs),
    identity!("C-COR-4", "lattice Pasternack weighted by (lambda)_n/n!",
        [M, J, LAMBDA], FreeOnly, None, cor4_lhs, cor4_rhs),
    identity!("C-CONN-LAG", "Sylvester polynomials as Laguerre polynomials",
        [Z_NONZERO], FreeOnly, None, csyl_lhs, lag_rhs),
    identity!("C-CONN-CHA", "Sylvester polynomials as Charlier polynomials",
        [Z_NONZERO], FreeOnly, None, csyl_lhs, cha_rhs),
    identity!("C-CONN-JAC", "Cesaro polynomials as Jacobi polynomials",
        [S, Z], FreeOnly, None, cces_lhs, jac_rhs),
];

/// Every registered identity in stable order.
pub fn list_identities() -> &'static [IdentitySpec] {
    &REGISTRY
}

pub fn lookup(id: &str) -> Option<&'static IdentitySpec> {
    REGISTRY.iter().find(|spec| spec.id == id)
}

pub fn require(id: &str) -> Result<&'static IdentitySpec> {
    lookup(id).ok_or_else(|| Error::UnknownIdentity(id.to_string()))
}
