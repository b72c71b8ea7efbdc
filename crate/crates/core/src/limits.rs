//! Numeric `q -> 1` checks in MPFR floating point.
//!
//! Each check evaluates a q-expression at `q_k = 1 - 2^-(k+3)` for
//! `k = 1..=steps` and measures its distance to the classical target.
//! Infinite sums are cut once three consecutive terms fall below
//! `2^-(precision/2)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rug::ops::Pow;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{factorial, rising, ParamBinding};
use crate::numerics::{BigFloat, Rational, MIN_PRECISION};
use crate::verify::Status;

pub const DEFAULT_PRECISION: u32 = 256;
pub const DEFAULT_STEPS: usize = 12;

/// Hard cap on the number of terms of any truncated sum.
const MAX_TERMS: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitId {
    /// `(1-q)^n/(q;q)_n -> 1/n!`
    Fact,
    /// `1/(t(1-q);q)_inf -> e^t`
    Exp,
    /// `2phi2(q^a, q^b; q^c, q^d; q, t(q-1)) -> 2F2(a, b; c, d; t)`
    Phi22,
    /// Lattice q-Pasternack generating sums against their classical closed forms.
    CorJ,
    /// The `1/(q;q)_n`-weighted lattice identity with `t -> t(1-q)`.
    L11,
}

impl LimitId {
    pub const ALL: [LimitId; 5] = [LimitId::Fact, LimitId::Exp, LimitId::Phi22, LimitId::CorJ, LimitId::L11];

    pub fn name(self) -> &'static str {
        match self {
            LimitId::Fact => "LIM-FACT",
            LimitId::Exp => "LIM-EXP",
            LimitId::Phi22 => "LIM-PHI22",
            LimitId::CorJ => "LIM-COR-J",
            LimitId::L11 => "LIM-L11",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            LimitId::Fact => "(1-q)^n/(q;q)_n -> 1/n!",
            LimitId::Exp => "1/(t(1-q);q)_inf -> e^t",
            LimitId::Phi22 => "2phi2(q^a, q^b; q^c, q^d; q, t(q-1)) -> 2F2(a, b; c, d; t)",
            LimitId::CorJ => "sum_n B^j_m(-2n-1-j; q) (q^lambda;q)_n/(q;q)_n t^n -> classical lattice Pasternack sum",
            LimitId::L11 => "Z_m(t(1-q); q)/(t(1-q);q)_inf -> e^t Z_m(-t)",
        }
    }

    /// Parameters and their defaults. `lambda` in LIM-COR-J has no default;
    /// without it the unweighted sum is checked.
    pub fn defaults(self) -> &'static [(&'static str, (i64, i64))] {
        match self {
            LimitId::Fact => &[("n", (2, 1))],
            LimitId::Exp => &[("t", (1, 2))],
            LimitId::Phi22 => &[("a", (1, 2)), ("b", (-1, 3)), ("c", (3, 2)), ("d", (5, 4)), ("t", (1, 2))],
            LimitId::CorJ => &[("m", (1, 1)), ("j", (0, 1)), ("t", (1, 4))],
            LimitId::L11 => &[("m", (2, 1)), ("t", (1, 2))],
        }
    }
}

impl fmt::Display for LimitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LimitId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        LimitId::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::UnknownLimit(s.to_string()))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitStep {
    pub q: f64,
    pub error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitReport {
    pub id: String,
    pub binding: BTreeMap<String, String>,
    pub precision_bits: u32,
    pub target: f64,
    pub steps: Vec<LimitStep>,
    /// Mean of `log2(error_k / error_(k+1))` over pairs of nonzero errors.
    pub rate: Option<f64>,
    pub status: Status,
    #[serde(skip)]
    pub errors: Vec<BigFloat>,
}

impl LimitReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("limit report serializes")
    }
}

/// `q_k = 1 - 2^-(k+3)`, exact in binary.
pub fn q_step(k: usize, precision: u32) -> BigFloat {
    let h = BigFloat::with_val(precision, 1) >> (k as u32 + 3);
    BigFloat::with_val(precision, 1 - h)
}

struct Ctx {
    prec: u32,
    tol: BigFloat,
}

impl Ctx {
    fn new(prec: u32) -> Self {
        let tol = BigFloat::with_val(prec, 1) >> (prec / 2);
        Self { prec, tol }
    }

    fn f(&self, x: &Rational) -> BigFloat {
        BigFloat::with_val(self.prec, x)
    }

    fn one(&self) -> BigFloat {
        BigFloat::with_val(self.prec, 1)
    }

    /// `sum_k term_k` with `term_(k+1) = term_k * ratio(k)`, `term_0 = 1`.
    fn sum_by_ratio(&self, mut ratio: impl FnMut(usize) -> BigFloat) -> BigFloat {
        let mut term = self.one();
        let mut sum = self.one();
        let mut small = 0;
        for k in 0..MAX_TERMS {
            term *= ratio(k);
            sum += &term;
            if term.is_zero() {
                break;
            }
            if BigFloat::with_val(self.prec, term.abs_ref()) < self.tol {
                small += 1;
                if small >= 3 {
                    break;
                }
            } else {
                small = 0;
            }
        }
        sum
    }

    /// `(x;q)_n` for a float `x`.
    fn qpoch(&self, x: &BigFloat, q: &BigFloat, n: usize) -> BigFloat {
        let mut acc = self.one();
        let mut f = x.clone();
        for _ in 0..n {
            acc *= BigFloat::with_val(self.prec, 1 - &f);
            f *= q;
        }
        acc
    }

    /// `1/(x;q)_inf = sum_k x^k / (q;q)_k`.
    fn qpoch_inf_recip(&self, x: &BigFloat, q: &BigFloat) -> BigFloat {
        let mut qk = q.clone();
        self.sum_by_ratio(|_| {
            let r = BigFloat::with_val(self.prec, x / BigFloat::with_val(self.prec, 1 - &qk));
            qk *= q;
            r
        })
    }

    fn q_power(&self, q: &BigFloat, a: &Rational) -> BigFloat {
        BigFloat::with_val(self.prec, q.pow(&self.f(a)))
    }
}

fn rational_or_default(binding: &ParamBinding, name: &str, default: (i64, i64)) -> Rational {
    binding.get(name).cloned().unwrap_or_else(|| Rational::from(default))
}

/// Fills defaults for the parameters `id` reads.
pub fn complete_binding(id: LimitId, binding: &ParamBinding) -> ParamBinding {
    let mut out = binding.clone();
    for &(name, default) in id.defaults() {
        out.set(name, rational_or_default(binding, name, default));
    }
    out
}

fn check_t(b: &ParamBinding) -> Result<Rational> {
    let t = b.rational("t")?.clone();
    if Rational::from(t.abs_ref()) > Rational::from((1, 2)) {
        return Err(Error::InvalidParam { name: "t".into(), reason: "needs |t| <= 1/2".into() });
    }
    Ok(t)
}

fn not_pole(b: &ParamBinding, name: &str) -> Result<Rational> {
    let v = b.rational(name)?.clone();
    if v.is_integer() && v <= 0 {
        return Err(Error::InvalidParam { name: name.into(), reason: "must not be a nonpositive integer".into() });
    }
    Ok(v)
}

/// The q-side of a check as a function of `q`.
type Evaluator = Box<dyn Fn(&Ctx, &BigFloat) -> BigFloat>;

fn plan(id: LimitId, b: &ParamBinding, ctx: &Ctx) -> Result<(BigFloat, Evaluator)> {
    let prec = ctx.prec;
    Ok(match id {
        LimitId::Fact => {
            let n = b.natural("n")?;
            let target = ctx.f(&factorial(n).recip());
            let eval: Evaluator = Box::new(move |c, q| {
                let h = BigFloat::with_val(prec, 1 - q);
                let num = BigFloat::with_val(prec, h.pow(n as u32));
                num / c.qpoch(q, q, n)
            });
            (target, eval)
        }
        LimitId::Exp => {
            let t = check_t(b)?;
            let target = ctx.f(&t).exp();
            let eval: Evaluator = Box::new(move |c, q| {
                let x = c.f(&t) * BigFloat::with_val(prec, 1 - q);
                c.qpoch_inf_recip(&x, q)
            });
            (target, eval)
        }
        LimitId::Phi22 => {
            let (a, bb) = (b.rational("a")?.clone(), b.rational("b")?.clone());
            let (cc, d) = (not_pole(b, "c")?, not_pole(b, "d")?);
            let t = check_t(b)?;
            let (a2, b2, c2, d2, t2) = (a.clone(), bb.clone(), cc.clone(), d.clone(), t.clone());
            let target = ctx.sum_by_ratio(|k| {
                let k = k as u64;
                let num = Rational::from(&a2 + k) * Rational::from(&b2 + k) * &t2;
                let den = Rational::from(&c2 + k) * Rational::from(&d2 + k) * (k + 1);
                ctx.f(&(num / den))
            });
            let eval: Evaluator = Box::new(move |c, q| {
                let mut qa = c.q_power(q, &a);
                let mut qb = c.q_power(q, &bb);
                let mut qc = c.q_power(q, &cc);
                let mut qd = c.q_power(q, &d);
                let mut qk = c.one();
                let x = c.f(&t) * BigFloat::with_val(prec, q - 1u32);
                c.sum_by_ratio(|_| {
                    // term ratio of a 2phi2: numerator/denominator factors, (-q^k) and x
                    let mut r = BigFloat::with_val(prec, 1 - &qa) * BigFloat::with_val(prec, 1 - &qb);
                    r /= BigFloat::with_val(prec, 1 - &qc) * BigFloat::with_val(prec, 1 - &qd);
                    let qk1 = BigFloat::with_val(prec, &qk * q);
                    r /= BigFloat::with_val(prec, 1 - &qk1);
                    r *= -BigFloat::with_val(prec, &qk * &x);
                    for f in [&mut qa, &mut qb, &mut qc, &mut qd] {
                        *f *= q;
                    }
                    qk = qk1;
                    r
                })
            });
            (target, eval)
        }
        LimitId::CorJ => {
            let (m, j) = (b.natural("m")?, b.natural("j")?);
            let t = check_t(b)?;
            let lambda = b.get("lambda").cloned();
            let target = cor_target(ctx, m, j, lambda.as_ref(), &t);
            let eval: Evaluator = Box::new(move |c, q| cor_q_side(c, q, m, j, lambda.as_ref(), &t));
            (target, eval)
        }
        LimitId::L11 => {
            let m = b.natural("m")?;
            let t = check_t(b)?;
            let mut zm = Rational::new();
            for k in 0..=m {
                let c = rising(&Rational::from(-(m as i64)), k) * rising(&Rational::from(m as u64 + 1), k)
                    / (factorial(k) * factorial(k) * factorial(k));
                zm += c * crate::qcore::pow_i64(&Rational::from(-&t), k as i64);
            }
            let target = ctx.f(&t).exp() * ctx.f(&zm);
            let eval: Evaluator = Box::new(move |c, q| {
                let x = c.f(&t) * BigFloat::with_val(prec, 1 - q);
                c.qpoch_inf_recip(&x, q) * l11_phi(c, q, m, &x)
            });
            (target, eval)
        }
    })
}

/// `2phi2(q^-m, q^(m+1); q, q; q, x)`, a polynomial of degree `m` in `x`.
fn l11_phi(c: &Ctx, q: &BigFloat, m: usize, x: &BigFloat) -> BigFloat {
    let prec = c.prec;
    let mut sum = c.one();
    let mut term = c.one();
    let q_neg_m = BigFloat::with_val(prec, q.pow(-(m as i32)));
    let q_m1 = BigFloat::with_val(prec, q.pow(m as i32 + 1));
    let (mut a, mut b, mut qk) = (q_neg_m, q_m1, c.one());
    for _ in 0..m {
        let qk1 = BigFloat::with_val(prec, &qk * q);
        let denom = BigFloat::with_val(prec, 1 - &qk1);
        let mut r = BigFloat::with_val(prec, 1 - &a) * BigFloat::with_val(prec, 1 - &b);
        r /= BigFloat::with_val(prec, &denom * &denom) * &denom;
        r *= -BigFloat::with_val(prec, &qk * x);
        term *= r;
        sum += &term;
        a *= q;
        b *= q;
        qk = qk1;
    }
    sum
}

/// Classical closed form of the lattice Pasternack sum.
fn cor_target(c: &Ctx, m: usize, j: usize, lambda: Option<&Rational>, t: &Rational) -> BigFloat {
    let u = Rational::from(-t) / Rational::from(1 - t);
    let mut sum = Rational::new();
    for k in 0..=m {
        let mut coeff = rising(&Rational::from(-(m as i64)), k) * rising(&Rational::from(m as u64 + 1), k)
            / (rising(&Rational::from(j as u64 + 1), k) * factorial(k));
        if let Some(l) = lambda {
            coeff *= rising(l, k) / factorial(k);
        }
        sum += coeff * crate::qcore::pow_i64(&u, k as i64);
    }
    let one_minus_t = c.f(&Rational::from(1 - t));
    let power = match lambda {
        Some(l) => BigFloat::with_val(c.prec, one_minus_t.pow(&c.f(&Rational::from(-l)))),
        None => one_minus_t.recip(),
    };
    power * c.f(&sum)
}

/// `sum_n w_n B^j_m(-2n-1-j; q) t^n` with the 3phi2 argument `q^n`.
fn cor_q_side(c: &Ctx, q: &BigFloat, m: usize, j: usize, lambda: Option<&Rational>, t: &Rational) -> BigFloat {
    let prec = c.prec;
    let tf = c.f(t);
    let q_neg_m = BigFloat::with_val(prec, q.pow(-(m as i32)));
    let q_m1 = BigFloat::with_val(prec, q.pow(m as i32 + 1));
    let q_j1 = BigFloat::with_val(prec, q.pow(j as i32 + 1));
    let ql = lambda.map(|l| c.q_power(q, l));
    let mut sum = BigFloat::with_val(prec, 0);
    let mut weight = c.one();
    let mut t_pow = c.one();
    let mut q_n = c.one();
    let mut small = 0;
    for n in 0..MAX_TERMS {
        // 3phi2(q^-m, q^(m+1), q^-n; q, q^(j+1); q, q^n)
        let q_neg_n = BigFloat::with_val(prec, q_n.clone().recip());
        let (mut a, mut b, mut cc, mut d, mut qk) = (q_neg_m.clone(), q_m1.clone(), q_neg_n, q_j1.clone(), c.one());
        let mut term = c.one();
        let mut value = c.one();
        for _ in 0..m.min(n) {
            let qk1 = BigFloat::with_val(prec, &qk * q);
            let mut r = BigFloat::with_val(prec, 1 - &a) * BigFloat::with_val(prec, 1 - &b);
            r *= BigFloat::with_val(prec, 1 - &cc);
            let e = BigFloat::with_val(prec, 1 - &qk1);
            r /= BigFloat::with_val(prec, &e * &e) * BigFloat::with_val(prec, 1 - &d);
            r *= &q_n;
            term *= r;
            value += &term;
            for f in [&mut a, &mut b, &mut cc, &mut d] {
                *f *= q;
            }
            qk = qk1;
        }
        let contribution = BigFloat::with_val(prec, &value * &weight) * &t_pow;
        sum += &contribution;
        if BigFloat::with_val(prec, contribution.abs_ref()) < c.tol && n > m {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
        if let Some(ql) = &ql {
            // (q^lambda;q)_(n+1)/(q;q)_(n+1) from the n-th value
            let num = BigFloat::with_val(prec, 1 - BigFloat::with_val(prec, ql * &q_n));
            let den = BigFloat::with_val(prec, 1 - BigFloat::with_val(prec, &q_n * q));
            weight *= num / den;
        }
        t_pow *= &tf;
        q_n *= q;
    }
    sum
}

fn rate(errors: &[BigFloat]) -> Option<f64> {
    let logs: Vec<f64> = errors
        .windows(2)
        .filter(|w| !w[0].is_zero() && !w[1].is_zero())
        .map(|w| BigFloat::with_val(64, &w[0] / &w[1]).log2().to_f64())
        .collect();
    if logs.is_empty() {
        None
    } else {
        Some(logs.iter().sum::<f64>() / logs.len() as f64)
    }
}

/// Pass iff the last error is below `10^-3 (1 + |target|)` and the last
/// three errors do not increase.
pub fn judge(errors: &[BigFloat], target: f64) -> Status {
    let tolerance = 1e-3 * (1.0 + target.abs());
    let Some(last) = errors.len().checked_sub(3).map(|i| &errors[i..]) else {
        return Status::Fail;
    };
    let monotone = last[0] >= last[1] && last[1] >= last[2];
    if last[2].to_f64() < tolerance && monotone {
        Status::Pass
    } else {
        Status::Fail
    }
}

/// Runs one limit check. Needs `precision >= 64` and `steps >= 3`.
pub fn limit_check(id: LimitId, binding: &ParamBinding, precision: u32, steps: usize) -> Result<LimitReport> {
    if precision < MIN_PRECISION {
        return Err(Error::PrecisionTooLow(precision));
    }
    if steps < 3 {
        return Err(Error::InvalidParam { name: "steps".into(), reason: "needs at least 3 steps".into() });
    }
    let binding = complete_binding(id, binding);
    let ctx = Ctx::new(precision);
    let (target, eval) = plan(id, &binding, &ctx)?;
    let mut out = Vec::with_capacity(steps);
    let mut errors = Vec::with_capacity(steps);
    for k in 1..=steps {
        let q = q_step(k, precision);
        let value = eval(&ctx, &q);
        let err = BigFloat::with_val(precision, &value - &target).abs();
        out.push(LimitStep { q: q.to_f64(), error: err.to_f64() });
        errors.push(err);
    }
    let status = judge(&errors, target.to_f64());
    Ok(LimitReport {
        id: id.name().to_string(),
        binding: binding.to_text_map(),
        precision_bits: precision,
        target: target.to_f64(),
        rate: rate(&errors),
        steps: out,
        status,
        errors,
    })
}
