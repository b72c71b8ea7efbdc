//! Exact checks of the Pochhammer manipulations the generating-function
//! derivations rely on. Each suite sweeps a fixed grid of bases and returns
//! the first counterexample, if any.

use serde::Serialize;

use crate::error::Result;
use crate::numerics::Rational;
use crate::qcore::{q_binomial, qpoch_finite_in_t, qpoch_lambda_series, qpoch_scalar, QBase};
use crate::series::TruncatedSeries;
use crate::verify::Status;

#[derive(Clone, Debug, Serialize)]
pub struct PropertyReport {
    pub name: &'static str,
    pub cases: usize,
    pub status: Status,
    pub counterexample: Option<String>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Bases `p` used by every suite.
pub const GRID: [(i64, i64); 5] = [(1, 2), (2, 3), (3, 5), (5, 8), (7, 10)];

fn bases() -> Vec<QBase> {
    GRID.iter().map(|&(n, d)| QBase::new(Rational::from((n, d))).expect("grid bases lie in (0,1)")).collect()
}

fn report(name: &'static str, outcome: Result<(usize, Option<String>)>) -> PropertyReport {
    match outcome {
        Ok((cases, None)) => PropertyReport { name, cases, status: Status::Pass, counterexample: None },
        Ok((cases, Some(c))) => PropertyReport { name, cases, status: Status::Fail, counterexample: Some(c) },
        Err(e) => PropertyReport { name, cases: 0, status: Status::Error, counterexample: Some(e.to_string()) },
    }
}

/// `(q^-n;q)_k = (-1)^k q^(k(k-1)/2 - nk) (q;q)_n/(q;q)_(n-k)` for `k <= n`,
/// and zero for `k > n`.
pub fn negative_power_rewrite(base: &QBase, n: usize, k: usize) -> (Rational, Rational) {
    let lhs = qpoch_scalar(&base.q_pow(-(n as i64)), k, base);
    let rhs = if k > n {
        Rational::new()
    } else {
        let e = (k * (k.saturating_sub(1)) / 2) as i64 - (n * k) as i64;
        let sign = if k.is_multiple_of(2) { 1 } else { -1 };
        base.q_pow(e) * sign * qpoch_scalar(base.q(), n, base) / qpoch_scalar(base.q(), n - k, base)
    };
    (lhs, rhs)
}

/// `(c^2;q)_(2n) = (c;q)_n (-c;q)_n (cp;q)_n (-cp;q)_n` with `p = q^(1/2)`.
pub fn double_length_split(base: &QBase, c: &Rational, n: usize) -> Result<(Rational, Rational)> {
    let lhs = qpoch_scalar(&Rational::from(c.square_ref()), 2 * n, base);
    let cp = Rational::from(c * base.p()?);
    let rhs = qpoch_scalar(c, n, base)
        * qpoch_scalar(&-c.clone(), n, base)
        * qpoch_scalar(&cp, n, base)
        * qpoch_scalar(&-cp, n, base);
    Ok((lhs, rhs))
}

/// `sum_n [n+s choose s]_q t^n` and `1/(t;q)_(s+1)` to `order`.
pub fn binomial_series_pair(base: &QBase, s: u64, order: usize) -> Result<(TruncatedSeries, TruncatedSeries)> {
    let coeffs = (0..=order as u64).map(|n| q_binomial(n + s, s, base)).collect::<Result<Vec<_>>>()?;
    let lhs = TruncatedSeries::from_coeffs(coeffs);
    let rhs = qpoch_finite_in_t(&Rational::from(1), s as usize + 1, base, order).reciprocal()?;
    Ok((lhs, rhs))
}

/// `(ct;q)_lambda` at `L = q^j` and the finite product `(ct;q)_j`.
pub fn lambda_pair(base: &QBase, c: &Rational, j: usize, order: usize) -> (TruncatedSeries, TruncatedSeries) {
    let lhs = qpoch_lambda_series(c, &base.q_pow(j as i64), base, order);
    (lhs, qpoch_finite_in_t(c, j, base, order))
}

fn sweep_rewrite() -> Result<(usize, Option<String>)> {
    let mut cases = 0;
    for base in bases() {
        for n in 0..=10 {
            for k in 0..=10 {
                cases += 1;
                let (l, r) = negative_power_rewrite(&base, n, k);
                if l != r {
                    return Ok((cases, Some(format!("q = {}, n = {n}, k = {k}: {l} != {r}", base.q()))));
                }
            }
        }
    }
    Ok((cases, None))
}

const SPLIT_CS: [(i64, i64); 4] = [(1, 3), (-2, 5), (7, 4), (3, 1)];

fn sweep_split() -> Result<(usize, Option<String>)> {
    let mut cases = 0;
    for base in bases() {
        for &(num, den) in &SPLIT_CS {
            let c = Rational::from((num, den));
            for n in 0..=8 {
                cases += 1;
                let (l, r) = double_length_split(&base, &c, n)?;
                if l != r {
                    return Ok((cases, Some(format!("q = {}, c = {c}, n = {n}", base.q()))));
                }
            }
        }
    }
    Ok((cases, None))
}

fn sweep_binomial() -> Result<(usize, Option<String>)> {
    let mut cases = 0;
    for base in bases() {
        for s in 0..=6 {
            cases += 1;
            let (l, r) = binomial_series_pair(&base, s, 16)?;
            if !l.equal_to_order(&r, 16)?.is_equal() {
                return Ok((cases, Some(format!("q = {}, s = {s}", base.q()))));
            }
        }
    }
    Ok((cases, None))
}

fn sweep_lambda() -> Result<(usize, Option<String>)> {
    let mut cases = 0;
    for base in bases() {
        for &(num, den) in &SPLIT_CS {
            let c = Rational::from((num, den));
            for j in 0..=6 {
                cases += 1;
                let (l, r) = lambda_pair(&base, &c, j, 16);
                if !l.equal_to_order(&r, 16)?.is_equal() {
                    return Ok((cases, Some(format!("q = {}, c = {c}, j = {j}", base.q()))));
                }
            }
        }
    }
    Ok((cases, None))
}

pub const SUITES: [&str; 4] = ["qpoch-negative-power", "qpoch-double-split", "qbinomial-series", "qpoch-lambda-finite"];

/// Runs every suite in a fixed order.
pub fn run_all() -> Vec<PropertyReport> {
    vec![
        report(SUITES[0], sweep_rewrite()),
        report(SUITES[1], sweep_split()),
        report(SUITES[2], sweep_binomial()),
        report(SUITES[3], sweep_lambda()),
    ]
}
