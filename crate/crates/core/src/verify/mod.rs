//! Exact verification: build both sides of a registered identity and compare
//! coefficients with zero tolerance.

mod registry;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

pub use registry::{list_identities, lookup, require, IdentitySpec, ModeSupport, ParamKind, ParamSpec};

use crate::error::{Error, Result};
use crate::families::ParamBinding;
use crate::numerics::Rational;
use crate::qcore::QBase;
use crate::series::{Comparison, TruncatedSeries};

/// How a binding was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// q-exponentials drawn as independent rationals.
    Free,
    /// q-exponentials are genuine powers of `p` with integer exponents.
    Consistent,
    /// Supplied by the caller.
    Given,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Free => "free",
            Mode::Consistent => "consistent",
            Mode::Given => "given",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeSelection {
    Free,
    Consistent,
    Both,
}

impl ModeSelection {
    /// Modes to run for an identity with the given support.
    pub fn modes_for(self, support: ModeSupport) -> Vec<Mode> {
        match (self, support) {
            (ModeSelection::Free, _) => vec![Mode::Free],
            (ModeSelection::Consistent, ModeSupport::Both) => vec![Mode::Consistent],
            // Classical identities have no q-exponentials to tie down.
            (ModeSelection::Consistent, ModeSupport::FreeOnly) => vec![Mode::Free],
            (ModeSelection::Both, ModeSupport::Both) => vec![Mode::Free, Mode::Consistent],
            (ModeSelection::Both, ModeSupport::FreeOnly) => vec![Mode::Free],
        }
    }
}

impl FromStr for ModeSelection {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "free" => Ok(ModeSelection::Free),
            "consistent" => Ok(ModeSelection::Consistent),
            "both" => Ok(ModeSelection::Both),
            other => Err(Error::InvalidParam { name: "mode".into(), reason: format!("unknown mode {other}") }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub power: usize,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub id: String,
    pub status: Status,
    pub order: usize,
    pub mode: Mode,
    pub binding: BTreeMap<String, String>,
    pub first_mismatch: Option<Mismatch>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<&'static str>,
    pub elapsed_ms: f64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
    pub reports: Vec<VerificationReport>,
}

impl Summary {
    pub fn from_reports(reports: Vec<VerificationReport>) -> Self {
        let count = |s: Status| reports.iter().filter(|r| r.status == s).count();
        Self {
            total: reports.len(),
            passed: count(Status::Pass),
            failed: count(Status::Fail),
            errors: count(Status::Error),
            reports,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0 && self.errors == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("summary serializes")
    }
}

/// Adds `delta` to one right-hand coefficient of one identity. Used to check
/// that the comparison actually detects a wrong coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Perturbation {
    pub id: String,
    pub power: usize,
    pub delta: Rational,
}

pub fn build_lhs(id: &str, binding: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    require(id)?.build_lhs(binding, order)
}

pub fn build_rhs(id: &str, binding: &ParamBinding, order: usize) -> Result<TruncatedSeries> {
    require(id)?.build_rhs(binding, order)
}

fn compare(
    spec: &IdentitySpec,
    binding: &ParamBinding,
    order: usize,
    perturbation: Option<&Perturbation>,
) -> Result<Comparison> {
    let lhs = spec.build_lhs(binding, order)?;
    let mut rhs = spec.build_rhs(binding, order)?;
    if let Some(pert) = perturbation.filter(|p| p.id == spec.id) {
        rhs.bump(pert.power, &pert.delta);
    }
    lhs.equal_to_order(&rhs, order)
}

fn run(
    spec: &IdentitySpec,
    binding: &ParamBinding,
    order: usize,
    mode: Mode,
    perturbation: Option<&Perturbation>,
) -> VerificationReport {
    let start = Instant::now();
    let outcome = compare(spec, binding, order, perturbation);
    let (status, first_mismatch, message) = match outcome {
        Ok(Comparison::Equal) => (Status::Pass, None, None),
        Ok(Comparison::Mismatch { power, lhs, rhs }) => {
            let m = Mismatch { power, lhs: lhs.to_string(), rhs: rhs.to_string() };
            (Status::Fail, Some(m), None)
        }
        Err(e) => (Status::Error, None, Some(e.to_string())),
    };
    VerificationReport {
        id: spec.id.to_string(),
        status,
        order,
        mode,
        binding: binding.to_text_map(),
        first_mismatch,
        message,
        note: spec.note,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

/// Verifies one identity at a caller-supplied binding. Errors in the binding
/// or in evaluation become `status = error`.
pub fn verify_identity(id: &str, binding: &ParamBinding, order: usize) -> VerificationReport {
    verify_identity_in_mode(id, binding, order, Mode::Given)
}

pub fn verify_identity_in_mode(id: &str, binding: &ParamBinding, order: usize, mode: Mode) -> VerificationReport {
    match lookup(id) {
        Some(spec) => run(spec, binding, order, mode, None),
        None => VerificationReport {
            id: id.to_string(),
            status: Status::Error,
            order,
            mode,
            binding: binding.to_text_map(),
            first_mismatch: None,
            message: Some(Error::UnknownIdentity(id.to_string()).to_string()),
            note: None,
            elapsed_ms: 0.0,
        },
    }
}

const BASE_CHOICES: [(i64, i64); 5] = [(1, 2), (2, 3), (3, 5), (5, 8), (7, 10)];
const ODD_Z: [i64; 7] = [-5, -3, -1, 1, 3, 5, 7];

fn fnv1a(text: &str) -> u64 {
    text.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

fn rng_for(id: &str, seed: u64, mode: Mode) -> ChaCha8Rng {
    let tag = match mode {
        Mode::Free => 0x66,
        Mode::Consistent => 0x63,
        Mode::Given => 0x67,
    };
    ChaCha8Rng::seed_from_u64(seed ^ fnv1a(id) ^ (tag << 56))
}

fn sample_base(rng: &mut ChaCha8Rng) -> Rational {
    if rng.gen_bool(0.5) {
        let (n, d) = *BASE_CHOICES.choose(rng).expect("nonempty");
        Rational::from((n, d))
    } else {
        let d = rng.gen_range(2..=16i64);
        let n = rng.gen_range(1..d);
        Rational::from((n, d))
    }
}

/// Nonzero rational `n/d` with `|n|, d <= 16`, different from 1.
fn sample_free(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let n = rng.gen_range(-16..=16i64);
        let d = rng.gen_range(1..=16i64);
        let v = Rational::from((n, d));
        if v != 0 && v != 1 {
            return v;
        }
    }
}

/// Deterministic binding satisfying the identity's schema.
///
/// In consistent mode `z` is an odd integer, `lambda` and `m` are integers,
/// and `a = p^(z+1)`, `Z = p^(2z)`, `L = q^lambda`, `mu = q^(m+1)`,
/// `b = p^(z+m+1)`. The exponents are recorded in the binding as well.
pub fn sample_binding(id: &str, seed: u64, mode: Mode) -> Result<ParamBinding> {
    let spec = require(id)?;
    let mut rng = rng_for(id, seed, mode);
    let consistent = mode == Mode::Consistent && spec.modes == ModeSupport::Both;
    let mut binding = ParamBinding::new();
    let needs_base = spec.params.iter().any(|p| p.kind == ParamKind::Base);
    let base = if needs_base {
        let p = sample_base(&mut rng);
        binding.set("p", p.clone());
        Some(QBase::new(p)?)
    } else {
        None
    };

    if consistent {
        let base = base.as_ref().expect("q identities carry a base");
        let names: Vec<&str> = spec.params.iter().map(|p| p.name).collect();
        let z = *ODD_Z.choose(&mut rng).expect("nonempty");
        let lambda = rng.gen_range(1..=6i64);
        let m = rng.gen_range(0..=6i64);
        for name in names {
            let value = match name {
                "z" => Rational::from(z),
                "a" => base.p_pow(z + 1)?,
                "Z" => base.p_pow(2 * z)?,
                "L" => base.q_pow(lambda),
                "mu" => base.q_pow(m + 1),
                "b" => base.p_pow(z + m + 1)?,
                _ => continue,
            };
            binding.set(name, value);
            match name {
                "a" | "Z" | "b" => binding.set("z", Rational::from(z)),
                _ => {}
            }
            match name {
                "L" => binding.set("lambda", Rational::from(lambda)),
                "mu" | "b" if !spec.params.iter().any(|p| p.name == "m") => binding.set("m", Rational::from(m)),
                _ => {}
            }
        }
    }

    for param in spec.params {
        if binding.contains(param.name) && (param.kind == ParamKind::Base || consistent) {
            continue;
        }
        let value = match param.kind {
            ParamKind::Base => continue,
            ParamKind::Rational | ParamKind::NonzeroRational => sample_free(&mut rng),
            ParamKind::DenominatorBase => {
                let base = base.as_ref().expect("denominator bases come with p");
                loop {
                    let v = sample_free(&mut rng);
                    if base.inverse_power_index(&v, 4096).is_none() {
                        break v;
                    }
                }
            }
            ParamKind::Natural { max } => Rational::from(rng.gen_range(0..=max)),
        };
        binding.set(param.name, value);
    }
    Ok(binding)
}

/// Seed of trial `trial` derived from the run seed.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(trial as u64)
}

/// Runs every registered identity at `trials` sampled bindings per mode.
/// Reports come back in registry order, then mode, then trial.
pub fn verify_all(
    seed: u64,
    trials: usize,
    order: usize,
    modes: ModeSelection,
    perturbation: Option<&Perturbation>,
) -> Summary {
    let jobs: Vec<(&IdentitySpec, Mode, usize)> = list_identities()
        .iter()
        .flat_map(|spec| {
            modes
                .modes_for(spec.modes)
                .into_iter()
                .flat_map(move |mode| (0..trials).map(move |t| (spec, mode, t)))
        })
        .collect();
    let reports = jobs
        .par_iter()
        .map(|&(spec, mode, trial)| match sample_binding(spec.id, trial_seed(seed, trial), mode) {
            Ok(binding) => run(spec, &binding, order, mode, perturbation),
            Err(e) => VerificationReport {
                id: spec.id.to_string(),
                status: Status::Error,
                order,
                mode,
                binding: BTreeMap::new(),
                first_mismatch: None,
                message: Some(e.to_string()),
                note: spec.note,
                elapsed_ms: 0.0,
            },
        })
        .collect();
    Summary::from_reports(reports)
}

#[cfg(test)]
mod tests;
