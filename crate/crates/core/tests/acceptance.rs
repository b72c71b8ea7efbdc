//! Acceptance gate. Runs every criterion at its stated tolerance and prints
//! one PASS/FAIL line per criterion; exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use qident_core::families::ParamBinding;
use qident_core::limits::{limit_check, LimitId};
use qident_core::numerics::Rational;
use qident_core::properties;
use qident_core::qcore::{q_number, QBase};
use qident_core::verify::{
    build_lhs, build_rhs, lookup, sample_binding, trial_seed, verify_all, verify_identity, verify_identity_in_mode,
    Mode, ModeSelection, Perturbation, Status, Summary, VerificationReport,
};

const SEED: u64 = 42;
const TRIALS: usize = 5;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn rat(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

fn binding(pairs: &[(&str, Rational)]) -> ParamBinding {
    let mut b = ParamBinding::new();
    for (k, v) in pairs {
        b.set(k, v.clone());
    }
    b
}

/// Sampled runs of one identity in the given modes.
fn sampled(id: &str, order: usize, modes: &[Mode]) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    for &mode in modes {
        for trial in 0..TRIALS {
            let b = sample_binding(id, trial_seed(SEED, trial), mode).expect("known identity");
            out.push(verify_identity_in_mode(id, &b, order, mode));
        }
    }
    out
}

fn all_pass(reports: &[VerificationReport]) -> Result<usize, String> {
    match reports.iter().find(|r| r.status != Status::Pass) {
        None => Ok(reports.len()),
        Some(r) => Err(format!("{} {} {}", r.id, r.status, r.to_json())),
    }
}

const Q_SUITE: [&str; 10] = [
    "Q-GF-3.1", "Q-GF-3.2", "Q-GF-3.3", "Q-GF-3.4", "Q-GF-3.6", "Q-GF-3.7", "Q-GF-3.8", "Q-GF-3.9", "Q-GF-3.10",
    "Q-GF-3.11",
];

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for id in Q_SUITE {
        count += all_pass(&sampled(id, 16, &[Mode::Free, Mode::Consistent]))?;
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(10) {
        return Err(format!("took {elapsed:?}"));
    }
    // spot coefficients from hand expansions
    let (z, zq) = (rat(-3, 7), rat(9, 5));
    let base = QBase::new(rat(3, 5)).unwrap();
    let q = base.q().clone();
    let b36 = binding(&[("p", rat(3, 5)), ("z", z.clone()), ("Z", zq.clone())]);
    let phi1 = (z.clone() + 1 - zq) / (1 - q.clone());
    for side in [build_lhs("Q-GF-3.6", &b36, 2), build_rhs("Q-GF-3.6", &b36, 2)] {
        if *side.unwrap().coeff(1).unwrap() != phi1 {
            return Err("Q-GF-3.6 t^1 coefficient".into());
        }
    }
    let b38 = binding(&[("p", rat(3, 5)), ("s", rat(3, 1)), ("z", z.clone())]);
    let g1 = z * base.q_pow(3) + q_number(4, &base);
    if *build_rhs("Q-GF-3.8", &b38, 2).unwrap().coeff(1).unwrap() != g1 {
        return Err("Q-GF-3.8 t^1 coefficient".into());
    }
    Ok(format!("{count} runs at N = 16, {:.0} ms", elapsed.as_secs_f64() * 1e3))
}

fn criterion_2() -> Outcome {
    let count = all_pass(&sampled("Q-GF-2.1", 20, &[Mode::Free, Mode::Consistent]))?;
    let fixed = verify_identity("Q-GF-2.1", &binding(&[("p", rat(7, 10)), ("a", rat(1, 3))]), 20);
    all_pass(&[fixed])?;
    Ok(format!("{} runs at N = 20", count + 1))
}

fn criterion_3() -> Outcome {
    let mut reports = Vec::new();
    for p in [rat(1, 2), rat(2, 3), rat(5, 8)] {
        for z in [rat(-3, 4), rat(7, 5), rat(1, 1)] {
            for s in 0..=6 {
                let b = binding(&[("p", p.clone()), ("s", rat(s, 1)), ("z", z.clone())]);
                reports.push(verify_identity("Q-QCP", &b, 12));
            }
        }
        for a in [rat(-2, 9), rat(11, 3), rat(1, 16)] {
            reports.push(verify_identity("Q-REM", &binding(&[("p", p.clone()), ("a", a)]), 12));
        }
    }
    reports.extend(sampled("Q-QCP", 12, &[Mode::Free, Mode::Consistent]));
    reports.extend(sampled("Q-REM", 12, &[Mode::Free, Mode::Consistent]));
    Ok(format!("{} runs at n <= 12", all_pass(&reports)?))
}

fn criterion_4() -> Outcome {
    let mut reports = Vec::new();
    for id in ["C-GF-Z", "C-GF-B1", "C-GF-B2", "C-GF-SYL1", "C-GF-SYL2", "C-GF-CES1"] {
        reports.extend(sampled(id, 12, &[Mode::Free]));
    }
    for l in 0..=3 {
        for s in [0, 2, 5] {
            for z in [rat(2, 7), rat(-4, 3)] {
                let b = binding(&[("s", rat(s, 1)), ("z", z), ("l", rat(l, 1))]);
                reports.push(verify_identity("C-GF-CES2", &b, 12));
            }
        }
    }
    for m in 0..=6 {
        let bm = binding(&[("m", rat(m, 1))]);
        reports.push(verify_identity("C-L-1.1", &bm, 12));
        reports.push(verify_identity("C-COR-1", &bm, 12));
        for lambda in [rat(1, 2), rat(-7, 3), rat(4, 1)] {
            let mut b = bm.clone();
            b.set("lambda", lambda.clone());
            reports.push(verify_identity("C-COR-2", &b, 12));
            for j in [0, 1, 4] {
                let mut bj = b.clone();
                bj.set("j", rat(j, 1));
                reports.push(verify_identity("C-COR-4", &bj, 12));
            }
        }
        for j in 0..=6 {
            let b = binding(&[("m", rat(m, 1)), ("j", rat(j, 1))]);
            reports.push(verify_identity("C-COR-3", &b, 12));
        }
    }
    let count = all_pass(&reports)?;
    // C-COR-1 at m = 1: B_1(z) = -z, so B_1(-2n-1) = 2n+1
    let b = binding(&[("m", rat(1, 1))]);
    let (lhs, rhs) = (build_lhs("C-COR-1", &b, 12).unwrap(), build_rhs("C-COR-1", &b, 12).unwrap());
    for n in 0..=12usize {
        let want = Rational::from(2 * n as i64 + 1);
        if *lhs.coeff(n).unwrap() != want || *rhs.coeff(n).unwrap() != want {
            return Err(format!("C-COR-1 spot value at n = {n}"));
        }
    }
    Ok(format!("{count} runs at N = 12, C-COR-1 m = 1 gives 2n+1"))
}

fn criterion_5() -> Outcome {
    let mut reports = Vec::new();
    for id in ["C-CONN-LAG", "C-CONN-CHA", "C-CONN-JAC"] {
        reports.extend(sampled(id, 10, &[Mode::Free]));
    }
    for z in [rat(1, 3), rat(-5, 2), rat(7, 1), rat(-1, 1), rat(9, 16)] {
        reports.push(verify_identity("C-CONN-LAG", &binding(&[("z", z.clone())]), 10));
        reports.push(verify_identity("C-CONN-CHA", &binding(&[("z", z.clone())]), 10));
        for s in 0..=5 {
            reports.push(verify_identity("C-CONN-JAC", &binding(&[("s", rat(s, 1)), ("z", z.clone())]), 10));
        }
    }
    Ok(format!("{} runs at n <= 10", all_pass(&reports)?))
}

fn criterion_6() -> Outcome {
    let reports = properties::run_all();
    match reports.iter().find(|r| !r.passed()) {
        Some(r) => Err(format!("{}: {:?}", r.name, r.counterexample)),
        None => Ok(reports.iter().map(|r| format!("{} ({})", r.name, r.cases)).collect::<Vec<_>>().join(", ")),
    }
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut runs = Vec::new();
    for n in 0..=5 {
        runs.push((LimitId::Fact, binding(&[("n", rat(n, 1))])));
    }
    runs.push((LimitId::Exp, binding(&[("t", rat(1, 2))])));
    runs.push((LimitId::Phi22, ParamBinding::new()));
    runs.push((LimitId::CorJ, binding(&[("m", rat(1, 1)), ("j", rat(0, 1)), ("t", rat(1, 4))])));
    runs.push((LimitId::CorJ, binding(&[("m", rat(3, 1)), ("j", rat(2, 1)), ("lambda", rat(5, 2)), ("t", rat(1, 3))])));
    for m in 0..=4 {
        runs.push((LimitId::L11, binding(&[("m", rat(m, 1)), ("t", rat(1, 2))])));
    }
    let mut rates = Vec::new();
    for (id, b) in &runs {
        let r = limit_check(*id, b, 256, 12).map_err(|e| e.to_string())?;
        if !r.passed() {
            return Err(r.to_json());
        }
        if matches!(id, LimitId::Fact | LimitId::Exp) {
            if let Some(rate) = r.rate {
                if !(0.5..=1.5).contains(&rate) {
                    return Err(format!("{id} rate {rate}"));
                }
                rates.push(rate);
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(30) {
        return Err(format!("took {elapsed:?}"));
    }
    let (lo, hi) = rates.iter().fold((f64::MAX, f64::MIN), |(lo, hi), &r| (lo.min(r), hi.max(r)));
    Ok(format!("{} checks, FACT/EXP rates in [{lo:.3}, {hi:.3}], {:.0} ms", runs.len(), elapsed.as_secs_f64() * 1e3))
}

fn failing_ids(summary: &Summary) -> BTreeSet<String> {
    summary.reports.iter().filter(|r| r.status != Status::Pass).map(|r| r.id.clone()).collect()
}

fn criterion_8() -> Outcome {
    let order = 8;
    let ids: Vec<&str> = qident_core::verify::list_identities().iter().map(|s| s.id).collect();
    for (i, id) in ids.iter().enumerate() {
        let power = i % (order + 1);
        let pert = Perturbation { id: id.to_string(), power, delta: Rational::from(1) };
        let summary = verify_all(SEED, 1, order, ModeSelection::Both, Some(&pert));
        let failing = failing_ids(&summary);
        if failing.len() != 1 || !failing.contains(*id) || summary.errors != 0 {
            return Err(format!("perturbing {id}: failing {failing:?}"));
        }
        for r in summary.reports.iter().filter(|r| r.id == *id) {
            match &r.first_mismatch {
                Some(m) if m.power == power && r.status == Status::Fail => {}
                _ => return Err(format!("{id}: {}", r.to_json())),
            }
        }
    }
    if lookup("Q-GF-3.8").is_none() {
        return Err("registry lookup".into());
    }
    Ok(format!("{} identities, each perturbation caught alone", ids.len()))
}

fn strip_elapsed(json: &str) -> String {
    let mut value: serde_json::Value = serde_json::from_str(json).expect("valid json");
    for r in value["reports"].as_array_mut().expect("reports") {
        r.as_object_mut().expect("object").remove("elapsed_ms");
    }
    value.to_string()
}

fn criterion_9() -> Outcome {
    let a = verify_all(SEED, TRIALS, 16, ModeSelection::Both, None);
    let b = verify_all(SEED, TRIALS, 16, ModeSelection::Both, None);
    if !a.all_passed() {
        return Err(format!("verify --all failed: {} failed, {} errors", a.failed, a.errors));
    }
    if strip_elapsed(&a.to_json()) != strip_elapsed(&b.to_json()) {
        return Err("JSON differs between runs".into());
    }
    Ok(format!("{} reports, identical JSON", a.total))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("exact q-identity suite, N = 16, both modes", criterion_1),
        ("q-binomial theorem, N = 20", criterion_2),
        ("structural lemmas Q-QCP and Q-REM", criterion_3),
        ("classical suite, N = 12", criterion_4),
        ("connection formulas", criterion_5),
        ("proof-level property suites", criterion_6),
        ("q -> 1 limit suite at 256 bits", criterion_7),
        ("failure detection", criterion_8),
        ("determinism of verify --all", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS  criterion {}: {name} ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {}: {name} ({why})", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
