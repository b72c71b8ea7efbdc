use super::*;
use crate::families::{q_pasternack_lattice, LatticeArgument};
use crate::numerics::rat;
use crate::qcore::{q_number, qpoch_scalar};

const REQUIRED: [&str; 28] = [
    "Q-GF-2.1", "Q-GF-3.1", "Q-GF-3.2", "Q-GF-3.3", "Q-GF-3.4", "Q-GF-3.6", "Q-GF-3.7", "Q-GF-3.8", "Q-GF-3.9",
    "Q-GF-3.10", "Q-GF-3.11", "Q-REM", "Q-QCP", "C-GF-Z", "C-GF-B1", "C-GF-B2", "C-GF-SYL1", "C-GF-SYL2",
    "C-GF-CES1", "C-GF-CES2", "C-L-1.1", "C-COR-1", "C-COR-2", "C-COR-3", "C-COR-4", "C-CONN-LAG", "C-CONN-CHA",
    "C-CONN-JAC",
];

fn binding(pairs: &[(&str, Rational)]) -> ParamBinding {
    let mut b = ParamBinding::new();
    for (k, v) in pairs {
        b.set(k, v.clone());
    }
    b
}

#[test]
fn registry_contents() {
    let ids: Vec<&str> = list_identities().iter().map(|s| s.id).collect();
    assert!(ids.len() >= 28);
    for id in REQUIRED {
        assert!(ids.contains(&id), "{id} missing");
    }
    let mut sorted = ids.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(sorted.len(), ids.len());
    assert_eq!(ids, REQUIRED.to_vec());
    assert!(lookup("Q-GF-3.5").is_none());
}

#[test]
fn cesaro_schema() {
    let spec = lookup("Q-GF-3.8").unwrap();
    let names: Vec<&str> = spec.params.iter().map(|p| p.name).collect();
    assert_eq!(names, ["p", "s", "z"]);
    assert_eq!(spec.params[1].kind, ParamKind::Natural { max: 6 });
    assert_eq!(spec.schema(), "p: 0 < p < 1, s: integer >= 0, z");
}

#[test]
fn lhs_examples() {
    let b = binding(&[("p", rat(1, 2)), ("s", rat(2, 1)), ("z", rat(3, 5))]);
    assert_eq!(*build_lhs("Q-GF-3.8", &b, 4).unwrap().coeff(0).unwrap(), 1);

    let (z, zq) = (rat(2, 3), rat(5, 7));
    let b = binding(&[("p", rat(2, 3)), ("z", z.clone()), ("Z", zq.clone())]);
    let q = rat(4, 9);
    let expected = (z + 1 - zq) / (1 - q);
    assert_eq!(*build_lhs("Q-GF-3.6", &b, 3).unwrap().coeff(1).unwrap(), expected);
    assert_eq!(*build_rhs("Q-GF-3.6", &b, 3).unwrap().coeff(1).unwrap(), expected);

    let b = binding(&[("m", rat(1, 1))]);
    let lhs = build_lhs("C-COR-1", &b, 10).unwrap();
    let rhs = build_rhs("C-COR-1", &b, 10).unwrap();
    for n in 0..=10 {
        assert_eq!(*lhs.coeff(n).unwrap(), 2 * n as i64 + 1);
        assert_eq!(*rhs.coeff(n).unwrap(), 2 * n as i64 + 1);
    }
}

#[test]
fn cesaro_rhs_first_coefficient() {
    for s in 0..5i64 {
        let base = QBase::new(rat(3, 5)).unwrap();
        let z = rat(-7, 4);
        let b = binding(&[("p", rat(3, 5)), ("s", rat(s, 1)), ("z", z.clone())]);
        let rhs = build_rhs("Q-GF-3.8", &b, 3).unwrap();
        let expected = z * base.q_pow(s) + q_number(s + 1, &base);
        assert_eq!(*rhs.coeff(1).unwrap(), expected);
    }
}

#[test]
fn verification_examples() {
    let r = verify_identity("Q-GF-2.1", &binding(&[("p", rat(7, 10)), ("a", rat(1, 3))]), 20);
    assert_eq!(r.status, Status::Pass);

    let b = binding(&[("p", rat(1, 2)), ("a", rat(1, 4))]);
    assert_eq!(verify_identity("Q-GF-3.2", &b, 16).status, Status::Pass);
    // brute force: B_1(a) = 1 + (q^-1;q)_1 (q^2;q)_1 (a;q)_1 q / ((q;q)_1^3)
    let (q, a) = (rat(1, 4), rat(1, 4));
    let brute = 1 + (1 - q.clone().recip()) * (1 - q.clone() * &q) * (1 - a) * &q
        / ((1 - q.clone()) * (1 - q.clone()) * (1 - q.clone()));
    assert_eq!(brute, rat(-1, 4));
    assert_eq!(*build_lhs("Q-GF-3.2", &b, 2).unwrap().coeff(1).unwrap(), brute);
    assert_eq!(*build_rhs("Q-GF-3.2", &b, 2).unwrap().coeff(1).unwrap(), brute);

    for p in [rat(1, 2), rat(5, 8)] {
        let b = binding(&[("p", p), ("s", rat(0, 1)), ("z", rat(0, 1))]);
        assert_eq!(verify_identity("Q-GF-3.8", &b, 16).status, Status::Pass);
        let rhs = build_rhs("Q-GF-3.8", &b, 16).unwrap();
        assert!(rhs.coeffs().iter().all(|c| *c == 1));
    }
}

#[test]
fn schema_violations_are_errors() {
    let missing = verify_identity("Q-GF-3.8", &binding(&[("p", rat(1, 2)), ("z", rat(1, 1))]), 4);
    assert_eq!(missing.status, Status::Error);
    assert!(missing.message.unwrap().contains('s'));

    let bad_p = verify_identity("Q-GF-2.1", &binding(&[("p", rat(3, 2)), ("a", rat(1, 3))]), 4);
    assert_eq!(bad_p.status, Status::Error);

    let mu_pole = binding(&[("p", rat(1, 2)), ("mu", rat(16, 1)), ("b", rat(1, 3))]);
    assert_eq!(verify_identity("Q-GF-3.4", &mu_pole, 4).status, Status::Error);

    let zero_z = binding(&[("p", rat(1, 2)), ("z", rat(0, 1)), ("Z", rat(1, 3))]);
    assert_eq!(verify_identity("Q-GF-3.6", &zero_z, 4).status, Status::Error);

    let unknown = verify_identity("Q-GF-9.9", &ParamBinding::new(), 4);
    assert_eq!(unknown.status, Status::Error);

    let q_only = binding(&[("q", rat(1, 4)), ("z", rat(1, 3))]);
    assert_eq!(verify_identity("Q-GF-3.1", &q_only, 4).status, Status::Error);
}

#[test]
fn sampling_is_deterministic_and_valid() {
    for spec in list_identities() {
        for mode in [Mode::Free, Mode::Consistent] {
            for seed in 0..8 {
                let a = sample_binding(spec.id, seed, mode).unwrap();
                let b = sample_binding(spec.id, seed, mode).unwrap();
                assert_eq!(a, b);
                spec.check(&a).unwrap();
                if let Some(p) = a.get("p") {
                    assert!(*p > 0 && *p < 1);
                }
            }
        }
    }
    assert!(sample_binding("nope", 1, Mode::Free).is_err());
}

#[test]
fn consistent_mode_derives_exponentials() {
    let mut seen_example = false;
    for seed in 0..400 {
        let b = sample_binding("Q-GF-3.7", seed, Mode::Consistent).unwrap();
        let base = b.base().unwrap();
        let z = b.integer("z").unwrap();
        assert_eq!(z.rem_euclid(2), 1);
        let lambda = b.integer("lambda").unwrap();
        assert_eq!(*b.rational("Z").unwrap(), base.p_pow(2 * z).unwrap());
        assert_eq!(*b.rational("L").unwrap(), base.q_pow(lambda));
        let c = sample_binding("Q-GF-3.2", seed, Mode::Consistent).unwrap();
        let zc = c.integer("z").unwrap();
        let a = c.rational("a").unwrap().clone();
        assert_eq!(a, c.base().unwrap().p_pow(zc + 1).unwrap());
        if zc == 3 && *c.rational("p").unwrap() == rat(1, 2) {
            assert_eq!(a, rat(1, 16));
            seen_example = true;
        }
        let d = sample_binding("Q-GF-3.4", seed, Mode::Consistent).unwrap();
        let (zd, md) = (d.integer("z").unwrap(), d.integer("m").unwrap());
        let bd = d.base().unwrap();
        assert_eq!(*d.rational("mu").unwrap(), bd.q_pow(md + 1));
        assert_eq!(*d.rational("b").unwrap(), bd.p_pow(zd + md + 1).unwrap());
    }
    assert!(seen_example);
    let base = QBase::new(rat(1, 2)).unwrap();
    assert_eq!(base.p_pow(6).unwrap(), rat(1, 64));
}

#[test]
fn order_zero_is_trivial() {
    let summary = verify_all(7, 1, 0, ModeSelection::Both, None);
    assert!(summary.all_passed(), "{}", summary.to_json());
}

#[test]
fn every_identity_passes_a_small_run() {
    let summary = verify_all(3, 2, 8, ModeSelection::Both, None);
    for r in &summary.reports {
        assert_eq!(r.status, Status::Pass, "{}", r.to_json());
    }
    let expected: usize = list_identities()
        .iter()
        .map(|s| if s.modes == ModeSupport::Both { 4 } else { 2 })
        .sum();
    assert_eq!(summary.total, expected);
}

#[test]
fn specialization_chain() {
    for p in [rat(1, 2), rat(3, 5)] {
        let base = QBase::new(p.clone()).unwrap();
        for (m, j) in [(0, 0), (2, 1), (3, 4)] {
            let b39 = binding(&[("p", p.clone()), ("m", rat(m, 1)), ("j", rat(j, 1))]);
            let mut b310 = b39.clone();
            b310.set("L", base.q().clone());
            assert_eq!(build_lhs("Q-GF-3.9", &b39, 12).unwrap(), build_lhs("Q-GF-3.10", &b310, 12).unwrap());
            assert_eq!(build_rhs("Q-GF-3.9", &b39, 12).unwrap(), build_rhs("Q-GF-3.10", &b310, 12).unwrap());
        }
        let a = rat(-5, 7);
        let b32 = binding(&[("p", p.clone()), ("a", a.clone())]);
        let b34 = binding(&[("p", p.clone()), ("mu", base.q().clone()), ("b", a)]);
        assert_eq!(build_lhs("Q-GF-3.2", &b32, 12).unwrap(), build_lhs("Q-GF-3.4", &b34, 12).unwrap());
        assert_eq!(build_rhs("Q-GF-3.2", &b32, 12).unwrap(), build_rhs("Q-GF-3.4", &b34, 12).unwrap());
    }
}

#[test]
fn free_and_consistent_runs_agree() {
    for id in ["Q-GF-3.2", "Q-GF-3.6", "Q-GF-3.7"] {
        for seed in 0..5 {
            let b = sample_binding(id, seed, Mode::Consistent).unwrap();
            let consistent = verify_identity_in_mode(id, &b, 12, Mode::Consistent);
            let free = verify_identity_in_mode(id, &b, 12, Mode::Free);
            assert_eq!(consistent.status, Status::Pass);
            assert_eq!(free.status, consistent.status);
            assert_eq!(free.binding, consistent.binding);
        }
    }
}

#[test]
fn perturbation_is_detected() {
    let pert = Perturbation { id: "Q-GF-3.4".into(), power: 3, delta: rat(1, 1) };
    let summary = verify_all(42, 1, 6, ModeSelection::Free, Some(&pert));
    assert_eq!(summary.failed, 1);
    assert_eq!(summary.errors, 0);
    let bad = summary.reports.iter().find(|r| r.status == Status::Fail).unwrap();
    assert_eq!(bad.id, "Q-GF-3.4");
    assert_eq!(bad.first_mismatch.as_ref().unwrap().power, 3);
}

#[test]
fn degree_argument_does_not_give_the_lattice_identity() {
    let base = QBase::new(rat(1, 2)).unwrap();
    let (m, j) = (2usize, 1usize);
    let b = binding(&[("p", rat(1, 2)), ("m", rat(m as i64, 1)), ("j", rat(j as i64, 1))]);
    let rhs = build_rhs("Q-GF-3.9", &b, 6).unwrap();
    let literal: Vec<Rational> = (0..=6)
        .map(|n| q_pasternack_lattice(m, j, n, LatticeArgument::Degree, &base).unwrap())
        .collect();
    let literal = TruncatedSeries::from_coeffs(literal);
    assert!(!literal.equal_to_order(&rhs, 6).unwrap().is_equal());
    assert!(build_lhs("Q-GF-3.9", &b, 6).unwrap().equal_to_order(&rhs, 6).unwrap().is_equal());
}

#[test]
fn lattice_weights() {
    // the 1/(q;q)_n weight of Q-GF-3.11 applied to the j = 0 lattice values
    let base = QBase::new(rat(2, 3)).unwrap();
    let b = binding(&[("p", rat(2, 3)), ("m", rat(3, 1))]);
    let lhs = build_lhs("Q-GF-3.11", &b, 5).unwrap();
    for n in 0..=5 {
        let v = q_pasternack_lattice(3, 0, n, LatticeArgument::LatticeIndex, &base).unwrap()
            / qpoch_scalar(base.q(), n, &base);
        assert_eq!(*lhs.coeff(n).unwrap(), v);
    }
}

#[test]
fn report_json_layout() {
    let b = binding(&[("p", rat(1, 2)), ("s", rat(2, 1)), ("z", rat(3, 1))]);
    let json = verify_identity("Q-GF-3.8", &b, 12).to_json();
    assert!(json.starts_with(r#"{"id":"Q-GF-3.8","status":"pass","order":12,"mode":"given","binding":{"p":"1/2","s":"2","z":"3"},"first_mismatch":null,"elapsed_ms":"#));
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert!(value["elapsed_ms"].is_number());
}
