//! Reduction verdicts compared against bounded ideal membership.

use std::path::Path;

use passivity::algebra::DiffPoly;
use passivity::oracle::{membership, prolong, prolong_below, MembershipInstance};
use passivity::passivity::{is_passive, PairStatus};
use passivity::problem::ProblemFile;
use passivity::ranking::ClassKey;

fn load(name: &str) -> ProblemFile {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("problems")
        .join(format!("{name}.json"));
    ProblemFile::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn instance(target: DiffPoly, generators: Vec<DiffPoly>, degree: u32, order: u32) -> MembershipInstance {
    MembershipInstance {
        target,
        generators,
        cofactor_degree: degree,
        order_bound: order,
    }
}

#[test]
fn satisfied_pairs_lie_in_the_restricted_ideal() {
    let mut checked = 0;
    for name in [
        "heat",
        "gradient_consistent",
        "second_order_pair",
        "riccati",
        "wave_pair_elimination",
        "heat_weighted",
        "three_variables",
        "first_order_single",
    ] {
        let p = load(name);
        let sys = p.system().unwrap();
        let report = is_passive(&sys, &p.bounds).unwrap();
        for pair in &report.pairs {
            assert_eq!(pair.status, PairStatus::Satisfied, "{name}");
            let order = pair.trace.iter().map(|s| s.eliminated.order.order()).max().unwrap_or(0);
            let generators = prolong_below(&sys, order, &pair.class_bound)
                .into_iter()
                .map(|g| g.poly)
                .collect();
            let inst = instance(pair.combination.clone(), generators, pair.combination.degree().max(1), order);
            let found = membership(&inst);
            let cert = found
                .certificate()
                .unwrap_or_else(|| panic!("{name}: pair ({}, {}) refused", pair.tau.i, pair.tau.j));
            assert!(cert.verify(&inst));
            checked += 1;
        }
    }
    assert!(checked >= 6);
}

#[test]
fn inconsistent_gradient_remainder_is_outside_the_restricted_ideal() {
    let p = load("gradient_inconsistent");
    let sys = p.system().unwrap();
    let pair = &is_passive(&sys, &p.bounds).unwrap().pairs[0];
    assert_eq!(pair.status, PairStatus::Inconsistent);
    assert_eq!(pair.remainder, DiffPoly::one());
    assert_eq!(pair.class_bound, ClassKey::Base);

    let below: Vec<DiffPoly> = prolong_below(&sys, 3, &ClassKey::Base)
        .into_iter()
        .map(|g| g.poly)
        .collect();
    let inst = instance(DiffPoly::one(), below, 3, 3);
    assert!(membership(&inst).certificate().is_none());

    // Without the class restriction the constant is a member.
    let all = prolong(&sys, 2).into_iter().map(|g| g.poly).collect();
    let inst = instance(DiffPoly::one(), all, 1, 2);
    assert!(membership(&inst).certificate().unwrap().verify(&inst));
}

#[test]
fn obstruction_is_outside_the_restricted_ideal() {
    let p = load("obstructed");
    let sys = p.system().unwrap();
    let pair = &is_passive(&sys, &p.bounds).unwrap().pairs[0];
    assert_eq!(pair.status, PairStatus::Obstructed);
    let u = DiffPoly::u(1, [0, 0]);
    assert_eq!(pair.remainder, u);

    let below: Vec<DiffPoly> = prolong_below(&sys, 3, &pair.class_bound)
        .into_iter()
        .map(|g| g.poly)
        .collect();
    assert!(!below.is_empty());
    let inst = instance(u.clone(), below, 3, 3);
    assert!(membership(&inst).certificate().is_none());
}
