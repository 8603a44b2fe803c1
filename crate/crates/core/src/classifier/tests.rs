use alloc::string::ToString;
use alloc::vec::Vec;

use super::*;
use crate::arith::{rat_make, Rational};
use crate::engine::{Family, FamilyKind, SignAssignment};
use crate::poly::{Poly, Var};
use crate::repr::ReprTable;

fn q(p: i64, d: i64) -> Rational {
    rat_make(p, d).unwrap()
}

fn p(s: &str) -> Poly {
    Poly::parse(s).unwrap()
}

fn reduce_of(cert: &CaseCertificate, label: &str) -> (Poly, Rational, Poly) {
    match &cert.step(label).unwrap().op {
        StepOp::Reduce {
            result, scalar, cleared, ..
        } => (result.clone(), scalar.clone(), cleared.clone()),
        other => panic!("{label} is {other:?}"),
    }
}

fn roots_of(cert: &CaseCertificate, label: &str) -> Vec<Rational> {
    match &cert.step(label).unwrap().op {
        StepOp::Roots { roots, .. } => roots.clone(),
        other => panic!("{label} is {other:?}"),
    }
}

fn gcd_of(cert: &CaseCertificate, label: &str) -> Poly {
    match &cert.step(label).unwrap().op {
        StepOp::Gcd { gcd, .. } => gcd.clone(),
        other => panic!("{label} is {other:?}"),
    }
}

#[test]
fn case_k3_steps() {
    let cert = eliminate_case_k3().unwrap();
    let (r, s, _) = reduce_of(&cert, "3b:split");
    assert_eq!(r, p("32*A^2 - 4*A*B - 4*A - B^2 + B"));
    assert_eq!(r.neg().to_string(), "-32*A^2 + 4*A*B + 4*A + B^2 - B");
    assert_eq!(s, q(-1, 1));
    let (r, s, _) = reduce_of(&cert, "i:3d");
    assert_eq!(r, p("243*A^4 - 108*A^3 - 135*A^2"));
    assert_eq!(s, q(1, 1));
    assert_eq!(roots_of(&cert, "i:roots"), [q(-5, 9), q(0, 1), q(1, 1)]);
    assert_eq!(reduce_of(&cert, "ii:3d").0, p("243*A^4 + 324*A^3 - 507*A^2 + 124*A - 8"));
    assert_eq!(reduce_of(&cert, "ii:3g").0, p("81*A^4 + 36*A^3 - 266*A^2 + 65*A - 4"));
    assert_eq!(gcd_of(&cert, "ii:cubic-gcd"), Poly::one());
    assert_eq!(gcd_of(&cert, "ii:gcd"), p("A - 1/9"));
    assert_eq!(roots_of(&cert, "ii:roots"), [q(1, 9)]);
}

#[test]
fn case_k3_points() {
    let cert = eliminate_case_k3().unwrap();
    let ninth = q(1, 9);
    assert_eq!(
        cert.seeds,
        [
            alloc::vec![q(0, 1); 4],
            alloc::vec![ninth; 4],
            alloc::vec![q(1, 1), q(4, 1), q(9, 1), q(16, 1)],
        ]
    );
    let rejected: Vec<&PointCheck> = cert.rejected().collect();
    assert_eq!(rejected.len(), 1);
    let r = rejected[0];
    let a = Var::named("A");
    assert_eq!(r.point[&a], q(-5, 9));
    assert_eq!(r.point[&Var::named("B")], q(-20, 9));
    assert_eq!(r.point[&Var::named("C")], q(25, 9));
    assert_eq!(r.point[&Var::named("D")], q(25, 9));
    let g = r.failures.iter().find(|e| e.label == "3g").unwrap();
    assert_eq!((g.lhs.clone(), g.rhs.clone()), (q(0, 1), q(350, 9)));
    assert!(r.failures.iter().any(|e| e.label == "3c"));
    // identity seed carries E = 25
    let id = cert.accepted().find(|p| p.point[&a] == q(1, 1)).unwrap();
    assert_eq!(id.point[&Var::named("E")], q(25, 1));
}

#[test]
fn case_k4_steps_and_points() {
    let cert = eliminate_case_k4().unwrap();
    let (r, s, _) = reduce_of(&cert, "4a:split");
    assert_eq!(r, p("-11*A^2 + 14*A*B - 3*B^2 - A + B"));
    assert_eq!(s, q(-1, 1));
    let (r, s, _) = reduce_of(&cert, "i:4b");
    assert_eq!(r, p("-32*A^2 + 2*A"));
    assert_eq!(s, q(-1, 1));
    let (r, s, cleared) = reduce_of(&cert, "ii:4b");
    assert_eq!(r, p("-160/9*A^2 + 146/9*A + 14/9"));
    assert_eq!(s, q(-1, 9));
    assert_eq!(cleared, p("80*A^2 - 73*A - 7"));
    let (r, s, _) = reduce_of(&cert, "ii:4c");
    assert_eq!(r, p("-32/9*A^2 + 34/9*A - 2/9"));
    assert_eq!(s, q(-2, 9));
    assert_eq!(gcd_of(&cert, "ii:gcd"), p("A - 1"));
    assert_eq!(roots_of(&cert, "ii:roots-4b"), [q(-7, 80), q(1, 1)]);
    assert_eq!(roots_of(&cert, "ii:roots-4c"), [q(1, 16), q(1, 1)]);

    let sixteenth = q(1, 16);
    assert_eq!(
        cert.seeds,
        [
            alloc::vec![q(0, 1); 3],
            alloc::vec![sixteenth.clone(); 3],
            alloc::vec![q(1, 1), q(4, 1), q(9, 1)],
        ]
    );
    let a = Var::named("A");
    let mut rejected: Vec<Rational> = cert.rejected().map(|p| p.point[&a].clone()).collect();
    rejected.sort();
    assert_eq!(rejected, [q(-7, 80), sixteenth.clone()]);
    let r = cert.rejected().find(|p| p.point[&a] == sixteenth).unwrap();
    assert_eq!(r.point[&Var::named("B")], q(9, 16));
    assert!(r.failures.iter().any(|e| e.label == "4b"));
}

#[test]
fn general_case_symbolic_steps() {
    let cert = eliminate_case_general().unwrap();
    assert_eq!(cert.k, None);
    assert!(cert.points.is_empty());
    let (r, s, _) = reduce_of(&cert, "5a");
    assert_eq!(r, p("2*A^2 - 4*A*B + 2*B^2 + A + 2*B - 3*C"));
    assert_eq!(s, Rational::one());
    assert_eq!(reduce_of(&cert, "5b").0, p("5*A - 8*B + 3*C"));
    assert_eq!(reduce_of(&cert, "5c").0, p("2*A^2 - 4*A*B + 2*B^2 + 6*A - 6*B"));
    let (r, s, _) = reduce_of(&cert, "ii:closing");
    assert_eq!(r, p("6*A*k - 6*k"));
    assert_eq!(s, q(6, 1));
    assert_eq!(reduce_of(&cert, "i:closing").0, p("-A^2*k^2 + A"));
}

#[test]
fn general_case_instances() {
    let general = eliminate_case_general().unwrap();
    for k in 5..=12u64 {
        let cert = general.instantiate(k).unwrap();
        let kk = k as i64;
        let r = q(1, kk * kk);
        assert_eq!(
            cert.seeds,
            [
                alloc::vec![q(0, 1); 3],
                alloc::vec![r.clone(); 3],
                alloc::vec![q(1, 1), q(4, 1), q(9, 1)],
            ],
            "k = {k}"
        );
        assert_eq!(cert.rejected().count(), 0);
        cert.replay().unwrap();
    }
    assert!(general.instantiate(4).is_err());
}

#[test]
fn certificates_replay() {
    for cert in [
        eliminate_case_k3().unwrap(),
        eliminate_case_k4().unwrap(),
        eliminate_case_general().unwrap(),
    ] {
        cert.replay().unwrap();
    }
}

#[test]
fn tampered_certificates_fail_replay() {
    let cert = eliminate_case_k3().unwrap();

    let mut bad = cert.clone();
    if let Some(StepOp::Reduce { result, .. }) = bad.steps.iter_mut().find(|s| s.label == "i:3d").map(|s| &mut s.op) {
        *result = result.add(&Poly::one());
    }
    assert!(bad.replay().is_err());

    let mut bad = cert.clone();
    if let Some(StepOp::Roots { roots, .. }) = bad.steps.iter_mut().find(|s| s.label == "i:roots").map(|s| &mut s.op) {
        roots.pop();
    }
    assert!(bad.replay().is_err());

    let mut bad = cert.clone();
    bad.seeds.pop();
    assert!(bad.replay().is_err());

    let mut bad = cert.clone();
    bad.points[0].failures.clear();
    bad.points.rotate_left(1);
    assert!(bad.replay().is_err());
}

#[test]
fn every_candidate_is_accounted_for() {
    for cert in [eliminate_case_k3().unwrap(), eliminate_case_k4().unwrap()] {
        let a = Var::named("A");
        let mut from_branches: Vec<(alloc::string::String, Rational)> = Vec::new();
        for b in &cert.branches {
            for s in &b.root_steps {
                for r in roots_of(&cert, s) {
                    from_branches.push((b.name.clone(), r));
                }
            }
        }
        from_branches.sort();
        from_branches.dedup();
        let mut from_points: Vec<(alloc::string::String, Rational)> =
            cert.points.iter().map(|p| (p.branch.clone(), p.point[&a].clone())).collect();
        from_points.sort();
        assert_eq!(from_branches, from_points);
    }
}

#[test]
fn solve_linear_examples() {
    let c = Var::named("C");
    assert_eq!(solve_linear(&p("C - 9*A^2"), &c), Some(p("9*A^2")));
    assert_eq!(solve_linear(&p("2*C + B"), &c), Some(p("-1/2*B")));
    assert_eq!(solve_linear(&p("A*C + B"), &c), None);
    assert_eq!(solve_linear(&p("C^2"), &c), None);
}

#[test]
fn classification_examples() {
    for k in [3usize, 4, 5, 7] {
        let c = classify(120, k).unwrap();
        assert!(c.passed(), "k = {k}");
        assert_eq!(
            c.families(),
            [FamilyKind::Zero, FamilyKind::Reciprocal, FamilyKind::Identity],
            "k = {k}"
        );
        assert!(c.outcomes.iter().all(|o| o.instances > 0 || o.seeds.iter().all(Rational::is_zero)));
        assert_eq!(
            c.sign_dof,
            ReprTable::new(120, k).unwrap().non_representable(120).len() as u64
        );
    }
}

#[test]
fn non_solution_seeds_are_flagged() {
    let table = ReprTable::new(200, 3).unwrap();
    let seeds = [1, 4, 9, 17].map(Rational::from);
    let out = classify_seed(&seeds, &table, 200).unwrap();
    assert!(!out.passed());
    assert_eq!(out.family, None);
    assert!(!out.conflicts.is_empty());
}

#[test]
fn perturbations_are_detected() {
    let table = ReprTable::new(150, 3).unwrap();
    for kind in [FamilyKind::Zero, FamilyKind::Identity, FamilyKind::Reciprocal] {
        let fam = Family::new(kind, &table, 150, SignAssignment::random(&table, 150, 11)).unwrap();
        let report = perturbation_test(&fam, &table, 150, 25, 5).unwrap();
        assert!(report.all_detected(), "{kind:?}");
        let flips = sign_flip_test(&fam, &table, 150, 10, 5).unwrap();
        assert_eq!(flips.detected(), 0, "{kind:?}");
    }
}

#[test]
fn zero_family_with_f3_one_fails_at_111() {
    let table = ReprTable::new(30, 3).unwrap();
    let bad = Family::zero(&table, 30).unwrap().with_override(3, Rational::one()).unwrap();
    let report = crate::engine::verify_family(&bad, 30, 3).unwrap();
    assert_eq!(report.violations[0].xs.parts(), &[1, 1, 1]);
    assert_eq!(report.violations[0].n, 3);
}

#[test]
fn certificate_text_survives_display() {
    let cert = eliminate_case_k4().unwrap();
    for s in &cert.steps {
        if let StepOp::Reduce { result, .. } = &s.op {
            assert_eq!(Poly::parse(&result.to_string()).unwrap(), *result);
        }
    }
}
