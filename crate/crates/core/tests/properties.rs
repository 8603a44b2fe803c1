use proptest::prelude::*;
use sumsq_core::classifier::{
    certificate_for, classify, eliminate_case_general, eliminate_case_k3, eliminate_case_k4, CaseCertificate,
};
use sumsq_core::engine::{
    enumerate_instances, extend_seq, verify_family, Family, FamilyKind, SignAssignment, SquareSeq,
};
use sumsq_core::repr::{non_representable_up_to, ReprTable, Witness};
use sumsq_core::{rat_make, Rational};

#[test]
fn signs_are_free_off_the_representable_set() {
    for k in [3usize, 4, 5] {
        let n = 250;
        let table = ReprTable::new(n, k).unwrap();
        for kind in [FamilyKind::Zero, FamilyKind::Identity, FamilyKind::Reciprocal] {
            for seed in 0..50 {
                let signs = SignAssignment::random(&table, n, seed);
                let fam = Family::new(kind, &table, n, signs).unwrap();
                let r = verify_family(&fam, n, k).unwrap();
                assert!(r.passed(), "{kind:?} k={k} seed={seed}");
            }
        }
    }
}

/// The two instances behind each recurrence share their argument.
#[test]
fn recurrence_instances_are_genuine() {
    for k in 3..=9usize {
        for n in 3..=60u64 {
            let (lhs, rhs, target) = if k == 3 {
                (vec![n + 2, n - 2, 1], vec![n, n, 3], 2 * n * n + 9)
            } else {
                let mut l = vec![n + 1, n - 1, 2, 2];
                l.extend(std::iter::repeat_n(1, k - 4));
                let mut r = vec![n, n, 3];
                r.extend(std::iter::repeat_n(1, k - 3));
                (l, r, 2 * n * n + k as u64 + 6)
            };
            Witness::new(lhs, target, k).unwrap();
            Witness::new(rhs, target, k).unwrap();
        }
    }
}

#[test]
fn classification_examples() {
    let c = classify(10, 3).unwrap();
    assert_eq!(c.families().len(), 3);
    assert_eq!(c.sign_dof, 7);
    assert_eq!(non_representable_up_to(10, 3).unwrap(), [1, 2, 4, 5, 7, 8, 10]);
    let c = classify(4, 4).unwrap();
    assert_eq!(c.families().len(), 3);
    assert_eq!(c.sign_dof, 3);
    assert!(classify(10, 2).is_err());
}

/// Each seed's sequence is exactly one family's `A_n`.
#[test]
fn seeds_match_exactly_one_family() {
    for k in [3usize, 4, 5, 6, 9] {
        let n = 150;
        for seeds in certificate_for(k as u64).unwrap().seeds {
            let seq = extend_seq(&seeds, n, k).unwrap();
            let matching: Vec<FamilyKind> = [FamilyKind::Zero, FamilyKind::Identity, FamilyKind::Reciprocal]
                .into_iter()
                .filter(|f| (1..=n).all(|i| seq.get(i) == Some(&f.square_value(i, k))))
                .collect();
            assert_eq!(matching.len(), 1, "k={k} seeds={seeds:?}");
        }
    }
}

#[test]
fn certificates_survive_json() {
    for cert in [
        eliminate_case_k3().unwrap(),
        eliminate_case_k4().unwrap(),
        eliminate_case_general().unwrap(),
        eliminate_case_general().unwrap().instantiate(6).unwrap(),
    ] {
        let text = serde_json::to_string(&cert).unwrap();
        let back: CaseCertificate = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cert);
        back.replay().unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
}

#[test]
fn edited_json_fails_replay() {
    let cert = eliminate_case_k4().unwrap();
    let text = serde_json::to_string(&cert).unwrap();
    // claim the quadratic gcd is A - 2
    let edited = text.replacen("\"gcd\":\"A - 1\"", "\"gcd\":\"A - 2\"", 1);
    assert_ne!(edited, text);
    let back: CaseCertificate = serde_json::from_str(&edited).unwrap();
    assert!(back.replay().is_err());
    // flip a stored witness value
    let edited = text.replacen("\"rhs\":", "\"rhs\":\"1/7\",\"was\":", 1);
    let back: Result<CaseCertificate, _> = serde_json::from_str(&edited);
    assert!(back.map_or(true, |c| c.replay().is_err()));
}

#[test]
fn enumeration_matches_a_direct_loop() {
    for (n, k) in [(120u64, 3usize), (90, 4), (60, 5)] {
        let mut direct = Vec::new();
        fn rec(k: usize, min: u64, sum: u64, n: u64, acc: &mut Vec<u64>, out: &mut Vec<(u64, Vec<u64>)>) {
            if acc.len() == k {
                out.push((sum, acc.clone()));
                return;
            }
            let mut x = min;
            while sum + x * x * (k - acc.len()) as u64 <= n {
                acc.push(x);
                rec(k, x, sum + x * x, n, acc, out);
                acc.pop();
                x += 1;
            }
        }
        rec(k, 1, 0, n, &mut Vec::new(), &mut direct);
        direct.sort();
        let got: Vec<(u64, Vec<u64>)> = enumerate_instances(n, k)
            .unwrap()
            .map(|i| (i.n, i.xs.parts().to_vec()))
            .collect();
        assert_eq!(got, direct);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn sign_dof_matches_representability(n in 1u64..400, k in 3usize..9) {
        let c = classify(n, k).unwrap();
        prop_assert_eq!(c.sign_dof as usize, non_representable_up_to(n, k).unwrap().len());
        prop_assert!(c.passed());
    }

    #[test]
    fn constant_seeds_stay_constant(k in 3usize..8, p in -20i64..20, q in 1i64..20, n in 1u64..400) {
        let c = rat_make(p, q).unwrap();
        let s = if k == 3 { 4 } else { 3 };
        let seq = extend_seq(&vec![c.clone(); s], n, k).unwrap();
        prop_assert!(seq.values().unwrap().iter().all(|v| v == &c));
    }

    #[test]
    fn identity_seeds_give_squares(k in 3usize..8, n in 1u64..600) {
        let s = if k == 3 { 4u64 } else { 3 };
        let seeds: Vec<Rational> = (1..=s).map(|i| Rational::from(i * i)).collect();
        let seq: SquareSeq = extend_seq(&seeds, n, k).unwrap();
        prop_assert!((1..=n).all(|i| seq.get(i) == Some(&Rational::from(i * i))));
    }
}
