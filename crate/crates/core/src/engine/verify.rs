use alloc::vec::Vec;

use num_traits::ToPrimitive;
use serde::Serialize;

use super::family::Family;
use super::instance::{Instance, Instances};
use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::repr::{ReprTable, Witness};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub xs: Witness,
    pub n: u64,
    pub lhs: Rational,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub k: usize,
    #[serde(rename = "N")]
    pub bound: u64,
    pub instances: u64,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Concatenates reports over consecutive disjoint ranges, in range order.
    pub fn merge(k: usize, bound: u64, parts: impl IntoIterator<Item = VerificationReport>) -> Self {
        let mut out = VerificationReport {
            k,
            bound,
            instances: 0,
            violations: Vec::new(),
        };
        for p in parts {
            out.instances += p.instances;
            out.violations.extend(p.violations);
        }
        out
    }
}

/// Compares `f(n)` with `sum f(xi)^2` exactly.
pub fn check_instance(fam: &Family, inst: &Instance) -> Result<Option<Violation>> {
    let lhs = fam.value(inst.n)?.clone();
    let mut rhs = Rational::zero();
    for &x in inst.xs.parts() {
        let v = fam.value(x)?;
        rhs += v * v;
    }
    Ok((lhs != rhs).then(|| Violation {
        xs: inst.xs.clone(),
        n: inst.n,
        lhs,
        rhs,
    }))
}

fn check_compat(fam: &Family, table: &ReprTable, bound: u64) -> Result<()> {
    if fam.k() != table.k() {
        return Err(Error::input(alloc::format!(
            "family built for k = {}, asked to verify k = {}",
            fam.k(),
            table.k()
        )));
    }
    if fam.bound() < bound || table.bound() < bound {
        return Err(Error::input(alloc::format!(
            "family domain 1..={} does not cover N = {bound}",
            fam.bound()
        )));
    }
    Ok(())
}

/// The family scaled by its common denominator `d`: `d * f(n)` for each `n`,
/// when `d` and every scaled value fit in `i64`.
struct Scaled {
    d: i128,
    values: Vec<i128>,
}

impl Scaled {
    fn new(fam: &Family) -> Option<Scaled> {
        let d = Rational::lcm_denom(fam.values().iter().cloned());
        let values = fam
            .values()
            .iter()
            .map(|v| (v.numer() * (&d / v.denom())).to_i64().map(i128::from))
            .collect::<Option<Vec<_>>>()?;
        Some(Scaled {
            d: i128::from(d.to_i64()?),
            values,
        })
    }

    /// `d^2 f(n) == sum (d f(xi))^2`, or `None` on overflow.
    fn holds(&self, inst: &Instance) -> Option<bool> {
        let lhs = self.d.checked_mul(self.values[inst.n as usize - 1])?;
        let mut rhs: i128 = 0;
        for &x in inst.xs.parts() {
            let v = self.values[x as usize - 1];
            rhs = rhs.checked_add(v.checked_mul(v)?)?;
        }
        Some(lhs == rhs)
    }
}

/// Checks every instance with `lo <= n <= hi`.
///
/// Values are compared as integers after clearing the common denominator;
/// the rational comparison in [`check_instance`] is used on a mismatch or
/// whenever the integer form would overflow, so the result is always exact.
pub fn verify_family_range(fam: &Family, table: &ReprTable, lo: u64, hi: u64) -> Result<VerificationReport> {
    check_compat(fam, table, hi)?;
    let scaled = Scaled::new(fam);
    let mut report = VerificationReport {
        k: table.k(),
        bound: hi,
        instances: 0,
        violations: Vec::new(),
    };
    for inst in Instances::over(table, lo, hi) {
        report.instances += 1;
        if scaled.as_ref().and_then(|s| s.holds(&inst)) == Some(true) {
            continue;
        }
        if let Some(v) = check_instance(fam, &inst)? {
            report.violations.push(v);
        }
    }
    Ok(report)
}

/// Checks every instance with `n <= bound`, in `(n, lex)` order.
pub fn verify_family(fam: &Family, bound: u64, k: usize) -> Result<VerificationReport> {
    let table = ReprTable::new(bound, k)?;
    verify_family_range(fam, &table, 1, bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{enumerate_instances, FamilyKind, SignAssignment};

    fn inst(xs: &[u64]) -> Instance {
        let n = xs.iter().map(|x| x * x).sum();
        Instance {
            k: xs.len(),
            xs: Witness::new(xs.to_vec(), n, xs.len()).unwrap(),
            n,
        }
    }

    #[test]
    fn instance_checks() {
        let t = ReprTable::new(50, 3).unwrap();
        let id = Family::identity(&t, 50, SignAssignment::all_plus()).unwrap();
        assert_eq!(check_instance(&id, &inst(&[1, 2, 6])).unwrap(), None);
        let z = Family::zero(&t, 50).unwrap();
        assert_eq!(check_instance(&z, &inst(&[3, 4, 4])).unwrap(), None);
        let bad = id.with_override(3, 2.into()).unwrap();
        let v = check_instance(&bad, &inst(&[1, 1, 1])).unwrap().unwrap();
        assert_eq!((v.lhs, v.rhs), (Rational::from(2), Rational::from(3)));
    }

    #[test]
    fn instance_count_matches_enumeration() {
        let t = ReprTable::new(400, 4).unwrap();
        let rec = Family::reciprocal(&t, 400, SignAssignment::random(&t, 400, 3)).unwrap();
        let report = verify_family(&rec, 400, 4).unwrap();
        assert!(report.passed());
        assert_eq!(report.instances, enumerate_instances(400, 4).unwrap().count() as u64);
    }

    #[test]
    fn corrupted_family_fails() {
        let t = ReprTable::new(50, 3).unwrap();
        let bad = Family::identity(&t, 50, SignAssignment::all_plus())
            .unwrap()
            .with_override(3, 2.into())
            .unwrap();
        let report = verify_family(&bad, 50, 3).unwrap();
        assert!(!report.passed());
        assert_eq!(report.violations[0].xs.parts(), &[1, 1, 1]);
    }

    #[test]
    fn ranges_merge_to_the_whole() {
        let t = ReprTable::new(300, 3).unwrap();
        let bad = Family::new(FamilyKind::Identity, &t, 300, SignAssignment::all_plus())
            .unwrap()
            .with_override(5, 4.into())
            .unwrap();
        let whole = verify_family_range(&bad, &t, 1, 300).unwrap();
        let parts = [(1, 100), (101, 177), (178, 300)]
            .into_iter()
            .map(|(lo, hi)| verify_family_range(&bad, &t, lo, hi).unwrap());
        assert_eq!(VerificationReport::merge(3, 300, parts), whole);
    }

    #[test]
    fn integer_path_agrees_with_rationals() {
        let t = ReprTable::new(200, 4).unwrap();
        let rec = Family::reciprocal(&t, 200, SignAssignment::random(&t, 200, 5)).unwrap();
        // 1/4 + 1/12 has denominator 12: the integer path now uses d = 12
        let bad = rec.with_override(40, crate::arith::rat_make(1, 3).unwrap()).unwrap();
        let fast = verify_family(&bad, 200, 4).unwrap();
        let mut slow = Vec::new();
        for inst in Instances::over(&t, 1, 200) {
            slow.extend(check_instance(&bad, &inst).unwrap());
        }
        assert_eq!(fast.violations, slow);
        assert!(!slow.is_empty());

        // values too large for the integer path fall back to rationals
        let huge = Rational::from(i64::MAX) * Rational::from(4);
        let big = rec.with_override(7, huge).unwrap();
        assert!(Scaled::new(&big).is_none());
        let report = verify_family(&big, 200, 4).unwrap();
        assert_eq!(report.violations[0].n, 7);
        assert_eq!(report.violations[0].lhs, Rational::from(i64::MAX) * Rational::from(4));
    }

    #[test]
    fn mismatched_family_is_an_error() {
        let t = ReprTable::new(50, 3).unwrap();
        let id = Family::identity(&t, 50, SignAssignment::all_plus()).unwrap();
        assert!(verify_family(&id, 50, 4).is_err());
        assert!(verify_family(&id, 60, 3).is_err());
    }
}
