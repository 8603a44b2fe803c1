use alloc::string::String;
use alloc::vec::Vec;

use serde::Serialize;

use super::cases::certificate_for;
use super::certificate::CaseId;
use crate::arith::Rational;
use crate::engine::{
    extend_seq, seq_cross_check, verify_family_range, Conflict, Family, FamilyKind, SignAssignment, SquareSeq,
    Violation,
};
use crate::error::{Error, Result};
use crate::repr::{check_k, ReprTable};

/// What one seed tuple turns into after propagation to `N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeedOutcome {
    pub seeds: Vec<Rational>,
    /// `None` when `A_n` matches none of the three families.
    pub family: Option<FamilyKind>,
    pub instances: u64,
    pub conflicts: Vec<Conflict>,
    pub violations: Vec<Violation>,
}

impl SeedOutcome {
    pub fn passed(&self) -> bool {
        self.family.is_some() && self.conflicts.is_empty() && self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub k: usize,
    #[serde(rename = "N")]
    pub bound: u64,
    pub case: CaseId,
    pub outcomes: Vec<SeedOutcome>,
    /// Non-representable `n <= N`, where the sign of `f(n)` is free.
    pub sign_dof: u64,
}

impl Classification {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(SeedOutcome::passed)
    }

    pub fn families(&self) -> Vec<FamilyKind> {
        self.outcomes.iter().filter_map(|o| o.family).collect()
    }
}

/// The family whose `A_n` matches the whole sequence.
pub fn detect_family(seq: &SquareSeq) -> Option<FamilyKind> {
    let k = seq.k();
    [FamilyKind::Zero, FamilyKind::Identity, FamilyKind::Reciprocal]
        .into_iter()
        .find(|kind| (1..=seq.bound()).all(|n| seq.get(n) == Some(&kind.square_value(n, k))))
}

/// `f(n) = +sqrt(A_n)` for every `n`; fails if some `A_n` is not a rational square.
pub fn family_from_seq(seq: &SquareSeq, kind: FamilyKind) -> Result<Family> {
    let values = seq
        .values()?
        .into_iter()
        .enumerate()
        .map(|(i, a)| {
            a.sqrt_exact()
                .ok_or_else(|| Error::Classification(alloc::format!("A_{} = {a} is not a square", i + 1)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Family::from_values(kind, seq.k(), SignAssignment::all_plus(), values))
}

/// Propagates one seed tuple, cross-checks it and verifies the recovered family.
pub fn classify_seed(seeds: &[Rational], table: &ReprTable, bound: u64) -> Result<SeedOutcome> {
    let k = table.k();
    let seq = extend_seq(seeds, bound, k)?;
    let conflicts = seq_cross_check(&seq, bound, k)?;
    let family = detect_family(&seq);
    let (instances, violations) = match family {
        Some(kind) if conflicts.is_empty() => {
            let fam = family_from_seq(&seq, kind)?;
            let report = verify_family_range(&fam, table, 1, bound)?;
            (report.instances, report.violations)
        }
        _ => (0, Vec::new()),
    };
    Ok(SeedOutcome {
        seeds: seeds.to_vec(),
        family,
        instances,
        conflicts,
        violations,
    })
}

/// Seeds from the case certificate, each propagated and verified up to `N`.
pub fn classify(bound: u64, k: usize) -> Result<Classification> {
    check_k(k)?;
    if bound == 0 {
        return Err(Error::input("N must be positive"));
    }
    let cert = certificate_for(k as u64)?;
    let table = ReprTable::new(bound, k)?;
    let outcomes = cert
        .seeds
        .iter()
        .map(|s| classify_seed(s, &table, bound))
        .collect::<Result<Vec<_>>>()?;
    Ok(Classification {
        k,
        bound,
        case: cert.case,
        outcomes,
        sign_dof: table.non_representable(bound).len() as u64,
    })
}

/// Human-readable summary of one outcome.
pub fn describe(outcome: &SeedOutcome) -> String {
    let seeds: Vec<String> = outcome.seeds.iter().map(|s| alloc::format!("{s}")).collect();
    alloc::format!(
        "({}) -> {}",
        seeds.join(", "),
        outcome.family.map_or("no family", FamilyKind::name)
    )
}
