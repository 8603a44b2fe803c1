//! Negative controls: a change at a representable `n` must be caught, a
//! sign flip at a non-representable `n` must not be.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::Rational;
use crate::engine::{check_instance, verify_family_range, Family, FamilyKind, Instances, Violation};
use crate::error::{Error, Result};
use crate::repr::ReprTable;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Trial {
    pub n: u64,
    /// First violated instance, if any.
    pub caught_by: Option<Violation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PerturbationReport {
    pub family: FamilyKind,
    pub k: usize,
    #[serde(rename = "N")]
    pub bound: u64,
    pub trials: Vec<Trial>,
}

impl PerturbationReport {
    pub fn detected(&self) -> usize {
        self.trials.iter().filter(|t| t.caught_by.is_some()).count()
    }

    pub fn all_detected(&self) -> bool {
        self.detected() == self.trials.len()
    }
}

fn pick(pool: &[u64], trials: usize, seed: u64) -> Result<Vec<u64>> {
    if pool.is_empty() {
        return Err(Error::input("no eligible n in range"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..trials).map(|_| *pool.choose(&mut rng).expect("nonempty")).collect())
}

/// The amount added to `f(n)`: `1`, or `1/k` for the reciprocal family.
pub fn perturbation_delta(kind: FamilyKind, k: usize) -> Rational {
    match kind {
        FamilyKind::Reciprocal => Rational::from(k).recip().expect("k >= 3"),
        _ => Rational::one(),
    }
}

fn first_violation(fam: &Family, table: &ReprTable, bound: u64) -> Result<Option<Violation>> {
    for inst in Instances::over(table, 1, bound) {
        if let Some(v) = check_instance(fam, &inst)? {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

/// Adds [`perturbation_delta`] to `f(n)` at random representable `n <= N`
/// and records whether verification notices.
pub fn perturbation_test(fam: &Family, table: &ReprTable, bound: u64, trials: usize, seed: u64) -> Result<PerturbationReport> {
    let pool: Vec<u64> = (1..=bound).filter(|&n| table.is_representable(n)).collect();
    let delta = perturbation_delta(fam.kind(), fam.k());
    let mut out = Vec::with_capacity(trials);
    for n in pick(&pool, trials, seed)? {
        let bad = fam.with_override(n, fam.value(n)? + &delta)?;
        out.push(Trial {
            n,
            caught_by: first_violation(&bad, table, bound)?,
        });
    }
    Ok(PerturbationReport {
        family: fam.kind(),
        k: fam.k(),
        bound,
        trials: out,
    })
}

/// Flips the sign at random non-representable `n <= N`; every trial should
/// verify cleanly.
pub fn sign_flip_test(fam: &Family, table: &ReprTable, bound: u64, trials: usize, seed: u64) -> Result<PerturbationReport> {
    let pool = table.non_representable(bound);
    let mut out = Vec::with_capacity(trials);
    for n in pick(&pool, trials, seed)? {
        let flipped = fam.with_flipped_sign(n, table)?;
        let report = verify_family_range(&flipped, table, 1, bound)?;
        out.push(Trial {
            n,
            caught_by: report.violations.into_iter().next(),
        });
    }
    Ok(PerturbationReport {
        family: fam.kind(),
        k: fam.k(),
        bound,
        trials: out,
    })
}
