//! The sequence `A_n = f(n)^2` and its propagation.
//!
//! For `k = 3` the instances `{n+2, n-2, 1}` and `{n, n, 3}` share the
//! argument `2n^2 + 9`, so `A_{n+2} = 2A_n + A_3 - A_{n-2} - A_1` for `n >= 3`
//! and `A_1..A_4` determine everything. For `k >= 4` the instances
//! `{n+1, n-1, 2, 2, 1^(k-4)}` and `{n, n, 3, 1^(k-3)}` share `2n^2 + k + 6`,
//! giving `A_{n+1} = 2A_n + A_3 - A_{n-1} - 2A_2 + A_1` from `A_1..A_3`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use serde::Serialize;

use super::instance::Instances;
use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::repr::{check_k, ReprTable, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Seed,
    Recurrence,
    Pinned,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareSeq {
    k: usize,
    entries: Vec<Option<(Rational, Provenance)>>,
}

/// Seeds needed before the recurrence takes over.
pub fn required_seeds(k: usize) -> usize {
    if k == 3 {
        4
    } else {
        3
    }
}

/// Index produced by the recurrence step at `n`.
pub fn recurrence_target(k: usize, n: u64) -> u64 {
    if k == 3 {
        n + 2
    } else {
        n + 1
    }
}

impl SquareSeq {
    pub fn new(k: usize, bound: u64) -> Result<SquareSeq> {
        check_k(k)?;
        Ok(SquareSeq {
            k,
            entries: alloc::vec![None; bound as usize],
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn bound(&self) -> u64 {
        self.entries.len() as u64
    }

    pub fn get(&self, n: u64) -> Option<&Rational> {
        self.entry(n).map(|(v, _)| v)
    }

    pub fn provenance(&self, n: u64) -> Option<Provenance> {
        self.entry(n).map(|(_, p)| *p)
    }

    fn entry(&self, n: u64) -> Option<&(Rational, Provenance)> {
        n.checked_sub(1)
            .and_then(|i| self.entries.get(i as usize))
            .and_then(Option::as_ref)
    }

    fn require(&self, n: u64) -> Result<&Rational> {
        self.get(n).ok_or(Error::MissingEntry(n))
    }

    pub fn set(&mut self, n: u64, value: Rational, provenance: Provenance) -> Result<()> {
        let slot = n
            .checked_sub(1)
            .and_then(|i| self.entries.get_mut(i as usize))
            .ok_or(Error::OutOfDomain(n))?;
        *slot = Some((value, provenance));
        Ok(())
    }

    /// Overwrites `A_n` by hand.
    pub fn pin(&mut self, n: u64, value: Rational) -> Result<()> {
        self.set(n, value, Provenance::Pinned)
    }

    pub fn is_complete(&self) -> bool {
        self.entries.iter().all(Option::is_some)
    }

    /// `A_1..A_bound`; fails if any is missing.
    pub fn values(&self) -> Result<Vec<Rational>> {
        (1..=self.bound()).map(|n| self.require(n).cloned()).collect()
    }
}

/// The next value of the recurrence at step `n >= 3`; which index it fills
/// is [`recurrence_target`].
pub fn recurrence_next(seq: &SquareSeq, n: u64) -> Result<Rational> {
    if n < 3 {
        return Err(Error::input("recurrence steps start at n = 3"));
    }
    let a1 = seq.require(1)?;
    let a3 = seq.require(3)?;
    let an = seq.require(n)?;
    let two = Rational::from(2);
    if seq.k == 3 {
        let back = seq.require(n - 2)?;
        Ok(&two * an + a3 - back - a1)
    } else {
        let back = seq.require(n - 1)?;
        let a2 = seq.require(2)?;
        Ok(&two * an + a3 - back - &two * a2 + a1)
    }
}

/// Propagates seeds `A_1..A_s` (`s` from [`required_seeds`]) to `1..=bound`.
pub fn extend_seq(seeds: &[Rational], bound: u64, k: usize) -> Result<SquareSeq> {
    check_k(k)?;
    let need = required_seeds(k);
    if seeds.len() != need {
        return Err(Error::input(alloc::format!(
            "k = {k} needs exactly {need} seeds A_1..A_{need}, got {}",
            seeds.len()
        )));
    }
    let mut seq = SquareSeq::new(k, bound)?;
    for (i, v) in seeds.iter().enumerate().take(bound as usize) {
        seq.set(i as u64 + 1, v.clone(), Provenance::Seed)?;
    }
    let mut n = 3;
    while recurrence_target(k, n) <= bound {
        let v = recurrence_next(&seq, n)?;
        seq.set(recurrence_target(k, n), v, Provenance::Recurrence)?;
        n += 1;
    }
    Ok(seq)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConflictKind {
    /// `(sum A_xi)^2 != A_n`
    SquareMismatch { expected: Rational },
    /// Two instances pin different values of `f(n)`.
    ValueMismatch { earlier: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Conflict {
    pub xs: Witness,
    pub n: u64,
    /// `sum A_xi`, the value the instance forces on `f(n)`.
    pub pinned: Rational,
    #[serde(flatten)]
    pub kind: ConflictKind,
}

/// Checks the sequence against every instance with `n <= bound`; an empty
/// result means no conflict.
pub fn seq_cross_check(seq: &SquareSeq, bound: u64, k: usize) -> Result<Vec<Conflict>> {
    if seq.k != k {
        return Err(Error::input("sequence built for a different k"));
    }
    let values = seq.values()?;
    if values.len() < bound as usize {
        return Err(Error::MissingEntry(values.len() as u64 + 1));
    }
    let table = ReprTable::new(bound, k)?;
    let mut forced: BTreeMap<u64, Rational> = BTreeMap::new();
    let mut conflicts = Vec::new();
    for inst in Instances::over(&table, 1, bound) {
        let pinned: Rational = inst
            .xs
            .parts()
            .iter()
            .map(|&x| values[x as usize - 1].clone())
            .sum();
        let expected = &values[inst.n as usize - 1];
        if &pinned.pow(2) != expected {
            conflicts.push(Conflict {
                xs: inst.xs.clone(),
                n: inst.n,
                pinned: pinned.clone(),
                kind: ConflictKind::SquareMismatch {
                    expected: expected.clone(),
                },
            });
        }
        match forced.get(&inst.n) {
            Some(earlier) if earlier != &pinned => conflicts.push(Conflict {
                xs: inst.xs,
                n: inst.n,
                pinned,
                kind: ConflictKind::ValueMismatch {
                    earlier: earlier.clone(),
                },
            }),
            Some(_) => {}
            None => {
                forced.insert(inst.n, pinned);
            }
        }
    }
    Ok(conflicts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat_make;

    fn ints(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| Rational::from(x)).collect()
    }

    #[test]
    fn recurrence_steps() {
        let seq = extend_seq(&ints(&[1, 4, 9, 16]), 4, 3).unwrap();
        // 2*9 + 9 - 1 - 1
        assert_eq!(recurrence_next(&seq, 3).unwrap(), Rational::from(25));

        let c = rat_make(1, 16).unwrap();
        let seq = extend_seq(&[c.clone(), c.clone(), c.clone()], 3, 4).unwrap();
        assert_eq!(recurrence_next(&seq, 3).unwrap(), c);

        // A_n = n^2 + (A - 1) with A = 1
        let seq = extend_seq(&ints(&[1, 4, 9]), 3, 5).unwrap();
        assert_eq!(recurrence_next(&seq, 3).unwrap(), Rational::from(16));
    }

    #[test]
    fn missing_prerequisites() {
        let mut seq = SquareSeq::new(3, 10).unwrap();
        seq.set(1, 1.into(), Provenance::Seed).unwrap();
        seq.set(3, 9.into(), Provenance::Seed).unwrap();
        // n = 3 only reads A_1 and A_3
        assert_eq!(recurrence_next(&seq, 3), Ok(Rational::from(25)));
        assert_eq!(recurrence_next(&seq, 4), Err(Error::MissingEntry(4)));
        assert!(recurrence_next(&seq, 2).is_err());
        assert!(extend_seq(&ints(&[1, 4, 9]), 10, 3).is_err());
        assert!(extend_seq(&ints(&[1, 4]), 10, 4).is_err());
    }

    #[test]
    fn identity_and_constant_sequences() {
        let seq = extend_seq(&ints(&[1, 4, 9, 16]), 100, 3).unwrap();
        assert!((1..=100u64).all(|n| seq.get(n) == Some(&Rational::from(n * n))));
        assert_eq!(seq.provenance(4), Some(Provenance::Seed));
        assert_eq!(seq.provenance(5), Some(Provenance::Recurrence));

        let ninth = rat_make(1, 9).unwrap();
        let seq = extend_seq(&alloc::vec![ninth.clone(); 4], 100, 3).unwrap();
        assert!((1..=100).all(|n| seq.get(n) == Some(&ninth)));

        for k in 4..9 {
            let c = rat_make(3, 7).unwrap();
            let seq = extend_seq(&alloc::vec![c.clone(); 3], 60, k).unwrap();
            assert!(seq.values().unwrap().iter().all(|v| v == &c));
        }
    }

    #[test]
    fn short_bound_truncates_seeds() {
        let seq = extend_seq(&ints(&[1, 4, 9, 16]), 2, 3).unwrap();
        assert_eq!(seq.values().unwrap(), ints(&[1, 4]));
    }

    #[test]
    fn cross_check_examples() {
        let seq = extend_seq(&ints(&[1, 4, 9, 16]), 400, 3).unwrap();
        assert!(seq_cross_check(&seq, 400, 3).unwrap().is_empty());

        let mut tampered = seq.clone();
        tampered.pin(5, 24.into()).unwrap();
        let conflicts = seq_cross_check(&tampered, 400, 3).unwrap();
        let first = &conflicts[0];
        assert_eq!((first.xs.parts(), first.n), (&[1u64, 1, 5][..], 27));
        assert_eq!(first.pinned, Rational::from(26));

        let zero = extend_seq(&ints(&[0, 0, 0, 0]), 200, 3).unwrap();
        assert!(seq_cross_check(&zero, 200, 3).unwrap().is_empty());
    }
}
