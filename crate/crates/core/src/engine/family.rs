use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::repr::ReprTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+1")]
    Plus,
    #[serde(rename = "-1")]
    Minus,
}

impl Sign {
    pub fn apply(self, v: Rational) -> Rational {
        match self {
            Sign::Plus => v,
            Sign::Minus => -v,
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// Signs at non-representable integers; absent entries are `+1`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SignAssignment(BTreeMap<u64, Sign>);

impl SignAssignment {
    pub fn all_plus() -> Self {
        SignAssignment::default()
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (u64, Sign)>) -> Self {
        SignAssignment(entries.into_iter().collect())
    }

    /// An independent fair sign at every non-representable `n <= bound`,
    /// reproducible from `seed`.
    pub fn random(table: &ReprTable, bound: u64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        SignAssignment(
            table
                .non_representable(bound.min(table.bound()))
                .into_iter()
                .map(|n| (n, if rng.gen::<bool>() { Sign::Plus } else { Sign::Minus }))
                .collect(),
        )
    }

    pub fn get(&self, n: u64) -> Sign {
        self.0.get(&n).copied().unwrap_or(Sign::Plus)
    }

    pub fn set(&mut self, n: u64, sign: Sign) {
        self.0.insert(n, sign);
    }

    pub fn entries(&self) -> impl Iterator<Item = (u64, Sign)> + '_ {
        self.0.iter().map(|(n, s)| (*n, *s))
    }

    pub fn minus_count(&self) -> usize {
        self.0.values().filter(|s| **s == Sign::Minus).count()
    }

    /// Rejects entries outside `1..=bound` or at representable `n`.
    pub fn validate(&self, table: &ReprTable, bound: u64) -> Result<()> {
        for &n in self.0.keys() {
            if n == 0 || n > bound {
                return Err(Error::OutOfDomain(n));
            }
            if table.is_representable(n) {
                return Err(Error::SignAtRepresentable(n));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    /// `f = 0`
    Zero,
    /// `f(n) = n`, sign free off the representable set
    Identity,
    /// `f(n) = 1/k`, sign free off the representable set
    Reciprocal,
}

impl FamilyKind {
    pub fn base_value(self, n: u64, k: usize) -> Rational {
        match self {
            FamilyKind::Zero => Rational::zero(),
            FamilyKind::Identity => Rational::from(n),
            FamilyKind::Reciprocal => Rational::from(k).recip().expect("k >= 3"),
        }
    }

    /// The `A_n = f(n)^2` this family induces.
    pub fn square_value(self, n: u64, k: usize) -> Rational {
        self.base_value(n, k).pow(2)
    }

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Zero => "zero",
            FamilyKind::Identity => "identity",
            FamilyKind::Reciprocal => "reciprocal",
        }
    }
}

impl core::str::FromStr for FamilyKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero" => Ok(FamilyKind::Zero),
            "identity" => Ok(FamilyKind::Identity),
            "reciprocal" => Ok(FamilyKind::Reciprocal),
            other => Err(Error::input(alloc::format!("unknown family {other:?}"))),
        }
    }
}

/// A candidate solution tabulated on `1..=bound`.
///
/// Families built by [`Family::new`] are the genuine solutions; overrides
/// produce deliberately corrupted copies for negative controls.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    kind: FamilyKind,
    k: usize,
    signs: SignAssignment,
    values: Vec<Rational>,
    overrides: BTreeMap<u64, Rational>,
}

impl Family {
    pub fn new(kind: FamilyKind, table: &ReprTable, bound: u64, signs: SignAssignment) -> Result<Family> {
        if table.bound() < bound {
            return Err(Error::input("representability table smaller than the family domain"));
        }
        signs.validate(table, bound)?;
        let k = table.k();
        let values = (1..=bound)
            .map(|n| signs.get(n).apply(kind.base_value(n, k)))
            .collect();
        Ok(Family {
            kind,
            k,
            signs,
            values,
            overrides: BTreeMap::new(),
        })
    }

    pub fn zero(table: &ReprTable, bound: u64) -> Result<Family> {
        Family::new(FamilyKind::Zero, table, bound, SignAssignment::all_plus())
    }

    pub fn identity(table: &ReprTable, bound: u64, signs: SignAssignment) -> Result<Family> {
        Family::new(FamilyKind::Identity, table, bound, signs)
    }

    pub fn reciprocal(table: &ReprTable, bound: u64, signs: SignAssignment) -> Result<Family> {
        Family::new(FamilyKind::Reciprocal, table, bound, signs)
    }

    /// A family from explicit values on `1..=values.len()`.
    pub(crate) fn from_values(kind: FamilyKind, k: usize, signs: SignAssignment, values: Vec<Rational>) -> Family {
        Family {
            kind,
            k,
            signs,
            values,
            overrides: BTreeMap::new(),
        }
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn bound(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn signs(&self) -> &SignAssignment {
        &self.signs
    }

    pub fn overrides(&self) -> &BTreeMap<u64, Rational> {
        &self.overrides
    }

    pub fn is_corrupted(&self) -> bool {
        !self.overrides.is_empty()
    }

    /// `f(n)`; fails outside `1..=bound`.
    pub fn value(&self, n: u64) -> Result<&Rational> {
        if n == 0 {
            return Err(Error::OutOfDomain(n));
        }
        self.values.get(n as usize - 1).ok_or(Error::OutOfDomain(n))
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Copy with `f(n)` replaced.
    pub fn with_override(&self, n: u64, value: Rational) -> Result<Family> {
        self.value(n)?;
        let mut out = self.clone();
        out.values[n as usize - 1] = value.clone();
        out.overrides.insert(n, value);
        Ok(out)
    }

    /// Copy with the sign at a non-representable `n` flipped.
    pub fn with_flipped_sign(&self, n: u64, table: &ReprTable) -> Result<Family> {
        self.value(n)?;
        if table.is_representable(n) {
            return Err(Error::SignAtRepresentable(n));
        }
        let mut out = self.clone();
        let s = out.signs.get(n).flipped();
        out.signs.set(n, s);
        out.values[n as usize - 1] = -&out.values[n as usize - 1];
        Ok(out)
    }
}

/// `f(n)` for the family.
pub fn family_value(fam: &Family, n: u64) -> Result<Rational> {
    fam.value(n).cloned()
}
