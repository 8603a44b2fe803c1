//! Machine-checked identities between values of `f`.
//!
//! Each record names a target argument and two multisets of squares summing to
//! it (or, for a pinned record, one multiset and the square of the target).
//! A part is either atomic, standing for `A_x` with `x` in `1..=5`, or carries a
//! sub-decomposition of `x` whose parts are atomic, standing for
//! `f(x)^2 = (sum A_xi)^2`. The relation in `A..E` is derived from the parts
//! and compared with the transcribed relation, so a typo on either side is a
//! construction error.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::poly::{Poly, Var};
use crate::repr::{ReprTable, Witness};

/// `A_1..A_5` are named `A..E`.
pub fn case_var(x: u64) -> Option<Var> {
    let name = match x {
        1 => "A",
        2 => "B",
        3 => "C",
        4 => "D",
        5 => "E",
        _ => return None,
    };
    Some(Var::named(name))
}

pub fn k_var() -> Var {
    Var::named("k")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Part {
    pub value: Poly,
    pub repeat: Poly,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub via: Option<Vec<Part>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Decomposition {
    pub parts: Vec<Part>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordForm {
    /// Two decompositions of the same target.
    TwoSided,
    /// `A_target` equals the square of the single decomposition's value.
    Pinned,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityRecord {
    pub label: String,
    pub target: Poly,
    pub form: RecordForm,
    pub decompositions: Vec<Decomposition>,
    /// `lhs - rhs`.
    pub relation: Poly,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

fn constant_u64(p: &Poly) -> Option<u64> {
    let c = p.constant_value()?;
    if !c.is_integer() || c.is_negative() {
        return None;
    }
    c.numer().to_u64()
}

impl Part {
    fn atom_var(&self) -> Option<Var> {
        constant_u64(&self.value).and_then(case_var)
    }

    /// `f(value)` as a polynomial: only for atomic sub-parts.
    fn linear_value(parts: &[Part]) -> Option<Poly> {
        let mut acc = Poly::zero();
        for p in parts {
            let v = p.atom_var()?;
            acc = acc.add(&Poly::var(v).mul(&p.repeat));
        }
        Some(acc)
    }

    /// `A_value` in terms of `A..E`.
    pub fn square(&self) -> Option<Poly> {
        match &self.via {
            None => self.atom_var().map(Poly::var),
            Some(sub) => Part::linear_value(sub).map(|l| l.pow(2)),
        }
    }
}

impl Decomposition {
    /// `sum repeat * A_value`.
    pub fn square_sum(&self) -> Option<Poly> {
        let mut acc = Poly::zero();
        for p in &self.parts {
            acc = acc.add(&p.repeat.mul(&p.square()?));
        }
        Some(acc)
    }

    /// `f(target) = sum repeat * A_value`, for atomic parts.
    pub fn linear_value(&self) -> Option<Poly> {
        Part::linear_value(&self.parts)
    }

    fn count(parts: &[Part]) -> Poly {
        parts.iter().fold(Poly::zero(), |acc, p| acc.add(&p.repeat))
    }

    fn weighted(parts: &[Part]) -> Poly {
        parts
            .iter()
            .fold(Poly::zero(), |acc, p| acc.add(&p.repeat.mul(&p.value.pow(2))))
    }

    /// The integer parts at a concrete `k`; `None` if a repeat is negative
    /// or a value is not a positive integer.
    pub fn instantiate(parts: &[Part], k: u64) -> Option<Vec<u64>> {
        let kv = k_var();
        let kk = Rational::from(k);
        let mut out = Vec::new();
        for p in parts {
            let value = constant_u64(&p.value.evaluate(&kv, &kk))?;
            let repeat = constant_u64(&p.repeat.evaluate(&kv, &kk))?;
            if value == 0 {
                return None;
            }
            out.extend(core::iter::repeat_n(value, repeat as usize));
        }
        Some(out)
    }
}

impl IdentityRecord {
    pub fn lhs(&self) -> Poly {
        match self.form {
            RecordForm::TwoSided => self.decompositions[0].square_sum().expect("validated"),
            RecordForm::Pinned => {
                let x = constant_u64(&self.target).expect("validated");
                Poly::var(case_var(x).expect("validated"))
            }
        }
    }

    pub fn rhs(&self) -> Poly {
        match self.form {
            RecordForm::TwoSided => self.decompositions[1].square_sum().expect("validated"),
            RecordForm::Pinned => self.decompositions[0]
                .linear_value()
                .expect("validated")
                .pow(2),
        }
    }

    pub fn is_symbolic(&self) -> bool {
        self.target.degree_in(&k_var()) > 0
    }

    fn fail(&self, msg: impl Into<String>) -> Error {
        Error::Ledger {
            label: self.label.clone(),
            msg: msg.into(),
        }
    }

    fn derived_relation(&self) -> Result<Poly> {
        match self.form {
            RecordForm::TwoSided => {
                if self.decompositions.len() != 2 {
                    return Err(self.fail("two-sided record needs two decompositions"));
                }
                let l = self.decompositions[0].square_sum();
                let r = self.decompositions[1].square_sum();
                match (l, r) {
                    (Some(l), Some(r)) => Ok(l.sub(&r)),
                    _ => Err(self.fail("every part must be atomic in 1..=5 or carry a sub-decomposition")),
                }
            }
            RecordForm::Pinned => {
                if self.decompositions.len() != 1 {
                    return Err(self.fail("pinned record needs one decomposition"));
                }
                let x = constant_u64(&self.target)
                    .filter(|x| case_var(*x).is_some())
                    .ok_or_else(|| self.fail("pinned target must be in 1..=5"))?;
                let lin = self.decompositions[0]
                    .linear_value()
                    .ok_or_else(|| self.fail("pinned decomposition must be atomic"))?;
                Ok(Poly::var(case_var(x).expect("checked")).sub(&lin.pow(2)))
            }
        }
    }

    /// Part counts and square sums, symbolically and at concrete `k`.
    fn validate_shape(&self, k: &Poly, concrete: &[u64]) -> Result<()> {
        let check = |parts: &[Part], target: &Poly, what: &str| -> Result<()> {
            if &Decomposition::count(parts) != k {
                return Err(self.fail(alloc::format!("{what}: part count is not k")));
            }
            if &Decomposition::weighted(parts) != target {
                return Err(self.fail(alloc::format!("{what}: squares do not sum to {target}")));
            }
            for &kk in concrete {
                let tv = constant_u64(&target.evaluate(&k_var(), &Rational::from(kk)))
                    .ok_or_else(|| self.fail("target is not a positive integer"))?;
                let xs = Decomposition::instantiate(parts, kk)
                    .ok_or_else(|| self.fail(alloc::format!("{what}: invalid parts at k = {kk}")))?;
                Witness::new(xs, tv, kk as usize)
                    .map_err(|e| self.fail(alloc::format!("{what} at k = {kk}: {e}")))?;
                let table = ReprTable::new(tv, kk as usize)?;
                if !table.is_representable(tv) {
                    return Err(self.fail(alloc::format!("{tv} is not representable at k = {kk}")));
                }
            }
            Ok(())
        };
        for (i, d) in self.decompositions.iter().enumerate() {
            let side = alloc::format!("decomposition {i}");
            check(&d.parts, &self.target, &side)?;
            for p in &d.parts {
                if let Some(sub) = &p.via {
                    check(sub, &p.value, &alloc::format!("{side}, sub-decomposition of {}", p.value))?;
                } else if p.atom_var().is_none() {
                    return Err(self.fail(alloc::format!("part {} is neither atomic nor decomposed", p.value)));
                }
            }
        }
        Ok(())
    }

    /// Substitutes a concrete `k` everywhere.
    pub fn at_k(&self, k: u64) -> IdentityRecord {
        let kv = k_var();
        let kk = Rational::from(k);
        fn map_parts(parts: &[Part], kv: &Var, kk: &Rational) -> Vec<Part> {
            parts
                .iter()
                .map(|p| Part {
                    value: p.value.evaluate(kv, kk),
                    repeat: p.repeat.evaluate(kv, kk),
                    via: p.via.as_ref().map(|s| map_parts(s, kv, kk)),
                })
                .collect()
        }
        IdentityRecord {
            label: self.label.clone(),
            target: self.target.evaluate(&kv, &kk),
            form: self.form.clone(),
            decompositions: self
                .decompositions
                .iter()
                .map(|d| Decomposition {
                    parts: map_parts(&d.parts, &kv, &kk),
                })
                .collect(),
            relation: self.relation.evaluate(&kv, &kk),
            notes: self.notes.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LedgerScope {
    Concrete(u64),
    /// Case III records with `k` left as a variable.
    Symbolic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ledger {
    pub scope: LedgerScope,
    pub records: Vec<IdentityRecord>,
}

impl Ledger {
    pub fn get(&self, label: &str) -> Option<&IdentityRecord> {
        self.records.iter().find(|r| r.label == label)
    }

    pub fn relation(&self, label: &str) -> Result<&Poly> {
        self.get(label).map(|r| &r.relation).ok_or_else(|| Error::Ledger {
            label: label.into(),
            msg: "no such record".into(),
        })
    }
}

type PartSpec = (&'static str, &'static str, &'static [(&'static str, &'static str)]);

fn lit(s: &str) -> Poly {
    Poly::parse(s).expect("ledger literal")
}

fn parts(spec: &[PartSpec]) -> Vec<Part> {
    spec.iter()
        .map(|(value, repeat, via)| Part {
            value: lit(value),
            repeat: lit(repeat),
            via: (!via.is_empty()).then(|| {
                via.iter()
                    .map(|(v, r)| Part {
                        value: lit(v),
                        repeat: lit(r),
                        via: None,
                    })
                    .collect()
            }),
        })
        .collect()
}

struct Spec {
    label: &'static str,
    target: &'static str,
    lhs: &'static [PartSpec],
    rhs: Option<&'static [PartSpec]>,
    relation: &'static str,
    notes: Option<&'static str>,
}

const CASE_K3: &[Spec] = &[
    Spec {
        label: "3a",
        target: "3",
        lhs: &[("1", "3", &[])],
        rhs: None,
        relation: "C - 9*A^2",
        notes: None,
    },
    Spec {
        label: "3b",
        target: "41",
        lhs: &[("3", "1", &[]), ("4", "2", &[])],
        rhs: Some(&[("6", "1", &[("1", "2"), ("2", "1")]), ("1", "1", &[]), ("2", "1", &[])]),
        relation: "C + 2*D - ((2*A + B)^2 + A + B)",
        notes: None,
    },
    Spec {
        label: "3c",
        target: "146",
        lhs: &[("1", "2", &[]), ("12", "1", &[("2", "3")])],
        rhs: Some(&[("11", "1", &[("1", "2"), ("3", "1")]), ("3", "1", &[]), ("4", "1", &[])]),
        relation: "2*A + (3*B)^2 - ((2*A + C)^2 + C + D)",
        notes: Some("not used by the elimination; checked against every seed"),
    },
    Spec {
        label: "3d",
        target: "371",
        lhs: &[("19", "1", &[("1", "1"), ("3", "2")]), ("3", "1", &[]), ("1", "1", &[])],
        rhs: Some(&[
            ("17", "1", &[("2", "2"), ("3", "1")]),
            ("9", "1", &[("1", "1"), ("2", "2")]),
            ("1", "1", &[]),
        ]),
        relation: "(A + 2*C)^2 + C + A - ((2*B + C)^2 + (A + 2*B)^2 + A)",
        notes: None,
    },
    Spec {
        label: "3e",
        target: "27",
        lhs: &[("5", "1", &[]), ("1", "2", &[])],
        rhs: Some(&[("3", "3", &[])]),
        relation: "E + 2*A - 3*C",
        notes: None,
    },
    Spec {
        label: "3f",
        target: "33",
        lhs: &[("5", "1", &[]), ("2", "2", &[])],
        rhs: Some(&[("1", "1", &[]), ("4", "2", &[])]),
        relation: "E + 2*B - (A + 2*D)",
        notes: Some("the displayed 2F(2)^2 is read as 2f(2)^2 = 2B"),
    },
    Spec {
        label: "3g",
        target: "126",
        lhs: &[("11", "1", &[("1", "2"), ("3", "1")]), ("1", "1", &[]), ("2", "1", &[])],
        rhs: Some(&[
            ("9", "1", &[("1", "1"), ("2", "2")]),
            ("6", "1", &[("1", "2"), ("2", "1")]),
            ("3", "1", &[]),
        ]),
        relation: "(2*A + C)^2 + A + B - ((A + 2*B)^2 + (2*A + B)^2 + C)",
        notes: None,
    },
];

const CASE_K4: &[Spec] = &[
    Spec {
        label: "4a",
        target: "274",
        lhs: &[
            ("13", "1", &[("1", "1"), ("2", "3")]),
            ("10", "1", &[("1", "2"), ("2", "2")]),
            ("1", "1", &[]),
            ("2", "1", &[]),
        ],
        rhs: Some(&[("16", "1", &[("2", "4")]), ("4", "1", &[("1", "4")]), ("1", "2", &[])]),
        relation: "(A + 3*B)^2 + (2*A + 2*B)^2 + A + B - ((4*B)^2 + (4*A)^2 + 2*A)",
        notes: None,
    },
    Spec {
        label: "4b",
        target: "268",
        lhs: &[("16", "1", &[("2", "4")]), ("2", "3", &[])],
        rhs: Some(&[
            ("13", "1", &[("1", "1"), ("2", "3")]),
            ("7", "2", &[("1", "3"), ("2", "1")]),
            ("1", "1", &[]),
        ]),
        relation: "(4*B)^2 + 3*B - ((A + 3*B)^2 + 2*(3*A + B)^2 + A)",
        notes: None,
    },
    Spec {
        label: "4c",
        target: "52",
        lhs: &[("7", "1", &[("1", "3"), ("2", "1")]), ("1", "3", &[])],
        rhs: Some(&[("4", "3", &[("1", "4")]), ("2", "1", &[])]),
        relation: "(3*A + B)^2 + 3*A - (48*A^2 + B)",
        notes: None,
    },
    Spec {
        label: "4d",
        target: "28",
        lhs: &[("5", "1", &[]), ("1", "3", &[])],
        rhs: Some(&[("3", "3", &[]), ("1", "1", &[])]),
        relation: "E + 3*A - (3*C + A)",
        notes: None,
    },
    Spec {
        label: "4e",
        target: "37",
        lhs: &[("5", "1", &[]), ("2", "3", &[])],
        rhs: Some(&[("4", "2", &[("1", "4")]), ("1", "1", &[]), ("2", "1", &[])]),
        relation: "E + 3*B - (32*A^2 + A + B)",
        notes: None,
    },
];

const CASE_GENERAL: &[Spec] = &[
    Spec {
        label: "III-main",
        target: "2*k^2 + 13*k + 40",
        lhs: &[
            ("k", "1", &[("1", "k")]),
            ("k+6", "1", &[("1", "k-2"), ("2", "2")]),
            ("2", "2", &[]),
            ("1", "k-4", &[]),
        ],
        rhs: Some(&[("k+3", "2", &[("1", "k-1"), ("2", "1")]), ("3", "3", &[]), ("1", "k-5", &[])]),
        relation: "(k*A)^2 + ((k-2)*A + 2*B)^2 + 2*B + (k-4)*A - (2*((k-1)*A + B)^2 + 3*C + (k-5)*A)",
        notes: None,
    },
    Spec {
        label: "III-P1",
        target: "k + 15",
        lhs: &[("4", "1", &[]), ("1", "k-1", &[])],
        rhs: Some(&[("2", "5", &[]), ("1", "k-5", &[])]),
        relation: "D + (k-1)*A - (5*B + (k-5)*A)",
        notes: Some("f(20) = f(4)^2 + 4f(1)^2 = 5f(2)^2 has five parts; padded with k - 5 ones"),
    },
    Spec {
        label: "III-P2",
        target: "k + 24",
        lhs: &[("1", "1", &[]), ("3", "3", &[]), ("1", "k-4", &[])],
        rhs: Some(&[("4", "1", &[]), ("2", "3", &[]), ("1", "k-4", &[])]),
        relation: "A + 3*C + (k-4)*A - (D + 3*B + (k-4)*A)",
        notes: Some("f(28) = f(1)^2 + 3f(3)^2 = f(4)^2 + 3f(2)^2 has four parts; padded with k - 4 ones"),
    },
];

/// Concrete `k` values at which symbolic records are also instantiated and
/// checked against the representability table.
const SYMBOLIC_SAMPLES: core::ops::RangeInclusive<u64> = 5..=12;

fn build(spec: &Spec, k: &Poly, concrete: &[u64]) -> Result<IdentityRecord> {
    let mut decompositions = alloc::vec![Decomposition { parts: parts(spec.lhs) }];
    if let Some(rhs) = spec.rhs {
        decompositions.push(Decomposition { parts: parts(rhs) });
    }
    let mut rec = IdentityRecord {
        label: spec.label.into(),
        target: lit(spec.target),
        form: if spec.rhs.is_some() {
            RecordForm::TwoSided
        } else {
            RecordForm::Pinned
        },
        decompositions,
        relation: Poly::zero(),
        notes: spec.notes.map(ToString::to_string),
    };
    rec.validate_shape(k, concrete)?;
    let derived = rec.derived_relation()?;
    let transcribed = lit(spec.relation);
    if derived != transcribed {
        return Err(rec.fail(alloc::format!(
            "derived relation {derived} differs from transcribed {transcribed}"
        )));
    }
    rec.relation = derived;
    Ok(rec)
}

/// Builds and validates the records for `k = 3`, `k = 4`, the symbolic
/// `k >= 5` case, or that case instantiated at a concrete `k >= 5`.
pub fn build_ledger(scope: LedgerScope) -> Result<Ledger> {
    let records = match scope {
        LedgerScope::Concrete(3) => {
            let k = Poly::constant(3);
            CASE_K3.iter().map(|s| build(s, &k, &[3])).collect::<Result<Vec<_>>>()?
        }
        LedgerScope::Concrete(4) => {
            let k = Poly::constant(4);
            CASE_K4.iter().map(|s| build(s, &k, &[4])).collect::<Result<Vec<_>>>()?
        }
        LedgerScope::Concrete(k) if k >= 5 => {
            let symbolic = build_ledger(LedgerScope::Symbolic)?;
            let records: Vec<IdentityRecord> = symbolic.records.iter().map(|r| r.at_k(k)).collect();
            let kp = Poly::constant(k);
            for r in &records {
                r.validate_shape(&kp, &[k])?;
            }
            records
        }
        LedgerScope::Concrete(k) => {
            return Err(Error::input(alloc::format!("no ledger for k = {k}; need k >= 3")))
        }
        LedgerScope::Symbolic => {
            let samples: Vec<u64> = SYMBOLIC_SAMPLES.collect();
            CASE_GENERAL
                .iter()
                .map(|s| build(s, &Poly::var(k_var()), &samples))
                .collect::<Result<Vec<_>>>()?
        }
    };
    Ok(Ledger { scope, records })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        Poly::parse(s).unwrap()
    }

    fn parts_of(d: &Decomposition) -> Vec<u64> {
        let mut xs = Decomposition::instantiate(&d.parts, 3).unwrap();
        xs.sort();
        xs
    }

    #[test]
    fn k3_records() {
        let ledger = build_ledger(LedgerScope::Concrete(3)).unwrap();
        assert_eq!(ledger.records.len(), 7);
        let b = ledger.get("3b").unwrap();
        assert_eq!(b.target, Poly::constant(41));
        assert_eq!(parts_of(&b.decompositions[0]), [3, 4, 4]);
        assert_eq!(parts_of(&b.decompositions[1]), [1, 2, 6]);
        assert_eq!(b.relation, p("(C + 2*D) - ((2*A + B)^2 + A + B)"));
        assert_eq!(ledger.relation("3a").unwrap(), &p("C - 9*A^2"));
        assert!(ledger.get("3f").unwrap().notes.as_deref().unwrap().contains("2F(2)"));
    }

    #[test]
    fn k4_records() {
        let ledger = build_ledger(LedgerScope::Concrete(4)).unwrap();
        let a = ledger.get("4a").unwrap();
        let mut l = Decomposition::instantiate(&a.decompositions[0].parts, 4).unwrap();
        let mut r = Decomposition::instantiate(&a.decompositions[1].parts, 4).unwrap();
        l.sort();
        r.sort();
        assert_eq!((l, r), (alloc::vec![1, 2, 10, 13], alloc::vec![1, 1, 4, 16]));
        assert_eq!(a.target, Poly::constant(274));
    }

    #[test]
    fn symbolic_records() {
        let ledger = build_ledger(LedgerScope::Symbolic).unwrap();
        let main = ledger.get("III-main").unwrap();
        assert!(main.is_symbolic());
        assert_eq!(main.target, p("2*k^2 + 13*k + 40"));
        let lhs = &main.decompositions[0].parts;
        assert_eq!(lhs[1].value, p("k + 6"));
        assert_eq!(lhs[3].repeat, p("k - 4"));
        let rhs = &main.decompositions[1].parts;
        assert_eq!(rhs[0].value, p("k + 3"));
        assert_eq!(rhs[2].repeat, p("k - 5"));
        // A^2 coefficient: k^2 + (k-2)^2 - 2(k-1)^2 = 2
        let a2 = crate::poly::Monomial::var(Var::named("A"), 2);
        assert_eq!(main.relation.coefficient(&a2), Rational::from(2));
    }

    #[test]
    fn concrete_instantiation_of_case_three() {
        for k in 5..9 {
            let ledger = build_ledger(LedgerScope::Concrete(k)).unwrap();
            let main = ledger.get("III-main").unwrap();
            assert_eq!(main.target, Poly::constant(2 * k * k + 13 * k + 40));
            assert!(main.relation.degree_in(&k_var()) == 0);
        }
        assert!(build_ledger(LedgerScope::Concrete(2)).is_err());
    }

    #[test]
    fn sides_reproduce_relation() {
        for scope in [LedgerScope::Concrete(3), LedgerScope::Concrete(4), LedgerScope::Symbolic] {
            for r in build_ledger(scope).unwrap().records {
                assert_eq!(r.lhs().sub(&r.rhs()), r.relation, "{}", r.label);
            }
        }
    }

    #[test]
    fn transcription_errors_are_caught() {
        let bad_relation = Spec {
            relation: "C + 2*D - ((2*A + B)^2 + A)",
            ..CASE_K3[1]
        };
        assert!(matches!(
            build(&bad_relation, &Poly::constant(3), &[3]),
            Err(Error::Ledger { .. })
        ));
        let bad_parts = Spec {
            lhs: &[("3", "1", &[]), ("4", "1", &[])],
            ..CASE_K3[1]
        };
        assert!(build(&bad_parts, &Poly::constant(3), &[3]).is_err());
        let bad_sub = Spec {
            rhs: Some(&[("6", "1", &[("1", "1"), ("2", "2")]), ("1", "1", &[]), ("2", "1", &[])]),
            ..CASE_K3[1]
        };
        assert!(build(&bad_sub, &Poly::constant(3), &[3]).is_err());
    }
}
