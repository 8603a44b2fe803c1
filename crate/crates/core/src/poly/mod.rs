//! Sparse multivariate polynomials over the rationals.
//!
//! A [`Poly`] is a map from [`Monomial`] to nonzero [`Rational`]
//! coefficient; a monomial is a sorted list of `(variable, exponent)` pairs
//! with positive exponents. Both are kept canonical, so `==` is polynomial
//! equality.
//!
//! Terms print in lexicographic order with `A > B > C > D > E > k > others`,
//! e.g. `-32*A^2 + 4*A*B + 4*A + B^2 - B`.

mod parse;
mod univariate;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::Rational;
use crate::error::{Error, Result};

pub use parse::parse_poly;
pub use univariate::{rational_roots, univariate_div_rem, univariate_gcd};

/// A variable name. Ordered `A < B < C < D < E < k`, then any other name
/// alphabetically.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Var(String);

impl Var {
    pub fn new(name: impl Into<String>) -> Result<Var> {
        let name = name.into();
        let mut chars = name.chars();
        let ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok {
            return Err(Error::input(alloc::format!("invalid variable name {name:?}")));
        }
        Ok(Var(name))
    }

    /// For names known to be valid at the call site.
    pub fn named(name: &str) -> Var {
        Var::new(name).expect("valid variable name")
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    fn rank(&self) -> u8 {
        match self.0.as_str() {
            "A" => 0,
            "B" => 1,
            "C" => 2,
            "D" => 3,
            "E" => 4,
            "k" => 5,
            _ => 6,
        }
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank()
            .cmp(&other.rank())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for Var {
    fn serialize<S: Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Var {
    fn deserialize<D: Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        Var::new(String::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// Product of variables with positive exponents, sorted by [`Var`] order.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var, exp: u32) -> Self {
        if exp == 0 {
            Monomial::one()
        } else {
            Monomial(alloc::vec![(v, exp)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, v: &Var) -> u32 {
        self.0
            .iter()
            .find(|(w, _)| w == v)
            .map_or(0, |(_, e)| *e)
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    /// The monomial with `v` removed, and the exponent `v` had.
    pub fn split_off(&self, v: &Var) -> (Monomial, u32) {
        let mut rest = Vec::with_capacity(self.0.len());
        let mut exp = 0;
        for (w, e) in &self.0 {
            if w == v {
                exp = *e;
            } else {
                rest.push((w.clone(), *e));
            }
        }
        (Monomial(rest), exp)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, ea) = &self.0[i];
            let (b, eb) = &other.0[j];
            match a.cmp(b) {
                Ordering::Less => {
                    out.push((a.clone(), *ea));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b.clone(), *eb));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a.clone(), ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }
}

/// Lexicographic on exponent vectors in [`Var`] order; the greater monomial
/// prints first.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((a, ea)), Some((b, eb))) => match a.cmp(b) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(eb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, (v, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Sparse polynomial with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// `add`/`sub`/`mul` of two polynomials.
pub fn poly_arith(op: PolyOp, p: &Poly, q: &Poly) -> Poly {
    match op {
        PolyOp::Add => p.add(q),
        PolyOp::Sub => p.sub(q),
        PolyOp::Mul => p.mul(q),
    }
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: impl Into<Rational>) -> Self {
        Poly::term(c.into(), Monomial::one())
    }

    pub fn var(v: Var) -> Self {
        Poly::term(Rational::one(), Monomial::var(v, 1))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    /// Parses the text grammar; see [`parse_poly`].
    pub fn parse(text: &str) -> Result<Poly> {
        parse_poly(text)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms from the greatest monomial down.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: &Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self
            .terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(v, _)| v.clone()))
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> Poly {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, exp: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Replaces every occurrence of `v` by `q` and re-expands.
    pub fn substitute(&self, v: &Var, q: &Poly) -> Poly {
        let mut powers: Vec<Poly> = alloc::vec![Poly::one()];
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let (rest, e) = m.split_off(v);
            if e == 0 {
                out.add_term(m.clone(), c.clone());
                continue;
            }
            while powers.len() <= e as usize {
                let next = powers.last().expect("nonempty").mul(q);
                powers.push(next);
            }
            let lifted = Poly::term(c.clone(), rest);
            for (mm, cc) in lifted.mul(&powers[e as usize]).terms {
                out.add_term(mm, cc);
            }
        }
        out
    }

    /// Substitutes the constant `value` for `v`.
    pub fn evaluate(&self, v: &Var, value: &Rational) -> Poly {
        self.substitute(v, &Poly::constant(value.clone()))
    }

    /// Full evaluation; `None` if some variable is unassigned.
    pub fn eval(&self, assignment: &BTreeMap<Var, Rational>) -> Option<Rational> {
        let mut p = self.clone();
        for (v, val) in assignment {
            p = p.evaluate(v, val);
        }
        p.constant_value()
    }

    /// Clears denominators and removes the integer content, leaving a
    /// primitive integer polynomial with positive leading coefficient. Returns
    /// the polynomial and the factor `c` with `self = c * result`.
    pub fn primitive_part(&self) -> (Poly, Rational) {
        let Some((_, lead)) = self.leading() else {
            return (Poly::zero(), Rational::one());
        };
        let lcm = Rational::lcm_denom(self.terms.values().cloned());
        let content = self
            .terms
            .values()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .fold(num_bigint::BigInt::from(0), |g, n| {
                num_integer::Integer::gcd(&g, &n)
            });
        let mut factor = crate::arith::rat_make(content, lcm).expect("positive lcm");
        if lead.is_negative() {
            factor = -factor;
        }
        let inv = factor.recip().expect("nonzero content");
        (self.scale(&inv), factor)
    }

    /// Divides every coefficient by the leading one.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) => self.scale(&c.recip().expect("nonzero leading coefficient")),
        }
    }
}

/// `Some(c)` with `p = c * q` when such a nonzero `c` exists. `(0, 0)` gives 1.
pub fn equal_up_to_scalar(p: &Poly, q: &Poly) -> Option<Rational> {
    match (p.leading(), q.leading()) {
        (None, None) => Some(Rational::one()),
        (None, _) | (_, None) => None,
        (Some((mp, cp)), Some((mq, cq))) => {
            if mp != mq {
                return None;
            }
            let c = cp / cq;
            (q.scale(&c) == *p).then_some(c)
        }
    }
}

/// Whether `p == scalar * prod(f_i ^ m_i)` exactly.
pub fn verify_factorization(p: &Poly, factors: &[(Poly, u32)], scalar: &Rational) -> bool {
    if scalar.is_zero() || (p.is_zero() && !factors.is_empty()) {
        return false;
    }
    let product = factors
        .iter()
        .fold(Poly::constant(scalar.clone()), |acc, (f, m)| acc.mul(&f.pow(*m)));
    product == *p
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl core::str::FromStr for Poly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_poly(s)
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        parse_poly(&String::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat_make;
    use alloc::string::ToString;
    use proptest::prelude::*;

    fn p(s: &str) -> Poly {
        Poly::parse(s).unwrap()
    }

    fn a() -> Var {
        Var::named("A")
    }

    #[test]
    fn canonical_print_order() {
        // B^2 + 4AB - B - 32A^2 + 4A, expanded by hand
        let expanded = p("B^2 + 4*A*B - B - 32*A^2 + 4*A");
        assert_eq!(expanded.to_string(), "-32*A^2 + 4*A*B + 4*A + B^2 - B");
        assert_eq!(p("(B-4*A)*(B+8*A-1)"), expanded);
    }

    #[test]
    fn arithmetic_examples() {
        let x = p("3*A^2*B - 5/7*C + 2");
        assert!(poly_arith(PolyOp::Sub, &x, &x).is_zero());
        assert_eq!(
            poly_arith(PolyOp::Mul, &p("A-1"), &p("16*A-1")),
            p("16*A^2 - 17*A + 1")
        );
        assert_eq!(p("A+B").pow(2), p("A^2 + 2*A*B + B^2"));
        assert_eq!(p("A+B").pow(0), Poly::one());
        assert_eq!(poly_arith(PolyOp::Add, &p("A"), &p("-A")), Poly::zero());
    }

    #[test]
    fn substitution_examples() {
        let c = Var::named("C");
        let b = Var::named("B");
        assert!(p("C - 9*A^2").substitute(&c, &p("9*A^2")).is_zero());
        assert!(p("B + 8*A - 1").substitute(&b, &p("1 - 8*A")).is_zero());
        // (3A+B)^2 + 3A - 48A^2 - B at B = (11A+1)/3:
        // ((20A+1)/3)^2 + 3A - 48A^2 - (11A+1)/3 = (-32A^2 + 34A - 2)/9
        let got = p("(3*A+B)^2 + 3*A - 48*A^2 - B").substitute(&b, &p("11/3*A + 1/3"));
        let want = p("-2/9*(16*A-1)*(A-1)");
        assert_eq!(got, want);
        assert_eq!(got.to_string(), "-32/9*A^2 + 34/9*A - 2/9");
    }

    #[test]
    fn scalar_equivalence() {
        let x = p("2*A*B - C^3 + 1/2");
        assert_eq!(equal_up_to_scalar(&x, &x), Some(Rational::one()));
        assert_eq!(equal_up_to_scalar(&p("A+B"), &p("A-B")), None);
        assert_eq!(equal_up_to_scalar(&Poly::zero(), &Poly::zero()), Some(Rational::one()));
        assert_eq!(equal_up_to_scalar(&Poly::zero(), &x), None);
        assert_eq!(
            equal_up_to_scalar(&p("-2*A + 4"), &p("A - 2")),
            Some(rat_make(-2, 1).unwrap())
        );
    }

    #[test]
    fn factorization_check() {
        let p0 = p("27*A^2*(A-1)*(9*A+5)");
        let factors = [(p("A"), 2), (p("A-1"), 1), (p("9*A+5"), 1)];
        assert!(verify_factorization(&p0, &factors, &27.into()));
        assert!(!verify_factorization(&p0, &factors, &26.into()));
        assert!(!verify_factorization(&Poly::zero(), &factors, &1.into()));
        assert!(!verify_factorization(&p0, &factors, &Rational::zero()));
    }

    #[test]
    fn primitive_part_clears_denominators() {
        let x = p("-160/9*A^2 + 146/9*A + 14/9");
        let (prim, c) = x.primitive_part();
        assert_eq!(prim, p("80*A^2 - 73*A - 7"));
        assert_eq!(c, rat_make(-2, 9).unwrap());
        assert_eq!(prim.scale(&c), x);
    }

    #[test]
    fn evaluation() {
        let mut at = BTreeMap::new();
        at.insert(a(), rat_make(-5, 9).unwrap());
        at.insert(Var::named("B"), rat_make(-20, 9).unwrap());
        at.insert(Var::named("C"), rat_make(25, 9).unwrap());
        // (3g) right-hand side
        let rhs = p("(A+2*B)^2 + (2*A+B)^2 + C");
        assert_eq!(rhs.eval(&at), Some(rat_make(350, 9).unwrap()));
        assert_eq!(p("D + A").eval(&at), None);
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        let var = prop::sample::select(alloc::vec!["A", "B", "C", "k", "x"]);
        let mono = prop::collection::vec((var, 1u32..4), 0..3);
        let coeff = (-20i64..20, 1i64..6);
        prop::collection::vec((coeff, mono), 0..6).prop_map(|ts| {
            ts.into_iter().fold(Poly::zero(), |acc, ((n, d), vs)| {
                let t = vs.into_iter().fold(
                    Poly::constant(rat_make(n, d).unwrap()),
                    |t, (v, e)| t.mul(&Poly::var(Var::named(v)).pow(e)),
                );
                acc.add(&t)
            })
        })
    }

    proptest! {
        #[test]
        fn print_parse_roundtrip(x in arb_poly()) {
            prop_assert_eq!(Poly::parse(&x.to_string()).unwrap(), x);
        }

        #[test]
        fn scalar_witness_is_exact(x in arb_poly(), n in -9i64..9, d in 1i64..5) {
            prop_assume!(n != 0 && !x.is_zero());
            let c = rat_make(n, d).unwrap();
            let y = x.scale(&c);
            let got = equal_up_to_scalar(&y, &x).unwrap();
            prop_assert!(y.sub(&x.scale(&got)).is_zero());
        }

        #[test]
        fn ring_laws(x in arb_poly(), y in arb_poly(), z in arb_poly()) {
            prop_assert_eq!(x.mul(&y), y.mul(&x));
            prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
            prop_assert!(x.sub(&x).is_zero());
        }

        #[test]
        fn substitution_is_a_homomorphism(x in arb_poly(), y in arb_poly(), q in arb_poly()) {
            let v = Var::named("A");
            prop_assert_eq!(
                x.mul(&y).substitute(&v, &q),
                x.substitute(&v, &q).mul(&y.substitute(&v, &q))
            );
        }
    }
}
