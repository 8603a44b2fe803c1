//! Replayable elimination certificates.
//!
//! Every step stores its inputs and its outputs. [`CaseCertificate::replay`]
//! rebuilds the ledger, re-derives each step from the stored inputs alone and
//! requires the outputs to match exactly, then recomputes every candidate
//! point and the seed list.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::ledger::{build_ledger, case_var, k_var, Ledger, LedgerScope};
use crate::arith::Rational;
use crate::engine::required_seeds;
use crate::error::{Error, Result};
use crate::poly::{equal_up_to_scalar, rational_roots, univariate_gcd, verify_factorization, Poly, Var};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Source {
    pub label: String,
    pub coeff: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Substitution {
    pub var: Var,
    pub expr: Poly,
}

/// `leading * prod(factor ^ multiplicity)`, alongside its printed form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorClaim {
    pub text: String,
    pub factors: Vec<(Poly, u32)>,
    pub leading: Rational,
}

impl FactorClaim {
    pub fn new(text: &str, factors: &[(&str, u32)], leading: impl Into<Rational>) -> Result<FactorClaim> {
        Ok(FactorClaim {
            text: text.into(),
            factors: factors
                .iter()
                .map(|(f, m)| Ok((Poly::parse(f)?, *m)))
                .collect::<Result<_>>()?,
            leading: leading.into(),
        })
    }

    pub fn expanded(&self) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(self.leading.clone()), |acc, (f, m)| acc.mul(&f.pow(*m)))
    }
}

/// A polynomial taken from an earlier step, optionally one of its claimed factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Operand {
    pub of: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factor: Option<usize>,
    pub poly: Poly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum StepOp {
    /// `base + sum coeff * relation`, then each substitution in order. The
    /// result must equal the claim up to the recorded nonzero scalar.
    Reduce {
        sources: Vec<Source>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        base: Option<Poly>,
        substitutions: Vec<Substitution>,
        result: Poly,
        claim: FactorClaim,
        scalar: Rational,
        cleared: Poly,
    },
    /// Solves a relation linear in `var`; the step's value is `var - expr`.
    Solve { of: String, var: Var, expr: Poly },
    Gcd {
        var: Var,
        left: Operand,
        right: Operand,
        gcd: Poly,
    },
    Roots {
        var: Var,
        of: String,
        roots: Vec<Rational>,
    },
    /// `lhs == rhs` after the substitutions.
    Identity {
        lhs: Poly,
        rhs: Poly,
        substitutions: Vec<Substitution>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub label: String,
    #[serde(flatten)]
    pub op: StepOp,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Fixes `var` from a relation that is linear in it once earlier values are known.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pin {
    pub var: Var,
    pub from: String,
    pub relation: Poly,
}

/// A branch of the case split: the assumed expressions in `A`, the steps
/// whose roots supply candidate `A` values, and for symbolic `k` the
/// closing constraint in `A` and `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    pub name: String,
    pub assume: Vec<Substitution>,
    pub root_steps: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraint: Option<Poly>,
    pub candidates: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evaluation {
    pub label: String,
    pub lhs: Rational,
    pub rhs: Rational,
}

/// A fully determined candidate; accepted exactly when no relation fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointCheck {
    pub branch: String,
    pub point: BTreeMap<Var, Rational>,
    pub failures: Vec<Evaluation>,
}

impl PointCheck {
    pub fn accepted(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseId {
    I,
    II,
    III,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseCertificate {
    pub case: CaseId,
    /// `None` for the symbolic `k >= 5` derivation.
    pub k: Option<u64>,
    pub steps: Vec<Step>,
    pub branches: Vec<Branch>,
    pub pins: Vec<Pin>,
    pub points: Vec<PointCheck>,
    /// `A_1..A_s` for every accepted point, sorted.
    pub seeds: Vec<Vec<Rational>>,
}

fn cert_err(step: &str, msg: impl Into<String>) -> Error {
    Error::Certificate {
        step: step.into(),
        msg: msg.into(),
    }
}

/// `expr` with `p = a * (v - expr)` for a nonzero constant `a`.
pub fn solve_linear(p: &Poly, v: &Var) -> Option<Poly> {
    if p.degree_in(v) != 1 {
        return None;
    }
    let rest = p.evaluate(v, &Rational::zero());
    let a = p.evaluate(v, &Rational::one()).sub(&rest).constant_value()?;
    Some(rest.scale(&(-a.recip().ok()?)))
}

fn apply_subs(mut p: Poly, subs: &[Substitution]) -> Poly {
    for s in subs {
        p = p.substitute(&s.var, &s.expr);
    }
    p
}

/// Derivation state: the ledger plus the values of earlier steps.
pub(crate) struct Ctx<'a> {
    ledger: &'a Ledger,
    values: BTreeMap<String, Poly>,
    factors: BTreeMap<String, Vec<Poly>>,
}

impl<'a> Ctx<'a> {
    pub(crate) fn new(ledger: &'a Ledger) -> Self {
        Ctx {
            ledger,
            values: BTreeMap::new(),
            factors: BTreeMap::new(),
        }
    }

    /// A step value, or else a ledger relation.
    pub(crate) fn lookup(&self, label: &str) -> Result<Poly> {
        if let Some(p) = self.values.get(label) {
            return Ok(p.clone());
        }
        self.ledger.relation(label).cloned()
    }

    fn operand(&self, step: &str, op: &Operand) -> Result<Poly> {
        let p = match op.factor {
            None => self.lookup(&op.of)?,
            Some(i) => self
                .factors
                .get(&op.of)
                .and_then(|fs| fs.get(i))
                .cloned()
                .ok_or_else(|| cert_err(step, alloc::format!("{} has no factor {i}", op.of)))?,
        };
        if p != op.poly {
            return Err(cert_err(step, alloc::format!("operand from {} is {p}, not {}", op.of, op.poly)));
        }
        Ok(p)
    }

    /// Re-derives the outputs of `step` from its inputs and records its value.
    pub(crate) fn derive(&mut self, step: &Step) -> Result<Step> {
        if self.values.contains_key(&step.label) || self.ledger.get(&step.label).is_some() {
            return Err(cert_err(&step.label, "duplicate label"));
        }
        let label = step.label.as_str();
        let op = match &step.op {
            StepOp::Reduce {
                sources,
                base,
                substitutions,
                claim,
                ..
            } => {
                let mut acc = base.clone().unwrap_or_else(Poly::zero);
                for s in sources {
                    acc = acc.add(&self.lookup(&s.label)?.scale(&s.coeff));
                }
                let result = apply_subs(acc, substitutions);
                if Poly::parse(&claim.text)? != claim.expanded() {
                    return Err(cert_err(label, "claim text does not match its factors"));
                }
                let scalar = equal_up_to_scalar(&result, &claim.expanded()).ok_or_else(|| {
                    cert_err(label, alloc::format!("{result} is not a multiple of {}", claim.text))
                })?;
                if !verify_factorization(&result, &claim.factors, &(&scalar * &claim.leading)) {
                    return Err(cert_err(label, "factorization does not expand to the result"));
                }
                let cleared = result.primitive_part().0;
                self.values.insert(step.label.clone(), result.clone());
                self.factors
                    .insert(step.label.clone(), claim.factors.iter().map(|(f, _)| f.clone()).collect());
                StepOp::Reduce {
                    sources: sources.clone(),
                    base: base.clone(),
                    substitutions: substitutions.clone(),
                    result,
                    claim: claim.clone(),
                    scalar,
                    cleared,
                }
            }
            StepOp::Solve { of, var, .. } => {
                let src = self.lookup(of)?;
                let expr = solve_linear(&src, var)
                    .ok_or_else(|| cert_err(label, alloc::format!("{of} is not linear in {var}")))?;
                self.values
                    .insert(step.label.clone(), Poly::var(var.clone()).sub(&expr));
                StepOp::Solve {
                    of: of.clone(),
                    var: var.clone(),
                    expr,
                }
            }
            StepOp::Gcd { var, left, right, .. } => {
                let l = self.operand(label, left)?;
                let r = self.operand(label, right)?;
                let gcd = univariate_gcd(&l, &r, var)?;
                self.values.insert(step.label.clone(), gcd.clone());
                StepOp::Gcd {
                    var: var.clone(),
                    left: left.clone(),
                    right: right.clone(),
                    gcd,
                }
            }
            StepOp::Roots { var, of, .. } => {
                let roots = rational_roots(&self.lookup(of)?, var)?;
                StepOp::Roots {
                    var: var.clone(),
                    of: of.clone(),
                    roots,
                }
            }
            StepOp::Identity {
                lhs,
                rhs,
                substitutions,
            } => {
                let l = apply_subs(lhs.clone(), substitutions);
                let r = apply_subs(rhs.clone(), substitutions);
                if l != r {
                    return Err(cert_err(label, alloc::format!("{l} != {r}")));
                }
                step.op.clone()
            }
        };
        Ok(Step {
            label: step.label.clone(),
            op,
            note: step.note.clone(),
        })
    }

    pub(crate) fn roots_of(&self, steps: &[Step], label: &str) -> Result<Vec<Rational>> {
        steps
            .iter()
            .find_map(|s| match &s.op {
                StepOp::Roots { roots, .. } if s.label == label => Some(roots.clone()),
                _ => None,
            })
            .ok_or_else(|| cert_err(label, "no such roots step"))
    }
}

/// Candidate `A` values of a branch: every root from its root steps, or for
/// symbolic `k` the rational roots of the constraint at the given `k`.
pub(crate) fn branch_candidates(ctx: &Ctx, steps: &[Step], branch: &Branch, k: Option<u64>) -> Result<Vec<Rational>> {
    let a = Var::named("A");
    let mut out = Vec::new();
    match (&branch.constraint, k) {
        (Some(c), Some(k)) => {
            let at_k = c.evaluate(&k_var(), &Rational::from(k));
            if at_k.is_zero() {
                return Err(cert_err(&branch.name, "constraint vanishes identically"));
            }
            out = rational_roots(&at_k, &a)?;
        }
        (Some(_), None) => {}
        (None, _) => {
            for s in &branch.root_steps {
                out.extend(ctx.roots_of(steps, s)?);
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Fills in the point at `A = a` and evaluates every ledger relation there.
pub(crate) fn check_point(ledger: &Ledger, pins: &[Pin], branch: &Branch, a: &Rational, k: u64) -> Result<PointCheck> {
    let kk = Rational::from(k);
    let mut point = BTreeMap::new();
    point.insert(Var::named("A"), a.clone());
    let close = |p: &Poly, point: &BTreeMap<Var, Rational>| {
        point
            .iter()
            .fold(p.evaluate(&k_var(), &kk), |acc, (v, x)| acc.evaluate(v, x))
    };
    for s in &branch.assume {
        let v = close(&s.expr, &point)
            .constant_value()
            .ok_or_else(|| cert_err(&branch.name, alloc::format!("{} is not determined by A", s.var)))?;
        point.insert(s.var.clone(), v);
    }
    for pin in pins {
        let rel = close(&pin.relation, &point);
        let v = solve_linear(&rel, &pin.var)
            .and_then(|e| e.constant_value())
            .ok_or_else(|| cert_err(&pin.from, alloc::format!("does not pin {}", pin.var)))?;
        point.insert(pin.var.clone(), v);
    }
    let mut failures = Vec::new();
    for r in &ledger.records {
        let missing = || cert_err(&r.label, "relation involves an undetermined value");
        let lhs = close(&r.lhs(), &point).constant_value().ok_or_else(missing)?;
        let rhs = close(&r.rhs(), &point).constant_value().ok_or_else(missing)?;
        if lhs != rhs {
            failures.push(Evaluation {
                label: r.label.clone(),
                lhs,
                rhs,
            });
        }
    }
    Ok(PointCheck {
        branch: branch.name.clone(),
        point,
        failures,
    })
}

fn seeds_of(points: &[PointCheck], k: u64) -> Vec<Vec<Rational>> {
    let s = required_seeds(k as usize) as u64;
    let mut seeds: Vec<Vec<Rational>> = points
        .iter()
        .filter(|p| p.accepted())
        .map(|p| {
            (1..=s)
                .map(|x| p.point[&case_var(x).expect("at most four seeds")].clone())
                .collect()
        })
        .collect();
    seeds.sort();
    seeds.dedup();
    seeds
}

impl CaseCertificate {
    fn step_ledger(&self) -> Result<Ledger> {
        match (self.case, self.k) {
            (CaseId::III, _) => build_ledger(LedgerScope::Symbolic),
            (_, Some(k)) => build_ledger(LedgerScope::Concrete(k)),
            (_, None) => Err(Error::input("concrete case without k")),
        }
    }

    /// Computes candidates, points and seeds from the steps, branches and pins.
    pub(crate) fn close(&mut self) -> Result<()> {
        let ledger = self.step_ledger()?;
        let mut ctx = Ctx::new(&ledger);
        for s in &self.steps {
            ctx.derive(s)?;
        }
        let Some(k) = self.k else {
            for b in &mut self.branches {
                b.candidates.clear();
            }
            self.points.clear();
            self.seeds.clear();
            return Ok(());
        };
        let point_ledger = build_ledger(LedgerScope::Concrete(k))?;
        let mut points = Vec::new();
        for i in 0..self.branches.len() {
            let cands = branch_candidates(&ctx, &self.steps, &self.branches[i], Some(k))?;
            for a in &cands {
                points.push(check_point(&point_ledger, &self.pins, &self.branches[i], a, k)?);
            }
            self.branches[i].candidates = cands;
        }
        self.seeds = seeds_of(&points, k);
        self.points = points;
        Ok(())
    }

    /// Re-derives everything and fails at the first mismatch.
    pub fn replay(&self) -> Result<()> {
        let ledger = self.step_ledger()?;
        let mut ctx = Ctx::new(&ledger);
        for s in &self.steps {
            let again = ctx.derive(s)?;
            if &again != s {
                return Err(cert_err(&s.label, "stored outputs differ from the re-derived ones"));
            }
        }
        for p in &self.pins {
            if ctx.lookup(&p.from)? != p.relation {
                return Err(cert_err(&p.from, alloc::format!("pin relation for {} differs", p.var)));
            }
        }
        let mut again = self.clone();
        again.close()?;
        if again != *self {
            return Err(cert_err("points", "candidates, points or seeds differ when recomputed"));
        }
        Ok(())
    }

    pub fn step(&self, label: &str) -> Option<&Step> {
        self.steps.iter().find(|s| s.label == label)
    }

    pub fn accepted(&self) -> impl Iterator<Item = &PointCheck> {
        self.points.iter().filter(|p| p.accepted())
    }

    pub fn rejected(&self) -> impl Iterator<Item = &PointCheck> {
        self.points.iter().filter(|p| !p.accepted())
    }

    /// The symbolic derivation specialised to a concrete `k >= 5`.
    pub fn instantiate(&self, k: u64) -> Result<CaseCertificate> {
        if self.case != CaseId::III || self.k.is_some() {
            return Err(Error::input("only the symbolic certificate can be instantiated"));
        }
        if k < 5 {
            return Err(Error::input(alloc::format!("the general case needs k >= 5, got {k}")));
        }
        let mut out = self.clone();
        out.k = Some(k);
        out.close()?;
        Ok(out)
    }
}

/// Adds steps one at a time, deriving their outputs as it goes.
pub(crate) struct Builder<'a> {
    ctx: Ctx<'a>,
    steps: Vec<Step>,
}

fn parse_subs(subs: &[(&str, &str)]) -> Result<Vec<Substitution>> {
    subs.iter()
        .map(|(v, e)| {
            Ok(Substitution {
                var: Var::new(*v)?,
                expr: Poly::parse(e)?,
            })
        })
        .collect()
}

impl<'a> Builder<'a> {
    pub(crate) fn new(ledger: &'a Ledger) -> Self {
        Builder {
            ctx: Ctx::new(ledger),
            steps: Vec::new(),
        }
    }

    fn push(&mut self, label: &str, op: StepOp, note: Option<&str>) -> Result<&Step> {
        let step = Step {
            label: label.into(),
            op,
            note: note.map(Into::into),
        };
        let done = self.ctx.derive(&step)?;
        self.steps.push(done);
        Ok(self.steps.last().expect("just pushed"))
    }

    pub(crate) fn value(&self, label: &str) -> Result<Poly> {
        self.ctx.lookup(label)
    }

    #[allow(clippy::too_many_arguments)]
    pub(crate) fn reduce(
        &mut self,
        label: &str,
        sources: &[(&str, i64)],
        base: Option<&str>,
        subs: &[(&str, &str)],
        claim: FactorClaim,
        note: Option<&str>,
    ) -> Result<Poly> {
        let op = StepOp::Reduce {
            sources: sources
                .iter()
                .map(|(l, c)| Source {
                    label: (*l).into(),
                    coeff: Rational::from(*c),
                })
                .collect(),
            base: base.map(Poly::parse).transpose()?,
            substitutions: parse_subs(subs)?,
            result: Poly::zero(),
            claim,
            scalar: Rational::one(),
            cleared: Poly::zero(),
        };
        self.push(label, op, note)?;
        self.value(label)
    }

    pub(crate) fn solve(&mut self, label: &str, of: &str, var: &str) -> Result<Poly> {
        let op = StepOp::Solve {
            of: of.into(),
            var: Var::new(var)?,
            expr: Poly::zero(),
        };
        match &self.push(label, op, None)?.op {
            StepOp::Solve { expr, .. } => Ok(expr.clone()),
            _ => unreachable!(),
        }
    }

    fn operand(&self, of: &str, factor: Option<usize>) -> Result<Operand> {
        let poly = match factor {
            None => self.value(of)?,
            Some(i) => self
                .ctx
                .factors
                .get(of)
                .and_then(|f| f.get(i))
                .cloned()
                .ok_or_else(|| cert_err(of, "no such factor"))?,
        };
        Ok(Operand {
            of: of.into(),
            factor,
            poly,
        })
    }

    pub(crate) fn gcd(
        &mut self,
        label: &str,
        left: (&str, Option<usize>),
        right: (&str, Option<usize>),
        note: Option<&str>,
    ) -> Result<Poly> {
        let op = StepOp::Gcd {
            var: Var::named("A"),
            left: self.operand(left.0, left.1)?,
            right: self.operand(right.0, right.1)?,
            gcd: Poly::zero(),
        };
        self.push(label, op, note)?;
        self.value(label)
    }

    pub(crate) fn roots(&mut self, label: &str, of: &str) -> Result<Vec<Rational>> {
        let op = StepOp::Roots {
            var: Var::named("A"),
            of: of.into(),
            roots: Vec::new(),
        };
        match &self.push(label, op, None)?.op {
            StepOp::Roots { roots, .. } => Ok(roots.clone()),
            _ => unreachable!(),
        }
    }

    pub(crate) fn identity(&mut self, label: &str, lhs: &str, rhs: &str, subs: &[(&str, &str)], note: &str) -> Result<()> {
        let op = StepOp::Identity {
            lhs: Poly::parse(lhs)?,
            rhs: Poly::parse(rhs)?,
            substitutions: parse_subs(subs)?,
        };
        self.push(label, op, Some(note))?;
        Ok(())
    }

    pub(crate) fn finish(
        self,
        case: CaseId,
        k: Option<u64>,
        branches: Vec<Branch>,
        pins: Vec<Pin>,
    ) -> Result<CaseCertificate> {
        let mut cert = CaseCertificate {
            case,
            k,
            steps: self.steps,
            branches,
            pins,
            points: Vec::new(),
            seeds: Vec::new(),
        };
        cert.close()?;
        Ok(cert)
    }
}

pub(crate) fn branch(name: &str, assume: &[(&str, &str)], root_steps: &[&str], constraint: Option<Poly>) -> Result<Branch> {
    Ok(Branch {
        name: name.into(),
        assume: parse_subs(assume)?,
        root_steps: root_steps.iter().map(|s| (*s).into()).collect(),
        constraint,
        candidates: Vec::new(),
    })
}

pub(crate) fn pin(builder: &Builder, var: &str, from: &str) -> Result<Pin> {
    Ok(Pin {
        var: Var::new(var)?,
        from: from.into(),
        relation: builder.value(from)?,
    })
}
