//! JSON and CommonMark rendering. Both are deterministic: struct fields
//! serialize in declaration order, maps are ordered, and instances keep
//! enumeration order.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Serialize, Serializer};
use sumsq_core::classifier::{
    CaseCertificate, CaseId, Classification, Decomposition, Ledger, LedgerScope, Part, PointCheck, StepOp,
};
use sumsq_core::engine::{FamilyKind, VerificationReport};
use sumsq_core::{Poly, Rational, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Markdown,
}

pub trait Markdown {
    fn markdown(&self) -> String;
}

pub fn render_report<T: Serialize + Markdown>(result: &T, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(result).expect("report types serialize");
            s.push('\n');
            s
        }
        Format::Markdown => result.markdown(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReprResult {
    pub n: u64,
    pub k: usize,
    pub representable: bool,
    pub witness: Option<Witness>,
}

impl Markdown for ReprResult {
    fn markdown(&self) -> String {
        match &self.witness {
            Some(w) => {
                let sq: Vec<String> = w.parts().iter().map(|x| format!("{x}^2")).collect();
                format!("{} = {} is a sum of {} positive squares.\n", self.n, sq.join(" + "), self.k)
            }
            None => format!("{} is not a sum of {} positive squares.\n", self.n, self.k),
        }
    }
}

/// A verification report plus what was verified. Serializes as the bare report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyResult {
    pub family: FamilyKind,
    pub minus_signs: usize,
    pub overrides: BTreeMap<u64, Rational>,
    pub report: VerificationReport,
}

impl Serialize for VerifyResult {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.report.serialize(s)
    }
}

/// Rows shown before truncating a violation table.
const MAX_ROWS: usize = 50;

fn braces(xs: &[u64]) -> String {
    let parts: Vec<String> = xs.iter().map(u64::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

impl Markdown for VerifyResult {
    fn markdown(&self) -> String {
        let r = &self.report;
        let mut out = format!("# Verification: {} family, k = {}, N = {}\n\n", self.family.name(), r.k, r.bound);
        let _ = writeln!(out, "- instances checked: {}", r.instances);
        let _ = writeln!(out, "- minus signs: {}", self.minus_signs);
        if !self.overrides.is_empty() {
            let o: Vec<String> = self.overrides.iter().map(|(n, v)| format!("f({n}) = {v}")).collect();
            let _ = writeln!(out, "- overrides: {}", o.join(", "));
        }
        let _ = writeln!(out, "- violations: {}\n", r.violations.len());
        if !r.violations.is_empty() {
            out.push_str("| xs | n | f(n) | sum f(xi)^2 |\n|---|---|---|---|\n");
            for v in r.violations.iter().take(MAX_ROWS) {
                let _ = writeln!(out, "| {} | {} | {} | {} |", braces(v.xs.parts()), v.n, v.lhs, v.rhs);
            }
            if r.violations.len() > MAX_ROWS {
                let _ = writeln!(out, "\n{} more not shown.", r.violations.len() - MAX_ROWS);
            }
        }
        out
    }
}

fn seed_text(seeds: &[Rational]) -> String {
    let s: Vec<String> = seeds.iter().map(Rational::to_string).collect();
    format!("({})", s.join(", "))
}

fn case_name(case: CaseId) -> &'static str {
    match case {
        CaseId::I => "Case I",
        CaseId::II => "Case II",
        CaseId::III => "Case III",
    }
}

impl Markdown for Classification {
    fn markdown(&self) -> String {
        let s = self.outcomes.first().map_or(0, |o| o.seeds.len());
        let mut out = format!("# Classification: k = {}, N = {}\n\n", self.k, self.bound);
        let _ = writeln!(out, "Seeds from the {} certificate.\n", case_name(self.case));
        let _ = writeln!(out, "| seed (A_1..A_{s}) | family | instances | conflicts | violations |");
        out.push_str("|---|---|---|---|---|\n");
        for o in &self.outcomes {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} |",
                seed_text(&o.seeds),
                o.family.map_or("none", FamilyKind::name),
                o.instances,
                o.conflicts.len(),
                o.violations.len()
            );
        }
        let _ = writeln!(
            out,
            "\nSign degrees of freedom (non-representable n <= {}): {}",
            self.bound, self.sign_dof
        );
        let _ = writeln!(out, "\nResult: {}", if self.passed() { "pass" } else { "FAIL" });
        out
    }
}

fn code(p: &Poly) -> String {
    format!("`{p}`")
}

fn part_text(p: &Part) -> String {
    let mut s = p.value.to_string();
    if s.contains(' ') {
        s = format!("({s})");
    }
    if let Some(via) = &p.via {
        let inner: Vec<String> = via.iter().map(part_text).collect();
        s = format!("{s}[{}]", inner.join(", "));
    }
    if p.repeat != Poly::one() {
        let r = p.repeat.to_string();
        if r.contains(' ') {
            s = format!("{s}^({r})");
        } else {
            s = format!("{s}^{r}");
        }
    }
    s
}

fn decomposition_text(d: &Decomposition) -> String {
    let parts: Vec<String> = d.parts.iter().map(part_text).collect();
    format!("{{{}}}", parts.join(", "))
}

impl Markdown for Ledger {
    fn markdown(&self) -> String {
        let scope = match self.scope {
            LedgerScope::Concrete(k) => format!("k = {k}"),
            LedgerScope::Symbolic => "symbolic k >= 5".into(),
        };
        let mut out = format!("# Identity ledger ({scope})\n\n");
        out.push_str(
            "Parts are written `x^r` for r copies of x; `x[...]` gives the decomposition used for f(x)^2.\n\n",
        );
        out.push_str("| label | target | decompositions | relation (lhs - rhs) | notes |\n|---|---|---|---|---|\n");
        for r in &self.records {
            let ds: Vec<String> = r.decompositions.iter().map(decomposition_text).collect();
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} |",
                r.label,
                code(&r.target),
                ds.join(" vs "),
                code(&r.relation),
                r.notes.as_deref().unwrap_or("")
            );
        }
        let _ = writeln!(out, "\nAll {} records validated.", self.records.len());
        out
    }
}

/// `i:3d` is shown as `branch (i) 3d`.
pub fn step_title(label: &str) -> String {
    match label.split_once(':') {
        Some((b @ ("i" | "ii"), rest)) => format!("branch ({b}) {rest}"),
        _ => label.to_string(),
    }
}

fn point_text(p: &PointCheck) -> String {
    let parts: Vec<String> = p.point.iter().map(|(v, x)| format!("{v} = {x}")).collect();
    parts.join(", ")
}

impl Markdown for CaseCertificate {
    fn markdown(&self) -> String {
        let scope = self.k.map_or_else(|| "symbolic k >= 5".to_string(), |k| format!("k = {k}"));
        let mut out = format!("# {} certificate ({scope})\n\n## Steps\n", case_name(self.case));
        for s in &self.steps {
            let _ = writeln!(out, "\n### {}\n", step_title(&s.label));
            match &s.op {
                StepOp::Reduce {
                    sources,
                    base,
                    substitutions,
                    result,
                    claim,
                    scalar,
                    cleared,
                } => {
                    let mut from: Vec<String> = Vec::new();
                    if let Some(b) = base {
                        from.push(code(b));
                    }
                    from.extend(sources.iter().map(|src| {
                        if src.coeff == Rational::one() {
                            format!("[{}]", src.label)
                        } else {
                            format!("{} [{}]", src.coeff, src.label)
                        }
                    }));
                    let _ = writeln!(out, "- from: {}", from.join(" + "));
                    for sub in substitutions {
                        let _ = writeln!(out, "- substitute {} := {}", sub.var, code(&sub.expr));
                    }
                    let _ = writeln!(out, "- result: {}", code(result));
                    let _ = writeln!(out, "- claimed: `{}` (result = {} * claimed)", claim.text, scalar);
                    let _ = writeln!(out, "- cleared: {}", code(cleared));
                }
                StepOp::Solve { of, var, expr } => {
                    let _ = writeln!(out, "- solve [{of}] for {var}: {var} = {}", code(expr));
                }
                StepOp::Gcd { left, right, gcd, .. } => {
                    let _ = writeln!(out, "- gcd of {} (from {})", code(&left.poly), left.of);
                    let _ = writeln!(out, "- and {} (from {})", code(&right.poly), right.of);
                    let _ = writeln!(out, "- gcd: {}", code(gcd));
                }
                StepOp::Roots { of, roots, var } => {
                    let r: Vec<String> = roots.iter().map(Rational::to_string).collect();
                    let _ = writeln!(out, "- rational roots in {var} of [{of}]: {{{}}}", r.join(", "));
                }
                StepOp::Identity {
                    lhs,
                    rhs,
                    substitutions,
                } => {
                    let _ = writeln!(out, "- identity {} = {}", code(lhs), code(rhs));
                    for sub in substitutions {
                        let _ = writeln!(out, "- with {} := {}", sub.var, code(&sub.expr));
                    }
                }
            }
            if let Some(n) = &s.note {
                let _ = writeln!(out, "- note: {n}");
            }
        }
        out.push_str("\n## Branches\n\n");
        for (i, b) in self.branches.iter().enumerate() {
            let tag = if i == 0 { "i" } else { "ii" };
            let assume: Vec<String> = b.assume.iter().map(|s| format!("{} = {}", s.var, s.expr)).collect();
            let _ = write!(out, "- branch ({tag}) {}: assumes {}", b.name, assume.join(", "));
            if let Some(c) = &b.constraint {
                let _ = write!(out, "; closing constraint {} = 0", code(c));
            }
            if self.k.is_some() {
                let c: Vec<String> = b.candidates.iter().map(Rational::to_string).collect();
                let _ = write!(out, "; candidates A in {{{}}}", c.join(", "));
            }
            out.push('\n');
        }
        if !self.pins.is_empty() {
            let p: Vec<String> = self.pins.iter().map(|p| format!("{} from [{}]", p.var, p.from)).collect();
            let _ = writeln!(out, "\nRemaining values are pinned in order: {}.", p.join(", "));
        }
        if self.k.is_some() {
            out.push_str("\n## Candidate points\n\n| branch | point | status | failing relations |\n|---|---|---|---|\n");
            for p in &self.points {
                let failing: Vec<String> = p
                    .failures
                    .iter()
                    .map(|e| format!("{}: {} != {}", e.label, e.lhs, e.rhs))
                    .collect();
                let _ = writeln!(
                    out,
                    "| {} | {} | {} | {} |",
                    p.branch,
                    point_text(p),
                    if p.accepted() { "accepted" } else { "rejected" },
                    failing.join("; ")
                );
            }
            out.push_str("\n## Seeds\n\n");
            for s in &self.seeds {
                let _ = writeln!(out, "- {}", seed_text(s));
            }
        }
        out
    }
}

/// Ledger, certificate and classification for one `k`.
#[derive(Debug, Clone, Serialize)]
pub struct FullReport {
    pub ledger: Ledger,
    pub certificate: CaseCertificate,
    pub classification: Classification,
}

impl Markdown for FullReport {
    fn markdown(&self) -> String {
        let mut out = self.ledger.markdown();
        out.push('\n');
        out.push_str(&self.certificate.markdown());
        out.push('\n');
        out.push_str(&self.classification.markdown());
        out
    }
}
