//! The three eliminations. Each pins the low values of `A_n`, splits on a
//! factored relation, and reduces every branch to finitely many candidate
//! points that are then checked against the whole ledger.

use alloc::string::ToString;
use alloc::vec;

use super::certificate::{branch, pin, Builder, CaseCertificate, CaseId, FactorClaim};
use super::ledger::{build_ledger, LedgerScope};
use crate::error::Result;

/// `k = 3`: seeds `A_1..A_4`.
pub fn eliminate_case_k3() -> Result<CaseCertificate> {
    let ledger = build_ledger(LedgerScope::Concrete(3))?;
    let mut b = Builder::new(&ledger);
    let c = b.solve("3a:C", "3a", "C")?.to_string();
    let e = b.solve("3e:E", "3e", "E")?.to_string();
    let d = b.solve("3f:D", "3f", "D")?.to_string();
    b.reduce(
        "3b:split",
        &[("3b", 1)],
        None,
        &[("D", &d), ("E", &e), ("C", &c)],
        FactorClaim::new("(B - 4*A)*(B + 8*A - 1)", &[("B - 4*A", 1), ("B + 8*A - 1", 1)], 1)?,
        Some("D from 3f, then E from 3e, then C from 3a"),
    )?;

    b.reduce(
        "i:3d",
        &[("3d", 1)],
        None,
        &[("C", &c), ("B", "4*A")],
        FactorClaim::new("27*A^2*(A - 1)*(9*A + 5)", &[("A", 2), ("A - 1", 1), ("9*A + 5", 1)], 27)?,
        None,
    )?;
    b.roots("i:roots", "i:3d")?;

    let ii = [("C", c.as_str()), ("B", "1 - 8*A")];
    b.reduce(
        "ii:3d",
        &[("3d", 1)],
        None,
        &ii,
        FactorClaim::new(
            "(9*A - 1)*(27*A^3 + 39*A^2 - 52*A + 8)",
            &[("9*A - 1", 1), ("27*A^3 + 39*A^2 - 52*A + 8", 1)],
            1,
        )?,
        None,
    )?;
    b.reduce(
        "ii:3g",
        &[("3g", 1)],
        None,
        &ii,
        FactorClaim::new(
            "(9*A - 1)*(9*A^3 + 5*A^2 - 29*A + 4)",
            &[("9*A - 1", 1), ("9*A^3 + 5*A^2 - 29*A + 4", 1)],
            1,
        )?,
        None,
    )?;
    b.gcd(
        "ii:cubic-gcd",
        ("ii:3d", Some(1)),
        ("ii:3g", Some(1)),
        Some("the cubic cofactors share no root, rational or not"),
    )?;
    b.gcd("ii:gcd", ("ii:3d", None), ("ii:3g", None), None)?;
    b.roots("ii:roots-3d", "ii:3d")?;
    b.roots("ii:roots-3g", "ii:3g")?;
    b.roots("ii:roots", "ii:gcd")?;

    let branches = vec![
        branch("B = 4A", &[("B", "4*A")], &["i:roots"], None)?,
        branch("B = 1 - 8A", &[("B", "1 - 8*A")], &["ii:roots-3d", "ii:roots-3g"], None)?,
    ];
    let pins = vec![pin(&b, "C", "3a:C")?, pin(&b, "E", "3e:E")?, pin(&b, "D", "3f:D")?];
    b.finish(CaseId::I, Some(3), branches, pins)
}

/// `k = 4`: seeds `A_1..A_3`.
pub fn eliminate_case_k4() -> Result<CaseCertificate> {
    let ledger = build_ledger(LedgerScope::Concrete(4))?;
    let mut b = Builder::new(&ledger);
    b.reduce(
        "4a:split",
        &[("4a", 1)],
        None,
        &[],
        FactorClaim::new("(A - B)*(11*A - 3*B + 1)", &[("A - B", 1), ("11*A - 3*B + 1", 1)], 1)?,
        None,
    )?;
    b.reduce(
        "4d-4e",
        &[("4d", 1), ("4e", -1)],
        None,
        &[],
        FactorClaim::new("32*A^2 + 3*A - 2*B - 3*C", &[("32*A^2 + 3*A - 2*B - 3*C", 1)], 1)?,
        Some("eliminates E"),
    )?;
    b.solve("4d-4e:C", "4d-4e", "C")?;
    b.solve("4d:E", "4d", "E")?;

    for rec in ["4b", "4c"] {
        b.reduce(
            &alloc::format!("i:{rec}"),
            &[(rec, 1)],
            None,
            &[("B", "A")],
            FactorClaim::new("32*A^2 - 2*A", &[("A", 1), ("16*A - 1", 1)], 2)?,
            None,
        )?;
        b.roots(&alloc::format!("i:roots-{rec}"), &alloc::format!("i:{rec}"))?;
    }

    let ii = [("B", "11/3*A + 1/3")];
    b.reduce(
        "ii:4b",
        &[("4b", 1)],
        None,
        &ii,
        FactorClaim::new("(A - 1)*(160*A + 14)", &[("A - 1", 1), ("160*A + 14", 1)], 1)?,
        None,
    )?;
    b.reduce(
        "ii:4c",
        &[("4c", 1)],
        None,
        &ii,
        FactorClaim::new("(A - 1)*(16*A - 1)", &[("A - 1", 1), ("16*A - 1", 1)], 1)?,
        None,
    )?;
    b.gcd("ii:gcd", ("ii:4b", None), ("ii:4c", None), None)?;
    b.roots("ii:roots-4b", "ii:4b")?;
    b.roots("ii:roots-4c", "ii:4c")?;
    b.roots("ii:roots", "ii:gcd")?;

    let branches = vec![
        branch("B = A", &[("B", "A")], &["i:roots-4b", "i:roots-4c"], None)?,
        branch(
            "B = (11A + 1)/3",
            &[("B", "11/3*A + 1/3")],
            &["ii:roots-4b", "ii:roots-4c"],
            None,
        )?,
    ];
    let pins = vec![pin(&b, "C", "4d-4e:C")?, pin(&b, "E", "4d:E")?];
    b.finish(CaseId::II, Some(4), branches, pins)
}

/// `k >= 5` with `k` symbolic. Use [`CaseCertificate::instantiate`] for
/// candidate points at a concrete `k`.
pub fn eliminate_case_general() -> Result<CaseCertificate> {
    let ledger = build_ledger(LedgerScope::Symbolic)?;
    let mut b = Builder::new(&ledger);
    b.reduce(
        "5a",
        &[("III-main", 1)],
        None,
        &[],
        FactorClaim::new("2*(A - B)^2 + A + 2*B - 3*C", &[("2*(A - B)^2 + A + 2*B - 3*C", 1)], 1)?,
        Some("every k-dependent term cancels"),
    )?;
    b.reduce(
        "5b",
        &[("III-P1", 1), ("III-P2", 1)],
        None,
        &[],
        FactorClaim::new("5*A + 3*C - 8*B", &[("5*A + 3*C - 8*B", 1)], 1)?,
        Some("eliminates D"),
    )?;
    let c = b.solve("5b:C", "5b", "C")?.to_string();
    b.reduce(
        "5c",
        &[("III-main", 1)],
        None,
        &[("C", &c)],
        FactorClaim::new("2*(A - B)*(A - B + 3)", &[("A - B", 1), ("A - B + 3", 1)], 2)?,
        None,
    )?;

    b.reduce(
        "i:C",
        &[("5b:C", 1)],
        None,
        &[("B", "A")],
        FactorClaim::new("C - A", &[("C - A", 1)], 1)?,
        None,
    )?;
    b.identity(
        "i:propagation",
        "2*A + C - A - 2*B + A",
        "A",
        &[("B", "A"), ("C", "A")],
        "with A_1 = A_2 = A_3 = A every recurrence step returns A, so A_n = A",
    )?;
    let closing_i = b.reduce(
        "i:closing",
        &[],
        Some("A - (k*A)^2"),
        &[],
        FactorClaim::new("A*(k^2*A - 1)", &[("A", 1), ("k^2*A - 1", 1)], 1)?,
        Some("A_k = A on this branch, while {1^k} gives f(k) = kA"),
    )?;

    b.reduce(
        "ii:C",
        &[("5b:C", 1)],
        None,
        &[("B", "A + 3")],
        FactorClaim::new("C - A - 8", &[("C - A - 8", 1)], 1)?,
        None,
    )?;
    b.identity("ii:n=1", "1 + A - 1", "A", &[], "A_n = n^2 + A - 1 matches A_1")?;
    b.identity("ii:n=2", "4 + A - 1", "B", &[("B", "A + 3")], "matches A_2")?;
    b.identity("ii:n=3", "9 + A - 1", "C", &[("C", "A + 8")], "matches A_3")?;
    b.identity(
        "ii:propagation",
        "2*(n^2 + A - 1) + C - ((n - 1)^2 + A - 1) - 2*B + A",
        "(n + 1)^2 + A - 1",
        &[("B", "A + 3"), ("C", "A + 8")],
        "n^2 + A - 1 is preserved by the recurrence for every n",
    )?;
    let closing_ii = b.reduce(
        "ii:closing",
        &[],
        Some("((k - 1)*A + B)^2 - (k*A)^2 - ((k + 3)^2 - k^2)"),
        &[("B", "A + 3")],
        FactorClaim::new("k*(A - 1)", &[("k", 1), ("A - 1", 1)], 1)?,
        Some("f(k+3) = (k-1)A + B from {1^(k-1), 2} and f(k) = kA, against A_n = n^2 + A - 1"),
    )?;

    let branches = vec![
        branch("B = A", &[("B", "A"), ("C", "A")], &["i:closing"], Some(closing_i))?,
        branch("B = A + 3", &[("B", "A + 3"), ("C", "A + 8")], &["ii:closing"], Some(closing_ii))?,
    ];
    let pins = vec![pin(&b, "D", "III-P1")?];
    b.finish(CaseId::III, None, branches, pins)
}

/// The certificate for a concrete `k >= 3`.
pub fn certificate_for(k: u64) -> Result<CaseCertificate> {
    match k {
        3 => eliminate_case_k3(),
        4 => eliminate_case_k4(),
        k if k >= 5 => eliminate_case_general()?.instantiate(k),
        k => Err(crate::error::Error::input(alloc::format!("k must be at least 3, got {k}"))),
    }
}
