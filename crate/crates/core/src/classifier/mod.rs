//! Identity ledger, case certificates and classification of solutions.

mod cases;
mod certificate;
mod classify;
mod ledger;
mod perturb;

pub use cases::{certificate_for, eliminate_case_general, eliminate_case_k3, eliminate_case_k4};
pub use certificate::{
    solve_linear, Branch, CaseCertificate, CaseId, Evaluation, FactorClaim, Operand, Pin, PointCheck, Source, Step,
    StepOp, Substitution,
};
pub use classify::{classify, classify_seed, describe, detect_family, family_from_seq, Classification, SeedOutcome};
pub use ledger::{build_ledger, case_var, k_var, Decomposition, IdentityRecord, Ledger, LedgerScope, Part, RecordForm};
pub use perturb::{perturbation_delta, perturbation_test, sign_flip_test, PerturbationReport, Trial};

#[cfg(test)]
mod tests;
