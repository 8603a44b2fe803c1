//! Equation instances, the three solution families, and square sequences.

mod family;
mod instance;
mod seq;
mod verify;

pub use family::{family_value, Family, FamilyKind, Sign, SignAssignment};
pub use instance::{enumerate_instances, Instance, Instances};
pub use seq::{
    extend_seq, recurrence_next, recurrence_target, required_seeds, seq_cross_check, Conflict,
    ConflictKind, Provenance, SquareSeq,
};
pub use verify::{check_instance, verify_family, verify_family_range, Violation, VerificationReport};
