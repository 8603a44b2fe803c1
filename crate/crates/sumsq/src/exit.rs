//! Exit codes.
//!
//! - `0`: every check passed
//! - `1`: a mathematical check failed (a violation, a conflict, a certificate
//!   or ledger step that does not verify)
//! - `2`: usage or input error, reported before any computation where possible

use sumsq_core::Error;

pub const OK: i32 = 0;
pub const CHECK_FAILED: i32 = 1;
pub const USAGE: i32 = 2;

/// Input problems map to [`USAGE`]; failed derivations to [`CHECK_FAILED`].
pub fn for_error(e: &Error) -> i32 {
    match e {
        Error::Ledger { .. } | Error::Certificate { .. } | Error::Classification(_) => CHECK_FAILED,
        _ => USAGE,
    }
}
