//! Exact kernel for the functional equation
//! `f(x1^2 + ... + xk^2) = f(x1)^2 + ... + f(xk)^2` over positive integers, `k >= 3`.
//!
//! The crate is `no_std` (it needs `alloc`). It provides:
//!
//! - [`arith`]: canonical big rationals and integer square roots,
//! - [`poly`]: a sparse multivariate polynomial kernel over the rationals with a
//!   text parser, univariate GCDs and rational-root search,
//! - [`repr`]: representability of `n` as a sum of exactly `k` positive squares,
//! - [`engine`]: equation instances, the three solution families, and the
//!   square-sequence recurrences,
//! - [`classifier`]: the identity ledger, replayable elimination certificates
//!   for `k = 3`, `k = 4` and `k >= 5`, and classification of all solutions on a
//!   finite prefix.
//!
//! Nothing in this crate uses floating point.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod arith;
pub mod classifier;
pub mod engine;
mod error;
pub mod poly;
pub mod repr;

pub use arith::{int_isqrt, rat_arith, rat_make, RatOp, Rational};
pub use error::{Error, Result};
pub use poly::{Monomial, Poly, Var};
pub use repr::{ReprTable, Witness};

