//! Command-line front end, report rendering and threaded drivers on top of
//! [`sumsq_core`].

pub mod cli;
pub mod exit;
pub mod parallel;
pub mod render;
pub mod signs;

pub use cli::{run, Outcome};
