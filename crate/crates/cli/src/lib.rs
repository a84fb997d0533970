//! Command-line front end, JSON term encoding and property suites for
//! `stlc-core`.

pub mod cli;
pub mod json;
pub mod props;

pub use cli::run;

/// Stack size for threads that evaluate terms. Evaluation recurses on the
/// term and value structure.
pub const STACK_SIZE: usize = 1 << 30;
