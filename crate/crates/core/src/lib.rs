//! Evaluation and normalization for the simply typed lambda calculus with
//! booleans, without performing substitution.
//!
//! The crate is `no_std` and only needs `alloc`. It contains:
//!
//! - [`syntax`]: types, named surface terms, nameless core terms, contexts.
//! - [`parser`]: concrete syntax and pretty-printing.
//! - [`typecheck`]: bidirectional type checking and annotation elaboration.
//! - [`eval`]: big-step environment evaluation into closures and neutrals.
//! - [`nbe`]: read-back and full normalization by evaluation.
//! - [`whnf`]: weak-head normalization of closed terms by closing closures.
//! - [`oracle`]: a naive substitution-based reducer used as a test oracle.
//! - [`denote`]: finite set-theoretic semantics with decidable equivalence.
//! - [`gen`]: a deterministic generator of well-typed terms.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod denote;
pub mod error;
pub mod eval;
pub mod gen;
pub mod nbe;
pub mod oracle;
pub mod parser;
pub mod syntax;
pub mod typecheck;
pub mod whnf;

pub use error::{Error, Result};
pub use eval::{Env, Fuel, Neutral, Value};
pub use syntax::{Ctx, Surface, Term, Ty};
