//! Normalization by evaluation.
//!
//! A term is evaluated in an environment that maps each free variable to a
//! neutral level, and the resulting value is read back into a term. Read-back
//! goes under a closure by evaluating its body with a fresh level, so the
//! output is a full beta/iota normal form. Annotations are not reproduced.

use crate::error::{Error, Result};
use crate::eval::{eval, Closure, Env, Fuel, Neutral, Value};
use crate::syntax::{Ctx, Term};

/// Convert a de Bruijn level to an index at the given scope.
pub fn lvl_to_idx(level: usize, scope: usize) -> Result<usize> {
    if level < scope {
        Ok(scope - (level + 1))
    } else {
        Err(Error::Scope {
            index: level,
            scope,
        })
    }
}

/// Convert a de Bruijn index to a level at the given scope.
pub fn idx_to_lvl(index: usize, scope: usize) -> Result<usize> {
    if index < scope {
        Ok(scope - (index + 1))
    } else {
        Err(Error::Scope { index, scope })
    }
}

/// The environment that binds index `i` to the neutral level `n - 1 - i`.
pub fn initial_env(scope: usize) -> Env {
    (0..scope).map(Value::lvl).collect()
}

/// Read a value back into a normal term at the given scope.
pub fn readback(scope: usize, value: &Value, fuel: &mut Fuel) -> Result<Term> {
    match value {
        Value::Closure(Closure { body, env, .. }) => {
            let fresh = Value::lvl(scope);
            let result = eval(&env.push(fresh), body, fuel)?;
            Ok(Term::abs(readback(scope + 1, &result, fuel)?))
        }
        Value::True => Ok(Term::True),
        Value::False => Ok(Term::False),
        Value::Neutral(ne) => readback_ne(scope, ne, fuel),
    }
}

/// Read a neutral value back into a neutral term at the given scope.
pub fn readback_ne(scope: usize, ne: &Neutral, fuel: &mut Fuel) -> Result<Term> {
    match ne {
        Neutral::Lvl(k) => Ok(Term::Var(lvl_to_idx(*k, scope)?)),
        Neutral::App(fun, arg) => Ok(Term::app(
            readback_ne(scope, fun, fuel)?,
            readback(scope, arg, fuel)?,
        )),
        Neutral::If(c, t, e) => Ok(Term::ite(
            readback_ne(scope, c, fuel)?,
            readback(scope, t, fuel)?,
            readback(scope, e, fuel)?,
        )),
    }
}

/// Normalize a term in the given context.
///
/// Only the length of the context matters; the term is assumed to be well
/// typed and is not checked here.
pub fn normalize(ctx: &Ctx, term: &Term, fuel: &mut Fuel) -> Result<Term> {
    normalize_at(ctx.len(), term, fuel)
}

/// Normalize a term with `scope` free variables.
pub fn normalize_at(scope: usize, term: &Term, fuel: &mut Fuel) -> Result<Term> {
    term.audit_scope(scope)?;
    let value = eval(&initial_env(scope), term, fuel)?;
    readback(scope, &value, fuel)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Class {
    /// Normal and also neutral: a variable, or an elimination stuck on one.
    NeutralTerm,
    /// Normal but not neutral.
    NormalTerm,
    /// Contains a redex.
    Neither,
}

impl Class {
    /// Neutral terms are normal too.
    pub fn is_normal(self) -> bool {
        matches!(self, Class::NeutralTerm | Class::NormalTerm)
    }
}

/// Classify a term as neutral, normal, or neither.
pub fn classify(term: &Term) -> Class {
    match term {
        Term::Var(_) => Class::NeutralTerm,
        Term::True | Term::False => Class::NormalTerm,
        Term::Lam(_, body) => {
            if classify(body).is_normal() {
                Class::NormalTerm
            } else {
                Class::Neither
            }
        }
        Term::App(fun, arg) => {
            if classify(fun) == Class::NeutralTerm && classify(arg).is_normal() {
                Class::NeutralTerm
            } else {
                Class::Neither
            }
        }
        Term::If(c, t, e) => {
            if classify(c) == Class::NeutralTerm
                && classify(t).is_normal()
                && classify(e).is_normal()
            {
                Class::NeutralTerm
            } else {
                Class::Neither
            }
        }
    }
}
