//! A substitution-based reducer.
//!
//! Deliberately naive: terms are rewritten one redex at a time with de
//! Bruijn shifting and substitution. It shares no code with the evaluator
//! and serves as the reference the environment-based algorithms are tested
//! against. Reduction is untyped, so it also accepts diverging terms.

use crate::error::{Error, Result};
use crate::syntax::Term;

pub const DEFAULT_MAX_STEPS: usize = 100_000;

/// Add `amount` to every variable of `term` that is free above `cutoff`.
pub fn shift(amount: isize, cutoff: usize, term: &Term) -> Result<Term> {
    Ok(match term {
        Term::Var(i) if *i < cutoff => Term::Var(*i),
        Term::Var(i) => Term::Var(i.checked_add_signed(amount).ok_or(Error::NegativeIndex)?),
        Term::True => Term::True,
        Term::False => Term::False,
        Term::Lam(ann, body) => Term::lam(ann.clone(), shift(amount, cutoff + 1, body)?),
        Term::App(fun, arg) => Term::app(shift(amount, cutoff, fun)?, shift(amount, cutoff, arg)?),
        Term::If(c, t, e) => Term::ite(
            shift(amount, cutoff, c)?,
            shift(amount, cutoff, t)?,
            shift(amount, cutoff, e)?,
        ),
    })
}

/// Replace variable `target` of `term` by `replacement`.
pub fn subst(target: usize, replacement: &Term, term: &Term) -> Result<Term> {
    Ok(match term {
        Term::Var(i) if *i == target => replacement.clone(),
        Term::Var(i) => Term::Var(*i),
        Term::True => Term::True,
        Term::False => Term::False,
        Term::Lam(ann, body) => {
            let replacement = shift(1, 0, replacement)?;
            Term::lam(ann.clone(), subst(target + 1, &replacement, body)?)
        }
        Term::App(fun, arg) => Term::app(
            subst(target, replacement, fun)?,
            subst(target, replacement, arg)?,
        ),
        Term::If(c, t, e) => Term::ite(
            subst(target, replacement, c)?,
            subst(target, replacement, t)?,
            subst(target, replacement, e)?,
        ),
    })
}

/// Contract the beta-redex `(\. body) arg`.
pub fn beta(body: &Term, arg: &Term) -> Result<Term> {
    shift(-1, 0, &subst(0, &shift(1, 0, arg)?, body)?)
}

/// Perform the leftmost-outermost redex, if there is one.
pub fn step(term: &Term) -> Option<Term> {
    match term {
        Term::App(fun, arg) => {
            if let Term::Lam(_, body) = &**fun {
                // Shifting cannot fail here: index 0 is replaced before the
                // downward shift.
                return beta(body, arg).ok();
            }
            if let Some(fun) = step(fun) {
                return Some(Term::App(fun.into(), arg.clone()));
            }
            step(arg).map(|arg| Term::App(fun.clone(), arg.into()))
        }
        Term::If(c, t, e) => match &**c {
            Term::True => Some((**t).clone()),
            Term::False => Some((**e).clone()),
            _ => {
                if let Some(c) = step(c) {
                    return Some(Term::If(c.into(), t.clone(), e.clone()));
                }
                if let Some(t) = step(t) {
                    return Some(Term::If(c.clone(), t.into(), e.clone()));
                }
                step(e).map(|e| Term::If(c.clone(), t.clone(), e.into()))
            }
        },
        Term::Lam(ann, body) => step(body).map(|body| Term::lam(ann.clone(), body)),
        Term::Var(_) | Term::True | Term::False => None,
    }
}

/// Reduce to normal form by repeated leftmost-outermost steps. The result
/// carries no annotations.
pub fn nf(term: &Term, max_steps: usize) -> Result<Term> {
    let mut current = term.clone();
    for _ in 0..max_steps {
        match step(&current) {
            Some(next) => current = next,
            None => return Ok(current.erase()),
        }
    }
    match step(&current) {
        None => Ok(current.erase()),
        Some(_) => Err(Error::StepLimit(max_steps)),
    }
}

fn is_value(term: &Term) -> bool {
    matches!(term, Term::Lam(..) | Term::True | Term::False)
}

/// One step of weak call-by-value reduction: never under a lambda,
/// function before argument, argument reduced to a value before the redex
/// is contracted.
pub fn step_weak_cbv(term: &Term) -> Option<Term> {
    match term {
        Term::App(fun, arg) => {
            if !is_value(fun) {
                return step_weak_cbv(fun).map(|fun| Term::App(fun.into(), arg.clone()));
            }
            if !is_value(arg) {
                return step_weak_cbv(arg).map(|arg| Term::App(fun.clone(), arg.into()));
            }
            match &**fun {
                Term::Lam(_, body) => beta(body, arg).ok(),
                _ => None,
            }
        }
        Term::If(c, t, e) => match &**c {
            Term::True => Some((**t).clone()),
            Term::False => Some((**e).clone()),
            _ => step_weak_cbv(c).map(|c| Term::If(c.into(), t.clone(), e.clone())),
        },
        Term::Lam(..) | Term::Var(_) | Term::True | Term::False => None,
    }
}

/// Reduce a closed term until its root is a lambda or a boolean.
pub fn whnf_oracle(term: &Term, max_steps: usize) -> Result<Term> {
    let mut current = term.clone();
    for _ in 0..=max_steps {
        match step_weak_cbv(&current) {
            Some(next) => current = next,
            None => return Ok(current),
        }
    }
    Err(Error::StepLimit(max_steps))
}
