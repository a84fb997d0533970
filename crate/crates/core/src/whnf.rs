//! Weak-head normalization of closed terms.
//!
//! A closed term evaluates to a boolean or a closure. A closure is turned
//! back into a lambda by plugging the values saved in its environment into
//! its body, without evaluating under the binder.

use crate::error::{Error, Result};
use crate::eval::{eval, Closure, Env, Fuel, Value};
use crate::syntax::Term;

/// Weak-head normal form of a closed term.
pub fn whnf_of(term: &Term, fuel: &mut Fuel) -> Result<Term> {
    term.audit_scope(0)?;
    let value = eval(&Env::new(), term, fuel)?;
    quote_whnf(&value)
}

/// Quote a value that contains no neutrals.
pub fn quote_whnf(value: &Value) -> Result<Term> {
    match value {
        Value::True => Ok(Term::True),
        Value::False => Ok(Term::False),
        Value::Closure(Closure { ann, body, env }) => {
            Ok(Term::lam(ann.clone(), close(env, 1, body)?))
        }
        Value::Neutral(_) => Err(Error::NeutralInWhnf),
    }
}

/// Replace the variables of `term` that point past `depth` local binders by
/// the quoted values of `env`.
///
/// Quoted values are closed, so they are inserted without shifting.
pub fn close(env: &Env, depth: usize, term: &Term) -> Result<Term> {
    Ok(match term {
        Term::Var(i) if *i < depth => Term::Var(*i),
        Term::Var(i) => {
            let value = env.get(i - depth).ok_or(Error::Scope {
                index: *i,
                scope: depth + env.len(),
            })?;
            let quoted = quote_whnf(value)?;
            debug_assert!(quoted.is_closed_at(0));
            quoted
        }
        Term::True => Term::True,
        Term::False => Term::False,
        Term::Lam(ann, body) => Term::lam(ann.clone(), close(env, depth + 1, body)?),
        Term::App(fun, arg) => Term::app(close(env, depth, fun)?, close(env, depth, arg)?),
        Term::If(c, t, e) => Term::ite(
            close(env, depth, c)?,
            close(env, depth, t)?,
            close(env, depth, e)?,
        ),
    })
}

/// Whether a term is a lambda or a boolean constant.
pub fn is_value_shape(term: &Term) -> bool {
    matches!(term, Term::Lam(..) | Term::True | Term::False)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Ty;

    fn bb() -> Option<Ty> {
        Some(Ty::arrow(Ty::Bool, Ty::Bool))
    }

    #[test]
    fn lambda_is_already_weak_head_normal() {
        // \x:Bool->Bool. (\y:Bool->Bool. y) x
        let t = Term::lam(bb(), Term::app(Term::lam(bb(), Term::Var(0)), Term::Var(0)));
        assert_eq!(whnf_of(&t, &mut Fuel::default()), Ok(t));
    }

    #[test]
    fn redex_under_binder_is_preserved() {
        let b = Some(Ty::Bool);
        let body = Term::lam(b.clone(), Term::app(Term::Var(1), Term::Var(0)));
        let id = Term::lam(b.clone(), Term::Var(0));
        let t = Term::app(Term::lam(bb(), body), id.clone());
        let expected = Term::lam(b, Term::app(id, Term::Var(0)));
        assert_eq!(whnf_of(&t, &mut Fuel::default()), Ok(expected));
    }

    #[test]
    fn conditional_reduces() {
        let t = Term::ite(Term::True, Term::False, Term::True);
        assert_eq!(whnf_of(&t, &mut Fuel::default()), Ok(Term::False));
    }

    #[test]
    fn quoting() {
        assert_eq!(quote_whnf(&Value::True), Ok(Term::True));
        let id = Value::closure(None, Term::Var(0), Env::new());
        assert_eq!(quote_whnf(&id), Ok(Term::abs(Term::Var(0))));
        let saved = Value::closure(None, Term::Var(1), Env::new().push(id));
        assert_eq!(quote_whnf(&saved), Ok(Term::abs(Term::abs(Term::Var(0)))));
        assert_eq!(quote_whnf(&Value::lvl(0)), Err(Error::NeutralInWhnf));
    }

    #[test]
    fn closing() {
        let id = Value::closure(None, Term::Var(0), Env::new());
        assert_eq!(close(&Env::new(), 1, &Term::Var(0)), Ok(Term::Var(0)));
        assert_eq!(
            close(&Env::new().push(Value::True), 0, &Term::Var(0)),
            Ok(Term::True)
        );
        assert_eq!(
            close(
                &Env::new().push(id),
                1,
                &Term::app(Term::Var(1), Term::Var(0))
            ),
            Ok(Term::app(Term::abs(Term::Var(0)), Term::Var(0)))
        );
        assert_eq!(
            close(&Env::new(), 1, &Term::Var(1)),
            Err(Error::Scope { index: 1, scope: 1 })
        );
    }

    #[test]
    fn open_terms_are_rejected() {
        assert_eq!(
            whnf_of(&Term::Var(0), &mut Fuel::default()),
            Err(Error::Scope { index: 0, scope: 0 })
        );
    }
}
