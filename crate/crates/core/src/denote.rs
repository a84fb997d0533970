//! Finite set-theoretic semantics.
//!
//! `Bool` denotes the two booleans and `S -> T` denotes all functions from
//! the meaning of `S` to the meaning of `T`. Every such set is finite, so a
//! function is represented by its table of results over a canonical
//! enumeration of its domain. Two tables are equal exactly when the
//! functions they represent are, which makes denotational equivalence of
//! terms decidable by brute force.

use alloc::rc::Rc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::eval::{Closure, Value};
use crate::syntax::{Ctx, Term, Ty};
use crate::typecheck::{elaborate, infer};

pub const DEFAULT_LIMIT: u64 = 65_536;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SemVal {
    Bool(bool),
    /// Results indexed by the canonical position of the argument.
    Table(Vec<SemVal>),
}

/// Number of elements denoted by a type, or `None` past `u64::MAX`.
pub fn cardinality(ty: &Ty) -> Option<u64> {
    match ty {
        Ty::Bool => Some(2),
        Ty::Arrow(dom, cod) => {
            let dom = u32::try_from(cardinality(dom)?).ok()?;
            cardinality(cod)?.checked_pow(dom)
        }
    }
}

fn bounded_cardinality(ty: &Ty, limit: u64) -> Result<u64> {
    match cardinality(ty) {
        Some(n) if n <= limit => Ok(n),
        cardinality => Err(Error::TypeTooLarge {
            ty: ty.clone(),
            cardinality,
        }),
    }
}

/// All elements of a type in canonical order: `false` before `true`, and
/// tables in lexicographic order with the last entry varying fastest.
pub fn enumerate(ty: &Ty, limit: u64) -> Result<Vec<SemVal>> {
    bounded_cardinality(ty, limit)?;
    Ok(enumerate_unbounded(ty))
}

fn enumerate_unbounded(ty: &Ty) -> Vec<SemVal> {
    match ty {
        Ty::Bool => vec![SemVal::Bool(false), SemVal::Bool(true)],
        Ty::Arrow(dom, cod) => {
            let width = enumerate_unbounded(dom).len();
            let codomain = enumerate_unbounded(cod);
            let mut tables = vec![Vec::with_capacity(width)];
            for _ in 0..width {
                tables = tables
                    .into_iter()
                    .flat_map(|prefix| {
                        codomain.iter().map(move |entry| {
                            let mut next = prefix.clone();
                            next.push(entry.clone());
                            next
                        })
                    })
                    .collect();
            }
            tables.into_iter().map(SemVal::Table).collect()
        }
    }
}

/// Position of a value in [`enumerate`] for its type.
pub fn position(value: &SemVal, ty: &Ty) -> Result<usize> {
    match (value, ty) {
        (SemVal::Bool(b), Ty::Bool) => Ok(usize::from(*b)),
        (SemVal::Table(entries), Ty::Arrow(_, cod)) => {
            let base = cardinality(cod)
                .and_then(|n| usize::try_from(n).ok())
                .ok_or(Error::TypeTooLarge {
                    ty: (**cod).clone(),
                    cardinality: cardinality(cod),
                })?;
            entries.iter().try_fold(0usize, |acc, entry| {
                let digit = position(entry, cod)?;
                acc.checked_mul(base)
                    .and_then(|acc| acc.checked_add(digit))
                    .ok_or(Error::TypeTooLarge {
                        ty: ty.clone(),
                        cardinality: cardinality(ty),
                    })
            })
        }
        _ => Err(Error::IllTyped),
    }
}

/// Intermediate meanings. Lambdas stay unevaluated until a table is needed.
#[derive(Clone)]
enum Sem<'t> {
    Known(Rc<SemVal>, Ty),
    Fun(Rc<Fun<'t>>),
}

struct Fun<'t> {
    dom: Ty,
    body: &'t Term,
    /// Values of the captured variables, innermost last.
    env: Vec<Sem<'t>>,
}

/// Fail unless every lambda is annotated with an enumerable type.
fn check_annotations(term: &Term, limit: u64) -> Result<()> {
    match term {
        Term::Var(_) | Term::True | Term::False => Ok(()),
        Term::Lam(None, _) => Err(Error::MissingAnnotation),
        Term::Lam(Some(dom), body) => {
            bounded_cardinality(dom, limit)?;
            check_annotations(body, limit)
        }
        Term::App(f, a) => {
            check_annotations(f, limit)?;
            check_annotations(a, limit)
        }
        Term::If(c, t, e) => {
            check_annotations(c, limit)?;
            check_annotations(t, limit)?;
            check_annotations(e, limit)
        }
    }
}

struct Interp {
    limit: u64,
    /// Enumerations of the lambda domains met so far.
    domains: Vec<(Ty, Rc<Vec<SemVal>>)>,
}

impl Interp {
    fn new(limit: u64) -> Interp {
        Interp {
            limit,
            domains: Vec::new(),
        }
    }

    fn domain(&mut self, ty: &Ty) -> Result<Rc<Vec<SemVal>>> {
        if let Some((_, values)) = self.domains.iter().find(|(t, _)| t == ty) {
            return Ok(values.clone());
        }
        let values = Rc::new(enumerate(ty, self.limit)?);
        self.domains.push((ty.clone(), values.clone()));
        Ok(values)
    }

    /// Meaning at `ty` of a term checked against `ty` in `ctx`, with `env[i]`
    /// as the value of index `i`.
    fn run(&mut self, ctx: &Ctx, env: &[SemVal], term: &Term, ty: &Ty) -> Result<SemVal> {
        if ctx.len() != env.len() {
            return Err(Error::IllTyped);
        }
        let mut values: Vec<Sem> = env
            .iter()
            .rev()
            .zip(ctx.types())
            .map(|(v, ty)| Sem::Known(Rc::new(v.clone()), ty.clone()))
            .collect();
        let value = self.eval(&mut values, term)?;
        self.reify(value, ty)
    }

    fn eval<'t>(&mut self, env: &mut Vec<Sem<'t>>, term: &'t Term) -> Result<Sem<'t>> {
        match term {
            Term::Var(i) => {
                let len = env.len();
                if *i >= len {
                    return Err(Error::Scope {
                        index: *i,
                        scope: len,
                    });
                }
                Ok(env[len - 1 - i].clone())
            }
            Term::True => Ok(Sem::Known(Rc::new(SemVal::Bool(true)), Ty::Bool)),
            Term::False => Ok(Sem::Known(Rc::new(SemVal::Bool(false)), Ty::Bool)),
            Term::Lam(None, _) => Err(Error::MissingAnnotation),
            Term::Lam(Some(dom), body) => Ok(Sem::Fun(Rc::new(Fun {
                dom: dom.clone(),
                body,
                env: env.clone(),
            }))),
            Term::App(fun, arg) => {
                let fun = self.eval(env, fun)?;
                let arg = self.eval(env, arg)?;
                self.apply(fun, arg)
            }
            Term::If(c, t, e) => match self.eval(env, c)? {
                Sem::Known(b, _) => match *b {
                    SemVal::Bool(true) => self.eval(env, t),
                    SemVal::Bool(false) => self.eval(env, e),
                    SemVal::Table(_) => Err(Error::IllTyped),
                },
                Sem::Fun(_) => Err(Error::IllTyped),
            },
        }
    }

    fn apply<'t>(&mut self, fun: Sem<'t>, arg: Sem<'t>) -> Result<Sem<'t>> {
        match fun {
            Sem::Fun(fun) => {
                let mut env = fun.env.clone();
                env.push(arg);
                self.eval(&mut env, fun.body)
            }
            Sem::Known(table, Ty::Arrow(dom, cod)) => {
                let SemVal::Table(entries) = &*table else {
                    return Err(Error::IllTyped);
                };
                let arg = self.reify(arg, &dom)?;
                let entry = entries.get(position(&arg, &dom)?).ok_or(Error::IllTyped)?;
                Ok(Sem::Known(Rc::new(entry.clone()), (*cod).clone()))
            }
            Sem::Known(_, Ty::Bool) => Err(Error::IllTyped),
        }
    }

    fn reify(&mut self, value: Sem, ty: &Ty) -> Result<SemVal> {
        match value {
            Sem::Known(v, _) => Ok(Rc::unwrap_or_clone(v)),
            Sem::Fun(fun) => {
                let Ty::Arrow(dom, cod) = ty else {
                    return Err(Error::IllTyped);
                };
                if fun.dom != **dom {
                    return Err(Error::IllTyped);
                }
                let domain = self.domain(dom)?;
                let mut entries = Vec::with_capacity(domain.len());
                for z in domain.iter() {
                    let arg = Sem::Known(Rc::new(z.clone()), (**dom).clone());
                    let result = self.apply(Sem::Fun(fun.clone()), arg)?;
                    entries.push(self.reify(result, cod)?);
                }
                Ok(SemVal::Table(entries))
            }
        }
    }
}

/// Meaning of a fully annotated term. `env[i]` is the value of index `i`
/// and has the type of the corresponding entry of `ctx`.
pub fn sem_eval(ctx: &Ctx, env: &[SemVal], term: &Term, limit: u64) -> Result<SemVal> {
    check_annotations(term, limit)?;
    let ty = infer(ctx, term)?;
    Interp::new(limit).run(ctx, env, term, &ty)
}

/// Type of a closed-term value, recovered from closure annotations.
fn value_type(value: &Value) -> Result<Ty> {
    match value {
        Value::True | Value::False => Ok(Ty::Bool),
        Value::Neutral(_) => Err(Error::NeutralInDenotation),
        Value::Closure(Closure { ann, body, env }) => {
            let dom = ann.clone().ok_or(Error::MissingAnnotation)?;
            let mut ctx = closure_ctx(env)?;
            ctx.push("_", dom.clone());
            let cod = infer(&ctx, body)?;
            Ok(Ty::arrow(dom, cod))
        }
    }
}

fn closure_ctx(env: &crate::eval::Env) -> Result<Ctx> {
    let types: Vec<Ty> = env.iter().map(value_type).collect::<Result<_>>()?;
    Ok(Ctx::from_types(types.into_iter().rev()))
}

/// Meaning of a value produced by evaluating a closed term.
pub fn sem_of_domain(value: &Value, ty: &Ty, limit: u64) -> Result<SemVal> {
    match (value, ty) {
        (Value::True, Ty::Bool) => Ok(SemVal::Bool(true)),
        (Value::False, Ty::Bool) => Ok(SemVal::Bool(false)),
        (Value::Neutral(_), _) => Err(Error::NeutralInDenotation),
        (Value::Closure(Closure { ann, body, env }), Ty::Arrow(dom, _)) => {
            let ann = ann.as_ref().ok_or(Error::MissingAnnotation)?;
            if ann != &**dom {
                return Err(Error::IllTyped);
            }
            let ctx = closure_ctx(env)?;
            let saved = env
                .iter()
                .zip(ctx.types().rev())
                .map(|(v, vty)| sem_of_domain(v, vty, limit))
                .collect::<Result<Vec<_>>>()?;
            let ctx = ctx.with("_", (**dom).clone());
            let mut entries = Vec::new();
            for z in enumerate(dom, limit)? {
                let mut rho = Vec::with_capacity(saved.len() + 1);
                rho.push(z);
                rho.extend(saved.iter().cloned());
                entries.push(sem_eval(&ctx, &rho, body, limit)?);
            }
            Ok(SemVal::Table(entries))
        }
        _ => Err(Error::IllTyped),
    }
}

/// Every environment for a context, in canonical order. Each environment
/// is indexed by de Bruijn index.
pub fn environments(ctx: &Ctx, limit: u64) -> Result<Vec<Vec<SemVal>>> {
    let mut envs = vec![Vec::new()];
    for ty in ctx.types().rev() {
        let values = enumerate(ty, limit)?;
        let count = envs.len().checked_mul(values.len());
        if count.is_none_or(|n| n as u64 > limit) {
            return Err(Error::TypeTooLarge {
                ty: ty.clone(),
                cardinality: count.map(|n| n as u64),
            });
        }
        envs = envs
            .into_iter()
            .flat_map(|env| {
                values.iter().map(move |v| {
                    let mut next = env.clone();
                    next.push(v.clone());
                    next
                })
            })
            .collect();
    }
    Ok(envs)
}

/// Whether two terms have the same meaning at `ty` under every environment
/// for `ctx`. Both terms are elaborated against `ty` first.
pub fn denot_equal(ctx: &Ctx, ty: &Ty, lhs: &Term, rhs: &Term, limit: u64) -> Result<bool> {
    let lhs = elaborate(ctx, lhs, ty)?;
    let rhs = elaborate(ctx, rhs, ty)?;
    check_annotations(&lhs, limit)?;
    check_annotations(&rhs, limit)?;
    let mut interp = Interp::new(limit);
    for env in environments(ctx, limit)? {
        if interp.run(ctx, &env, &lhs, ty)? != interp.run(ctx, &env, &rhs, ty)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{eval, Env, Fuel};
    use std::collections::BTreeSet;

    fn bb() -> Ty {
        Ty::arrow(Ty::Bool, Ty::Bool)
    }

    fn t(b: bool) -> SemVal {
        SemVal::Bool(b)
    }

    #[test]
    fn enumeration_order_and_size() {
        assert_eq!(
            enumerate(&Ty::Bool, DEFAULT_LIMIT),
            Ok(vec![t(false), t(true)])
        );
        let funs = enumerate(&bb(), DEFAULT_LIMIT).unwrap();
        assert_eq!(
            funs,
            vec![
                SemVal::Table(vec![t(false), t(false)]),
                SemVal::Table(vec![t(false), t(true)]),
                SemVal::Table(vec![t(true), t(false)]),
                SemVal::Table(vec![t(true), t(true)]),
            ]
        );
        let higher = enumerate(&Ty::arrow(bb(), Ty::Bool), DEFAULT_LIMIT).unwrap();
        assert_eq!(higher.len(), 16);
        let distinct: BTreeSet<_> = higher.iter().collect();
        assert_eq!(distinct.len(), 16);
    }

    #[test]
    fn positions_match_enumeration() {
        for ty in [
            Ty::Bool,
            bb(),
            Ty::arrow(bb(), Ty::Bool),
            Ty::arrow(Ty::Bool, bb()),
        ] {
            for (i, v) in enumerate(&ty, DEFAULT_LIMIT).unwrap().iter().enumerate() {
                assert_eq!(position(v, &ty), Ok(i));
            }
        }
    }

    #[test]
    fn oversized_types_are_rejected() {
        let huge = Ty::arrow(Ty::arrow(bb(), bb()), Ty::Bool);
        assert_eq!(cardinality(&Ty::arrow(bb(), bb())), Some(256));
        assert!(matches!(
            enumerate(&huge, DEFAULT_LIMIT),
            Err(Error::TypeTooLarge { .. })
        ));
        assert_eq!(cardinality(&Ty::arrow(Ty::arrow(bb(), bb()), bb())), None);
    }

    #[test]
    fn meanings_of_terms() {
        let ctx = Ctx::new();
        assert_eq!(sem_eval(&ctx, &[], &Term::True, DEFAULT_LIMIT), Ok(t(true)));
        let id = Term::lam(Some(Ty::Bool), Term::Var(0));
        assert_eq!(
            sem_eval(&ctx, &[], &id, DEFAULT_LIMIT),
            Ok(SemVal::Table(vec![t(false), t(true)]))
        );
        let cond = Term::ite(Term::True, Term::False, Term::True);
        assert_eq!(sem_eval(&ctx, &[], &cond, DEFAULT_LIMIT), Ok(t(false)));
        assert_eq!(
            sem_eval(&ctx, &[], &Term::abs(Term::Var(0)), DEFAULT_LIMIT),
            Err(Error::MissingAnnotation)
        );
    }

    #[test]
    fn meanings_of_values() {
        assert_eq!(
            sem_of_domain(&Value::True, &Ty::Bool, DEFAULT_LIMIT),
            Ok(t(true))
        );
        let id = Value::closure(Some(Ty::Bool), Term::Var(0), Env::new());
        assert_eq!(
            sem_of_domain(&id, &bb(), DEFAULT_LIMIT),
            Ok(SemVal::Table(vec![t(false), t(true)]))
        );
        let not = Term::lam(
            Some(Ty::Bool),
            Term::ite(Term::Var(0), Term::False, Term::True),
        );
        let value = eval(&Env::new(), &not, &mut Fuel::default()).unwrap();
        assert_eq!(
            sem_of_domain(&value, &bb(), DEFAULT_LIMIT),
            Ok(SemVal::Table(vec![t(true), t(false)]))
        );
        assert_eq!(
            sem_of_domain(&Value::lvl(0), &Ty::Bool, DEFAULT_LIMIT),
            Err(Error::NeutralInDenotation)
        );
    }

    #[test]
    fn saved_environment_contributes() {
        // (\f:Bool->Bool. \x:Bool. f x) (\y:Bool. if y then false else true)
        let not = Term::lam(
            Some(Ty::Bool),
            Term::ite(Term::Var(0), Term::False, Term::True),
        );
        let compose = Term::lam(
            Some(bb()),
            Term::lam(Some(Ty::Bool), Term::app(Term::Var(1), Term::Var(0))),
        );
        let term = Term::app(compose, not);
        let value = eval(&Env::new(), &term, &mut Fuel::default()).unwrap();
        assert_eq!(
            sem_of_domain(&value, &bb(), DEFAULT_LIMIT),
            sem_eval(&Ctx::new(), &[], &term, DEFAULT_LIMIT)
        );
    }

    #[test]
    fn equivalence() {
        let b = Some(Ty::Bool);
        let id = Term::lam(b.clone(), Term::Var(0));
        let eta = Term::lam(
            b.clone(),
            Term::app(Term::lam(b, Term::Var(0)), Term::Var(0)),
        );
        assert_eq!(
            denot_equal(&Ctx::new(), &bb(), &id, &eta, DEFAULT_LIMIT),
            Ok(true)
        );
        assert_eq!(
            denot_equal(
                &Ctx::new(),
                &Ty::Bool,
                &Term::True,
                &Term::False,
                DEFAULT_LIMIT
            ),
            Ok(false)
        );
        let ctx = Ctx::new().with("x", Ty::Bool);
        let cond = Term::ite(Term::Var(0), Term::True, Term::False);
        assert_eq!(
            denot_equal(&ctx, &Ty::Bool, &Term::Var(0), &cond, DEFAULT_LIMIT),
            Ok(true)
        );
        let not = Term::ite(Term::Var(0), Term::False, Term::True);
        assert_eq!(
            denot_equal(&ctx, &Ty::Bool, &Term::Var(0), &not, DEFAULT_LIMIT),
            Ok(false)
        );
    }

    #[test]
    fn environments_are_indexed_innermost_first() {
        let ctx = Ctx::new().with("f", bb()).with("x", Ty::Bool);
        let envs = environments(&ctx, DEFAULT_LIMIT).unwrap();
        assert_eq!(envs.len(), 8);
        assert!(envs.iter().all(|env| matches!(env[0], SemVal::Bool(_))));
        assert!(envs.iter().all(|env| matches!(env[1], SemVal::Table(_))));
    }
}
