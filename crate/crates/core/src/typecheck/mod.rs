//! Bidirectional type checking.
//!
//! Inference requires every lambda in inference position to be annotated.
//! Checking against an arrow type lets a lambda omit its annotation, and
//! [`elaborate`] fills those annotations in.
//!
//! Some unannotated terms cannot be checked locally, for instance a stuck
//! conditional in head position whose branches are unannotated lambdas:
//! `(if x then \y. y else \y. y) z`. Normal forms produced by read-back
//! contain such terms. For these, checking falls back to solving for the
//! missing annotations by unification.

mod unify;

use alloc::vec::Vec;

use crate::error::{PathStep, TypeError, TypeErrorKind};
use crate::syntax::{Ctx, Term, Ty};

struct Checker {
    /// Types of the variables in scope, innermost last.
    scope: Vec<Ty>,
    path: Vec<PathStep>,
}

impl Checker {
    fn new(ctx: &Ctx) -> Checker {
        Checker {
            scope: ctx.types().cloned().collect(),
            path: Vec::new(),
        }
    }

    fn fail<T>(&self, kind: TypeErrorKind) -> Result<T, TypeError> {
        Err(TypeError {
            kind,
            location: self.path.clone(),
        })
    }

    fn under<T>(&mut self, step: PathStep, f: impl FnOnce(&mut Self) -> T) -> T {
        self.path.push(step);
        let result = f(self);
        self.path.pop();
        result
    }

    fn bind<T>(&mut self, ty: Ty, f: impl FnOnce(&mut Self) -> T) -> T {
        self.scope.push(ty);
        let result = self.under(PathStep::LamBody, f);
        self.scope.pop();
        result
    }

    /// Infer a type, returning the elaborated term alongside it.
    fn synth(&mut self, term: &Term) -> Result<(Term, Ty), TypeError> {
        match term {
            Term::Var(i) => {
                let len = self.scope.len();
                if *i >= len {
                    return self.fail(TypeErrorKind::UnboundIndex(*i));
                }
                Ok((term.clone(), self.scope[len - 1 - i].clone()))
            }
            Term::True | Term::False => Ok((term.clone(), Ty::Bool)),
            Term::Lam(None, _) => self.fail(TypeErrorKind::MissingAnnotation),
            Term::Lam(Some(dom), body) => {
                let (body, cod) = self.bind(dom.clone(), |this| this.synth(body))?;
                Ok((
                    Term::lam(Some(dom.clone()), body),
                    Ty::arrow(dom.clone(), cod),
                ))
            }
            Term::App(fun, arg) => {
                let (fun, fun_ty) = self.under(PathStep::AppFun, |this| this.synth(fun))?;
                match fun_ty {
                    Ty::Arrow(dom, cod) => {
                        let arg = self.under(PathStep::AppArg, |this| this.check(arg, &dom))?;
                        Ok((Term::app(fun, arg), (*cod).clone()))
                    }
                    Ty::Bool => self.under(PathStep::AppFun, |this| {
                        this.fail(TypeErrorKind::NotAFunction(Ty::Bool))
                    }),
                }
            }
            Term::If(c, t, e) => {
                let c = self.under(PathStep::IfCond, |this| this.check(c, &Ty::Bool))?;
                let (t, ty) = self.under(PathStep::IfThen, |this| this.synth(t))?;
                let e = self.under(PathStep::IfElse, |this| this.check(e, &ty))?;
                Ok((Term::ite(c, t, e), ty))
            }
        }
    }

    fn check(&mut self, term: &Term, expected: &Ty) -> Result<Term, TypeError> {
        match (term, expected) {
            (Term::Lam(ann, body), Ty::Arrow(dom, cod)) => {
                if let Some(ann) = ann {
                    if ann != &**dom {
                        let got = match self.synth(term) {
                            Ok((_, got)) => got,
                            Err(_) => Ty::arrow(ann.clone(), (**cod).clone()),
                        };
                        return self.fail(TypeErrorKind::Mismatch {
                            expected: expected.clone(),
                            got,
                        });
                    }
                }
                let body = self.bind((**dom).clone(), |this| this.check(body, cod))?;
                Ok(Term::lam(Some((**dom).clone()), body))
            }
            (Term::Lam(None, _), Ty::Bool) => self.fail(TypeErrorKind::MissingAnnotation),
            (Term::If(c, t, e), _) => {
                let c = self.under(PathStep::IfCond, |this| this.check(c, &Ty::Bool))?;
                let t = self.under(PathStep::IfThen, |this| this.check(t, expected))?;
                let e = self.under(PathStep::IfElse, |this| this.check(e, expected))?;
                Ok(Term::ite(c, t, e))
            }
            _ => {
                let (term, got) = self.synth(term)?;
                if &got == expected {
                    Ok(term)
                } else {
                    self.fail(TypeErrorKind::Mismatch {
                        expected: expected.clone(),
                        got,
                    })
                }
            }
        }
    }
}

/// Infer the type of a term whose lambdas in inference position are
/// annotated.
pub fn infer(ctx: &Ctx, term: &Term) -> Result<Ty, TypeError> {
    Checker::new(ctx).synth(term).map(|(_, ty)| ty)
}

/// Check a term against a type.
pub fn check(ctx: &Ctx, term: &Term, ty: &Ty) -> Result<(), TypeError> {
    elaborate(ctx, term, ty).map(drop)
}

/// Check a term against a type and return it with every lambda annotated.
///
/// Annotations that the typing leaves undetermined are set to `Bool`.
pub fn elaborate(ctx: &Ctx, term: &Term, ty: &Ty) -> Result<Term, TypeError> {
    match Checker::new(ctx).check(term, ty) {
        Err(err) if err.kind == TypeErrorKind::MissingAnnotation => unify::elaborate(ctx, term, ty),
        result => result,
    }
}
