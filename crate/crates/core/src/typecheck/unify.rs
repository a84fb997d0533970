//! Elaboration by first-order unification over simple types.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::error::{PathStep, TypeError, TypeErrorKind};
use crate::syntax::{Ctx, Term, Ty};

#[derive(Clone, Debug)]
enum Mono {
    Bool,
    Arrow(Box<Mono>, Box<Mono>),
    Meta(usize),
}

impl Mono {
    fn arrow(dom: Mono, cod: Mono) -> Mono {
        Mono::Arrow(Box::new(dom), Box::new(cod))
    }

    fn from_ty(ty: &Ty) -> Mono {
        match ty {
            Ty::Bool => Mono::Bool,
            Ty::Arrow(a, b) => Mono::arrow(Mono::from_ty(a), Mono::from_ty(b)),
        }
    }
}

struct Unifier {
    solutions: Vec<Option<Mono>>,
    scope: Vec<Mono>,
    path: Vec<PathStep>,
    /// Lambda domains in pre-order.
    domains: Vec<Mono>,
}

impl Unifier {
    fn fresh(&mut self) -> Mono {
        self.solutions.push(None);
        Mono::Meta(self.solutions.len() - 1)
    }

    fn head(&self, ty: &Mono) -> Mono {
        let mut ty = ty.clone();
        while let Mono::Meta(m) = ty {
            match &self.solutions[m] {
                Some(solved) => ty = solved.clone(),
                None => break,
            }
        }
        ty
    }

    fn occurs(&self, m: usize, ty: &Mono) -> bool {
        match self.head(ty) {
            Mono::Bool => false,
            Mono::Meta(n) => n == m,
            Mono::Arrow(a, b) => self.occurs(m, &a) || self.occurs(m, &b),
        }
    }

    fn unify(&mut self, a: &Mono, b: &Mono) -> bool {
        match (self.head(a), self.head(b)) {
            (Mono::Bool, Mono::Bool) => true,
            (Mono::Meta(m), Mono::Meta(n)) if m == n => true,
            (Mono::Meta(m), other) | (other, Mono::Meta(m)) => {
                if self.occurs(m, &other) {
                    return false;
                }
                self.solutions[m] = Some(other);
                true
            }
            (Mono::Arrow(a1, b1), Mono::Arrow(a2, b2)) => {
                self.unify(&a1, &a2) && self.unify(&b1, &b2)
            }
            _ => false,
        }
    }

    /// Read off a type, setting unsolved metavariables to `Bool`.
    fn zonk(&self, ty: &Mono) -> Ty {
        match self.head(ty) {
            Mono::Bool | Mono::Meta(_) => Ty::Bool,
            Mono::Arrow(a, b) => Ty::arrow(self.zonk(&a), self.zonk(&b)),
        }
    }

    fn fail<T>(&self, kind: TypeErrorKind) -> Result<T, TypeError> {
        Err(TypeError {
            kind,
            location: self.path.clone(),
        })
    }

    fn expect(&mut self, expected: &Mono, got: &Mono) -> Result<(), TypeError> {
        if self.unify(expected, got) {
            return Ok(());
        }
        self.fail(TypeErrorKind::Mismatch {
            expected: self.zonk(expected),
            got: self.zonk(got),
        })
    }

    fn under<T>(&mut self, step: PathStep, f: impl FnOnce(&mut Self) -> T) -> T {
        self.path.push(step);
        let result = f(self);
        self.path.pop();
        result
    }

    fn walk(&mut self, term: &Term) -> Result<Mono, TypeError> {
        match term {
            Term::Var(i) => {
                let len = self.scope.len();
                if *i >= len {
                    return self.fail(TypeErrorKind::UnboundIndex(*i));
                }
                Ok(self.scope[len - 1 - i].clone())
            }
            Term::True | Term::False => Ok(Mono::Bool),
            Term::Lam(ann, body) => {
                let dom = match ann {
                    Some(ann) => Mono::from_ty(ann),
                    None => self.fresh(),
                };
                self.domains.push(dom.clone());
                self.scope.push(dom.clone());
                let cod = self.under(PathStep::LamBody, |this| this.walk(body));
                self.scope.pop();
                Ok(Mono::arrow(dom, cod?))
            }
            Term::App(fun, arg) => {
                let fun_ty = self.under(PathStep::AppFun, |this| this.walk(fun))?;
                let arg_ty = self.under(PathStep::AppArg, |this| this.walk(arg))?;
                if let Mono::Bool = self.head(&fun_ty) {
                    return self.under(PathStep::AppFun, |this| {
                        this.fail(TypeErrorKind::NotAFunction(Ty::Bool))
                    });
                }
                let cod = self.fresh();
                let want = Mono::arrow(arg_ty, cod.clone());
                self.under(PathStep::AppFun, |this| this.expect(&want, &fun_ty))?;
                Ok(cod)
            }
            Term::If(c, t, e) => {
                let c_ty = self.under(PathStep::IfCond, |this| this.walk(c))?;
                self.under(PathStep::IfCond, |this| this.expect(&Mono::Bool, &c_ty))?;
                let t_ty = self.under(PathStep::IfThen, |this| this.walk(t))?;
                let e_ty = self.under(PathStep::IfElse, |this| this.walk(e))?;
                self.under(PathStep::IfElse, |this| this.expect(&t_ty, &e_ty))?;
                Ok(t_ty)
            }
        }
    }

    fn rebuild(&self, term: &Term, next: &mut usize) -> Term {
        match term {
            Term::Var(_) | Term::True | Term::False => term.clone(),
            Term::Lam(_, body) => {
                let dom = self.zonk(&self.domains[*next]);
                *next += 1;
                Term::lam(Some(dom), self.rebuild(body, next))
            }
            Term::App(f, a) => {
                let f = self.rebuild(f, next);
                Term::app(f, self.rebuild(a, next))
            }
            Term::If(c, t, e) => {
                let c = self.rebuild(c, next);
                let t = self.rebuild(t, next);
                Term::ite(c, t, self.rebuild(e, next))
            }
        }
    }
}

pub(super) fn elaborate(ctx: &Ctx, term: &Term, ty: &Ty) -> Result<Term, TypeError> {
    let mut unifier = Unifier {
        solutions: Vec::new(),
        scope: ctx.types().map(Mono::from_ty).collect(),
        path: Vec::new(),
        domains: Vec::new(),
    };
    let got = unifier.walk(term)?;
    unifier.expect(&Mono::from_ty(ty), &got)?;
    Ok(unifier.rebuild(term, &mut 0))
}
