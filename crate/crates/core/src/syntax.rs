//! Types, terms and contexts.
//!
//! Terms come in two flavours. [`Surface`] terms use names and are what the
//! parser produces; [`Term`]s are nameless, using de Bruijn indices where
//! index `0` refers to the nearest enclosing binder. [`resolve`] and
//! [`unresolve`] convert between them.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, PathStep, Result};

/// Simple types over a single base type of booleans.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Ty {
    Bool,
    Arrow(Arc<Ty>, Arc<Ty>),
}

impl Ty {
    pub fn arrow(dom: Ty, cod: Ty) -> Ty {
        Ty::Arrow(Arc::new(dom), Arc::new(cod))
    }

    /// Nesting depth of arrows to the left, `Bool` being order 0.
    pub fn order(&self) -> usize {
        match self {
            Ty::Bool => 0,
            Ty::Arrow(dom, cod) => core::cmp::max(dom.order() + 1, cod.order()),
        }
    }
}

/// A term with named variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Surface {
    Var(String),
    Lam(String, Option<Ty>, Box<Surface>),
    App(Box<Surface>, Box<Surface>),
    True,
    False,
    If(Box<Surface>, Box<Surface>, Box<Surface>),
}

impl Surface {
    pub fn var(name: impl Into<String>) -> Surface {
        Surface::Var(name.into())
    }

    pub fn lam(name: impl Into<String>, ann: Option<Ty>, body: Surface) -> Surface {
        Surface::Lam(name.into(), ann, Box::new(body))
    }

    pub fn app(fun: Surface, arg: Surface) -> Surface {
        Surface::App(Box::new(fun), Box::new(arg))
    }

    pub fn ite(cond: Surface, then: Surface, else_: Surface) -> Surface {
        Surface::If(Box::new(cond), Box::new(then), Box::new(else_))
    }
}

/// A nameless term. Lambdas carry an optional annotation for their domain.
///
/// Subterms are reference counted so that closures can share bodies with
/// the term they were evaluated from.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(usize),
    Lam(Option<Ty>, Arc<Term>),
    App(Arc<Term>, Arc<Term>),
    True,
    False,
    If(Arc<Term>, Arc<Term>, Arc<Term>),
}

impl Term {
    pub fn lam(ann: Option<Ty>, body: Term) -> Term {
        Term::Lam(ann, Arc::new(body))
    }

    /// Unannotated lambda.
    pub fn abs(body: Term) -> Term {
        Term::Lam(None, Arc::new(body))
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Arc::new(fun), Arc::new(arg))
    }

    pub fn ite(cond: Term, then: Term, else_: Term) -> Term {
        Term::If(Arc::new(cond), Arc::new(then), Arc::new(else_))
    }

    pub fn bool(b: bool) -> Term {
        if b {
            Term::True
        } else {
            Term::False
        }
    }

    /// Number of nodes in the syntax tree.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::True | Term::False => 1,
            Term::Lam(_, body) => 1 + body.size(),
            Term::App(fun, arg) => 1 + fun.size() + arg.size(),
            Term::If(c, t, e) => 1 + c.size() + t.size() + e.size(),
        }
    }

    /// Whether every variable refers either to a binder inside the term or
    /// to one of `scope` outer variables.
    pub fn is_closed_at(&self, scope: usize) -> bool {
        self.first_escape(scope).is_none()
    }

    /// The first variable (as an index relative to `scope`) that escapes.
    pub(crate) fn first_escape(&self, scope: usize) -> Option<usize> {
        match self {
            Term::Var(i) => (*i >= scope).then_some(*i),
            Term::True | Term::False => None,
            Term::Lam(_, body) => body.first_escape(scope + 1),
            Term::App(fun, arg) => fun.first_escape(scope).or_else(|| arg.first_escape(scope)),
            Term::If(c, t, e) => c
                .first_escape(scope)
                .or_else(|| t.first_escape(scope))
                .or_else(|| e.first_escape(scope)),
        }
    }

    /// Check that the term is closed at `scope`, reporting the first
    /// offending index.
    pub fn audit_scope(&self, scope: usize) -> Result<()> {
        match self.first_escape(scope) {
            None => Ok(()),
            Some(index) => Err(Error::Scope { index, scope }),
        }
    }

    /// Remove every lambda annotation.
    pub fn erase(&self) -> Term {
        match self {
            Term::Var(i) => Term::Var(*i),
            Term::True => Term::True,
            Term::False => Term::False,
            Term::Lam(_, body) => Term::abs(body.erase()),
            Term::App(fun, arg) => Term::app(fun.erase(), arg.erase()),
            Term::If(c, t, e) => Term::ite(c.erase(), t.erase(), e.erase()),
        }
    }

    /// Whether every lambda carries an annotation.
    pub fn is_annotated(&self) -> bool {
        match self {
            Term::Var(_) | Term::True | Term::False => true,
            Term::Lam(ann, body) => ann.is_some() && body.is_annotated(),
            Term::App(fun, arg) => fun.is_annotated() && arg.is_annotated(),
            Term::If(c, t, e) => c.is_annotated() && t.is_annotated() && e.is_annotated(),
        }
    }

    /// The subterm reached by following `path`, if it exists.
    pub fn subterm(&self, path: &[PathStep]) -> Option<&Term> {
        let Some((step, rest)) = path.split_first() else {
            return Some(self);
        };
        let next = match (step, self) {
            (PathStep::LamBody, Term::Lam(_, body)) => body,
            (PathStep::AppFun, Term::App(fun, _)) => fun,
            (PathStep::AppArg, Term::App(_, arg)) => arg,
            (PathStep::IfCond, Term::If(c, _, _)) => c,
            (PathStep::IfThen, Term::If(_, t, _)) => t,
            (PathStep::IfElse, Term::If(_, _, e)) => e,
            _ => return None,
        };
        next.subterm(rest)
    }
}

/// A typing context. The last entry is the innermost binding and is
/// referred to by index `0`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Ctx {
    entries: Vec<(String, Ty)>,
}

impl Ctx {
    pub fn new() -> Ctx {
        Ctx::default()
    }

    /// A context whose entries are all named `_`.
    pub fn from_types(tys: impl IntoIterator<Item = Ty>) -> Ctx {
        Ctx {
            entries: tys.into_iter().map(|ty| (String::from("_"), ty)).collect(),
        }
    }

    pub fn push(&mut self, name: impl Into<String>, ty: Ty) {
        self.entries.push((name.into(), ty));
    }

    pub fn with(mut self, name: impl Into<String>, ty: Ty) -> Ctx {
        self.push(name, ty);
        self
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in binding order, outermost first.
    pub fn entries(&self) -> &[(String, Ty)] {
        &self.entries
    }

    /// Types in binding order, outermost first.
    pub fn types(&self) -> impl DoubleEndedIterator<Item = &Ty> + ExactSizeIterator {
        self.entries.iter().map(|(_, ty)| ty)
    }

    /// Look up a de Bruijn index.
    pub fn lookup(&self, index: usize) -> Option<&(String, Ty)> {
        let len = self.entries.len();
        (index < len).then(|| &self.entries[len - 1 - index])
    }

    /// The index of the innermost entry called `name`.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.entries.iter().rev().position(|(n, _)| n == name)
    }
}

impl FromIterator<(String, Ty)> for Ctx {
    fn from_iter<I: IntoIterator<Item = (String, Ty)>>(iter: I) -> Ctx {
        Ctx {
            entries: iter.into_iter().collect(),
        }
    }
}

/// Replace names by de Bruijn indices.
pub fn resolve(term: &Surface, ctx: &Ctx) -> Result<Term> {
    let mut names: Vec<&str> = ctx.entries.iter().map(|(n, _)| n.as_str()).collect();
    resolve_in(term, &mut names)
}

fn resolve_in<'a>(term: &'a Surface, names: &mut Vec<&'a str>) -> Result<Term> {
    Ok(match term {
        Surface::Var(name) => match names.iter().rev().position(|n| n == name) {
            Some(index) => Term::Var(index),
            None => return Err(Error::UnboundVariable(name.clone())),
        },
        Surface::Lam(name, ann, body) => {
            names.push(name);
            let body = resolve_in(body, names);
            names.pop();
            Term::lam(ann.clone(), body?)
        }
        Surface::App(fun, arg) => Term::app(resolve_in(fun, names)?, resolve_in(arg, names)?),
        Surface::True => Term::True,
        Surface::False => Term::False,
        Surface::If(c, t, e) => Term::ite(
            resolve_in(c, names)?,
            resolve_in(t, names)?,
            resolve_in(e, names)?,
        ),
    })
}

/// Replace de Bruijn indices by names.
///
/// Binders are named `x0`, `x1`, ... by depth, skipping any name that
/// already occurs in `ctx`.
pub fn unresolve(term: &Term, ctx: &Ctx) -> Result<Surface> {
    let mut binders = Vec::new();
    unresolve_in(term, ctx, &mut binders)
}

fn binder_name(ctx: &Ctx, depth: usize) -> String {
    (0..)
        .map(|k| format!("x{k}"))
        .filter(|name| ctx.index_of(name).is_none())
        .nth(depth)
        .unwrap_or_default()
}

fn unresolve_in(term: &Term, ctx: &Ctx, binders: &mut Vec<String>) -> Result<Surface> {
    Ok(match term {
        Term::Var(i) => {
            let depth = binders.len();
            if *i < depth {
                Surface::Var(binders[depth - 1 - i].clone())
            } else {
                let outer = i - depth;
                let (name, _) = ctx.lookup(outer).ok_or(Error::Scope {
                    index: *i,
                    scope: depth + ctx.len(),
                })?;
                if ctx.index_of(name) != Some(outer) {
                    return Err(Error::Shadowed(name.clone()));
                }
                Surface::Var(name.clone())
            }
        }
        Term::Lam(ann, body) => {
            let name = binder_name(ctx, binders.len());
            binders.push(name.clone());
            let body = unresolve_in(body, ctx, binders);
            binders.pop();
            Surface::lam(name, ann.clone(), body?)
        }
        Term::App(fun, arg) => Surface::app(
            unresolve_in(fun, ctx, binders)?,
            unresolve_in(arg, ctx, binders)?,
        ),
        Term::True => Surface::True,
        Term::False => Surface::False,
        Term::If(c, t, e) => Surface::ite(
            unresolve_in(c, ctx, binders)?,
            unresolve_in(t, ctx, binders)?,
            unresolve_in(e, ctx, binders)?,
        ),
    })
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ty::Bool => f.write_str("Bool"),
            Ty::Arrow(dom, cod) => match **dom {
                Ty::Bool => write!(f, "Bool -> {cod}"),
                Ty::Arrow(..) => write!(f, "({dom}) -> {cod}"),
            },
        }
    }
}

/// Core terms are displayed with raw indices: `\:Bool. #0`, `\. #1 #0`.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_term(self, Prec::Top, f)
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_surface(self, Prec::Top, f)
    }
}

impl fmt::Display for Ctx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (name, ty)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{name}:{ty}")?;
        }
        Ok(())
    }
}

/// Syntactic position of a subterm, used to decide on parentheses.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Prec {
    /// Anywhere a full expression may appear.
    Top,
    /// Function position of an application.
    Fun,
    /// Argument position of an application.
    Arg,
}

fn fmt_term(term: &Term, prec: Prec, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let open_ended = matches!(term, Term::Lam(..) | Term::If(..));
    let paren = match prec {
        Prec::Top => false,
        Prec::Fun => open_ended,
        Prec::Arg => open_ended || matches!(term, Term::App(..)),
    };
    if paren {
        f.write_str("(")?;
    }
    match term {
        Term::Var(i) => write!(f, "#{i}")?,
        Term::True => f.write_str("true")?,
        Term::False => f.write_str("false")?,
        Term::Lam(ann, body) => {
            f.write_str("\\")?;
            if let Some(ty) = ann {
                write!(f, ":{ty}")?;
            }
            f.write_str(". ")?;
            fmt_term(body, Prec::Top, f)?;
        }
        Term::App(fun, arg) => {
            fmt_term(fun, Prec::Fun, f)?;
            f.write_str(" ")?;
            fmt_term(arg, Prec::Arg, f)?;
        }
        Term::If(c, t, e) => {
            f.write_str("if ")?;
            fmt_term(c, Prec::Top, f)?;
            f.write_str(" then ")?;
            fmt_term(t, Prec::Top, f)?;
            f.write_str(" else ")?;
            fmt_term(e, Prec::Top, f)?;
        }
    }
    if paren {
        f.write_str(")")?;
    }
    Ok(())
}

fn fmt_surface(term: &Surface, prec: Prec, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let open_ended = matches!(term, Surface::Lam(..) | Surface::If(..));
    let paren = match prec {
        Prec::Top => false,
        Prec::Fun => open_ended,
        Prec::Arg => open_ended || matches!(term, Surface::App(..)),
    };
    if paren {
        f.write_str("(")?;
    }
    match term {
        Surface::Var(name) => f.write_str(name)?,
        Surface::True => f.write_str("true")?,
        Surface::False => f.write_str("false")?,
        Surface::Lam(name, ann, body) => {
            write!(f, "\\{name}")?;
            if let Some(ty) = ann {
                write!(f, ":{ty}")?;
            }
            f.write_str(". ")?;
            fmt_surface(body, Prec::Top, f)?;
        }
        Surface::App(fun, arg) => {
            fmt_surface(fun, Prec::Fun, f)?;
            f.write_str(" ")?;
            fmt_surface(arg, Prec::Arg, f)?;
        }
        Surface::If(c, t, e) => {
            f.write_str("if ")?;
            fmt_surface(c, Prec::Top, f)?;
            f.write_str(" then ")?;
            fmt_surface(t, Prec::Top, f)?;
            f.write_str(" else ")?;
            fmt_surface(e, Prec::Top, f)?;
        }
    }
    if paren {
        f.write_str(")")?;
    }
    Ok(())
}
