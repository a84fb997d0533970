use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::parser::Span;
use crate::syntax::Ty;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("parse error at {}..{}: {}", .0.span.start, .0.span.end, .0.message)]
    Parse(ParseError),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("{0}")]
    Type(TypeError),
    #[error("index {index} is out of scope {scope}")]
    Scope { index: usize, scope: usize },
    #[error("variable `{0}` is shadowed by a later context entry and cannot be named")]
    Shadowed(String),
    #[error("fuel exhausted")]
    FuelExhausted,
    #[error("step limit of {0} exhausted")]
    StepLimit(usize),
    #[error("applied a boolean constant")]
    NotApplicable,
    #[error("conditional on a function value")]
    NotABoolean,
    #[error("neutral value encountered while quoting a closed value")]
    NeutralInWhnf,
    #[error("neutral value has no denotation")]
    NeutralInDenotation,
    #[error("shift produced a negative index")]
    NegativeIndex,
    #[error("type `{ty}` has too many inhabitants to enumerate ({})", match .cardinality {
        Some(n) => alloc::format!("{n}"),
        None => String::from("more than 2^64"),
    })]
    TypeTooLarge { ty: Ty, cardinality: Option<u64> },
    #[error("lambda without annotation cannot be given a denotation")]
    MissingAnnotation,
    #[error("semantic value does not fit its type")]
    IllTyped,
}

impl From<ParseError> for Error {
    fn from(err: ParseError) -> Error {
        Error::Parse(err)
    }
}

impl From<TypeError> for Error {
    fn from(err: TypeError) -> Error {
        Error::Type(err)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub span: Span,
    pub message: String,
}

/// One step from a term to one of its immediate subterms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PathStep {
    LamBody,
    AppFun,
    AppArg,
    IfCond,
    IfThen,
    IfElse,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeErrorKind {
    UnboundIndex(usize),
    NotAFunction(Ty),
    Mismatch { expected: Ty, got: Ty },
    MissingAnnotation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeError {
    pub kind: TypeErrorKind,
    /// Path from the root to the offending subterm.
    pub location: Vec<PathStep>,
}

impl fmt::Display for TypeErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeErrorKind::UnboundIndex(i) => write!(f, "unbound index #{i}"),
            TypeErrorKind::NotAFunction(ty) => {
                write!(f, "not a function: expression has type `{ty}`")
            }
            TypeErrorKind::Mismatch { expected, got } => {
                write!(f, "type mismatch: expected `{expected}`, found `{got}`")
            }
            TypeErrorKind::MissingAnnotation => {
                write!(f, "cannot infer the type of an unannotated lambda")
            }
        }
    }
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "type error: {}", self.kind)?;
        if !self.location.is_empty() {
            write!(f, " at ")?;
            for (i, step) in self.location.iter().enumerate() {
                if i > 0 {
                    write!(f, ".")?;
                }
                let name = match step {
                    PathStep::LamBody => "body",
                    PathStep::AppFun => "fun",
                    PathStep::AppArg => "arg",
                    PathStep::IfCond => "cond",
                    PathStep::IfThen => "then",
                    PathStep::IfElse => "else",
                };
                f.write_str(name)?;
            }
        }
        Ok(())
    }
}
