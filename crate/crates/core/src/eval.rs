//! Big-step, call-by-value evaluation in an environment.
//!
//! Lambdas evaluate to closures that pair their body with the environment
//! they were created in, so no substitution is ever performed. Variables
//! that are not bound to anything concrete are represented by neutral
//! values carrying a de Bruijn level.

use alloc::sync::Arc;
use core::fmt;

use crate::error::{Error, Result};
use crate::syntax::{Term, Ty};

pub const DEFAULT_FUEL: u64 = 1_000_000;

/// Budget of evaluation steps. Every call to [`eval`] consumes one unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fuel {
    remaining: u64,
}

impl Fuel {
    pub fn new(remaining: u64) -> Fuel {
        Fuel { remaining }
    }

    pub fn remaining(&self) -> u64 {
        self.remaining
    }

    pub fn tick(&mut self) -> Result<()> {
        match self.remaining.checked_sub(1) {
            Some(rest) => {
                self.remaining = rest;
                Ok(())
            }
            None => Err(Error::FuelExhausted),
        }
    }
}

impl Default for Fuel {
    fn default() -> Fuel {
        Fuel::new(DEFAULT_FUEL)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Closure(Closure),
    True,
    False,
    Neutral(Arc<Neutral>),
}

/// The body of a lambda together with the environment it was evaluated in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Closure {
    /// Annotation of the lambda this closure came from.
    pub ann: Option<Ty>,
    pub body: Arc<Term>,
    pub env: Env,
}

/// Computations stuck on a variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Neutral {
    /// A variable, as a de Bruijn level.
    Lvl(usize),
    App(Arc<Neutral>, Value),
    If(Arc<Neutral>, Value, Value),
}

impl Value {
    pub fn bool(b: bool) -> Value {
        if b {
            Value::True
        } else {
            Value::False
        }
    }

    pub fn neutral(ne: Neutral) -> Value {
        Value::Neutral(Arc::new(ne))
    }

    pub fn lvl(k: usize) -> Value {
        Value::neutral(Neutral::Lvl(k))
    }

    pub fn closure(ann: Option<Ty>, body: Term, env: Env) -> Value {
        Value::Closure(Closure {
            ann,
            body: Arc::new(body),
            env,
        })
    }

    /// The largest level mentioned anywhere in the value, including inside
    /// closure environments.
    pub fn max_level(&self) -> Option<usize> {
        match self {
            Value::True | Value::False => None,
            Value::Closure(closure) => closure.env.iter().filter_map(Value::max_level).max(),
            Value::Neutral(ne) => ne.max_level(),
        }
    }
}

impl Neutral {
    pub fn app(fun: Neutral, arg: Value) -> Neutral {
        Neutral::App(Arc::new(fun), arg)
    }

    pub fn ite(cond: Neutral, then: Value, else_: Value) -> Neutral {
        Neutral::If(Arc::new(cond), then, else_)
    }

    pub fn max_level(&self) -> Option<usize> {
        match self {
            Neutral::Lvl(k) => Some(*k),
            Neutral::App(fun, arg) => fun.max_level().max(arg.max_level()),
            Neutral::If(c, t, e) => c.max_level().max(t.max_level()).max(e.max_level()),
        }
    }
}

/// A persistent stack of values. Position `0` is the most recently pushed
/// value, matching de Bruijn index `0`.
#[derive(Clone, Default)]
pub struct Env {
    head: Option<Arc<Node>>,
}

struct Node {
    value: Value,
    len: usize,
    next: Env,
}

impl Env {
    pub fn new() -> Env {
        Env::default()
    }

    /// Extend with a new innermost value.
    pub fn push(&self, value: Value) -> Env {
        Env {
            head: Some(Arc::new(Node {
                value,
                len: self.len() + 1,
                next: self.clone(),
            })),
        }
    }

    pub fn len(&self) -> usize {
        self.head.as_ref().map_or(0, |node| node.len)
    }

    pub fn is_empty(&self) -> bool {
        self.head.is_none()
    }

    pub fn get(&self, index: usize) -> Option<&Value> {
        self.iter().nth(index)
    }

    /// Values from innermost to outermost.
    pub fn iter(&self) -> impl Iterator<Item = &Value> {
        let mut cursor = self.head.as_deref();
        core::iter::from_fn(move || {
            let node = cursor?;
            cursor = node.next.head.as_deref();
            Some(&node.value)
        })
    }
}

/// Builds an environment whose innermost value is the LAST item.
impl FromIterator<Value> for Env {
    fn from_iter<I: IntoIterator<Item = Value>>(iter: I) -> Env {
        iter.into_iter()
            .fold(Env::new(), |env, value| env.push(value))
    }
}

impl PartialEq for Env {
    fn eq(&self, other: &Env) -> bool {
        let same_node = match (&self.head, &other.head) {
            (Some(a), Some(b)) => Arc::ptr_eq(a, b),
            (None, None) => true,
            _ => false,
        };
        same_node || (self.len() == other.len() && self.iter().eq(other.iter()))
    }
}

impl Eq for Env {}

impl fmt::Debug for Env {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.iter()).finish()
    }
}

impl Drop for Env {
    // Unlink long chains iteratively.
    fn drop(&mut self) {
        let mut head = self.head.take();
        while let Some(node) = head {
            match Arc::try_unwrap(node) {
                Ok(mut node) => head = node.next.head.take(),
                Err(_) => break,
            }
        }
    }
}

/// Evaluate `term` in `env`.
pub fn eval(env: &Env, term: &Term, fuel: &mut Fuel) -> Result<Value> {
    fuel.tick()?;
    match term {
        Term::Var(i) => env.get(*i).cloned().ok_or(Error::Scope {
            index: *i,
            scope: env.len(),
        }),
        Term::Lam(ann, body) => Ok(Value::Closure(Closure {
            ann: ann.clone(),
            body: body.clone(),
            env: env.clone(),
        })),
        Term::App(fun, arg) => {
            let fun = eval(env, fun, fuel)?;
            let arg = eval(env, arg, fuel)?;
            apply(&fun, arg, fuel)
        }
        Term::True => Ok(Value::True),
        Term::False => Ok(Value::False),
        Term::If(c, t, e) => match eval(env, c, fuel)? {
            Value::True => eval(env, t, fuel),
            Value::False => eval(env, e, fuel),
            Value::Neutral(ne) => {
                let t = eval(env, t, fuel)?;
                let e = eval(env, e, fuel)?;
                Ok(Value::Neutral(Arc::new(Neutral::If(ne, t, e))))
            }
            Value::Closure(_) => Err(Error::NotABoolean),
        },
    }
}

/// Apply a function value to an argument.
pub fn apply(fun: &Value, arg: Value, fuel: &mut Fuel) -> Result<Value> {
    match fun {
        Value::Closure(closure) => eval(&closure.env.push(arg), &closure.body, fuel),
        Value::Neutral(ne) => Ok(Value::Neutral(Arc::new(Neutral::App(ne.clone(), arg)))),
        Value::True | Value::False => Err(Error::NotApplicable),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(env: &Env, term: &Term) -> Result<Value> {
        eval(env, term, &mut Fuel::default())
    }

    #[test]
    fn constants_and_lambdas() {
        assert_eq!(run(&Env::new(), &Term::True), Ok(Value::True));
        let id = Term::abs(Term::Var(0));
        assert_eq!(
            run(&Env::new(), &id),
            Ok(Value::closure(None, Term::Var(0), Env::new()))
        );
    }

    #[test]
    fn stuck_conditional_evaluates_both_branches() {
        let env = Env::new().push(Value::lvl(0));
        let t = Term::ite(Term::Var(0), Term::True, Term::False);
        assert_eq!(
            run(&env, &t),
            Ok(Value::neutral(Neutral::ite(
                Neutral::Lvl(0),
                Value::True,
                Value::False
            )))
        );
    }

    #[test]
    fn decided_conditional_skips_other_branch() {
        // The untaken branch is out of scope and would fail if evaluated.
        let t = Term::ite(Term::True, Term::False, Term::Var(7));
        assert_eq!(run(&Env::new(), &t), Ok(Value::False));
    }

    #[test]
    fn application() {
        let mut fuel = Fuel::default();
        let id = Value::closure(None, Term::Var(0), Env::new());
        assert_eq!(apply(&id, Value::True, &mut fuel), Ok(Value::True));
        assert_eq!(
            apply(&Value::lvl(0), Value::True, &mut fuel),
            Ok(Value::neutral(Neutral::app(Neutral::Lvl(0), Value::True)))
        );
        let saved = Value::closure(None, Term::Var(1), Env::new().push(Value::False));
        assert_eq!(apply(&saved, Value::True, &mut fuel), Ok(Value::False));
        assert_eq!(
            apply(&Value::True, Value::True, &mut fuel),
            Err(Error::NotApplicable)
        );
    }

    #[test]
    fn env_extension_contract() {
        let env = Env::new().push(Value::False).push(Value::True);
        assert_eq!(env.len(), 2);
        assert_eq!(env.get(0), Some(&Value::True));
        assert_eq!(env.get(1), Some(&Value::False));
        assert_eq!(env.get(2), None);
        let collected: Env = [Value::False, Value::True].into_iter().collect();
        assert_eq!(collected, env);
    }

    #[test]
    fn scope_errors_on_env_underrun() {
        assert_eq!(
            run(&Env::new(), &Term::Var(0)),
            Err(Error::Scope { index: 0, scope: 0 })
        );
    }

    #[test]
    fn fuel_runs_out_on_omega() {
        let w = Term::abs(Term::app(Term::Var(0), Term::Var(0)));
        let omega = Term::app(w.clone(), w);
        assert_eq!(
            eval(&Env::new(), &omega, &mut Fuel::new(1_000)),
            Err(Error::FuelExhausted)
        );
    }

    #[test]
    fn fuel_counts_eval_entries() {
        let mut fuel = Fuel::new(3);
        let t = Term::app(Term::abs(Term::Var(0)), Term::True);
        // app, lam, true, then the body
        assert_eq!(eval(&Env::new(), &t, &mut fuel), Err(Error::FuelExhausted));
        let mut fuel = Fuel::new(4);
        assert_eq!(eval(&Env::new(), &t, &mut fuel), Ok(Value::True));
        assert_eq!(fuel.remaining(), 0);
    }
}
