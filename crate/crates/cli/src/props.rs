//! Property suites over the generated corpus, shared by `selftest` and the
//! test suites.

use std::sync::Arc;

use rayon::prelude::*;
use stlc_core::denote::{denot_equal, sem_eval, sem_of_domain};
use stlc_core::eval::{apply, eval, Env, Fuel, Neutral, Value};
use stlc_core::gen::{closed_sample, gen_surface, sample, GenOptions, Sample};
use stlc_core::nbe::{classify, initial_env, normalize, readback, readback_ne};
use stlc_core::oracle::{nf, whnf_oracle};
use stlc_core::parser::{parse_term, print_term};
use stlc_core::syntax::{resolve, unresolve};
use stlc_core::typecheck::{check, infer};
use stlc_core::whnf::{is_value_shape, whnf_of};
use stlc_core::{Error, Term};

use crate::json::{term_from_json, term_to_json};

#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub fuel: u64,
    pub max_steps: usize,
    pub max_denote: u64,
}

impl Default for Limits {
    fn default() -> Limits {
        Limits {
            fuel: stlc_core::eval::DEFAULT_FUEL,
            max_steps: stlc_core::oracle::DEFAULT_MAX_STEPS,
            max_denote: stlc_core::denote::DEFAULT_LIMIT,
        }
    }
}

impl Limits {
    fn fuel(&self) -> Fuel {
        Fuel::new(self.fuel)
    }
}

/// Outcome of a property on one input.
pub enum Verdict {
    Pass,
    /// The input is outside the property's reach, e.g. too large to enumerate.
    Skip,
    Fail(String),
}

use Verdict::{Fail, Pass, Skip};

fn verdict(ok: bool, message: impl FnOnce() -> String) -> Verdict {
    if ok {
        Pass
    } else {
        Fail(message())
    }
}

macro_rules! attempt {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(err) => return Fail(format!("{}: {err}", stringify!($e))),
        }
    };
}

/// Which inputs a property runs on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Input {
    Corpus,
    Closed,
    Surface,
}

pub struct Property {
    pub name: &'static str,
    pub input: Input,
    pub run: fn(&Sample, &Limits) -> Verdict,
}

#[derive(Clone, Debug)]
pub struct Failure {
    pub index: u64,
    pub term: String,
    pub message: String,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub name: &'static str,
    pub passed: usize,
    pub skipped: usize,
    pub failure: Option<Failure>,
}

fn typechecks(s: &Sample, _: &Limits) -> Verdict {
    let ty = attempt!(infer(&s.ctx, &s.term));
    verdict(ty == s.ty, || format!("inferred {ty}, expected {}", s.ty))
}

fn oracle_agreement(s: &Sample, l: &Limits) -> Verdict {
    let normal = attempt!(normalize(&s.ctx, &s.term, &mut l.fuel()));
    let expected = attempt!(nf(&s.term, l.max_steps));
    verdict(normal == expected, || {
        format!("nbe gave {normal}, oracle gave {expected}")
    })
}

fn normality(s: &Sample, l: &Limits) -> Verdict {
    let normal = attempt!(normalize(&s.ctx, &s.term, &mut l.fuel()));
    verdict(classify(&normal).is_normal(), || {
        format!("{normal} is not normal")
    })
}

fn idempotence(s: &Sample, l: &Limits) -> Verdict {
    let once = attempt!(normalize(&s.ctx, &s.term, &mut l.fuel()));
    let twice = attempt!(normalize(&s.ctx, &once, &mut l.fuel()));
    verdict(once == twice, || format!("{once} renormalized to {twice}"))
}

fn type_preservation(s: &Sample, l: &Limits) -> Verdict {
    let ty = attempt!(infer(&s.ctx, &s.term));
    let normal = attempt!(normalize(&s.ctx, &s.term, &mut l.fuel()));
    match check(&s.ctx, &normal, &ty) {
        Ok(()) => Pass,
        Err(err) => Fail(format!("{normal} does not check against {ty}: {err}")),
    }
}

fn totality(s: &Sample, l: &Limits) -> Verdict {
    let env = initial_env(s.ctx.len());
    let a = attempt!(eval(&env, &s.term, &mut l.fuel()));
    let b = attempt!(eval(&env, &s.term, &mut l.fuel()));
    if a != b {
        return Fail("evaluation is not deterministic".into());
    }
    if a.max_level().is_some_and(|k| k >= s.ctx.len()) {
        return Fail("value mentions a level outside its scope".into());
    }
    match readback(s.ctx.len(), &a, &mut l.fuel()) {
        Ok(_) => Pass,
        Err(err) => Fail(format!("value does not read back: {err}")),
    }
}

fn candidate_space(s: &Sample, l: &Limits) -> Verdict {
    let harvest = attempt!(harvest(s, l));
    for (n, ne) in &harvest.neutrals {
        let args = harvest.values_at(*n);
        if let Err(message) = check_candidate(*n, ne, args.first().copied(), l) {
            return Fail(message);
        }
    }
    Pass
}

fn denotational_soundness(s: &Sample, l: &Limits) -> Verdict {
    let normal = attempt!(normalize(&s.ctx, &s.term, &mut l.fuel()));
    match denot_equal(&s.ctx, &s.ty, &s.term, &normal, l.max_denote) {
        Ok(equal) => verdict(equal, || {
            format!("denotation differs from that of {normal}")
        }),
        Err(Error::TypeTooLarge { .. }) => Skip,
        Err(err) => Fail(err.to_string()),
    }
}

fn weak_head_oracle(s: &Sample, l: &Limits) -> Verdict {
    let whnf = attempt!(whnf_of(&s.term, &mut l.fuel()));
    let expected = attempt!(whnf_oracle(&s.term, l.max_steps));
    if !is_value_shape(&whnf) {
        return Fail(format!("{whnf} is not a value"));
    }
    verdict(whnf == expected, || {
        format!("whnf gave {whnf}, oracle gave {expected}")
    })
}

fn weak_head_soundness(s: &Sample, l: &Limits) -> Verdict {
    let whnf = attempt!(whnf_of(&s.term, &mut l.fuel()));
    match denot_equal(&s.ctx, &s.ty, &s.term, &whnf, l.max_denote) {
        Ok(equal) => verdict(equal, || format!("denotation differs from that of {whnf}")),
        Err(Error::TypeTooLarge { .. }) => Skip,
        Err(err) => Fail(err.to_string()),
    }
}

fn evaluation_soundness(s: &Sample, l: &Limits) -> Verdict {
    let value = attempt!(eval(&Env::new(), &s.term, &mut l.fuel()));
    let expected = match sem_eval(&s.ctx, &[], &s.term, l.max_denote) {
        Ok(v) => v,
        Err(Error::TypeTooLarge { .. }) => return Skip,
        Err(err) => return Fail(err.to_string()),
    };
    match sem_of_domain(&value, &s.ty, l.max_denote) {
        Ok(got) => verdict(got == expected, || {
            format!("{got:?} differs from {expected:?}")
        }),
        Err(Error::TypeTooLarge { .. }) => Skip,
        Err(err) => Fail(err.to_string()),
    }
}

fn naming_roundtrip(s: &Sample, _: &Limits) -> Verdict {
    let named = attempt!(unresolve(&s.term, &s.ctx));
    let back = attempt!(resolve(&named, &s.ctx));
    verdict(back == s.term, || format!("resolved back to {back}"))
}

fn json_roundtrip(s: &Sample, _: &Limits) -> Verdict {
    let text = term_to_json(&s.term).to_string();
    let value = attempt!(serde_json::from_str(&text));
    let back = attempt!(term_from_json(&value));
    verdict(back == s.term, || format!("{text} decoded to {back}"))
}

fn parser_roundtrip(s: &Sample, _: &Limits) -> Verdict {
    let surface = gen_surface(s.index, s.term.size());
    let printed = print_term(&surface);
    match parse_term(&printed) {
        Ok(back) => verdict(back == surface, || {
            format!("`{printed}` reparsed differently")
        }),
        Err(err) => Fail(format!("`{printed}`: {}", Error::Parse(err))),
    }
}

pub const PROPERTIES: &[Property] = &[
    Property {
        name: "well-typed generation",
        input: Input::Corpus,
        run: typechecks,
    },
    Property {
        name: "oracle agreement",
        input: Input::Corpus,
        run: oracle_agreement,
    },
    Property {
        name: "normality",
        input: Input::Corpus,
        run: normality,
    },
    Property {
        name: "idempotence",
        input: Input::Corpus,
        run: idempotence,
    },
    Property {
        name: "type preservation",
        input: Input::Corpus,
        run: type_preservation,
    },
    Property {
        name: "totality and determinism",
        input: Input::Corpus,
        run: totality,
    },
    Property {
        name: "candidate space",
        input: Input::Corpus,
        run: candidate_space,
    },
    Property {
        name: "denotational soundness",
        input: Input::Corpus,
        run: denotational_soundness,
    },
    Property {
        name: "name roundtrip",
        input: Input::Corpus,
        run: naming_roundtrip,
    },
    Property {
        name: "json roundtrip",
        input: Input::Corpus,
        run: json_roundtrip,
    },
    Property {
        name: "weak head oracle agreement",
        input: Input::Closed,
        run: weak_head_oracle,
    },
    Property {
        name: "weak head soundness",
        input: Input::Closed,
        run: weak_head_soundness,
    },
    Property {
        name: "evaluation soundness",
        input: Input::Closed,
        run: evaluation_soundness,
    },
    Property {
        name: "parser roundtrip",
        input: Input::Surface,
        run: parser_roundtrip,
    },
];

/// Inputs for one kind of property, in index order.
pub fn inputs(input: Input, seed: u64, samples: u64, size: usize) -> Vec<Sample> {
    let options = GenOptions::default();
    (0..samples)
        .into_par_iter()
        .map(|i| match input {
            Input::Corpus | Input::Surface => sample(seed, i, size, options),
            Input::Closed => closed_sample(seed, i, size, options),
        })
        .collect()
}

/// Run one property over `inputs`, reporting the failure with the lowest index.
pub fn run_property(property: &Property, inputs: &[Sample], limits: &Limits) -> Report {
    let verdicts: Vec<Verdict> = inputs
        .par_iter()
        .map(|s| (property.run)(s, limits))
        .collect();
    let mut report = Report {
        name: property.name,
        passed: 0,
        skipped: 0,
        failure: None,
    };
    for (s, verdict) in inputs.iter().zip(verdicts) {
        match verdict {
            Pass => report.passed += 1,
            Skip => report.skipped += 1,
            Fail(message) => {
                report.failure.get_or_insert(Failure {
                    index: s.index,
                    term: s.term.to_string(),
                    message,
                });
            }
        }
    }
    report
}

pub fn run_all(seed: u64, samples: u64, size: usize, limits: &Limits) -> Vec<Report> {
    let corpus = inputs(Input::Corpus, seed, samples, size);
    let closed = inputs(Input::Closed, seed, samples, size);
    PROPERTIES
        .iter()
        .map(|property| {
            let inputs = match property.input {
                Input::Corpus | Input::Surface => &corpus,
                Input::Closed => &closed,
            };
            run_property(property, inputs, limits)
        })
        .collect()
}

/// Neutrals and values met while reading back the value of a sample, each
/// paired with the scope it was met at.
#[derive(Default)]
pub struct Harvest {
    pub neutrals: Vec<(usize, Arc<Neutral>)>,
    pub values: Vec<(usize, Value)>,
}

impl Harvest {
    pub fn values_at(&self, scope: usize) -> Vec<&Value> {
        self.values
            .iter()
            .filter(|(n, _)| *n == scope)
            .map(|(_, v)| v)
            .collect()
    }

    fn value(&mut self, scope: usize, value: &Value, fuel: &mut Fuel) -> Result<(), Error> {
        self.values.push((scope, value.clone()));
        match value {
            Value::True | Value::False => Ok(()),
            Value::Closure(_) => {
                let body = apply(value, Value::lvl(scope), fuel)?;
                self.value(scope + 1, &body, fuel)
            }
            Value::Neutral(ne) => self.neutral(scope, ne, fuel),
        }
    }

    fn neutral(&mut self, scope: usize, ne: &Arc<Neutral>, fuel: &mut Fuel) -> Result<(), Error> {
        self.neutrals.push((scope, ne.clone()));
        match &**ne {
            Neutral::Lvl(_) => Ok(()),
            Neutral::App(f, a) => {
                self.neutral(scope, f, fuel)?;
                self.value(scope, a, fuel)
            }
            Neutral::If(c, t, e) => {
                self.neutral(scope, c, fuel)?;
                self.value(scope, t, fuel)?;
                self.value(scope, e, fuel)
            }
        }
    }
}

/// Evaluate a sample in its initial environment and harvest the result.
pub fn harvest(s: &Sample, limits: &Limits) -> Result<Harvest, Error> {
    let mut fuel = limits.fuel();
    let value = eval(&initial_env(s.ctx.len()), &s.term, &mut fuel)?;
    let mut harvest = Harvest::default();
    harvest.value(s.ctx.len(), &value, &mut fuel)?;
    Ok(harvest)
}

/// The executable candidate-space properties at scope `n`: every level below
/// `n` reads back as a neutral, `ne` reads back the same way as a neutral and
/// as a value, and applying `ne` to `arg` reads back as the application of
/// the read-backs.
pub fn check_candidate(
    n: usize,
    ne: &Neutral,
    arg: Option<&Value>,
    limits: &Limits,
) -> Result<(), String> {
    let mut fuel = limits.fuel();
    for k in 0..n {
        match readback_ne(n, &Neutral::Lvl(k), &mut fuel) {
            Ok(Term::Var(i)) if i == n - 1 - k => {}
            other => return Err(format!("level {k} at scope {n} read back as {other:?}")),
        }
    }
    let as_ne = readback_ne(n, ne, &mut fuel)
        .map_err(|err| format!("neutral does not read back: {err}"))?;
    let as_value = readback(n, &Value::Neutral(Arc::new(ne.clone())), &mut fuel)
        .map_err(|err| format!("neutral value does not read back: {err}"))?;
    if as_ne != as_value {
        return Err(format!("{as_ne} read back as a value gave {as_value}"));
    }
    if let Some(arg) = arg {
        let arg_term = readback(n, arg, &mut fuel)
            .map_err(|err| format!("argument does not read back: {err}"))?;
        let applied = readback_ne(n, &Neutral::app(ne.clone(), arg.clone()), &mut fuel)
            .map_err(|err| format!("application does not read back: {err}"))?;
        let expected = Term::app(as_ne, arg_term);
        if applied != expected {
            return Err(format!(
                "application read back as {applied}, expected {expected}"
            ));
        }
    }
    Ok(())
}
