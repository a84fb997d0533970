//! Command-line interface.

use std::ffi::OsString;
use std::fmt::Display;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use stlc_core::denote::denot_equal;
use stlc_core::eval::Fuel;
use stlc_core::gen::gen_batch;
use stlc_core::nbe::normalize;
use stlc_core::oracle::nf;
use stlc_core::parser::{parse_ctx, parse_term, parse_type, print_term, print_type};
use stlc_core::syntax::{resolve, unresolve};
use stlc_core::typecheck::infer;
use stlc_core::whnf::whnf_of;
use stlc_core::{Ctx, Error, Term, Ty};

use crate::json::{parse_term_json, term_to_json, ty_to_json, JsonError};
use crate::props::{self, Limits};

pub const EXIT_OK: i32 = 0;
pub const EXIT_TYPE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;
pub const EXIT_INVARIANT: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "stlc",
    version,
    about = "Normalization by evaluation for the simply typed lambda calculus"
)]
pub struct Cli {
    /// Emit results in the JSON term encoding
    #[arg(long, global = true)]
    json: bool,
    /// Evaluation step budget
    #[arg(long, global = true, default_value_t = stlc_core::eval::DEFAULT_FUEL)]
    fuel: u64,
    /// Largest type the denotational engine will enumerate
    #[arg(long, global = true, default_value_t = stlc_core::denote::DEFAULT_LIMIT)]
    max_denote_size: u64,
    /// Print terms as raw de Bruijn syntax
    #[arg(long, global = true)]
    debruijn: bool,
    /// Read a term from FILE instead of the command line (repeat for several terms)
    #[arg(short = 'f', long = "file", global = true, value_name = "FILE")]
    files: Vec<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct CtxArg {
    /// Typing context, e.g. "x:Bool, f:Bool->Bool"
    #[arg(long, default_value = "")]
    ctx: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Infer the type of a term
    Check {
        #[command(flatten)]
        ctx: CtxArg,
        term: Option<String>,
    },
    /// Type check, then compute the full normal form
    Nbe {
        #[command(flatten)]
        ctx: CtxArg,
        term: Option<String>,
    },
    /// Type check a closed term, then compute its weak head normal form
    Whnf { term: Option<String> },
    /// Normal form by substitution, without type checking
    OracleNf {
        #[command(flatten)]
        ctx: CtxArg,
        /// Reduction step limit
        #[arg(long, default_value_t = stlc_core::oracle::DEFAULT_MAX_STEPS)]
        max_steps: usize,
        term: Option<String>,
    },
    /// Decide whether two terms denote the same function
    DenoteEq {
        #[command(flatten)]
        ctx: CtxArg,
        #[arg(long = "type", value_name = "TYPE")]
        ty: String,
        terms: Vec<String>,
    },
    /// Generate random well-typed terms, one per line
    Gen {
        #[command(flatten)]
        ctx: CtxArg,
        #[arg(long = "type", value_name = "TYPE")]
        ty: String,
        #[arg(long, default_value_t = 20)]
        size: usize,
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run every property suite over a generated corpus
    Selftest {
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, default_value_t = 40)]
        size: usize,
        #[arg(long, default_value_t = 20240601)]
        seed: u64,
    },
}

/// A failed command: exit code and diagnostic.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn new(code: i32, message: impl Display) -> Failure {
        Failure {
            code,
            message: message.to_string(),
        }
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse(_) => EXIT_PARSE,
        Error::UnboundVariable(_)
        | Error::Type(_)
        | Error::Scope { .. }
        | Error::Shadowed(_)
        | Error::MissingAnnotation => EXIT_TYPE,
        Error::FuelExhausted | Error::StepLimit(_) | Error::TypeTooLarge { .. } => EXIT_LIMIT,
        Error::NotApplicable
        | Error::NotABoolean
        | Error::NeutralInWhnf
        | Error::NeutralInDenotation
        | Error::NegativeIndex
        | Error::IllTyped => EXIT_INVARIANT,
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Failure {
        Failure::new(exit_code(&err), err)
    }
}

impl From<stlc_core::error::ParseError> for Failure {
    fn from(err: stlc_core::error::ParseError) -> Failure {
        Error::Parse(err).into()
    }
}

impl From<stlc_core::error::TypeError> for Failure {
    fn from(err: stlc_core::error::TypeError) -> Failure {
        Error::Type(err).into()
    }
}

impl From<JsonError> for Failure {
    fn from(err: JsonError) -> Failure {
        Failure::new(EXIT_PARSE, err)
    }
}

struct Session<'a> {
    cli: &'a Cli,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

type Outcome = Result<(), Failure>;

impl Session<'_> {
    fn fuel(&self) -> Fuel {
        Fuel::new(self.cli.fuel)
    }

    fn line(&mut self, text: impl Display) -> Outcome {
        writeln!(self.out, "{text}").map_err(|e| Failure::new(EXIT_INVARIANT, e))
    }

    /// Source texts of the terms: files first, then command-line arguments.
    fn sources(&self, args: &[&String], want: usize) -> Result<Vec<String>, Failure> {
        let mut sources = Vec::new();
        for path in &self.cli.files {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))?;
            sources.push(text);
        }
        sources.extend(args.iter().map(|s| s.to_string()));
        if sources.len() != want {
            return Err(Failure::new(
                EXIT_PARSE,
                format!("expected {want} term(s), got {}", sources.len()),
            ));
        }
        Ok(sources)
    }

    /// Parse a term: JSON core syntax if it starts with `{`, named syntax otherwise.
    fn term(&self, src: &str, ctx: &Ctx) -> Result<Term, Failure> {
        if src.trim_start().starts_with('{') {
            let term = parse_term_json(src)?;
            term.audit_scope(ctx.len())?;
            return Ok(term);
        }
        Ok(resolve(&parse_term(src)?, ctx)?)
    }

    fn one_term(&self, arg: &Option<String>, ctx: &Ctx) -> Result<Term, Failure> {
        let sources = self.sources(&arg.iter().collect::<Vec<_>>(), 1)?;
        self.term(&sources[0], ctx)
    }

    fn show_term(&mut self, term: &Term, ctx: &Ctx) -> Outcome {
        if self.cli.json {
            let text = term_to_json(term).to_string();
            return self.line(text);
        }
        if self.cli.debruijn {
            return self.line(term);
        }
        let named = unresolve(term, ctx)?;
        self.line(print_term(&named))
    }

    fn show_ty(&mut self, ty: &Ty) -> Outcome {
        if self.cli.json {
            let text = ty_to_json(ty).to_string();
            return self.line(text);
        }
        self.line(print_type(ty))
    }

    fn run(&mut self) -> Outcome {
        match &self.cli.command {
            Command::Check { ctx, term } => {
                let ctx = parse_ctx(&ctx.ctx)?;
                let term = self.one_term(term, &ctx)?;
                let ty = infer(&ctx, &term)?;
                self.show_ty(&ty)
            }
            Command::Nbe { ctx, term } => {
                let ctx = parse_ctx(&ctx.ctx)?;
                let term = self.one_term(term, &ctx)?;
                infer(&ctx, &term)?;
                let normal = normalize(&ctx, &term, &mut self.fuel())?;
                self.show_term(&normal, &ctx)
            }
            Command::Whnf { term } => {
                let ctx = Ctx::new();
                let term = self.one_term(term, &ctx)?;
                infer(&ctx, &term)?;
                let whnf = whnf_of(&term, &mut self.fuel())?;
                self.show_term(&whnf, &ctx)
            }
            Command::OracleNf {
                ctx,
                max_steps,
                term,
            } => {
                let ctx = parse_ctx(&ctx.ctx)?;
                let term = self.one_term(term, &ctx)?;
                let normal = nf(&term, *max_steps)?;
                self.show_term(&normal, &ctx)
            }
            Command::DenoteEq { ctx, ty, terms } => {
                let ctx = parse_ctx(&ctx.ctx)?;
                let ty = parse_type(ty)?;
                let sources = self.sources(&terms.iter().collect::<Vec<_>>(), 2)?;
                let lhs = self.term(&sources[0], &ctx)?;
                let rhs = self.term(&sources[1], &ctx)?;
                let equal = denot_equal(&ctx, &ty, &lhs, &rhs, self.cli.max_denote_size)?;
                if self.cli.json {
                    self.line(json!({ "equal": equal }))
                } else {
                    self.line(if equal { "equal" } else { "distinct" })
                }
            }
            Command::Gen {
                ctx,
                ty,
                size,
                count,
                seed,
            } => {
                let ctx = parse_ctx(&ctx.ctx)?;
                let ty = parse_type(ty)?;
                if *size == 0 {
                    return Err(Failure::new(EXIT_PARSE, "--size must be at least 1"));
                }
                for term in gen_batch(*seed, &ctx, &ty, *size, *count) {
                    self.show_term(&term, &ctx)?;
                }
                Ok(())
            }
            Command::Selftest {
                samples,
                size,
                seed,
            } => self.selftest(*samples, *size, *seed),
        }
    }

    fn selftest(&mut self, samples: u64, size: usize, seed: u64) -> Outcome {
        let limits = Limits {
            fuel: self.cli.fuel,
            max_denote: self.cli.max_denote_size,
            ..Limits::default()
        };
        let reports = props::run_all(seed, samples, size.max(1), &limits);
        let mut failed = 0;
        for report in &reports {
            let status = if report.failure.is_some() {
                "FAIL"
            } else {
                "PASS"
            };
            let mut line = format!("{status} {} ({} passed", report.name, report.passed);
            if report.skipped > 0 {
                line += &format!(", {} skipped", report.skipped);
            }
            line += ")";
            self.line(line)?;
            if let Some(f) = &report.failure {
                failed += 1;
                let _ = writeln!(
                    self.err,
                    "{}: seed {seed} sample {} term {}: {}",
                    report.name, f.index, f.term, f.message
                );
            }
        }
        self.line(format!(
            "{} of {} properties passed",
            reports.len() - failed,
            reports.len()
        ))?;
        if failed > 0 {
            return Err(Failure::new(
                EXIT_INVARIANT,
                format!("{failed} properties failed"),
            ));
        }
        Ok(())
    }
}

/// Run the command line `args` (program name first) and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    let mut session = Session {
        cli: &cli,
        out,
        err,
    };
    match session.run() {
        Ok(()) => EXIT_OK,
        Err(failure) => {
            let _ = writeln!(session.err, "error: {}", failure.message);
            failure.code
        }
    }
}
