//! Random generation of well-typed terms.
//!
//! Generation is goal directed: a term is built for a requested type, so
//! every output type checks by construction. Randomness is derived from the
//! seed and the position of each node in the tree, so a subterm does not
//! depend on how its siblings were generated.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::syntax::{Ctx, Surface, Term, Ty};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GenOptions {
    /// Also draw higher-order argument types for applications. Terms built
    /// this way may be too large for the denotational engine.
    pub wide_arguments: bool,
}

/// Derive the key of child `slot` from its parent's key.
fn child_key(key: u64, slot: u64) -> u64 {
    let mut rng = SplitMix64::seed_from_u64(key ^ slot.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    rng.gen()
}

fn bb() -> Ty {
    Ty::arrow(Ty::Bool, Ty::Bool)
}

/// Pick an index according to `weights`; `None` if they are all zero.
fn weighted(rng: &mut impl Rng, weights: &[u32]) -> Option<usize> {
    let total: u32 = weights.iter().sum();
    if total == 0 {
        return None;
    }
    let mut pick = rng.gen_range(0..total);
    weights.iter().position(|&w| {
        if pick < w {
            true
        } else {
            pick -= w;
            false
        }
    })
}

struct Generator {
    options: GenOptions,
    /// Types of variables in scope, innermost last.
    scope: Vec<Ty>,
}

impl Generator {
    /// Indices of the variables of type `ty`.
    fn vars_of(&self, ty: &Ty) -> Vec<usize> {
        self.scope
            .iter()
            .rev()
            .enumerate()
            .filter(|(_, t)| *t == ty)
            .map(|(i, _)| i)
            .collect()
    }

    /// Size of the smallest term [`Generator::leaf`] produces.
    fn min_size(&mut self, ty: &Ty) -> usize {
        if matches!(ty, Ty::Bool) || !self.vars_of(ty).is_empty() {
            return 1;
        }
        let Ty::Arrow(dom, cod) = ty else {
            unreachable!()
        };
        self.scope.push((**dom).clone());
        let size = 1 + self.min_size(cod);
        self.scope.pop();
        size
    }

    fn leaf(&mut self, key: u64, ty: &Ty) -> Term {
        let mut rng = SplitMix64::seed_from_u64(key);
        let vars = self.vars_of(ty);
        match ty {
            Ty::Bool => {
                let pick = rng.gen_range(0..vars.len() + 2);
                match pick.checked_sub(vars.len()) {
                    None => Term::Var(vars[pick]),
                    Some(0) => Term::True,
                    Some(_) => Term::False,
                }
            }
            Ty::Arrow(..) if !vars.is_empty() => Term::Var(vars[rng.gen_range(0..vars.len())]),
            Ty::Arrow(dom, cod) => self.lambda(key, dom, cod, |this, key, cod| this.leaf(key, cod)),
        }
    }

    fn lambda(
        &mut self,
        key: u64,
        dom: &Ty,
        cod: &Ty,
        body: impl FnOnce(&mut Self, u64, &Ty) -> Term,
    ) -> Term {
        self.scope.push(dom.clone());
        let body = body(self, child_key(key, 1), cod);
        self.scope.pop();
        Term::lam(Some(dom.clone()), body)
    }

    fn argument_type(&self, rng: &mut impl Rng, ty: &Ty) -> Ty {
        if self.options.wide_arguments {
            let choices = [
                Ty::Bool,
                bb(),
                ty.clone(),
                Ty::arrow(bb(), Ty::Bool),
                Ty::arrow(Ty::Bool, bb()),
            ];
            let pick = weighted(rng, &[4, 2, 1, 1, 1]).unwrap_or(0);
            choices[pick].clone()
        } else {
            let choices = [Ty::Bool, bb(), ty.clone()];
            let pick = weighted(rng, &[4, 2, 1]).unwrap_or(0);
            choices[pick].clone()
        }
    }

    fn term(&mut self, key: u64, ty: &Ty, budget: usize) -> Term {
        let min = self.min_size(ty);
        if budget <= min {
            return self.leaf(key, ty);
        }
        let mut rng = SplitMix64::seed_from_u64(key);
        const VAR: usize = 0;
        const LAM: usize = 1;
        const IF: usize = 2;
        const APP: usize = 3;
        let has_var = !self.vars_of(ty).is_empty();
        let lam_fits = match ty {
            Ty::Arrow(dom, cod) => {
                self.scope.push((**dom).clone());
                let body_min = self.min_size(cod);
                self.scope.pop();
                body_min < budget
            }
            Ty::Bool => false,
        };
        let weights = [
            if has_var { 2 } else { 0 },
            if lam_fits { 4 } else { 0 },
            if budget >= 2 + 2 * min { 2 } else { 0 },
            if budget >= 3 { 4 } else { 0 },
        ];
        match weighted(&mut rng, &weights) {
            Some(VAR) => {
                let vars = self.vars_of(ty);
                Term::Var(vars[rng.gen_range(0..vars.len())])
            }
            Some(LAM) => {
                let Ty::Arrow(dom, cod) = ty else {
                    unreachable!()
                };
                self.lambda(key, dom, cod, |this, key, cod| {
                    this.term(key, cod, budget - 1)
                })
            }
            Some(IF) => {
                let rest = budget - 1;
                let cond_budget = rng.gen_range(1..=rest - 2 * min);
                let branches = rest - cond_budget;
                let then_budget = rng.gen_range(min..=branches - min);
                Term::ite(
                    self.term(child_key(key, 1), &Ty::Bool, cond_budget),
                    self.term(child_key(key, 2), ty, then_budget),
                    self.term(child_key(key, 3), ty, branches - then_budget),
                )
            }
            Some(APP) => {
                let arg_ty = self.argument_type(&mut rng, ty);
                let fun_ty = Ty::arrow(arg_ty.clone(), ty.clone());
                let rest = budget - 1;
                let fun_min = self.min_size(&fun_ty);
                let arg_min = self.min_size(&arg_ty);
                if fun_min + arg_min > rest {
                    return self.leaf(key, ty);
                }
                let fun_budget = rng.gen_range(fun_min..=rest - arg_min);
                Term::app(
                    self.term(child_key(key, 1), &fun_ty, fun_budget),
                    self.term(child_key(key, 2), &arg_ty, rest - fun_budget),
                )
            }
            _ => self.leaf(key, ty),
        }
    }
}

/// Generate a fully annotated term of type `ty` in `ctx`.
///
/// The result has at most `budget` nodes unless the smallest term of the
/// requested type is bigger than that, in which case a smallest term is
/// returned.
pub fn gen_term(seed: u64, ctx: &Ctx, ty: &Ty, budget: usize) -> Term {
    gen_term_with(seed, ctx, ty, budget, GenOptions::default())
}

pub fn gen_term_with(seed: u64, ctx: &Ctx, ty: &Ty, budget: usize, options: GenOptions) -> Term {
    let mut generator = Generator {
        options,
        scope: ctx.types().cloned().collect(),
    };
    generator.term(seed, ty, budget.max(1))
}

/// `count` terms for the same typing problem, the `i`-th keyed on `(seed, i)`.
pub fn gen_batch(seed: u64, ctx: &Ctx, ty: &Ty, budget: usize, count: u64) -> Vec<Term> {
    (0..count)
        .map(|i| gen_term(child_key(seed, i), ctx, ty, budget))
        .collect()
}

/// Size of the smallest term [`gen_term`] can produce for `ty` in `ctx`.
pub fn min_size(ctx: &Ctx, ty: &Ty) -> usize {
    let mut generator = Generator {
        options: GenOptions::default(),
        scope: ctx.types().cloned().collect(),
    };
    generator.min_size(ty)
}

/// A generated typing problem together with its solution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sample {
    pub index: u64,
    pub ctx: Ctx,
    pub ty: Ty,
    pub term: Term,
}

const CTX_NAMES: [&str; 4] = ["a", "b", "c", "d"];

fn random_type(rng: &mut impl Rng) -> Ty {
    let choices = [
        Ty::Bool,
        bb(),
        Ty::arrow(Ty::Bool, bb()),
        Ty::arrow(bb(), Ty::Bool),
    ];
    let pick = weighted(rng, &[3, 2, 1, 1]).unwrap_or(0);
    choices[pick].clone()
}

/// The `index`-th sample of the corpus for `seed`: a context of zero to
/// three variables, a target type, and a term of at most `max_budget`
/// nodes.
pub fn sample(seed: u64, index: u64, max_budget: usize, options: GenOptions) -> Sample {
    let key = child_key(seed, index);
    let mut rng = SplitMix64::seed_from_u64(key);
    let ctx_len = rng.gen_range(0..=3);
    let ctx: Ctx = CTX_NAMES[..ctx_len]
        .iter()
        .map(|name| (String::from(*name), random_type(&mut rng)))
        .collect();
    let ty = random_type(&mut rng);
    let budget = rng.gen_range(1..=max_budget.max(1));
    let term = gen_term_with(child_key(key, 0), &ctx, &ty, budget, options);
    Sample {
        index,
        ctx,
        ty,
        term,
    }
}

pub fn corpus(seed: u64, count: u64, max_budget: usize, options: GenOptions) -> Vec<Sample> {
    (0..count)
        .map(|i| sample(seed, i, max_budget, options))
        .collect()
}

/// A random closed sample, useful where only closed terms make sense.
pub fn closed_sample(seed: u64, index: u64, max_budget: usize, options: GenOptions) -> Sample {
    let key = child_key(seed, index);
    let mut rng = SplitMix64::seed_from_u64(key);
    let ty = random_type(&mut rng);
    let budget = rng.gen_range(1..=max_budget.max(1));
    let ctx = Ctx::new();
    let term = gen_term_with(child_key(key, 0), &ctx, &ty, budget, options);
    Sample {
        index,
        ctx,
        ty,
        term,
    }
}

const SURFACE_NAMES: [&str; 6] = ["x", "y", "z", "f", "g", "x'"];

/// A random named term with at most `budget` nodes. It need not be well
/// scoped or well typed; it exercises the parser and printer.
pub fn gen_surface(seed: u64, budget: usize) -> Surface {
    let mut rng = SplitMix64::seed_from_u64(seed);
    surface(&mut rng, budget.max(1))
}

fn surface_type(rng: &mut impl Rng, depth: usize) -> Ty {
    if depth == 0 || rng.gen_bool(0.5) {
        Ty::Bool
    } else {
        Ty::arrow(surface_type(rng, depth - 1), surface_type(rng, depth - 1))
    }
}

fn name(rng: &mut impl Rng) -> String {
    let base = SURFACE_NAMES[rng.gen_range(0..SURFACE_NAMES.len())];
    if rng.gen_bool(0.1) {
        format!("{base}{}", rng.gen_range(0..10))
    } else {
        String::from(base)
    }
}

fn surface(rng: &mut SplitMix64, budget: usize) -> Surface {
    let leaf = |rng: &mut SplitMix64| match rng.gen_range(0..4) {
        0 => Surface::True,
        1 => Surface::False,
        _ => Surface::Var(name(rng)),
    };
    if budget < 2 {
        return leaf(rng);
    }
    let rest = budget - 1;
    match weighted(
        rng,
        &[
            1,
            3,
            if rest >= 2 { 3 } else { 0 },
            if rest >= 3 { 2 } else { 0 },
        ],
    ) {
        Some(1) => {
            let ann = rng.gen_bool(0.6).then(|| surface_type(rng, 2));
            Surface::lam(name(rng), ann, surface(rng, rest))
        }
        Some(2) => {
            let left = rng.gen_range(1..rest);
            Surface::app(surface(rng, left), surface(rng, rest - left))
        }
        Some(3) => {
            let c = rng.gen_range(1..rest - 1);
            let t = rng.gen_range(1..rest - c);
            Surface::ite(surface(rng, c), surface(rng, t), surface(rng, rest - c - t))
        }
        _ => leaf(rng),
    }
}
