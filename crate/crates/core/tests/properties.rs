use proptest::prelude::*;

use stlc_core::denote::{
    denot_equal, enumerate, environments, position, sem_eval, sem_of_domain, SemVal, DEFAULT_LIMIT,
};
use stlc_core::eval::{eval, Env, Fuel};
use stlc_core::gen::{closed_sample, gen_surface, sample, GenOptions};
use stlc_core::nbe::{classify, normalize};
use stlc_core::oracle::{beta, nf, shift, subst, whnf_oracle, DEFAULT_MAX_STEPS};
use stlc_core::parser::{parse_term, print_term};
use stlc_core::syntax::{resolve, unresolve, Ctx, Term, Ty};
use stlc_core::typecheck::{check, elaborate, infer};
use stlc_core::whnf::{is_value_shape, whnf_of};

fn arb_ty() -> impl Strategy<Value = Ty> {
    let leaf = Just(Ty::Bool);
    leaf.prop_recursive(3, 8, 2, |inner| {
        (inner.clone(), inner).prop_map(|(a, b)| Ty::arrow(a, b))
    })
}

/// Arbitrary (possibly ill-typed) terms closed at `scope`.
fn arb_term(scope: usize) -> BoxedStrategy<Term> {
    arb_term_depth(scope, 4)
}

fn arb_term_depth(scope: usize, depth: u32) -> BoxedStrategy<Term> {
    let mut leaves = vec![Just(Term::True).boxed(), Just(Term::False).boxed()];
    if scope > 0 {
        leaves.push((0..scope).prop_map(Term::Var).boxed());
    }
    let leaf = proptest::strategy::Union::new(leaves).boxed();
    if depth == 0 {
        return leaf;
    }
    let sub = || arb_term_depth(scope, depth - 1);
    prop_oneof![
        2 => leaf,
        1 => (proptest::option::of(arb_ty()), arb_term_depth(scope + 1, depth - 1))
            .prop_map(|(ann, body)| Term::lam(ann, body)),
        1 => (sub(), sub()).prop_map(|(f, a)| Term::app(f, a)),
        1 => (sub(), sub(), sub()).prop_map(|(c, t, e)| Term::ite(c, t, e)),
    ]
    .boxed()
}

fn arb_ctx() -> impl Strategy<Value = Ctx> {
    proptest::collection::vec(arb_ty(), 0..4).prop_map(|tys| {
        tys.into_iter()
            .enumerate()
            .map(|(i, ty)| (format!("v{i}"), ty))
            .collect()
    })
}

proptest! {
    #[test]
    fn resolve_inverts_unresolve((ctx, term) in arb_ctx().prop_flat_map(|ctx| {
        let n = ctx.len();
        (Just(ctx), arb_term(n))
    })) {
        let named = unresolve(&term, &ctx).unwrap();
        prop_assert_eq!(resolve(&named, &ctx).unwrap(), term);
    }

    #[test]
    fn resolve_stays_in_scope(seed in any::<u64>()) {
        let ctx = Ctx::new().with("x", Ty::Bool).with("f", Ty::arrow(Ty::Bool, Ty::Bool));
        let surface = gen_surface(seed, 30);
        if let Ok(term) = resolve(&surface, &ctx) {
            prop_assert!(term.is_closed_at(ctx.len()));
        }
    }

    #[test]
    fn printing_reparses(seed in any::<u64>(), budget in 1usize..40) {
        let term = gen_surface(seed, budget);
        let printed = print_term(&term);
        prop_assert_eq!(parse_term(&printed), Ok(term), "{}", printed);
    }

    #[test]
    fn substituting_into_a_shifted_term_is_the_identity(t in arb_term(3), s in arb_term(3)) {
        let shifted = shift(1, 0, &t).unwrap();
        prop_assert_eq!(beta(&shifted, &s).unwrap(), t.clone());
        prop_assert_eq!(subst(0, &s, &shifted).unwrap(), shifted);
    }

    #[test]
    fn shift_round_trips(t in arb_term(4), k in 0usize..3) {
        let up = shift(k as isize + 1, k, &t).unwrap();
        prop_assert_eq!(shift(-(k as isize) - 1, k, &up).unwrap(), t);
    }
}

const SEED: u64 = 0x5eed;

#[test]
fn normalization_matches_oracle_and_is_normal() {
    for i in 0..600 {
        let s = sample(SEED, i, 40, GenOptions::default());
        let mut fuel = Fuel::default();
        let normal = normalize(&s.ctx, &s.term, &mut fuel).unwrap();
        assert_eq!(
            normal,
            nf(&s.term, DEFAULT_MAX_STEPS).unwrap(),
            "{}",
            s.term
        );
        assert!(classify(&normal).is_normal());
        assert_eq!(
            normalize(&s.ctx, &normal, &mut Fuel::default()),
            Ok(normal.clone())
        );
        let ty = infer(&s.ctx, &s.term).unwrap();
        assert_eq!(ty, s.ty);
        assert_eq!(check(&s.ctx, &normal, &ty), Ok(()));
    }
}

#[test]
fn wide_corpus_also_normalizes() {
    let options = GenOptions {
        wide_arguments: true,
    };
    for i in 0..300 {
        let s = sample(SEED, i, 40, options);
        let normal = normalize(&s.ctx, &s.term, &mut Fuel::default()).unwrap();
        assert_eq!(normal, nf(&s.term, DEFAULT_MAX_STEPS).unwrap());
    }
}

#[test]
fn typing_is_stable_under_weakening() {
    for i in 0..300 {
        let s = sample(SEED, i, 30, GenOptions::default());
        let ty = infer(&s.ctx, &s.term).unwrap();
        let mut bigger = Ctx::new()
            .with("w0", Ty::arrow(Ty::Bool, Ty::Bool))
            .with("w1", Ty::Bool);
        for (name, ty) in s.ctx.entries() {
            bigger.push(name.clone(), ty.clone());
        }
        assert_eq!(infer(&bigger, &s.term), Ok(ty));
    }
}

#[test]
fn check_agrees_with_infer_on_annotated_terms() {
    let types = [
        Ty::Bool,
        Ty::arrow(Ty::Bool, Ty::Bool),
        Ty::arrow(Ty::arrow(Ty::Bool, Ty::Bool), Ty::Bool),
    ];
    for i in 0..200 {
        let s = sample(SEED, i, 30, GenOptions::default());
        let inferred = infer(&s.ctx, &s.term).unwrap();
        for ty in &types {
            assert_eq!(check(&s.ctx, &s.term, ty).is_ok(), &inferred == ty);
        }
    }
}

#[test]
fn elaboration_only_adds_annotations() {
    for i in 0..200 {
        let s = sample(SEED, i, 30, GenOptions::default());
        let erased = s.term.erase();
        let elaborated = elaborate(&s.ctx, &erased, &s.ty).unwrap();
        assert!(elaborated.is_annotated());
        assert_eq!(elaborated.erase(), erased);
    }
}

#[test]
fn weak_head_normalization_matches_oracle() {
    for i in 0..500 {
        let s = closed_sample(SEED, i, 40, GenOptions::default());
        let whnf = whnf_of(&s.term, &mut Fuel::default()).unwrap();
        assert!(is_value_shape(&whnf));
        assert!(whnf.is_closed_at(0));
        assert_eq!(
            whnf,
            whnf_oracle(&s.term, DEFAULT_MAX_STEPS).unwrap(),
            "{}",
            s.term
        );
    }
}

#[test]
fn evaluation_is_deterministic_and_levels_are_bounded() {
    for i in 0..300 {
        let s = sample(SEED, i, 40, GenOptions::default());
        let env = stlc_core::nbe::initial_env(s.ctx.len());
        let a = eval(&env, &s.term, &mut Fuel::default()).unwrap();
        let b = eval(&env, &s.term, &mut Fuel::default()).unwrap();
        assert_eq!(a, b);
        assert!(a.max_level().is_none_or(|k| k < s.ctx.len()));
    }
}

#[test]
fn denotations_are_sound() {
    let mut checked = 0;
    for i in 0..400 {
        let s = sample(SEED, i, 25, GenOptions::default());
        let normal = normalize(&s.ctx, &s.term, &mut Fuel::default()).unwrap();
        match denot_equal(&s.ctx, &s.ty, &s.term, &normal, DEFAULT_LIMIT) {
            Ok(equal) => {
                assert!(equal, "{}", s.term);
                checked += 1;
            }
            Err(stlc_core::Error::TypeTooLarge { .. }) => {}
            Err(err) => panic!("{err}"),
        }
    }
    assert!(checked > 300, "only {checked} samples were enumerable");
}

#[test]
fn value_denotation_matches_term_denotation() {
    for i in 0..300 {
        let s = closed_sample(SEED, i, 25, GenOptions::default());
        let value = eval(&Env::new(), &s.term, &mut Fuel::default()).unwrap();
        let Ok(expected) = sem_eval(&Ctx::new(), &[], &s.term, DEFAULT_LIMIT) else {
            continue;
        };
        assert_eq!(
            sem_of_domain(&value, &s.ty, DEFAULT_LIMIT),
            Ok(expected),
            "{}",
            s.term
        );
    }
}

#[test]
fn constructors_are_all_generated() {
    let mut counts = [0usize; 6];
    let total = 5000;
    for i in 0..total {
        let s = sample(20240601, i, 40, GenOptions::default());
        let mut seen = [false; 6];
        visit(&s.term, &mut seen);
        for (count, seen) in counts.iter_mut().zip(seen) {
            *count += usize::from(seen);
        }
    }
    for count in counts {
        assert!(count * 100 >= total as usize, "{counts:?}");
    }

    fn visit(term: &Term, seen: &mut [bool; 6]) {
        match term {
            Term::Var(_) => seen[0] = true,
            Term::Lam(_, b) => {
                seen[1] = true;
                visit(b, seen);
            }
            Term::App(f, a) => {
                seen[2] = true;
                visit(f, seen);
                visit(a, seen);
            }
            Term::True => seen[3] = true,
            Term::False => seen[4] = true,
            Term::If(c, t, e) => {
                seen[5] = true;
                visit(c, seen);
                visit(t, seen);
                visit(e, seen);
            }
        }
    }
}

/// Direct tabulating interpreter: every lambda becomes a table as soon as
/// it is evaluated.
fn eager(env: &mut Vec<(SemVal, Ty)>, term: &Term) -> (SemVal, Ty) {
    match term {
        Term::Var(i) => env[env.len() - 1 - i].clone(),
        Term::True => (SemVal::Bool(true), Ty::Bool),
        Term::False => (SemVal::Bool(false), Ty::Bool),
        Term::Lam(ann, body) => {
            let dom = ann.clone().unwrap();
            let mut entries = Vec::new();
            let mut cod = Ty::Bool;
            for z in enumerate(&dom, DEFAULT_LIMIT).unwrap() {
                env.push((z, dom.clone()));
                let (v, ty) = eager(env, body);
                env.pop();
                entries.push(v);
                cod = ty;
            }
            (SemVal::Table(entries), Ty::arrow(dom, cod))
        }
        Term::App(f, a) => {
            let (SemVal::Table(entries), Ty::Arrow(dom, cod)) = eager(env, f) else {
                panic!()
            };
            let (arg, _) = eager(env, a);
            (
                entries[position(&arg, &dom).unwrap()].clone(),
                (*cod).clone(),
            )
        }
        Term::If(c, t, e) => match eager(env, c).0 {
            SemVal::Bool(true) => eager(env, t),
            _ => eager(env, e),
        },
    }
}

#[test]
fn lazy_denotations_match_eager_tabulation() {
    let mut checked = 0;
    for i in 0..300 {
        let s = sample(SEED, i, 20, GenOptions::default());
        let Ok(envs) = environments(&s.ctx, DEFAULT_LIMIT) else {
            continue;
        };
        for env in envs.iter().take(8) {
            let Ok(lazy) = sem_eval(&s.ctx, env, &s.term, DEFAULT_LIMIT) else {
                continue;
            };
            let mut typed: Vec<_> = env
                .iter()
                .rev()
                .cloned()
                .zip(s.ctx.types().cloned())
                .collect();
            assert_eq!(eager(&mut typed, &s.term).0, lazy, "{}", s.term);
            checked += 1;
        }
    }
    assert!(checked > 500, "{checked}");
}
