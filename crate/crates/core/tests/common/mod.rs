//! Generators and property suites shared by the integration tests.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use hom_core::solver::Enumeration;
use hom_core::ssts::{Rule, Ssts, Step, Word};
use hom_core::syntax::{parse_closed_term, print_term, Style};
use hom_core::term::{contract_at, is_normal, redex_paths, substitute};
use hom_core::{normalize, type_check, Derivation, SimpleType, Term, TypeEnv};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub const FUEL: u64 = 1_000_000;

pub fn o() -> SimpleType {
    SimpleType::Atom
}

pub fn arr(a: SimpleType, b: SimpleType) -> SimpleType {
    SimpleType::arrow(a, b)
}

/// `x : ι, f : ι → ι, g : ι → ι → ι`, outermost first.
pub fn base_env() -> TypeEnv {
    TypeEnv::from_binders([o(), arr(o(), o()), arr(o(), arr(o(), o()))])
}

pub fn small_types() -> Vec<SimpleType> {
    let oo = arr(o(), o());
    vec![
        o(),
        oo.clone(),
        arr(o(), oo.clone()),
        arr(oo.clone(), oo.clone()),
    ]
}

/// Random well-typed terms with redexes: applications of normal inhabitants
/// of `A → T` to terms of type `A`, nested a few levels.
pub struct TermGen {
    rng: StdRng,
    cache: HashMap<(Vec<SimpleType>, SimpleType), (Enumeration, Vec<u128>)>,
}

impl TermGen {
    pub fn new(seed: u64) -> TermGen {
        TermGen {
            rng: StdRng::seed_from_u64(seed),
            cache: HashMap::new(),
        }
    }

    pub fn rng(&mut self) -> &mut StdRng {
        &mut self.rng
    }

    pub fn pick<T: Clone>(&mut self, items: &[T]) -> T {
        items[self.rng.random_range(0..items.len())].clone()
    }

    /// A random β-normal inhabitant of size at most 7, if any.
    pub fn normal(&mut self, env: &TypeEnv, ty: &SimpleType) -> Option<Term> {
        let key = (env.binders().to_vec(), ty.clone());
        let (e, counts) = self.cache.entry(key).or_insert_with(|| {
            let mut e = Enumeration::new(env, ty);
            let counts = (0..=7).map(|s| e.count(s)).collect();
            (e, counts)
        });
        let total: u128 = counts.iter().sum();
        if total == 0 {
            return None;
        }
        let mut index = self.rng.random_range(0..total);
        for (size, &c) in counts.iter().enumerate() {
            if index < c {
                return Some(e.get(size, index));
            }
            index -= c;
        }
        unreachable!()
    }

    pub fn term(&mut self, env: &TypeEnv, ty: &SimpleType, depth: usize) -> Term {
        if depth == 0 || self.rng.random_bool(0.35) {
            if let Some(t) = self.normal(env, ty) {
                return t;
            }
        }
        let a = self.pick(&small_types());
        let f = self.term(env, &arr(a.clone(), ty.clone()), depth.saturating_sub(1));
        let x = self.term(env, &a, depth.saturating_sub(1));
        Term::app(f, x)
    }
}

pub fn typed_term(seed: u64) -> (SimpleType, Term) {
    let mut g = TermGen::new(seed);
    let ty = g.pick(&small_types());
    let t = g.term(&base_env(), &ty, 3);
    (ty, t)
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    })
}

fn run<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    runner(cases)
        .run(&strategy, test)
        .map_err(|e| e.to_string())
}

pub fn subject_reduction(cases: u32) -> Result<(), String> {
    let env = base_env();
    run(cases, any::<u64>(), |seed| {
        let (ty, t) = typed_term(seed);
        prop_assert!(
            type_check(&env, &t, &ty),
            "generator produced ill-typed {t}"
        );
        for p in redex_paths(&t) {
            let s = contract_at(&t, &p).expect("path from redex_paths");
            prop_assert!(
                type_check(&env, &s, &ty),
                "{t} contracted at {p:?} to ill-typed {s}"
            );
        }
        let nf = normalize(&t, FUEL).normal().expect("typed terms normalize");
        prop_assert!(type_check(&env, &nf, &ty));
        Ok(())
    })
}

pub fn confluence(cases: u32) -> Result<(), String> {
    run(
        cases,
        (any::<u64>(), any::<usize>(), any::<usize>()),
        |(seed, i, j)| {
            let (_, t) = typed_term(seed);
            let paths = redex_paths(&t);
            let nf = normalize(&t, FUEL).normal().expect("typed terms normalize");
            if paths.is_empty() {
                prop_assert_eq!(&nf, &t);
                return Ok(());
            }
            let a = contract_at(&t, &paths[i % paths.len()]).unwrap();
            let b = contract_at(&t, &paths[j % paths.len()]).unwrap();
            prop_assert_eq!(normalize(&a, FUEL).normal(), Some(nf.clone()));
            prop_assert_eq!(normalize(&b, FUEL).normal(), Some(nf));
            Ok(())
        },
    )
}

pub fn normalize_idempotent(cases: u32) -> Result<(), String> {
    run(cases, any::<u64>(), |seed| {
        let (_, t) = typed_term(seed);
        let nf = normalize(&t, FUEL).normal().expect("typed terms normalize");
        prop_assert!(is_normal(&nf));
        let again = normalize(&nf, FUEL);
        prop_assert_eq!(again.steps(), 0);
        prop_assert_eq!(again.normal(), Some(nf));
        Ok(())
    })
}

/// `M[x := N]` keeps the type of `M`, and substituting before or after
/// normalizing agrees with contracting `(λx.M) N`.
pub fn substitution_typing(cases: u32) -> Result<(), String> {
    let env = base_env();
    run(cases, any::<u64>(), |seed| {
        let mut g = TermGen::new(seed);
        let a = g.pick(&small_types());
        let b = g.pick(&small_types());
        let inner = env.extended(a.clone());
        let body = g.term(&inner, &b, 2);
        let arg = g.term(&env, &a, 2);
        let s = substitute(&body, 0, &arg);
        prop_assert!(type_check(&env, &s, &b), "{body}[0 := {arg}] = {s}");
        let via_redex = normalize(&Term::app(Term::lam(body.clone()), arg.clone()), FUEL).normal();
        let direct = normalize(&s, FUEL).normal();
        prop_assert_eq!(&direct, &via_redex);
        let nb = normalize(&body, FUEL).normal().unwrap();
        let na = normalize(&arg, FUEL).normal().unwrap();
        prop_assert_eq!(normalize(&substitute(&nb, 0, &na), FUEL).normal(), direct);
        Ok(())
    })
}

pub fn print_parse_round_trip(cases: u32) -> Result<(), String> {
    run(cases, any::<u64>(), |seed| {
        let (_, t) = typed_term(seed);
        let closed = Term::lams(3, t);
        let text = print_term(&closed, Style::Named);
        let back =
            parse_closed_term(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        prop_assert_eq!(back, closed);
        Ok(())
    })
}

/// Every term of size `size` in a context of `depth` variables.
fn all_terms(size: usize, depth: usize, out: &mut Vec<Term>) {
    if size == 0 {
        return;
    }
    if size == 1 {
        out.extend((0..depth).map(Term::Var));
        return;
    }
    let mut bodies = Vec::new();
    all_terms(size - 1, depth + 1, &mut bodies);
    out.extend(bodies.into_iter().map(Term::lam));
    for left in 1..size - 1 {
        let mut fs = Vec::new();
        all_terms(left, depth, &mut fs);
        if fs.is_empty() {
            continue;
        }
        let mut xs = Vec::new();
        all_terms(size - 1 - left, depth, &mut xs);
        for f in &fs {
            for x in &xs {
                out.push(Term::app(f.clone(), x.clone()));
            }
        }
    }
}

/// Brute-force count of normal inhabitants: generate every term, filter.
pub fn oracle_count(env: &TypeEnv, ty: &SimpleType, size: usize) -> u128 {
    let mut terms = Vec::new();
    all_terms(size, env.len(), &mut terms);
    terms
        .iter()
        .filter(|t| is_normal(t) && type_check(env, t, ty))
        .count() as u128
}

pub fn enumerator_sound(cases: u32) -> Result<(), String> {
    let types = {
        let mut ts = small_types();
        let oo = arr(o(), o());
        ts.push(arr(arr(o(), oo.clone()), oo.clone()));
        ts.push(arr(oo.clone(), o()));
        ts
    };
    let envs = [
        TypeEnv::empty(),
        TypeEnv::from_binders([o()]),
        base_env(),
        TypeEnv::from_binders([arr(o(), o()), o()]),
    ];
    run(
        cases,
        (0..types.len(), 0..envs.len(), 1usize..=6),
        |(ti, ei, size)| {
            let (ty, env) = (&types[ti], &envs[ei]);
            let mut e = Enumeration::new(env, ty);
            let n = e.count(size);
            let terms = e.slice(size, 0..n);
            let mut seen = HashSet::new();
            for t in &terms {
                prop_assert_eq!(t.size(), size);
                prop_assert!(is_normal(t), "{t} not normal");
                prop_assert!(type_check(env, t, ty), "{t} not typed at {ty}");
                prop_assert!(seen.insert(t.clone()), "{t} repeated");
            }
            prop_assert_eq!(n, oracle_count(env, ty, size));
            Ok(())
        },
    )
}

/// A random system with at most three rules over an alphabet of at most
/// four symbols that admits `0ⁿ⁺¹ ⇒* 1ⁿ⁺¹` for some `1 ≤ n ≤ 4`, built by
/// walking backwards from `1ⁿ⁺¹`.
pub fn planted_system(seed: u64) -> (Ssts, usize, Derivation) {
    let mut rng = StdRng::seed_from_u64(seed);
    loop {
        let k = rng.random_range(2..=4u32);
        let n = rng.random_range(1..=4usize);
        let len = n + 1;
        let mut word = vec![1u32; len];
        let mut rules: Vec<Rule> = Vec::new();
        let mut steps = Vec::new();
        for _ in 0..12 {
            if word.iter().all(|&s| s == 0) {
                break;
            }
            let i = rng.random_range(0..n);
            let (c, d) = (word[i], word[i + 1]);
            let existing: Vec<usize> = (0..rules.len())
                .filter(|&r| rules[r].c == c && rules[r].d == d)
                .collect();
            let r = if !existing.is_empty() && (rules.len() == 3 || rng.random_bool(0.5)) {
                existing[rng.random_range(0..existing.len())]
            } else if rules.len() < 3 {
                let bias = |rng: &mut StdRng| {
                    if rng.random_bool(0.6) {
                        0
                    } else {
                        rng.random_range(0..k)
                    }
                };
                rules.push(Rule::new(bias(&mut rng), bias(&mut rng), c, d));
                rules.len() - 1
            } else {
                continue;
            };
            word[i] = rules[r].a;
            word[i + 1] = rules[r].b;
            steps.push(Step::new(r + 1, i + 1));
        }
        if !word.iter().all(|&s| s == 0) || rules.is_empty() {
            continue;
        }
        steps.reverse();
        let system = Ssts::new(k, rules).expect("symbols below k");
        let d = Derivation::new(steps);
        debug_assert!(hom_core::ssts::check_derivation(
            &system,
            &Word::zeros(len).unwrap(),
            &d,
            &Word::ones(len).unwrap()
        ));
        return (system, n, d);
    }
}

/// Any system with at most three rules over at most four symbols.
pub fn random_system(seed: u64) -> Ssts {
    let mut rng = StdRng::seed_from_u64(seed);
    let k = rng.random_range(2..=4u32);
    let count = rng.random_range(1..=3);
    let rules = (0..count)
        .map(|_| {
            Rule::new(
                rng.random_range(0..k),
                rng.random_range(0..k),
                rng.random_range(0..k),
                rng.random_range(0..k),
            )
        })
        .collect();
    Ssts::new(k, rules).expect("symbols below k")
}
