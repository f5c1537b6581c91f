//! End-to-end acceptance checks, one line per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use anyhow::{ensure, Context, Result};
use hom_core::gadgets::{
    build_gadget, declared_type, gamma_env, position_gadget, projection, ExtSymbol, GadgetKind,
    Role,
};
use hom_core::itypes::{itype_derivable, witness_judgments, IType};
use hom_core::reduction::{compile, ConstraintLabel, MatchingInstance};
use hom_core::solver::{
    count_normal_inhabitants, enumerate_normal_inhabitants, solve_bounded, EnumBudget, SolveOutcome,
};
use hom_core::ssts::{decide_for_n, reachable_set, SearchConfig};
use hom_core::syntax::{parse_closed_term, parse_ssts, parse_term, print_term, Style};
use hom_core::verifier::{default_fuel, diagnose, verify_solution, Verdict};
use hom_core::witness::{
    classify_shape, gamma_names, semantic_rows, solution_term, RowPart, ShapeClass,
};
use hom_core::{
    normalize, type_check, type_order, Derivation, SimpleType, Ssts, Step, Term, TypeEnv, Word,
};

#[path = "../../core/tests/common/mod.rs"]
mod common;

const FUEL: u64 = 10_000_000;

const EXAMPLE_RULES: &str = "0 0 => 2 2\n0 2 => 1 1\n2 0 => 1 1\n";
const NEGATIVE_RULES: &str = "0 0 => 1 0\n0 1 => 1 1\n";

fn example() -> Ssts {
    parse_ssts(EXAMPLE_RULES).unwrap()
}

fn example_derivation() -> Derivation {
    Derivation::new(vec![Step::new(1, 2), Step::new(2, 1), Step::new(3, 3)])
}

fn negative() -> Ssts {
    parse_ssts(NEGATIVE_RULES).unwrap()
}

fn single() -> Ssts {
    parse_ssts("0 0 => 1 1\n").unwrap()
}

fn nf(t: &Term) -> Result<Term> {
    normalize(t, FUEL)
        .normal()
        .context("no normal form within fuel")
}

fn scratch(name: &str, contents: &str) -> Result<PathBuf> {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents)?;
    Ok(path)
}

fn hom(args: &[&str]) -> Result<(i32, String)> {
    let out = Command::new(env!("CARGO_BIN_EXE_hom"))
        .args(args)
        .output()?;
    Ok((
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout)?,
    ))
}

fn positive_rewriting() -> Result<()> {
    let file = scratch("example.rules", EXAMPLE_RULES)?;
    let file = file.to_str().unwrap();
    let (code, out) = hom(&["ssts", "search", file, "--max-n", "4"])?;
    ensure!(code == 0, "exit code {code}");
    ensure!(
        out == "n = 4\n0000 ⇒ 0220 ⇒ 1120 ⇒ 1111\nsteps: [(1,2), (2,1), (3,3)]\n",
        "unexpected output {out:?}"
    );
    let (code, out) = hom(&["ssts", "search", file, "--max-n", "3"])?;
    ensure!(
        code == 1 && out.trim() == "none for n ≤ 3",
        "n ≤ 3: {code} {out:?}"
    );
    for n in 1..=3 {
        ensure!(
            decide_for_n(&example(), n)?.is_none(),
            "derivation at n = {n}"
        );
    }
    Ok(())
}

fn negative_rewriting() -> Result<()> {
    let s = negative();
    for n in 1..=6 {
        ensure!(decide_for_n(&s, n)?.is_none(), "derivation at n = {n}");
    }
    for n in 1..=5 {
        for w in reachable_set(&s, &Word::zeros(n)?, SearchConfig::default())? {
            ensure!(w.last() == 0, "{w} reachable from 0^{n}");
        }
    }
    Ok(())
}

fn round_trip() -> Result<()> {
    let cases = [
        (single(), 1, Derivation::new(vec![Step::new(1, 1)])),
        (example(), 3, example_derivation()),
    ];
    for (s, n, d) in cases {
        let inst = compile(&s)?;
        ensure!(inst.is_well_typed(), "instance ill-typed");
        let m = solution_term(&s, n, &d)?;
        let verdict = verify_solution(&inst, &m, default_fuel(&inst, &m));
        ensure!(verdict == Verdict::Ok, "n = {n}: {verdict}");
    }
    // the same pipeline through the command line
    let rules = scratch("example-rt.rules", EXAMPLE_RULES)?;
    let inst = rules.with_extension("json");
    let (code, _) = hom(&[
        "compile",
        rules.to_str().unwrap(),
        "-o",
        inst.to_str().unwrap(),
    ])?;
    ensure!(code == 0, "compile exit {code}");
    let (code, term) = hom(&["witness", rules.to_str().unwrap(), "--n", "3"])?;
    ensure!(code == 0, "witness exit {code}");
    let term_file = scratch("example-rt.term", &term)?;
    let (code, out) = hom(&[
        "verify",
        inst.to_str().unwrap(),
        term_file.to_str().unwrap(),
    ])?;
    ensure!(code == 0 && out.trim() == "ok", "verify: {code} {out:?}");
    Ok(())
}

fn delta_lemma() -> Result<()> {
    for k in 2..=6u32 {
        let syms = ExtSymbol::all(k);
        for &i in &syms {
            let d = build_gadget(GadgetKind::Delta(i), k)?;
            for &j in &syms {
                let want = if j == ExtSymbol::Top {
                    i
                } else {
                    ExtSymbol::Bot
                };
                let got = nf(&Term::app(d.clone(), projection(j, k)?))?;
                ensure!(got == projection(want, k)?, "δ{i} π{j} over K = {}", k - 1);
            }
        }
    }
    Ok(())
}

fn rule_gadget() -> Result<()> {
    let k = 6;
    let g = build_gadget(GadgetKind::GRule(hom_core::Rule::new(1, 2, 4, 5)), k)?;
    let at = |j: usize, i: usize, input: u32| -> Result<Term> {
        let ctrl = build_gadget(position_gadget(j, i), k)?;
        nf(&Term::apps(
            g.clone(),
            [ctrl, projection(ExtSymbol::Base(input), k)?],
        ))
    };
    // applied at position 2 of a word ?45?: positions 1..4 read 0, 4, 5, 3
    for (i, input, out) in [(1, 0, 0), (2, 4, 1), (3, 5, 2), (4, 3, 3)] {
        ensure!(
            at(2, i, input)? == projection(ExtSymbol::Base(out), k)?,
            "position {i}"
        );
    }
    ensure!(
        at(1, 1, 0)? == projection(ExtSymbol::Bot, k)?,
        "illegal application"
    );
    Ok(())
}

fn shape_theorem() -> Result<()> {
    let s = example();
    let text =
        "\\r1 r2 r3 z0 z1 zs p1. zs p1 (\\p2. zs p2 (\\p3. z0 p3 (r1 p2 (r2 p1 (r3 p3 z1)))))";
    let m = parse_closed_term(text)?;
    ensure!(
        m == solution_term(&s, 3, &example_derivation())?,
        "witness differs from the example"
    );
    let d = diagnose(&s, &m, FUEL)?;
    let f = d.row(ConstraintLabel::FLine);
    let h = d.row(ConstraintLabel::HLine);
    ensure!(
        f.passed() && f.left == Some(Term::identity()),
        "F-line: {f}"
    );
    ensure!(
        h.passed() && h.left == Some(projection(ExtSymbol::Dollar, 3)?),
        "H-line: {h}"
    );
    let n = parse_term("r1 p2 (r2 p1 (r3 p3 z1))")?.to_term(&gamma_names(3, 3))?;
    ensure!(
        classify_shape(&n, 3, 3) == ShapeClass::InQ(3),
        "N not in Q3"
    );
    let (_, body) = m.strip_lams();
    ensure!(
        classify_shape(body, 1, 3) == ShapeClass::InR(1),
        "M not in R1"
    );

    let bad = parse_closed_term("\\r1 r2 z0 z1 zs p1. zs p1 (\\p2. z0 p2 (r1 p1 (r2 p2 z1)))")?;
    let d = diagnose(&negative(), &bad, FUEL)?;
    ensure!(
        d.row(ConstraintLabel::FLine).passed(),
        "invalid example fails the F-line"
    );
    ensure!(
        d.row(ConstraintLabel::HLine).passed(),
        "invalid example fails the H-line"
    );
    let g_fail = ConstraintLabel::ALL
        .iter()
        .filter(|l| !l.is_shape())
        .any(|&l| !d.row(l).passed());
    ensure!(g_fail, "invalid example passes every G-row");
    Ok(())
}

fn semantics_rows() -> Result<()> {
    use ExtSymbol::Dollar;
    let (z, o) = (ExtSymbol::ZERO, ExtSymbol::ONE);
    let s = example();
    let rows = semantic_rows(&s, 3, &example_derivation())?;
    let expected: Vec<(RowPart, Vec<ExtSymbol>)> = vec![
        (RowPart::Rewrite, vec![o, z, z, z, z]),
        (RowPart::Expand(3), vec![Dollar, z, z, z, o]),
        (RowPart::Expand(2), vec![Dollar, z, z, o]),
        (RowPart::Expand(1), vec![Dollar, z, o]),
    ];
    let mut it = rows.iter();
    for (part, targets) in expected {
        for (i, want) in targets.into_iter().enumerate() {
            let row = it.next().context("too few rows")?;
            ensure!(row.part == part && row.index == i, "row order at {row}");
            let (lhs, _) = row.equation(&s);
            ensure!(
                nf(&lhs)? == projection(want, 3)?,
                "{part} ({i}) does not give π{want}"
            );
        }
    }
    ensure!(it.next().is_none(), "extra rows");
    Ok(())
}

fn typing() -> Result<()> {
    let empty = TypeEnv::empty();
    for (rules, k) in [(1usize, 2u32), (3, 3), (2, 6)] {
        let gamma = gamma_env(2, rules, k)?;
        let cases = [
            (GadgetKind::HStar, Role::ZStar),
            (GadgetKind::HZero, Role::ZZero),
            (GadgetKind::HRule, Role::Rule(1)),
            (GadgetKind::GStar, Role::ZStar),
            (GadgetKind::GZero, Role::ZZero),
            (
                GadgetKind::GRule(hom_core::Rule::new(0, 1, 1, 0)),
                Role::Rule(rules),
            ),
        ];
        for (kind, role) in cases {
            let ty = gamma.type_of(role).context("role")?;
            ensure!(declared_type(kind, k) == *ty, "{kind} declared type");
            ensure!(
                type_check(&empty, &build_gadget(kind, k)?, ty),
                "⊬ {kind} : Γ({role})"
            );
        }
    }
    for seed in 0..20 {
        let s = common::random_system(seed);
        let inst = compile(&s)?;
        ensure!(inst.is_well_typed(), "seed {seed}: instance ill-typed");
        ensure!(
            type_order(&inst.sigma) == 6,
            "seed {seed}: order {}",
            type_order(&inst.sigma)
        );
    }
    ensure!(
        type_order(&compile(&example())?.sigma) == 6,
        "example order"
    );
    Ok(())
}

fn combo() -> MatchingInstance {
    let pi = |i: usize| Term::lams(3, Term::Var(3 - i));
    let g = parse_closed_term("\\h. \\x y z. h y z x").unwrap();
    let f = Term::lams(
        2,
        Term::apps(
            Term::Var(0),
            [
                Term::apps(Term::Var(1), [g, pi(1)]),
                Term::lam(Term::apps(Term::Var(2), [Term::identity(), Term::Var(0)])),
            ],
        ),
    );
    let n = Term::lam(Term::apps(Term::Var(0), [pi(3), Term::identity()]));
    let k = SimpleType::first_order(3);
    let kk = SimpleType::arrow(k.clone(), k.clone());
    let sigma = SimpleType::arrows([kk.clone(), k.clone()], k.clone());
    let r = SimpleType::arrows([k, kk], SimpleType::Atom);
    MatchingInstance::new(f, n, sigma, SimpleType::arrow(r, SimpleType::Atom))
}

fn matching_pedagogy() -> Result<()> {
    let inst = combo();
    ensure!(inst.is_well_typed(), "combo instance ill-typed");
    let verdict = |src: &str| verify_solution(&inst, &parse_closed_term(src).unwrap(), 100_000);
    for good in ["\\f s. f (f s)", "\\f s. f (f (f (f (f s))))"] {
        ensure!(verdict(good) == Verdict::Ok, "{good} rejected");
    }
    for bad in ["\\f s. \\x y z. z", "\\f s. \\x y z. f s z z z"] {
        ensure!(
            matches!(verdict(bad), Verdict::EquivFail(_)),
            "{bad}: {}",
            verdict(bad)
        );
    }
    Ok(())
}

fn solver() -> Result<()> {
    let budget = EnumBudget::default();
    let inst = compile(&single())?;
    let SolveOutcome::Found { term, .. } = solve_bounded(&inst, budget)? else {
        anyhow::bail!("no solution for 00 ⇒ 11");
    };
    ensure!(
        verify_solution(&inst, &term, FUEL) == Verdict::Ok,
        "{} does not verify",
        print_term(&term, Style::Named)
    );
    let inst = compile(&negative())?;
    let outcome = solve_bounded(&inst, budget)?;
    let total: u128 = count_normal_inhabitants(&TypeEnv::empty(), &inst.sigma, budget.max_size)
        .iter()
        .sum();
    ensure!(
        outcome == SolveOutcome::NotFound { checked: total },
        "negative instance: {outcome:?}, {total} candidates in scope"
    );
    Ok(())
}

fn intersection_mirror() -> Result<()> {
    let s = example();
    let js = witness_judgments(&s, 3, &example_derivation())?;
    ensure!(js.len() == 17, "{} judgments", js.len());
    for j in &js {
        ensure!(itype_derivable(&j.judgment)?, "not derivable: {j}");
        let target = j.judgment.ty.clone();
        for other in ExtSymbol::all(3)
            .into_iter()
            .map(IType::sym)
            .filter(|t| *t != target)
        {
            let mut bad = j.judgment.clone();
            bad.ty = other.clone();
            ensure!(!itype_derivable(&bad)?, "derivable at {other}: {j}");
        }
    }
    Ok(())
}

type Suite = fn(u32) -> Result<(), String>;

fn kernel_properties() -> Result<()> {
    let suites: [(&str, Suite); 6] = [
        ("subject reduction", common::subject_reduction),
        ("confluence", common::confluence),
        ("normalize idempotence", common::normalize_idempotent),
        ("substitution typing", common::substitution_typing),
        ("print/parse", common::print_parse_round_trip),
        ("enumerator", common::enumerator_sound),
    ];
    for (name, suite) in suites {
        suite(500).map_err(|e| anyhow::anyhow!("{name}: {e}"))?;
    }
    let ty = SimpleType::arrows([SimpleType::Atom, SimpleType::Atom], SimpleType::Atom);
    let budget = EnumBudget {
        max_size: 3,
        ..EnumBudget::default()
    };
    let terms = enumerate_normal_inhabitants(&TypeEnv::empty(), &ty, budget)?;
    let want = [
        parse_closed_term("\\x y. y")?,
        parse_closed_term("\\x y. x")?,
    ];
    ensure!(terms == want, "o -> o -> o up to size 3: {terms:?}");
    Ok(())
}

type Criterion = (&'static str, Duration, fn() -> Result<()>);

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria: [Criterion; 12] = [
        ("positive rewriting golden", secs(1), positive_rewriting),
        ("negative rewriting golden", secs(5), negative_rewriting),
        ("reduction round trip", secs(30), round_trip),
        ("δ-lemma suite", secs(5), delta_lemma),
        ("rule-gadget golden", secs(1), rule_gadget),
        ("shape golden", secs(5), shape_theorem),
        ("semantics goldens", secs(10), semantics_rows),
        ("typing goldens", secs(10), typing),
        ("matching pedagogy goldens", secs(1), matching_pedagogy),
        ("solver oracle", secs(600), solver),
        ("intersection mirror", secs(5), intersection_mirror),
        ("kernel property suites", secs(60), kernel_properties),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err(anyhow::anyhow!("panicked")));
        let elapsed = start.elapsed();
        let verdict = match result {
            Ok(()) if elapsed <= limit => "PASS".to_string(),
            Ok(()) => format!("FAIL: over the {limit:?} limit"),
            Err(e) => format!("FAIL: {e:#}"),
        };
        if verdict != "PASS" {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<28} {:>9.3}s  {verdict}",
            i + 1,
            name,
            elapsed.as_secs_f64()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
