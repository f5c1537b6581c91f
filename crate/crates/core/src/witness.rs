//! Solution terms built from rewriting derivations, membership in the
//! well-formed families `𝒬ₘ` / `ℛₘ`, and the semantic evaluation rows a
//! witness is expected to satisfy.
//!
//! All open terms live under the `Γₘ` binder convention of
//! [`gamma_env`](crate::gadgets::gamma_env): `p_m` is `Var(0)`, `z⋆` is
//! `Var(m)`, `z₁` is `Var(m+1)`, `z₀` is `Var(m+2)` and `rᵢ` is
//! `Var(m+2+L+1-i)`.

use std::fmt;

use thiserror::Error;

use crate::gadgets::{
    build_gadget, g_prefix, gamma_env, position_symbol, projection, ExtSymbol, GadgetKind, Role,
};
use crate::ssts::{check_derivation, Derivation, Ssts, Word};
use crate::term::Term;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("step ({rule},{position}) out of range for {rules} rules at level {level}")]
    StepOutOfRange {
        rule: usize,
        position: usize,
        rules: usize,
        level: usize,
    },
    #[error("the derivation does not rewrite 0^{len} to 1^{len}", len = .n + 1)]
    InvalidWitness { n: usize },
    #[error("the system has no rules")]
    DegenerateSystem,
}

fn z_one(m: usize) -> Term {
    Term::Var(m + 1)
}

fn z_zero(m: usize) -> Term {
    Term::Var(m + 2)
}

fn z_star(m: usize) -> Term {
    Term::Var(m)
}

fn pos(m: usize, j: usize) -> Term {
    Term::Var(m - j)
}

fn rule_var(m: usize, rules: usize, i: usize) -> Term {
    Term::Var(m + 3 + rules - i)
}

/// `r_{i₁} p_{j₁} (r_{i₂} p_{j₂} ( … z₁))`: the first step is the outermost application.
pub fn q_term(system: &Ssts, derivation: &Derivation, m: usize) -> Result<Term, WitnessError> {
    let l = system.len();
    let mut acc = z_one(m);
    for step in derivation.steps().iter().rev() {
        if step.rule == 0 || step.rule > l || step.position == 0 || step.position > m {
            return Err(WitnessError::StepOutOfRange {
                rule: step.rule,
                position: step.position,
                rules: l,
                level: m,
            });
        }
        acc = Term::apps(rule_var(m, l, step.rule), [pos(m, step.position), acc]);
    }
    Ok(acc)
}

/// `M₁ … M_n` where `M_n = z₀ p_n q` and `M_k = z⋆ p_k (λp_{k+1}. M_{k+1})`;
/// entry `k-1` is `M_k` under `Γ_k`. Requires `n ≥ 1`.
pub fn r_layers(n: usize, q: &Term) -> Vec<Term> {
    assert!(n >= 1, "expansion needs n ≥ 1");
    let mut layers = vec![Term::apps(z_zero(n), [pos(n, n), q.clone()])];
    for k in (1..n).rev() {
        let inner = layers.last().expect("non-empty").clone();
        layers.push(Term::apps(z_star(k), [pos(k, k), Term::lam(inner)]));
    }
    layers.reverse();
    layers
}

/// `z⋆ p₁ (λp₂. z⋆ p₂ ( … λp_n. z₀ p_n q))`, a member of `ℛ₁`.
pub fn r_term(n: usize, q: &Term) -> Term {
    r_layers(n, q).swap_remove(0)
}

/// The closed solution `λr₁ … r_L z₀ z₁ z⋆ p₁. r_term(n, q_term(derivation, n))`
/// for a derivation of `0ⁿ⁺¹ ⇒* 1ⁿ⁺¹`.
pub fn solution_term(
    system: &Ssts,
    n: usize,
    derivation: &Derivation,
) -> Result<Term, WitnessError> {
    if system.is_empty() {
        return Err(WitnessError::DegenerateSystem);
    }
    let valid = n >= 1
        && check_derivation(
            system,
            &Word::zeros(n + 1).expect("non-empty"),
            derivation,
            &Word::ones(n + 1).expect("non-empty"),
        );
    if !valid {
        return Err(WitnessError::InvalidWitness { n });
    }
    let q = q_term(system, derivation, n)?;
    let gamma = gamma_env(1, system.len(), system.alphabet_size())
        .map_err(|_| WitnessError::DegenerateSystem)?;
    Ok(gamma.close(r_term(n, &q)))
}

/// Membership in the well-formed families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShapeClass {
    InQ(usize),
    InR(usize),
    Neither,
}

/// Decides `term ∈ 𝒬ₘ` or `term ∈ ℛₘ` structurally (typing is checked separately).
pub fn classify_shape(term: &Term, m: usize, rules: usize) -> ShapeClass {
    if m == 0 {
        return ShapeClass::Neither;
    }
    if in_q(term, m, rules) {
        ShapeClass::InQ(m)
    } else if in_r(term, m, rules) {
        ShapeClass::InR(m)
    } else {
        ShapeClass::Neither
    }
}

fn is_rule_var(t: &Term, m: usize, rules: usize) -> bool {
    matches!(t, Term::Var(k) if (m + 3..m + 3 + rules).contains(k))
}

fn is_pos_var(t: &Term, m: usize) -> bool {
    matches!(t, Term::Var(k) if *k < m)
}

fn is_eta_pos(t: &Term, m: usize) -> bool {
    match t {
        Term::Lam(body) => match body.as_ref() {
            Term::App(f, a) => {
                **a == Term::Var(0) && matches!(f.as_ref(), Term::Var(k) if (1..=m).contains(k))
            }
            _ => false,
        },
        _ => false,
    }
}

fn in_q(term: &Term, m: usize, rules: usize) -> bool {
    let mut t = term;
    loop {
        if *t == z_one(m) {
            return true;
        }
        let (head, args) = t.spine();
        match args.as_slice() {
            [p, rest] if is_rule_var(head, m, rules) && (is_pos_var(p, m) || is_eta_pos(p, m)) => {
                t = rest;
            }
            _ => return false,
        }
    }
}

fn in_r(term: &Term, m: usize, rules: usize) -> bool {
    let (head, args) = term.spine();
    match args.as_slice() {
        [_, rest] if *head == z_zero(m) => in_q(rest, m, rules),
        [_, Term::Lam(body)] if *head == z_star(m) => in_r(body, m + 1, rules),
        _ => false,
    }
}

impl fmt::Display for ShapeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapeClass::InQ(m) => write!(f, "in Q{m}"),
            ShapeClass::InR(m) => write!(f, "in R{m}"),
            ShapeClass::Neither => f.write_str("neither"),
        }
    }
}

/// Which subterm of the witness a row evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RowPart {
    /// The rewriting part `N ∈ 𝒬_n`.
    Rewrite,
    /// The expansion layer `M_k ∈ ℛ_k`.
    Expand(usize),
}

impl fmt::Display for RowPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowPart::Rewrite => f.write_str("N"),
            RowPart::Expand(k) => write!(f, "M{k}"),
        }
    }
}

/// One semantic row: `subject` under `Γ_level` with `p_j := δ_{positions[j-1]}`
/// and the rest of `Γ` mapped by the rule-semantics substitution is expected
/// to equal `π_target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemanticRow {
    pub part: RowPart,
    /// Row index `i`, selecting `G_j^i` for every position variable.
    pub index: usize,
    pub level: usize,
    pub subject: Term,
    pub positions: Vec<ExtSymbol>,
    pub target: ExtSymbol,
}

impl SemanticRow {
    /// Closed `(left, right)` terms of the row's β-equivalence.
    pub fn equation(&self, system: &Ssts) -> (Term, Term) {
        let k = system.alphabet_size();
        let mut args = g_prefix(system);
        args.extend(
            self.positions
                .iter()
                .map(|s| build_gadget(GadgetKind::Delta(*s), k).expect("extended symbol")),
        );
        let closed = Term::lams(system.len() + 3 + self.level, self.subject.clone());
        (
            Term::apps(closed, args),
            projection(self.target, k).expect("extended symbol"),
        )
    }
}

impl fmt::Display for SemanticRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps: Vec<String> = self
            .positions
            .iter()
            .enumerate()
            .map(|(j, s)| format!("p{} := δ{}", j + 1, s))
            .collect();
        write!(f, "{}[{}] = π{}", self.part, ps.join(", "), self.target)
    }
}

fn row_positions(level: usize, i: usize) -> Vec<ExtSymbol> {
    (1..=level).map(|j| position_symbol(j, i)).collect()
}

/// The rows of a witness: first the `n + 2` rewriting rows of `N`, then, bottom
/// up, the `k + 2` rows of each expansion layer `M_k` for `k = n … 1`.
pub fn semantic_rows(
    system: &Ssts,
    n: usize,
    derivation: &Derivation,
) -> Result<Vec<SemanticRow>, WitnessError> {
    solution_term(system, n, derivation)?;
    let q = q_term(system, derivation, n)?;
    let mut rows: Vec<SemanticRow> = (0..=n + 1)
        .map(|i| SemanticRow {
            part: RowPart::Rewrite,
            index: i,
            level: n,
            subject: q.clone(),
            positions: row_positions(n, i),
            target: if i == 0 {
                ExtSymbol::ONE
            } else {
                ExtSymbol::ZERO
            },
        })
        .collect();
    let layers = r_layers(n, &q);
    for k in (1..=n).rev() {
        for i in 0..=k + 1 {
            let target = if i == 0 {
                ExtSymbol::Dollar
            } else if i == k + 1 {
                ExtSymbol::ONE
            } else {
                ExtSymbol::ZERO
            };
            rows.push(SemanticRow {
                part: RowPart::Expand(k),
                index: i,
                level: k,
                subject: layers[k - 1].clone(),
                positions: row_positions(k, i),
                target,
            });
        }
    }
    Ok(rows)
}

/// Rewriting rows for an arbitrary `𝒬_m` term, with targets given by the
/// word `start` (row 0 targets `1`, row `i` targets `start[i-1]`).
pub fn rewrite_rows(m: usize, q: &Term, start: &Word) -> Vec<SemanticRow> {
    (0..=m + 1)
        .map(|i| SemanticRow {
            part: RowPart::Rewrite,
            index: i,
            level: m,
            subject: q.clone(),
            positions: row_positions(m, i),
            target: if i == 0 {
                ExtSymbol::ONE
            } else {
                start
                    .symbols()
                    .get(i - 1)
                    .map_or(ExtSymbol::Bot, |s| ExtSymbol::Base(*s))
            },
        })
        .collect()
}

/// Variable names of `Γ_level`, innermost first (entry `k` names binder distance `k`).
pub fn gamma_names(level: usize, rules: usize) -> Vec<String> {
    let mut names: Vec<String> = (1..=rules).map(|i| Role::Rule(i).to_string()).collect();
    names.extend([Role::ZZero, Role::ZOne, Role::ZStar].map(|r| r.to_string()));
    names.extend((1..=level).map(|j| Role::Pos(j).to_string()));
    names.reverse();
    names
}
