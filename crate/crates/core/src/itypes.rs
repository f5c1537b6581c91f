//! Intersection types over the extended alphabet: a syntax-directed
//! derivability checker for β-normal subjects, the assumption sets derived
//! from a rewriting system, and the judgments a witness is expected to
//! satisfy (one per semantic row).

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::gadgets::ExtSymbol;
use crate::ssts::{Derivation, Ssts};
use crate::syntax::{print_term_in, Style};
use crate::term::{is_normal, Term};
use crate::witness::{gamma_names, semantic_rows, RowPart, WitnessError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ITypeError {
    #[error("subject is not β-normal")]
    NotNormal,
}

/// A type constant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IAtom {
    Sym(ExtSymbol),
    Named(String),
}

/// `a` or `φ₁ ∩ … ∩ φₙ → φ` (`n ≥ 0`), with the intersection kept as a set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IType {
    Atom(IAtom),
    Arrow(BTreeSet<IType>, Box<IType>),
}

impl IType {
    pub fn sym(s: ExtSymbol) -> IType {
        IType::Atom(IAtom::Sym(s))
    }

    pub fn base(s: u32) -> IType {
        IType::sym(ExtSymbol::Base(s))
    }

    pub fn named(name: &str) -> IType {
        IType::Atom(IAtom::Named(name.to_string()))
    }

    /// `⋂ domain → codomain`; order and repetition in `domain` are irrelevant.
    pub fn arrow<I: IntoIterator<Item = IType>>(domain: I, codomain: IType) -> IType {
        IType::Arrow(domain.into_iter().collect(), Box::new(codomain))
    }

    /// `a₁ → … → aₖ → codomain` with single-type domains.
    pub fn chain<I>(domains: I, codomain: IType) -> IType
    where
        I: IntoIterator<Item = IType>,
        I::IntoIter: DoubleEndedIterator,
    {
        domains
            .into_iter()
            .rev()
            .fold(codomain, |acc, d| IType::arrow([d], acc))
    }
}

fn write_domain(f: &mut fmt::Formatter<'_>, dom: &BTreeSet<IType>) -> fmt::Result {
    match dom.len() {
        0 => f.write_str("ω"),
        1 => {
            let d = dom.iter().next().expect("one element");
            if matches!(d, IType::Arrow(..)) {
                write!(f, "({d})")
            } else {
                write!(f, "{d}")
            }
        }
        _ => {
            let parts: Vec<String> = dom
                .iter()
                .map(|d| match d {
                    IType::Arrow(..) => format!("({d})"),
                    IType::Atom(_) => d.to_string(),
                })
                .collect();
            write!(f, "({})", parts.join(" ∩ "))
        }
    }
}

impl fmt::Display for IType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IType::Atom(IAtom::Sym(s)) => write!(f, "{s}"),
            IType::Atom(IAtom::Named(n)) => f.write_str(n),
            IType::Arrow(dom, cod) => {
                write_domain(f, dom)?;
                write!(f, " → {cod}")
            }
        }
    }
}

/// Prints an assumption set `φ₁ ∩ … ∩ φₙ`.
pub fn print_intersection(set: &BTreeSet<IType>) -> String {
    if set.is_empty() {
        return "ω".to_string();
    }
    let parts: Vec<String> = set
        .iter()
        .map(|t| match t {
            IType::Arrow(..) if set.len() > 1 => format!("({t})"),
            _ => t.to_string(),
        })
        .collect();
    parts.join(" ∩ ")
}

/// Positional assumptions; entry `k` from the end types binder distance `k`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ITypeEnv {
    scope: Vec<BTreeSet<IType>>,
}

impl ITypeEnv {
    pub fn empty() -> ITypeEnv {
        ITypeEnv::default()
    }

    /// Outermost binder first.
    pub fn from_binders<I: IntoIterator<Item = BTreeSet<IType>>>(binders: I) -> ITypeEnv {
        ITypeEnv {
            scope: binders.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.scope.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scope.is_empty()
    }

    pub fn lookup(&self, index: usize) -> Option<&BTreeSet<IType>> {
        self.scope
            .len()
            .checked_sub(index + 1)
            .map(|i| &self.scope[i])
    }

    pub fn push(&mut self, set: BTreeSet<IType>) {
        self.scope.push(set);
    }

    pub fn pop(&mut self) -> Option<BTreeSet<IType>> {
        self.scope.pop()
    }

    pub fn binders(&self) -> &[BTreeSet<IType>] {
        &self.scope
    }
}

/// `env ⊢∩ term : ty`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Judgment {
    pub env: ITypeEnv,
    pub term: Term,
    pub ty: IType,
}

impl Judgment {
    /// Prints the judgment with binder names given innermost first; binders
    /// with empty assumption sets are omitted.
    pub fn display_with(&self, names: &[String]) -> String {
        let n = self.env.len();
        let assumptions: Vec<String> = self
            .env
            .binders()
            .iter()
            .enumerate()
            .filter(|(_, set)| !set.is_empty())
            .map(|(i, set)| {
                let name = names
                    .get(n - 1 - i)
                    .cloned()
                    .unwrap_or_else(|| format!("v{i}"));
                format!("{name} : {}", print_intersection(set))
            })
            .collect();
        format!(
            "{{{}}} ⊢ {} : {}",
            assumptions.join(", "),
            print_term_in(&self.term, Style::Named, names),
            self.ty
        )
    }
}

struct Checker<'t> {
    memo: HashMap<(*const Term, ITypeEnv, IType), bool>,
    _terms: std::marker::PhantomData<&'t Term>,
}

impl<'t> Checker<'t> {
    fn check(&mut self, env: &mut ITypeEnv, term: &'t Term, ty: &IType) -> bool {
        let key = (term as *const Term, env.clone(), ty.clone());
        if let Some(&r) = self.memo.get(&key) {
            return r;
        }
        let r = match term {
            Term::Lam(body) => match ty {
                IType::Arrow(dom, cod) => {
                    env.push(dom.clone());
                    let r = self.check(env, body, cod);
                    env.pop();
                    r
                }
                IType::Atom(_) => false,
            },
            _ => {
                let (head, args) = term.spine();
                let Term::Var(k) = head else {
                    return false;
                };
                let candidates: Vec<IType> = env
                    .lookup(*k)
                    .map(|s| s.iter().cloned().collect())
                    .unwrap_or_default();
                candidates.iter().any(|psi| {
                    let mut t = psi;
                    let mut doms = Vec::with_capacity(args.len());
                    for _ in 0..args.len() {
                        match t {
                            IType::Arrow(d, c) => {
                                doms.push(d);
                                t = c;
                            }
                            IType::Atom(_) => return false,
                        }
                    }
                    t == ty
                        && args
                            .iter()
                            .zip(&doms)
                            .all(|(a, d)| d.iter().all(|phi| self.check(env, a, phi)))
                })
            }
        };
        self.memo.insert(key, r);
        r
    }
}

/// Whether `j` has a derivation in the intersection type system. The subject
/// must be β-normal, which makes the (Ax)/(→I)/(→E) search syntax-directed.
pub fn itype_derivable(j: &Judgment) -> Result<bool, ITypeError> {
    if !is_normal(&j.term) {
        return Err(ITypeError::NotNormal);
    }
    let mut checker = Checker {
        memo: HashMap::new(),
        _terms: std::marker::PhantomData,
    };
    let mut env = j.env.clone();
    Ok(checker.check(&mut env, &j.term, &j.ty))
}

/// Assumptions derived from a system: rule variables and `z₁` (rewriting),
/// `z₀` and `z⋆` (expansion and initialization).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InhabitationEnvs {
    /// Entry `i-1` types `rᵢ`.
    pub rules: Vec<BTreeSet<IType>>,
    pub z_one: BTreeSet<IType>,
    pub z_zero: BTreeSet<IType>,
    pub z_star: BTreeSet<IType>,
}

impl InhabitationEnvs {
    /// Positional environment over `Γ_level` with `p_j : positions[j-1]`.
    /// Without `control`, `z₀` and `z⋆` get no assumptions.
    pub fn env(&self, positions: &[ExtSymbol], control: bool) -> ITypeEnv {
        let mut scope = self.rules.clone();
        let none = BTreeSet::new();
        scope.push(if control {
            self.z_zero.clone()
        } else {
            none.clone()
        });
        scope.push(self.z_one.clone());
        scope.push(if control { self.z_star.clone() } else { none });
        scope.extend(positions.iter().map(|s| BTreeSet::from([IType::sym(*s)])));
        ITypeEnv::from_binders(scope)
    }
}

/// Builds the assumption sets for `system`.
pub fn build_itype_envs(system: &Ssts) -> InhabitationEnvs {
    use ExtSymbol::{Bullet, Dollar};
    let b = IType::base;
    let s = IType::sym;
    let rules = system
        .rules()
        .iter()
        .map(|r| {
            let mut set = BTreeSet::from([
                IType::chain([b(1), b(r.c)], b(r.a)),
                IType::chain([b(0), b(r.d)], b(r.b)),
            ]);
            for e in 0..system.alphabet_size() {
                set.insert(IType::chain([s(Bullet), b(e)], b(e)));
            }
            set
        })
        .collect();
    let z_zero = BTreeSet::from([
        IType::chain([s(Bullet), b(0)], b(0)),
        IType::chain([s(Bullet), b(1)], s(Dollar)),
        IType::chain([b(0), b(0)], b(1)),
        IType::chain([b(1), b(0)], b(0)),
    ]);
    let z_star = BTreeSet::from([
        IType::chain([s(Bullet), IType::chain([s(Bullet)], b(0))], b(0)),
        IType::arrow(
            [s(Bullet)],
            IType::arrow(
                [
                    IType::chain([s(Bullet)], s(Dollar)),
                    IType::chain([b(0)], b(1)),
                ],
                s(Dollar),
            ),
        ),
        IType::chain([b(0), IType::chain([b(1)], b(0))], b(1)),
        IType::chain([b(1), IType::chain([s(Bullet)], b(0))], b(0)),
    ]);
    InhabitationEnvs {
        rules,
        z_one: BTreeSet::from([b(1)]),
        z_zero,
        z_star,
    }
}

/// A judgment mirroring one semantic row of a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessJudgment {
    pub part: RowPart,
    pub index: usize,
    pub level: usize,
    pub judgment: Judgment,
}

impl fmt::Display for WitnessJudgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rules = self.judgment.env.len() - 3 - self.level;
        let names = gamma_names(self.level, rules);
        write!(
            f,
            "{} ({}): {}",
            self.part,
            self.index,
            self.judgment.display_with(&names)
        )
    }
}

/// One judgment per semantic row of the witness, in the same order: the
/// rewriting part under the rule assumptions, then the expansion layers
/// bottom up with the control assumptions added.
pub fn witness_judgments(
    system: &Ssts,
    n: usize,
    derivation: &Derivation,
) -> Result<Vec<WitnessJudgment>, WitnessError> {
    let envs = build_itype_envs(system);
    let rows = semantic_rows(system, n, derivation)?;
    Ok(rows
        .into_iter()
        .map(|row| WitnessJudgment {
            part: row.part,
            index: row.index,
            level: row.level,
            judgment: Judgment {
                env: envs.env(&row.positions, row.part != RowPart::Rewrite),
                term: row.subject,
                ty: IType::sym(row.target),
            },
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ssts::{Rule, Step};
    use ExtSymbol::{Bullet, Dollar};

    fn example() -> Ssts {
        Ssts::new(
            3,
            vec![
                Rule::new(0, 0, 2, 2),
                Rule::new(0, 2, 1, 1),
                Rule::new(2, 0, 1, 1),
            ],
        )
        .unwrap()
    }

    fn derivation() -> Derivation {
        Derivation::new(vec![Step::new(1, 2), Step::new(2, 1), Step::new(3, 3)])
    }

    #[test]
    fn axiom_picks_any_component() {
        let a = IType::named("a");
        let b = IType::named("b");
        let env = ITypeEnv::from_binders([BTreeSet::from([a.clone(), b.clone()])]);
        for ty in [a, b] {
            let j = Judgment {
                env: env.clone(),
                term: Term::Var(0),
                ty,
            };
            assert_eq!(itype_derivable(&j), Ok(true));
        }
        let j = Judgment {
            env,
            term: Term::Var(0),
            ty: IType::named("c"),
        };
        assert_eq!(itype_derivable(&j), Ok(false));
    }

    #[test]
    fn abstraction_and_application() {
        // λx. f x : a → b under f : (a → b)
        let a = IType::named("a");
        let b = IType::named("b");
        let f = IType::arrow([a.clone()], b.clone());
        let env = ITypeEnv::from_binders([BTreeSet::from([f])]);
        let t = Term::lam(Term::app(Term::Var(1), Term::Var(0)));
        let j = Judgment {
            env: env.clone(),
            term: t.clone(),
            ty: IType::arrow([a.clone()], b.clone()),
        };
        assert_eq!(itype_derivable(&j), Ok(true));
        // with domain a ∩ c the extra assumption is harmless
        let j = Judgment {
            env: env.clone(),
            term: t.clone(),
            ty: IType::arrow([a.clone(), IType::named("c")], b.clone()),
        };
        assert_eq!(itype_derivable(&j), Ok(true));
        let j = Judgment {
            env,
            term: t,
            ty: IType::arrow([IType::named("c")], b),
        };
        assert_eq!(itype_derivable(&j), Ok(false));
    }

    #[test]
    fn redex_rejected() {
        let j = Judgment {
            env: ITypeEnv::empty(),
            term: Term::app(Term::identity(), Term::identity()),
            ty: IType::named("a"),
        };
        assert_eq!(itype_derivable(&j), Err(ITypeError::NotNormal));
    }

    #[test]
    fn aci_canonical() {
        let x = IType::arrow(
            [IType::base(1), IType::base(0), IType::base(1)],
            IType::base(2),
        );
        let y = IType::arrow([IType::base(0), IType::base(1)], IType::base(2));
        assert_eq!(x, y);
        assert_eq!(x.to_string(), "(0 ∩ 1) → 2");
    }

    #[test]
    fn example_rule_assumptions() {
        let envs = build_itype_envs(&example());
        let b = IType::base;
        let bullet = IType::sym(Bullet);
        let r1 = BTreeSet::from([
            IType::chain([b(1), b(2)], b(0)),
            IType::chain([b(0), b(2)], b(0)),
            IType::chain([bullet.clone(), b(0)], b(0)),
            IType::chain([bullet.clone(), b(1)], b(1)),
            IType::chain([bullet.clone(), b(2)], b(2)),
        ]);
        assert_eq!(envs.rules[0], r1);
        assert_eq!(envs.z_star.len(), 4);
        let expand = IType::arrow(
            [bullet.clone()],
            IType::arrow(
                [
                    IType::chain([b(0)], b(1)),
                    IType::chain([bullet], IType::sym(Dollar)),
                ],
                IType::sym(Dollar),
            ),
        );
        assert!(envs.z_star.contains(&expand));
        assert_eq!(expand.to_string(), "• → ((0 → 1) ∩ (• → $)) → $");
    }

    #[test]
    fn example_judgments_derivable() {
        let js = witness_judgments(&example(), 3, &derivation()).unwrap();
        assert_eq!(js.len(), 17);
        for j in &js {
            assert_eq!(itype_derivable(&j.judgment), Ok(true), "{j}");
        }
        assert_eq!(
            js[0].to_string(),
            "N (0): {r1 : (0 → 2 → 0) ∩ (1 → 2 → 0) ∩ (• → 0 → 0) ∩ (• → 1 → 1) ∩ (• → 2 → 2), \
             r2 : (0 → 1 → 2) ∩ (1 → 1 → 0) ∩ (• → 0 → 0) ∩ (• → 1 → 1) ∩ (• → 2 → 2), \
             r3 : (0 → 1 → 0) ∩ (1 → 1 → 2) ∩ (• → 0 → 0) ∩ (• → 1 → 1) ∩ (• → 2 → 2), \
             z1 : 1, p1 : •, p2 : •, p3 : •} ⊢ r1 p2 (r2 p1 (r3 p3 z1)) : 1"
        );
    }

    #[test]
    fn perturbed_target_fails() {
        let js = witness_judgments(&example(), 3, &derivation()).unwrap();
        let mut j = js[1].judgment.clone();
        j.ty = IType::base(1);
        assert_eq!(itype_derivable(&j), Ok(false));
    }
}
