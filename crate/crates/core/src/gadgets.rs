//! Closed control terms of the reduction and the typing context they are
//! checked against.
//!
//! Symbols of the extended alphabet `0 … K, $, •, ⊤, ⊥` are encoded as
//! projections `πᵢ = λs₀ … s_K s_$ s_• s_⊤ s_⊥. sᵢ` of type
//! `κ = ι → … → ι → ι` (one argument per symbol). Every gadget is a closed,
//! β-normal term whose body is a nest of [`build_case`] dispatches.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::ssts::{Rule, Ssts, Symbol};
use crate::term::Term;
use crate::types::{SimpleType, TypeEnv};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GadgetError {
    #[error("symbol {symbol} outside the extended alphabet over {alphabet_size} base symbols")]
    SymbolOutOfRange { symbol: String, alphabet_size: u32 },
    #[error("case branches must be distinct (repeated {0})")]
    DuplicateBranch(String),
    #[error("the system has no rules")]
    DegenerateSystem,
    #[error("context level must be at least 1")]
    InvalidLevel,
    #[error("no term realizes this table value")]
    Unrealizable,
}

/// A symbol of the extended alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtSymbol {
    Base(Symbol),
    Dollar,
    Bullet,
    Top,
    Bot,
}

impl ExtSymbol {
    pub const ZERO: ExtSymbol = ExtSymbol::Base(0);
    pub const ONE: ExtSymbol = ExtSymbol::Base(1);

    /// Argument position in canonical order `s₀ … s_K s_$ s_• s_⊤ s_⊥`.
    pub fn index(self, alphabet_size: u32) -> Result<usize, GadgetError> {
        let k = alphabet_size as usize;
        match self {
            ExtSymbol::Base(s) if s < alphabet_size => Ok(s as usize),
            ExtSymbol::Base(_) => Err(GadgetError::SymbolOutOfRange {
                symbol: self.to_string(),
                alphabet_size,
            }),
            ExtSymbol::Dollar => Ok(k),
            ExtSymbol::Bullet => Ok(k + 1),
            ExtSymbol::Top => Ok(k + 2),
            ExtSymbol::Bot => Ok(k + 3),
        }
    }

    pub fn from_index(index: usize, alphabet_size: u32) -> Option<ExtSymbol> {
        let k = alphabet_size as usize;
        match index {
            i if i < k => Some(ExtSymbol::Base(i as Symbol)),
            i if i == k => Some(ExtSymbol::Dollar),
            i if i == k + 1 => Some(ExtSymbol::Bullet),
            i if i == k + 2 => Some(ExtSymbol::Top),
            i if i == k + 3 => Some(ExtSymbol::Bot),
            _ => None,
        }
    }

    /// All extended symbols in canonical order.
    pub fn all(alphabet_size: u32) -> Vec<ExtSymbol> {
        (0..ext_len(alphabet_size))
            .map(|i| ExtSymbol::from_index(i, alphabet_size).expect("in range"))
            .collect()
    }
}

impl fmt::Display for ExtSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtSymbol::Base(s) => write!(f, "{s}"),
            ExtSymbol::Dollar => f.write_str("$"),
            ExtSymbol::Bullet => f.write_str("•"),
            ExtSymbol::Top => f.write_str("⊤"),
            ExtSymbol::Bot => f.write_str("⊥"),
        }
    }
}

/// Size of the extended alphabet.
pub fn ext_len(alphabet_size: u32) -> usize {
    alphabet_size as usize + 4
}

/// `κ`: one ι argument per extended symbol.
pub fn kappa(alphabet_size: u32) -> SimpleType {
    SimpleType::first_order(ext_len(alphabet_size))
}

fn kk(alphabet_size: u32) -> SimpleType {
    let k = kappa(alphabet_size);
    SimpleType::arrow(k.clone(), k)
}

/// `(κ → κ) → κ → κ`, the type of rule variables and of `z₀`.
pub fn rule_var_type(alphabet_size: u32) -> SimpleType {
    SimpleType::arrows(
        [kk(alphabet_size), kappa(alphabet_size)],
        kappa(alphabet_size),
    )
}

/// `(κ → κ) → ((κ → κ) → κ) → κ`, the type of `z⋆`.
pub fn star_var_type(alphabet_size: u32) -> SimpleType {
    let k = kappa(alphabet_size);
    SimpleType::arrows(
        [
            kk(alphabet_size),
            SimpleType::arrow(kk(alphabet_size), k.clone()),
        ],
        k,
    )
}

/// `πᵢ`.
pub fn projection(symbol: ExtSymbol, alphabet_size: u32) -> Result<Term, GadgetError> {
    let n = ext_len(alphabet_size);
    let i = symbol.index(alphabet_size)?;
    Ok(Term::lams(n, Term::Var(n - 1 - i)))
}

/// `case scrutinee {i₁ ↦ M₁ | … } else default`: the scrutinee applied to one
/// argument per extended symbol, the branch for that symbol if given and
/// `default` otherwise.
pub fn build_case(
    scrutinee: Term,
    branches: &[(ExtSymbol, Term)],
    default: &Term,
    alphabet_size: u32,
) -> Result<Term, GadgetError> {
    let n = ext_len(alphabet_size);
    let mut slots: Vec<Option<Term>> = vec![None; n];
    for (sym, body) in branches {
        let i = sym.index(alphabet_size)?;
        if slots[i].is_some() {
            return Err(GadgetError::DuplicateBranch(sym.to_string()));
        }
        slots[i] = Some(body.clone());
    }
    Ok(Term::apps(
        scrutinee,
        slots
            .into_iter()
            .map(|s| s.unwrap_or_else(|| default.clone())),
    ))
}

/// Which gadget to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GadgetKind {
    Pi(ExtSymbol),
    Delta(ExtSymbol),
    HStar,
    HZero,
    /// Shared by every rule.
    HRule,
    GStar,
    GZero,
    GRule(Rule),
    /// `I` at type `κ → κ`.
    IdKappa,
    /// `λh.I`
    FZeroArg,
    /// `λh.λg.g I`
    FStarArg,
}

impl fmt::Display for GadgetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GadgetKind::Pi(s) => write!(f, "π_{s}"),
            GadgetKind::Delta(s) => write!(f, "δ_{s}"),
            GadgetKind::HStar => f.write_str("H⋆"),
            GadgetKind::HZero => f.write_str("H₀"),
            GadgetKind::HRule => f.write_str("H_R"),
            GadgetKind::GStar => f.write_str("G⋆"),
            GadgetKind::GZero => f.write_str("G₀"),
            GadgetKind::GRule(r) => write!(f, "G_{{{}{}⇒{}{}}}", r.a, r.b, r.c, r.d),
            GadgetKind::IdKappa => f.write_str("I"),
            GadgetKind::FZeroArg => f.write_str("λh.I"),
            GadgetKind::FStarArg => f.write_str("λh.λg.g I"),
        }
    }
}

/// Body of `λh.λx.λs₀ … s_⊥. _`: the symbol binders plus `outer` more.
struct Frame {
    alphabet_size: u32,
    n: usize,
}

impl Frame {
    fn new(alphabet_size: u32) -> Frame {
        Frame {
            alphabet_size,
            n: ext_len(alphabet_size),
        }
    }

    fn s(&self, sym: ExtSymbol) -> Result<Term, GadgetError> {
        Ok(Term::Var(self.n - 1 - sym.index(self.alphabet_size)?))
    }

    /// Binder just outside the symbol binders (`k = 0`), and so on outwards.
    fn outer(&self, k: usize) -> Term {
        Term::Var(self.n + k)
    }

    fn bot(&self) -> Term {
        Term::Var(self.n - 1 - (self.alphabet_size as usize + 3))
    }

    fn case(&self, scrutinee: Term, branches: &[(ExtSymbol, Term)]) -> Result<Term, GadgetError> {
        build_case(scrutinee, branches, &self.bot(), self.alphabet_size)
    }

    /// Closes a body over the symbol binders and `outer` further binders.
    fn close(&self, outer: usize, body: Term) -> Term {
        Term::lams(self.n + outer, body)
    }

    fn pi(&self, sym: ExtSymbol) -> Result<Term, GadgetError> {
        projection(sym, self.alphabet_size)
    }

    fn delta(&self, sym: ExtSymbol) -> Result<Term, GadgetError> {
        build_gadget(GadgetKind::Delta(sym), self.alphabet_size)
    }
}

/// Builds the closed term for `kind` over `alphabet_size` base symbols.
pub fn build_gadget(kind: GadgetKind, alphabet_size: u32) -> Result<Term, GadgetError> {
    use ExtSymbol::*;
    let f = Frame::new(alphabet_size);
    let zero = ExtSymbol::ZERO;
    let one = ExtSymbol::ONE;
    Ok(match kind {
        GadgetKind::Pi(sym) => f.pi(sym)?,
        GadgetKind::Delta(sym) => {
            let x = f.outer(0);
            f.close(1, f.case(x, &[(Top, f.s(sym)?)])?)
        }
        GadgetKind::HStar => {
            let g = f.outer(0);
            let scrut = Term::app(g, f.delta(Bullet)?);
            f.close(2, f.case(scrut, &[(Dollar, f.s(Dollar)?)])?)
        }
        GadgetKind::HZero => {
            let x = f.outer(0);
            f.close(2, f.case(x, &[(one, f.s(Dollar)?)])?)
        }
        GadgetKind::HRule => {
            let (x, h) = (f.outer(0), f.outer(1));
            let inner = f.case(x, &[(one, f.s(one)?)])?;
            let scrut = Term::app(h, f.pi(Top)?);
            f.close(2, f.case(scrut, &[(Bullet, inner)])?)
        }
        GadgetKind::GStar => {
            let (g, h) = (f.outer(0), f.outer(1));
            let g_on =
                |sym| -> Result<Term, GadgetError> { Ok(Term::app(g.clone(), f.delta(sym)?)) };
            let dollar_then = f.case(g_on(zero)?, &[(one, f.s(Dollar)?)])?;
            let bullet = f.case(g_on(Bullet)?, &[(zero, f.s(zero)?), (Dollar, dollar_then)])?;
            let on_zero = f.case(g_on(one)?, &[(zero, f.s(one)?)])?;
            let on_one = f.case(g_on(Bullet)?, &[(zero, f.s(zero)?)])?;
            let scrut = Term::app(h, f.pi(Top)?);
            f.close(
                2,
                f.case(scrut, &[(Bullet, bullet), (zero, on_zero), (one, on_one)])?,
            )
        }
        GadgetKind::GZero => {
            let (x, h) = (f.outer(0), f.outer(1));
            let bullet = f.case(x.clone(), &[(zero, f.s(zero)?), (one, f.s(Dollar)?)])?;
            let on_zero = f.case(x.clone(), &[(zero, f.s(one)?)])?;
            let on_one = f.case(x, &[(zero, f.s(zero)?)])?;
            let scrut = Term::app(h, f.pi(Top)?);
            f.close(
                2,
                f.case(scrut, &[(Bullet, bullet), (zero, on_zero), (one, on_one)])?,
            )
        }
        GadgetKind::GRule(rule) => {
            let (x, h) = (f.outer(0), f.outer(1));
            let (a, b, c, d) = (Base(rule.a), Base(rule.b), Base(rule.c), Base(rule.d));
            let all: Result<Vec<Term>, GadgetError> = ExtSymbol::all(alphabet_size)
                .into_iter()
                .map(|s| f.s(s))
                .collect();
            let bullet = Term::apps(x.clone(), all?);
            let on_zero = f.case(x.clone(), &[(d, f.s(b)?)])?;
            let on_one = f.case(x, &[(c, f.s(a)?)])?;
            let scrut = Term::app(h, f.pi(Top)?);
            f.close(
                2,
                f.case(scrut, &[(Bullet, bullet), (zero, on_zero), (one, on_one)])?,
            )
        }
        GadgetKind::IdKappa => Term::identity(),
        GadgetKind::FZeroArg => Term::lam(Term::identity()),
        GadgetKind::FStarArg => Term::lams(2, Term::app(Term::Var(0), Term::identity())),
    })
}

/// The type each gadget is meant to inhabit.
pub fn declared_type(kind: GadgetKind, alphabet_size: u32) -> SimpleType {
    match kind {
        GadgetKind::Pi(_) => kappa(alphabet_size),
        GadgetKind::Delta(_) | GadgetKind::IdKappa => kk(alphabet_size),
        GadgetKind::HStar | GadgetKind::GStar | GadgetKind::FStarArg => {
            star_var_type(alphabet_size)
        }
        GadgetKind::HZero
        | GadgetKind::GZero
        | GadgetKind::HRule
        | GadgetKind::GRule(_)
        | GadgetKind::FZeroArg => rule_var_type(alphabet_size),
    }
}

/// `Gⱼⁱ`: the δ-term controlling position `i` when a rule fires at position `j`.
pub fn position_gadget(j: usize, i: usize) -> GadgetKind {
    GadgetKind::Delta(position_symbol(j, i))
}

/// The symbol selected by [`position_gadget`]: `1` at `j`, `0` at `j+1`, `•` elsewhere.
pub fn position_symbol(j: usize, i: usize) -> ExtSymbol {
    if i == j {
        ExtSymbol::ONE
    } else if i == j + 1 {
        ExtSymbol::ZERO
    } else {
        ExtSymbol::Bullet
    }
}

/// Variables of the context `Γₘ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    /// `rᵢ`, 1-based.
    Rule(usize),
    ZZero,
    ZOne,
    ZStar,
    /// `pⱼ`, 1-based.
    Pos(usize),
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Rule(i) => write!(f, "r{i}"),
            Role::ZZero => f.write_str("z0"),
            Role::ZOne => f.write_str("z1"),
            Role::ZStar => f.write_str("zs"),
            Role::Pos(j) => write!(f, "p{j}"),
        }
    }
}

/// `Γₘ` with binder order `r₁ … r_L, z₀, z₁, z⋆, p₁ … pₘ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaEnv {
    level: usize,
    rules: usize,
    alphabet_size: u32,
    binders: Vec<(Role, SimpleType)>,
}

/// Builds `Γₘ` for `rules` rule variables.
pub fn gamma_env(level: usize, rules: usize, alphabet_size: u32) -> Result<GammaEnv, GadgetError> {
    if rules == 0 {
        return Err(GadgetError::DegenerateSystem);
    }
    if level == 0 {
        return Err(GadgetError::InvalidLevel);
    }
    let k = kappa(alphabet_size);
    let mut binders = Vec::with_capacity(rules + 3 + level);
    for i in 1..=rules {
        binders.push((Role::Rule(i), rule_var_type(alphabet_size)));
    }
    binders.push((Role::ZZero, rule_var_type(alphabet_size)));
    binders.push((Role::ZOne, k));
    binders.push((Role::ZStar, star_var_type(alphabet_size)));
    for j in 1..=level {
        binders.push((Role::Pos(j), kk(alphabet_size)));
    }
    Ok(GammaEnv {
        level,
        rules,
        alphabet_size,
        binders,
    })
}

impl GammaEnv {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn rules(&self) -> usize {
        self.rules
    }

    pub fn alphabet_size(&self) -> u32 {
        self.alphabet_size
    }

    /// Roles and types, outermost binder first.
    pub fn binders(&self) -> &[(Role, SimpleType)] {
        &self.binders
    }

    pub fn type_of(&self, role: Role) -> Option<&SimpleType> {
        self.binders
            .iter()
            .find(|(r, _)| *r == role)
            .map(|(_, t)| t)
    }

    /// Binder distance of `role` from the innermost binder.
    pub fn index_of(&self, role: Role) -> Option<usize> {
        let pos = self.binders.iter().position(|(r, _)| *r == role)?;
        Some(self.binders.len() - 1 - pos)
    }

    /// Role bound at binder distance `index`.
    pub fn role_at(&self, index: usize) -> Option<Role> {
        self.binders
            .len()
            .checked_sub(index + 1)
            .map(|i| self.binders[i].0)
    }

    /// The variable for `role`; panics if the role is not in this context.
    pub fn var(&self, role: Role) -> Term {
        Term::Var(
            self.index_of(role)
                .unwrap_or_else(|| panic!("{role} is not bound at level {}", self.level)),
        )
    }

    pub fn type_env(&self) -> TypeEnv {
        TypeEnv::from_binders(self.binders.iter().map(|(_, t)| t.clone()))
    }

    /// `Γ(r₁) → … → Γ(z₀) → Γ(z₁) → Γ(z⋆) → Γ(p₁) → … → κ`.
    pub fn closed_type(&self) -> SimpleType {
        SimpleType::arrows(
            self.binders.iter().map(|(_, t)| t.clone()),
            kappa(self.alphabet_size),
        )
    }

    /// Abstracts `body` over every binder of this context.
    pub fn close(&self, body: Term) -> Term {
        Term::lams(self.binders.len(), body)
    }
}

/// An argument of the shape-restricting bundle: closed, or the free variable `u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BundleEntry {
    Closed(Term),
    FreeU,
}

/// The five argument rows applied to a candidate, in binder order of `Γ₁`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArgumentBundles {
    /// `I … I, λh.I, u, λh.λg.g I, I`
    pub f: Vec<BundleEntry>,
    /// `H_R … H_R, H₀, π₁, H⋆, δ_•`
    pub h: Vec<Term>,
    /// `G_{R₁} … G_{R_L}, G₀, π₁, G⋆, δ_•`
    pub g_bullet: Vec<Term>,
    /// as above ending in `δ₁`
    pub g_one: Vec<Term>,
    /// as above ending in `δ₀`
    pub g_zero: Vec<Term>,
}

impl ArgumentBundles {
    /// The F-row with `u` replaced by `u_term`.
    pub fn f_with(&self, u_term: &Term) -> Vec<Term> {
        self.f
            .iter()
            .map(|e| match e {
                BundleEntry::Closed(t) => t.clone(),
                BundleEntry::FreeU => u_term.clone(),
            })
            .collect()
    }
}

/// `G_{R₁} … G_{R_L} G₀ π₁ G⋆`: the rule-semantics substitution without the
/// position arguments.
pub fn g_prefix(system: &Ssts) -> Vec<Term> {
    let k = system.alphabet_size();
    let mut out: Vec<Term> = system
        .rules()
        .iter()
        .map(|r| build_gadget(GadgetKind::GRule(*r), k).expect("rules are in range"))
        .collect();
    out.push(build_gadget(GadgetKind::GZero, k).expect("fixed gadget"));
    out.push(projection(ExtSymbol::ONE, k).expect("1 is a base symbol"));
    out.push(build_gadget(GadgetKind::GStar, k).expect("fixed gadget"));
    out
}

/// The argument rows for `system`, each of length `L + 4`.
pub fn argument_bundles(system: &Ssts) -> ArgumentBundles {
    let k = system.alphabet_size();
    let l = system.len();
    let gadget = |kind| build_gadget(kind, k).expect("fixed gadget");

    let mut f: Vec<BundleEntry> = (0..l)
        .map(|_| BundleEntry::Closed(gadget(GadgetKind::IdKappa)))
        .collect();
    f.push(BundleEntry::Closed(gadget(GadgetKind::FZeroArg)));
    f.push(BundleEntry::FreeU);
    f.push(BundleEntry::Closed(gadget(GadgetKind::FStarArg)));
    f.push(BundleEntry::Closed(gadget(GadgetKind::IdKappa)));

    let mut h: Vec<Term> = (0..l).map(|_| gadget(GadgetKind::HRule)).collect();
    h.push(gadget(GadgetKind::HZero));
    h.push(gadget(GadgetKind::Pi(ExtSymbol::ONE)));
    h.push(gadget(GadgetKind::HStar));
    h.push(gadget(GadgetKind::Delta(ExtSymbol::Bullet)));

    let g_with = |last: ExtSymbol| {
        let mut row = g_prefix(system);
        row.push(gadget(GadgetKind::Delta(last)));
        row
    };

    ArgumentBundles {
        f,
        h,
        g_bullet: g_with(ExtSymbol::Bullet),
        g_one: g_with(ExtSymbol::ONE),
        g_zero: g_with(ExtSymbol::ZERO),
    }
}

/// An argument or result in a finite function table.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum TableValue {
    Sym(ExtSymbol),
    /// A partial function given by its `input ↦ output` clauses.
    Fun(Vec<(TableValue, TableValue)>),
}

impl TableValue {
    /// `(⊤ ↦ v)`, the behaviour of `δ_v`.
    pub fn probe(v: ExtSymbol) -> TableValue {
        TableValue::Fun(vec![(TableValue::Sym(ExtSymbol::Top), TableValue::Sym(v))])
    }
}

impl fmt::Display for TableValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableValue::Sym(s) => write!(f, "{s}"),
            TableValue::Fun(rows) => {
                let parts: Vec<String> = rows.iter().map(|(i, o)| format!("{i} ↦ {o}")).collect();
                write!(f, "({})", parts.join(", "))
            }
        }
    }
}

/// One clause: the gadget applied to realizers of `inputs` yields `π_output`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub inputs: Vec<TableValue>,
    pub output: ExtSymbol,
}

impl fmt::Display for TableRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in &self.inputs {
            write!(f, "{i} ↦ ")?;
        }
        write!(f, "{}", self.output)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionTable {
    pub kind: GadgetKind,
    pub rows: Vec<TableRow>,
}

/// Finite function tables realized by `δᵢ` (every `i`), `G₀`, each rule gadget and `G⋆`.
pub fn semantics_table(system: &Ssts) -> Vec<FunctionTable> {
    use ExtSymbol::{Bullet, Dollar, Top};
    use TableValue::{Fun, Sym};
    let zero = ExtSymbol::ZERO;
    let one = ExtSymbol::ONE;
    let probe = TableValue::probe;
    let row = |inputs: Vec<TableValue>, output| TableRow { inputs, output };

    let mut tables: Vec<FunctionTable> = ExtSymbol::all(system.alphabet_size())
        .into_iter()
        .map(|i| FunctionTable {
            kind: GadgetKind::Delta(i),
            rows: vec![row(vec![Sym(Top)], i)],
        })
        .collect();

    tables.push(FunctionTable {
        kind: GadgetKind::GZero,
        rows: vec![
            row(vec![probe(Bullet), Sym(zero)], zero),
            row(vec![probe(Bullet), Sym(one)], Dollar),
            row(vec![probe(zero), Sym(zero)], one),
            row(vec![probe(one), Sym(zero)], zero),
        ],
    });

    for r in system.rules() {
        let b = |s| ExtSymbol::Base(s);
        tables.push(FunctionTable {
            kind: GadgetKind::GRule(*r),
            rows: vec![
                row(vec![probe(one), Sym(b(r.c))], b(r.a)),
                row(vec![probe(zero), Sym(b(r.d))], b(r.b)),
            ],
        });
    }

    tables.push(FunctionTable {
        kind: GadgetKind::GStar,
        rows: vec![
            row(
                vec![probe(Bullet), Fun(vec![(probe(Bullet), Sym(zero))])],
                zero,
            ),
            row(
                vec![
                    probe(Bullet),
                    Fun(vec![(probe(Bullet), Sym(Dollar)), (probe(zero), Sym(one))]),
                ],
                Dollar,
            ),
            row(vec![probe(zero), Fun(vec![(probe(one), Sym(zero))])], one),
            row(
                vec![probe(one), Fun(vec![(probe(Bullet), Sym(zero))])],
                zero,
            ),
        ],
    });
    tables
}

/// A closed term realizing `value`: projections for symbols; for functions, a
/// case dispatch on the argument (symbol inputs) or on the argument probed at
/// a common symbol (inputs that are single-clause probes). Unlisted inputs map
/// to `⊥`.
pub fn realize(value: &TableValue, alphabet_size: u32) -> Result<Term, GadgetError> {
    match value {
        TableValue::Sym(s) => projection(*s, alphabet_size),
        TableValue::Fun(rows) => {
            let f = Frame::new(alphabet_size);
            let arg = f.outer(0);
            let mut probe_at: Option<ExtSymbol> = None;
            let mut branches = Vec::new();
            let mut seen = BTreeSet::new();
            for (input, output) in rows {
                let TableValue::Sym(out) = output else {
                    return Err(GadgetError::Unrealizable);
                };
                let key = match input {
                    TableValue::Sym(s) => {
                        if probe_at.is_some() {
                            return Err(GadgetError::Unrealizable);
                        }
                        *s
                    }
                    TableValue::Fun(clauses) => match clauses.as_slice() {
                        [(TableValue::Sym(at), TableValue::Sym(v))] => {
                            if probe_at.is_some_and(|p| p != *at)
                                || (probe_at.is_none() && !branches.is_empty())
                            {
                                return Err(GadgetError::Unrealizable);
                            }
                            probe_at = Some(*at);
                            *v
                        }
                        _ => return Err(GadgetError::Unrealizable),
                    },
                };
                if !seen.insert(key) {
                    return Err(GadgetError::Unrealizable);
                }
                branches.push((key, f.s(*out)?));
            }
            let scrut = match probe_at {
                Some(at) => Term::app(arg, projection(at, alphabet_size)?),
                None => arg,
            };
            Ok(f.close(1, f.case(scrut, &branches)?))
        }
    }
}
