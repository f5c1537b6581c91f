//! Nameless λ-terms with capture-avoiding substitution and fuel-bounded
//! leftmost-outermost normalization.
//!
//! Variables are binder distances: `Var(0)` refers to the nearest enclosing
//! abstraction. Indices that reach past every enclosing abstraction are free
//! and refer to an outer context, so open terms are first-class. Structural
//! equality on [`Term`] is α-equivalence.

use std::fmt;

/// A λ-term in binder-distance representation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(usize),
    App(Box<Term>, Box<Term>),
    Lam(Box<Term>),
}

impl Term {
    pub fn var(index: usize) -> Term {
        Term::Var(index)
    }

    pub fn app(function: Term, argument: Term) -> Term {
        Term::App(Box::new(function), Box::new(argument))
    }

    pub fn lam(body: Term) -> Term {
        Term::Lam(Box::new(body))
    }

    /// `head a₁ … aₖ`, associating to the left.
    pub fn apps<I>(head: Term, args: I) -> Term
    where
        I: IntoIterator<Item = Term>,
    {
        args.into_iter().fold(head, Term::app)
    }

    /// `count` nested abstractions around `body`.
    pub fn lams(count: usize, body: Term) -> Term {
        (0..count).fold(body, |acc, _| Term::lam(acc))
    }

    /// The identity `λx.x`.
    pub fn identity() -> Term {
        Term::lam(Term::Var(0))
    }

    /// Number of constructors.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(f, a) => 1 + f.size() + a.size(),
            Term::Lam(b) => 1 + b.size(),
        }
    }

    /// Smallest context length under which the term is closed, i.e. one more
    /// than the largest free index (0 for closed terms).
    pub fn free_span(&self) -> usize {
        fn go(t: &Term, depth: usize) -> usize {
            match t {
                Term::Var(k) if *k >= depth => k - depth + 1,
                Term::Var(_) => 0,
                Term::App(f, a) => go(f, depth).max(go(a, depth)),
                Term::Lam(b) => go(b, depth + 1),
            }
        }
        go(self, 0)
    }

    pub fn is_closed(&self) -> bool {
        self.free_span() == 0
    }

    /// Adds `by` to every index `>= cutoff`.
    pub fn lift(&self, by: usize, cutoff: usize) -> Term {
        if by == 0 {
            return self.clone();
        }
        match self {
            Term::Var(k) if *k >= cutoff => Term::Var(k + by),
            Term::Var(k) => Term::Var(*k),
            Term::App(f, a) => Term::app(f.lift(by, cutoff), a.lift(by, cutoff)),
            Term::Lam(b) => Term::lam(b.lift(by, cutoff + 1)),
        }
    }

    /// Splits `h a₁ … aₖ` into `h` and `[a₁, …, aₖ]`.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut head = self;
        let mut args = Vec::new();
        while let Term::App(f, a) = head {
            args.push(a.as_ref());
            head = f;
        }
        args.reverse();
        (head, args)
    }

    /// Strips leading abstractions, returning how many there were and the body.
    pub fn strip_lams(&self) -> (usize, &Term) {
        let mut count = 0;
        let mut body = self;
        while let Term::Lam(b) = body {
            count += 1;
            body = b;
        }
        (count, body)
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_term(
            self,
            crate::syntax::Style::Indexed,
        ))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_term(
            self,
            crate::syntax::Style::Named,
        ))
    }
}

/// `target[index := replacement]`, removing the binder that `index` refers to.
///
/// `replacement` lives in the context outside that binder; its free indices are
/// lifted whenever the substitution passes under an abstraction, and free
/// indices of `target` above `index` are decremented.
pub fn substitute(target: &Term, index: usize, replacement: &Term) -> Term {
    let closed = replacement.is_closed();
    go(target, 0, index, replacement, closed)
}

fn go(t: &Term, depth: usize, index: usize, r: &Term, closed: bool) -> Term {
    match t {
        Term::Var(k) => {
            let k = *k;
            if k < depth + index {
                Term::Var(k)
            } else if k == depth + index {
                if closed {
                    r.clone()
                } else {
                    r.lift(depth, 0)
                }
            } else {
                Term::Var(k - 1)
            }
        }
        Term::App(f, a) => Term::app(
            go(f, depth, index, r, closed),
            go(a, depth, index, r, closed),
        ),
        Term::Lam(b) => Term::lam(go(b, depth + 1, index, r, closed)),
    }
}

/// Outcome of [`normalize`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormalizeResult {
    Normal { term: Term, steps: u64 },
    FuelExhausted { partial: Term, steps: u64 },
}

impl NormalizeResult {
    pub fn steps(&self) -> u64 {
        match self {
            NormalizeResult::Normal { steps, .. }
            | NormalizeResult::FuelExhausted { steps, .. } => *steps,
        }
    }

    pub fn normal(self) -> Option<Term> {
        match self {
            NormalizeResult::Normal { term, .. } => Some(term),
            NormalizeResult::FuelExhausted { .. } => None,
        }
    }

    pub fn is_normal(&self) -> bool {
        matches!(self, NormalizeResult::Normal { .. })
    }
}

/// Normal-order normalization with at most `fuel` contractions.
///
/// Head redexes are contracted first, then arguments left to right, which is
/// exactly the leftmost-outermost strategy; `steps` counts contractions.
pub fn normalize(term: &Term, fuel: u64) -> NormalizeResult {
    let mut machine = Normalizer {
        fuel,
        steps: 0,
        exhausted: false,
    };
    let out = machine.nf(term.clone());
    if machine.exhausted {
        NormalizeResult::FuelExhausted {
            partial: out,
            steps: machine.steps,
        }
    } else {
        NormalizeResult::Normal {
            term: out,
            steps: machine.steps,
        }
    }
}

struct Normalizer {
    fuel: u64,
    steps: u64,
    exhausted: bool,
}

impl Normalizer {
    fn nf(&mut self, t: Term) -> Term {
        if self.exhausted {
            return t;
        }
        let mut head = t;
        // arguments, innermost application last
        let mut args: Vec<Term> = Vec::new();
        loop {
            match head {
                Term::App(f, a) => {
                    args.push(*a);
                    head = *f;
                }
                Term::Lam(body) if !args.is_empty() => {
                    if self.steps >= self.fuel {
                        self.exhausted = true;
                        return rebuild(Term::Lam(body), args);
                    }
                    self.steps += 1;
                    let arg = args.pop().expect("non-empty spine");
                    head = substitute(&body, 0, &arg);
                }
                _ => break,
            }
        }
        let head = match head {
            Term::Lam(body) => Term::lam(self.nf(*body)),
            other => other,
        };
        let mut out = head;
        while let Some(arg) = args.pop() {
            let arg = self.nf(arg);
            out = Term::app(out, arg);
        }
        out
    }
}

fn rebuild(head: Term, mut args: Vec<Term>) -> Term {
    let mut out = head;
    while let Some(arg) = args.pop() {
        out = Term::app(out, arg);
    }
    out
}

/// Three-valued answer of [`beta_equiv`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BetaEquiv {
    Equivalent,
    Distinct,
    /// One side did not reach a normal form within the fuel.
    Undetermined,
}

impl BetaEquiv {
    pub fn holds(self) -> bool {
        self == BetaEquiv::Equivalent
    }
}

/// Normalizes both sides (each with its own `fuel`) and compares.
pub fn beta_equiv(a: &Term, b: &Term, fuel: u64) -> BetaEquiv {
    let Some(na) = normalize(a, fuel).normal() else {
        return BetaEquiv::Undetermined;
    };
    let Some(nb) = normalize(b, fuel).normal() else {
        return BetaEquiv::Undetermined;
    };
    if na == nb {
        BetaEquiv::Equivalent
    } else {
        BetaEquiv::Distinct
    }
}

/// β-equivalence of open terms over a context of `free` variables, decided by
/// closing both sides with `free` abstractions first.
pub fn beta_equiv_open(a: &Term, b: &Term, free: usize, fuel: u64) -> BetaEquiv {
    beta_equiv(
        &Term::lams(free, a.clone()),
        &Term::lams(free, b.clone()),
        fuel,
    )
}

/// True iff the term contains no subterm of the form `(λ.M) N`.
pub fn is_normal(term: &Term) -> bool {
    match term {
        Term::Var(_) => true,
        Term::Lam(b) => is_normal(b),
        Term::App(f, a) => !matches!(**f, Term::Lam(_)) && is_normal(f) && is_normal(a),
    }
}

/// Contracts the leftmost-outermost redex, if any.
pub fn step_leftmost(term: &Term) -> Option<Term> {
    match term {
        Term::Var(_) => None,
        Term::Lam(b) => step_leftmost(b).map(Term::lam),
        Term::App(f, a) => {
            if let Term::Lam(body) = f.as_ref() {
                return Some(substitute(body, 0, a));
            }
            if let Some(f2) = step_leftmost(f) {
                return Some(Term::app(f2, (**a).clone()));
            }
            step_leftmost(a).map(|a2| Term::app((**f).clone(), a2))
        }
    }
}

/// Every position holding a redex, as paths of child choices
/// (0 = function or body, 1 = argument), in leftmost-outermost order.
pub fn redex_paths(term: &Term) -> Vec<Vec<u8>> {
    fn walk(t: &Term, path: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        match t {
            Term::Var(_) => {}
            Term::Lam(b) => {
                path.push(0);
                walk(b, path, out);
                path.pop();
            }
            Term::App(f, a) => {
                if matches!(**f, Term::Lam(_)) {
                    out.push(path.clone());
                }
                path.push(0);
                walk(f, path, out);
                path.pop();
                path.push(1);
                walk(a, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    walk(term, &mut Vec::new(), &mut out);
    out
}

/// Contracts the redex at `path` (as produced by [`redex_paths`]).
pub fn contract_at(term: &Term, path: &[u8]) -> Option<Term> {
    match (term, path.split_first()) {
        (Term::App(f, a), None) => match f.as_ref() {
            Term::Lam(body) => Some(substitute(body, 0, a)),
            _ => None,
        },
        (Term::Lam(b), Some((0, rest))) => contract_at(b, rest).map(Term::lam),
        (Term::App(f, a), Some((0, rest))) => {
            contract_at(f, rest).map(|f2| Term::app(f2, (**a).clone()))
        }
        (Term::App(f, a), Some((1, rest))) => {
            contract_at(a, rest).map(|a2| Term::app((**f).clone(), a2))
        }
        _ => None,
    }
}
