//! Compilation of a rewriting system into a higher-order β-matching instance
//! `F M =β N`, and the split of that single equation into five constraints.

use std::fmt;

use thiserror::Error;

use crate::gadgets::{argument_bundles, gamma_env, kappa, projection, ExtSymbol, GadgetError};
use crate::ssts::Ssts;
use crate::term::Term;
use crate::types::{type_check, SimpleType, TypeEnv};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("the system has no rules")]
    DegenerateSystem,
    #[error("candidate is not typed at {expected}")]
    TypeFail { expected: SimpleType },
}

impl From<GadgetError> for ReductionError {
    fn from(_: GadgetError) -> Self {
        ReductionError::DegenerateSystem
    }
}

/// Find `M` with `∅ ⊢ M : sigma` and `f M =β n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingInstance {
    pub f: Term,
    pub n: Term,
    pub sigma: SimpleType,
    pub tau: SimpleType,
}

impl MatchingInstance {
    pub fn new(f: Term, n: Term, sigma: SimpleType, tau: SimpleType) -> MatchingInstance {
        MatchingInstance { f, n, sigma, tau }
    }

    /// `∅ ⊢ f : sigma → tau` and `∅ ⊢ n : tau`.
    pub fn is_well_typed(&self) -> bool {
        let env = TypeEnv::empty();
        type_check(
            &env,
            &self.f,
            &SimpleType::arrow(self.sigma.clone(), self.tau.clone()),
        ) && type_check(&env, &self.n, &self.tau)
    }
}

/// `Γ₁(r₁) → … → Γ₁(p₁) → κ`.
pub fn sigma(system: &Ssts) -> Result<SimpleType, ReductionError> {
    Ok(gamma_env(1, system.len(), system.alphabet_size())?.closed_type())
}

/// `((κ → κ) → κ → κ → κ → κ → ι) → ι`.
pub fn tau(alphabet_size: u32) -> SimpleType {
    let k = kappa(alphabet_size);
    let kk = SimpleType::arrow(k.clone(), k.clone());
    let y = SimpleType::arrows([kk, k.clone(), k.clone(), k.clone(), k], SimpleType::Atom);
    SimpleType::arrow(y, SimpleType::Atom)
}

/// Builds `F` and `N` for `system`.
pub fn compile(system: &Ssts) -> Result<MatchingInstance, ReductionError> {
    let k = system.alphabet_size();
    let sigma = sigma(system)?;
    let b = argument_bundles(system);

    // under λx.λy: x = 1, y = 0; under the extra λu: x = 2, u = 0
    let f_row = Term::lam(Term::apps(Term::Var(2), b.f_with(&Term::Var(0))));
    let x = || Term::Var(1);
    let rows = [
        f_row,
        Term::apps(x(), b.h),
        Term::apps(x(), b.g_bullet),
        Term::apps(x(), b.g_one),
        Term::apps(x(), b.g_zero),
    ];
    let f = Term::lams(2, Term::apps(Term::Var(0), rows));

    let pi = |s| projection(s, k).expect("fixed symbol");
    let n = Term::lam(Term::apps(
        Term::Var(0),
        [
            Term::identity(),
            pi(ExtSymbol::Dollar),
            pi(ExtSymbol::Dollar),
            pi(ExtSymbol::ZERO),
            pi(ExtSymbol::ONE),
        ],
    ));
    Ok(MatchingInstance {
        f,
        n,
        sigma,
        tau: tau(k),
    })
}

/// Which of the five rows a constraint comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConstraintLabel {
    FLine,
    HLine,
    GBulletLine,
    GOneLine,
    GZeroLine,
}

impl ConstraintLabel {
    pub const ALL: [ConstraintLabel; 5] = [
        ConstraintLabel::FLine,
        ConstraintLabel::HLine,
        ConstraintLabel::GBulletLine,
        ConstraintLabel::GOneLine,
        ConstraintLabel::GZeroLine,
    ];

    /// Shape rows (as opposed to semantic rows).
    pub fn is_shape(self) -> bool {
        matches!(self, ConstraintLabel::FLine | ConstraintLabel::HLine)
    }
}

impl fmt::Display for ConstraintLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstraintLabel::FLine => "F-line",
            ConstraintLabel::HLine => "H-line",
            ConstraintLabel::GBulletLine => "G•-line",
            ConstraintLabel::GOneLine => "G1-line",
            ConstraintLabel::GZeroLine => "G0-line",
        })
    }
}

/// A closed equation `left =β right`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintPair {
    pub label: ConstraintLabel,
    pub left: Term,
    pub right: Term,
}

/// The five equations whose conjunction is equivalent to `F candidate =β N`.
pub fn constraint_pairs(
    system: &Ssts,
    candidate: &Term,
) -> Result<Vec<ConstraintPair>, ReductionError> {
    let k = system.alphabet_size();
    let expected = sigma(system)?;
    if !candidate.is_closed() || !type_check(&TypeEnv::empty(), candidate, &expected) {
        return Err(ReductionError::TypeFail { expected });
    }
    let b = argument_bundles(system);
    let pi = |s| projection(s, k).expect("fixed symbol");
    let apply = |args: Vec<Term>| Term::apps(candidate.clone(), args);
    Ok(vec![
        ConstraintPair {
            label: ConstraintLabel::FLine,
            left: Term::lam(apply(b.f_with(&Term::Var(0)))),
            right: Term::identity(),
        },
        ConstraintPair {
            label: ConstraintLabel::HLine,
            left: apply(b.h),
            right: pi(ExtSymbol::Dollar),
        },
        ConstraintPair {
            label: ConstraintLabel::GBulletLine,
            left: apply(b.g_bullet),
            right: pi(ExtSymbol::Dollar),
        },
        ConstraintPair {
            label: ConstraintLabel::GOneLine,
            left: apply(b.g_one),
            right: pi(ExtSymbol::ZERO),
        },
        ConstraintPair {
            label: ConstraintLabel::GZeroLine,
            left: apply(b.g_zero),
            right: pi(ExtSymbol::ONE),
        },
    ])
}
