//! Checking candidate solutions of matching instances, with per-constraint
//! diagnostics for compiled instances.

use std::fmt;

use crate::par::Exec;
use crate::reduction::{
    compile, constraint_pairs, ConstraintLabel, MatchingInstance, ReductionError,
};
use crate::ssts::Ssts;
use crate::syntax::{print_term, Style};
use crate::term::{beta_equiv, normalize, BetaEquiv, Term};
use crate::types::{type_check, TypeEnv};
use crate::witness::SemanticRow;

/// Outcome of [`verify_solution`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Ok,
    TypeFail(String),
    EquivFail(String),
    /// Normalization did not finish within the given fuel.
    Undetermined(u64),
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        *self == Verdict::Ok
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Ok => f.write_str("ok"),
            Verdict::TypeFail(d) => write!(f, "type failure: {d}"),
            Verdict::EquivFail(d) => write!(f, "not a solution: {d}"),
            Verdict::Undetermined(fuel) => write!(f, "undetermined after {fuel} steps"),
        }
    }
}

/// `size(F) · size(N) · size(M) · 1000`, saturating.
pub fn default_fuel(instance: &MatchingInstance, candidate: &Term) -> u64 {
    [instance.f.size(), instance.n.size(), candidate.size(), 1000]
        .iter()
        .fold(1u64, |acc, &x| acc.saturating_mul(x as u64))
}

/// Whether `∅ ⊢ candidate : sigma` and `F candidate =β N`.
pub fn verify_solution(instance: &MatchingInstance, candidate: &Term, fuel: u64) -> Verdict {
    if !candidate.is_closed() {
        return Verdict::TypeFail("candidate has free variables".into());
    }
    if !type_check(&TypeEnv::empty(), candidate, &instance.sigma) {
        return Verdict::TypeFail(format!("candidate is not typed at {}", instance.sigma));
    }
    let applied = Term::app(instance.f.clone(), candidate.clone());
    match beta_equiv(&applied, &instance.n, fuel) {
        BetaEquiv::Equivalent => Verdict::Ok,
        BetaEquiv::Distinct => {
            let lhs = normalize(&applied, fuel)
                .normal()
                .map_or_else(|| "?".to_string(), |t| print_term(&t, Style::Named));
            Verdict::EquivFail(format!("F M normalizes to {lhs}"))
        }
        BetaEquiv::Undetermined => Verdict::Undetermined(fuel),
    }
}

/// One evaluated constraint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagnosticRow {
    pub label: ConstraintLabel,
    pub outcome: BetaEquiv,
    /// Normal form of the left side, when reached.
    pub left: Option<Term>,
    pub right: Term,
}

impl DiagnosticRow {
    pub fn passed(&self) -> bool {
        self.outcome == BetaEquiv::Equivalent
    }
}

impl fmt::Display for DiagnosticRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.outcome {
            BetaEquiv::Equivalent => "pass",
            BetaEquiv::Distinct => "FAIL",
            BetaEquiv::Undetermined => "undetermined",
        };
        let left = self
            .left
            .as_ref()
            .map_or_else(|| "?".to_string(), |t| print_term(t, Style::Named));
        write!(
            f,
            "{:<8} {:<12} {} | expected {}",
            self.label.to_string(),
            status,
            left,
            print_term(&self.right, Style::Named)
        )
    }
}

/// The five constraint rows in fixed order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnosis {
    pub rows: Vec<DiagnosticRow>,
}

impl Diagnosis {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(DiagnosticRow::passed)
    }

    pub fn row(&self, label: ConstraintLabel) -> &DiagnosticRow {
        self.rows
            .iter()
            .find(|r| r.label == label)
            .expect("all five rows present")
    }
}

/// Evaluates every constraint of the compiled instance against `candidate`.
pub fn diagnose(system: &Ssts, candidate: &Term, fuel: u64) -> Result<Diagnosis, ReductionError> {
    diagnose_with(system, candidate, fuel, Exec::default())
}

pub fn diagnose_with(
    system: &Ssts,
    candidate: &Term,
    fuel: u64,
    exec: Exec,
) -> Result<Diagnosis, ReductionError> {
    let pairs = constraint_pairs(system, candidate)?;
    let rows = exec.map(&pairs, |p| {
        let left = normalize(&p.left, fuel).normal();
        let outcome = match &left {
            Some(l) if *l == p.right => BetaEquiv::Equivalent,
            Some(_) => BetaEquiv::Distinct,
            None => BetaEquiv::Undetermined,
        };
        DiagnosticRow {
            label: p.label,
            outcome,
            left,
            right: p.right.clone(),
        }
    });
    Ok(Diagnosis { rows })
}

/// `diagnose` all-pass agrees with `verify_solution` on the compiled instance.
pub fn diagnosis_agrees(
    system: &Ssts,
    candidate: &Term,
    fuel: u64,
) -> Result<bool, ReductionError> {
    let d = diagnose(system, candidate, fuel)?;
    let inst = compile(system)?;
    Ok(d.all_pass() == verify_solution(&inst, candidate, fuel).is_ok())
}

/// Evaluates semantic rows in order.
pub fn check_rows(system: &Ssts, rows: &[SemanticRow], fuel: u64, exec: Exec) -> Vec<BetaEquiv> {
    exec.map(rows, |row| {
        let (l, r) = row.equation(system);
        beta_equiv(&l, &r, fuel)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ssts::{Derivation, Rule, Step};
    use crate::syntax::parse_closed_term;
    use crate::types::SimpleType;
    use crate::witness::solution_term;

    /// κ = ι → ι → ι → ι, projections π₁ … π₃.
    fn combo() -> MatchingInstance {
        let pi = |i: usize| Term::lams(3, Term::Var(3 - i));
        let g = parse_closed_term("\\h. \\x y z. h y z x").unwrap();
        // F = λt.λr. r (t G π₁) (λu. t I u)
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
        let r = SimpleType::arrows([k.clone(), kk], SimpleType::Atom);
        let tau = SimpleType::arrow(r, SimpleType::Atom);
        MatchingInstance::new(f, n, sigma, tau)
    }

    fn verdict(src: &str) -> Verdict {
        verify_solution(&combo(), &parse_closed_term(src).unwrap(), 100_000)
    }

    #[test]
    fn combo_instance_typed() {
        assert!(combo().is_well_typed());
    }

    #[test]
    fn combo_accepts_iterations() {
        assert_eq!(verdict("\\f s. f (f s)"), Verdict::Ok);
        assert_eq!(verdict("\\f s. f (f (f (f (f s))))"), Verdict::Ok);
    }

    #[test]
    fn combo_rejects_ad_hoc() {
        assert!(matches!(
            verdict("\\f s. \\x y z. z"),
            Verdict::EquivFail(_)
        ));
        assert!(matches!(
            verdict("\\f s. \\x y z. f s z z z"),
            Verdict::EquivFail(_)
        ));
    }

    #[test]
    fn self_application_is_type_failure() {
        assert!(matches!(verdict("\\f s. (f f) s"), Verdict::TypeFail(_)));
    }

    #[test]
    fn minimal_witness_diagnoses_clean() {
        let s = Ssts::new(2, vec![Rule::new(0, 0, 1, 1)]).unwrap();
        let m = solution_term(&s, 1, &Derivation::new(vec![Step::new(1, 1)])).unwrap();
        let d = diagnose(&s, &m, 1_000_000).unwrap();
        assert!(d.all_pass());
        assert_eq!(d.rows.len(), 5);
        let inst = compile(&s).unwrap();
        assert_eq!(
            verify_solution(&inst, &m, default_fuel(&inst, &m)),
            Verdict::Ok
        );
    }

    #[test]
    fn modes_agree() {
        let s = Ssts::new(2, vec![Rule::new(0, 0, 1, 0), Rule::new(0, 1, 1, 1)]).unwrap();
        let m = parse_closed_term("\\r1 r2 z0 z1 zs p1. zs p1 (\\p2. z0 p2 (r1 p1 (r2 p2 z1)))")
            .unwrap();
        let a = diagnose_with(&s, &m, 1_000_000, Exec::Sequential).unwrap();
        let b = diagnose_with(&s, &m, 1_000_000, Exec::Parallel).unwrap();
        assert_eq!(a, b);
        assert!(a.row(ConstraintLabel::FLine).passed());
        assert!(a.row(ConstraintLabel::HLine).passed());
        assert!(!a.all_pass());
    }
}
