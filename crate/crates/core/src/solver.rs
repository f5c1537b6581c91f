//! Type-directed enumeration of β-normal inhabitants and brute-force bounded
//! solving of matching instances.
//!
//! Terms of each exact size are counted by a memoized dynamic program and
//! then generated by unranking, so a size class can be split into index
//! ranges and checked in parallel while keeping the sequential order. Order
//! within a size: abstraction first, then neutral terms by ascending head
//! index, then by argument count, then argument sizes lexicographically, then
//! the arguments themselves with the first one most significant.

use std::collections::HashMap;

use thiserror::Error;

use crate::eval::{nbe_check_apply, NbeOutcome};
use crate::par::Exec;
use crate::reduction::MatchingInstance;
use crate::term::{normalize, Term};
use crate::types::{SimpleType, TypeEnv};
use crate::verifier::{verify_solution, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("enumeration budget of {max_count} terms exhausted")]
    BudgetExceeded { max_count: usize },
    #[error("{count} candidates ran out of fuel")]
    FuelExhausted { count: usize },
    #[error("the target term has no normal form within the fuel")]
    TargetDiverges,
}

/// Limits for enumeration and solving.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumBudget {
    /// Largest term size (constructor count) considered.
    pub max_size: usize,
    /// Largest number of candidates emitted.
    pub max_count: usize,
    /// β-steps per candidate check.
    pub fuel: u64,
}

impl Default for EnumBudget {
    fn default() -> Self {
        EnumBudget {
            max_size: 24,
            max_count: 1_000_000,
            fuel: 1_000_000,
        }
    }
}

type TyId = usize;
type CtxId = usize;

/// Interned types and contexts with memoized inhabitant counts.
#[derive(Default)]
pub struct Space {
    types: Vec<SimpleType>,
    type_ids: HashMap<SimpleType, TyId>,
    arrows: Vec<Option<(TyId, TyId)>>,
    ctxs: Vec<Vec<TyId>>,
    ctx_ids: HashMap<Vec<TyId>, CtxId>,
    nf_memo: HashMap<(CtxId, TyId, usize), u128>,
    seq_memo: HashMap<(CtxId, TyId, usize, usize, usize), u128>,
}

impl Space {
    pub fn new() -> Space {
        Space::default()
    }

    fn ty(&mut self, t: &SimpleType) -> TyId {
        if let Some(&id) = self.type_ids.get(t) {
            return id;
        }
        let arrow = match t {
            SimpleType::Atom => None,
            SimpleType::Arrow(a, b) => Some((self.ty(a), self.ty(b))),
        };
        let id = self.types.len();
        self.types.push(t.clone());
        self.arrows.push(arrow);
        self.type_ids.insert(t.clone(), id);
        id
    }

    fn ctx(&mut self, binders: Vec<TyId>) -> CtxId {
        if let Some(&id) = self.ctx_ids.get(&binders) {
            return id;
        }
        let id = self.ctxs.len();
        self.ctxs.push(binders.clone());
        self.ctx_ids.insert(binders, id);
        id
    }

    fn env_ctx(&mut self, env: &TypeEnv) -> CtxId {
        let ids: Vec<TyId> = env.binders().iter().map(|t| self.ty(t)).collect();
        self.ctx(ids)
    }

    fn extend(&mut self, ctx: CtxId, ty: TyId) -> CtxId {
        let mut b = self.ctxs[ctx].clone();
        b.push(ty);
        self.ctx(b)
    }

    /// Domain of the `i`-th argument of a head of type `head`.
    fn dom(&self, head: TyId, i: usize) -> TyId {
        let mut t = head;
        for _ in 0..i {
            t = self.arrows[t].expect("arity checked").1;
        }
        self.arrows[t].expect("arity checked").0
    }

    /// Argument counts `j` for which a head of type `head` yields `target`.
    fn arities(&self, head: TyId, target: TyId) -> Vec<usize> {
        let mut out = Vec::new();
        let mut t = head;
        let mut j = 0;
        loop {
            if t == target {
                out.push(j);
            }
            match self.arrows[t] {
                Some((_, c)) => {
                    t = c;
                    j += 1;
                }
                None => return out,
            }
        }
    }

    /// Number of β-normal terms of `ty` in `ctx` with exactly `size` constructors.
    fn count_nf(&mut self, ctx: CtxId, ty: TyId, size: usize) -> u128 {
        if size == 0 {
            return 0;
        }
        if let Some(&c) = self.nf_memo.get(&(ctx, ty, size)) {
            return c;
        }
        let mut total = self.count_lam(ctx, ty, size);
        let n = self.ctxs[ctx].len();
        for k in 0..n {
            let head = self.ctxs[ctx][n - 1 - k];
            for j in self.arities(head, ty) {
                if let Some(rem) = size.checked_sub(1 + j) {
                    let c = self.count_seq(ctx, head, 0, j, rem);
                    total = total.saturating_add(c);
                }
            }
        }
        self.nf_memo.insert((ctx, ty, size), total);
        total
    }

    fn count_lam(&mut self, ctx: CtxId, ty: TyId, size: usize) -> u128 {
        match self.arrows[ty] {
            Some((d, c)) => {
                let inner = self.extend(ctx, d);
                self.count_nf(inner, c, size - 1)
            }
            None => 0,
        }
    }

    /// Tuples of arguments `from..to` of `head` with total size `rem`.
    fn count_seq(&mut self, ctx: CtxId, head: TyId, from: usize, to: usize, rem: usize) -> u128 {
        if from == to {
            return u128::from(rem == 0);
        }
        let key = (ctx, head, from, to, rem);
        if let Some(&c) = self.seq_memo.get(&key) {
            return c;
        }
        let dom = self.dom(head, from);
        let rest = to - from - 1;
        let mut total: u128 = 0;
        for s1 in 1..=rem.saturating_sub(rest) {
            let a = self.count_nf(ctx, dom, s1);
            if a == 0 {
                continue;
            }
            let b = self.count_seq(ctx, head, from + 1, to, rem - s1);
            total = total.saturating_add(a.saturating_mul(b));
        }
        self.seq_memo.insert(key, total);
        total
    }

    /// The `index`-th term (0-based) of `ty` in `ctx` with exactly `size` constructors.
    fn unrank(&mut self, ctx: CtxId, ty: TyId, size: usize, mut index: u128) -> Term {
        let lam = self.count_lam(ctx, ty, size);
        if index < lam {
            let (d, c) = self.arrows[ty].expect("lam count is positive");
            let inner = self.extend(ctx, d);
            return Term::lam(self.unrank(inner, c, size - 1, index));
        }
        index -= lam;
        let n = self.ctxs[ctx].len();
        for k in 0..n {
            let head = self.ctxs[ctx][n - 1 - k];
            for j in self.arities(head, ty) {
                let Some(rem) = size.checked_sub(1 + j) else {
                    continue;
                };
                let c = self.count_seq(ctx, head, 0, j, rem);
                if index < c {
                    let args = self.unrank_seq(ctx, head, 0, j, rem, index);
                    return Term::apps(Term::Var(k), args);
                }
                index -= c;
            }
        }
        panic!("index out of range for size {size}");
    }

    fn unrank_seq(
        &mut self,
        ctx: CtxId,
        head: TyId,
        from: usize,
        to: usize,
        rem: usize,
        mut index: u128,
    ) -> Vec<Term> {
        if from == to {
            return Vec::new();
        }
        let dom = self.dom(head, from);
        let rest = to - from - 1;
        for s1 in 1..=rem.saturating_sub(rest) {
            let a = self.count_nf(ctx, dom, s1);
            if a == 0 {
                continue;
            }
            let b = self.count_seq(ctx, head, from + 1, to, rem - s1);
            let block = a.saturating_mul(b);
            if index < block {
                let first = self.unrank(ctx, dom, s1, index / b);
                let mut out = vec![first];
                out.extend(self.unrank_seq(ctx, head, from + 1, to, rem - s1, index % b));
                return out;
            }
            index -= block;
        }
        panic!("index out of range for argument tuple");
    }
}

/// Number of β-normal terms `M` with `env ⊢ M : target` of each exact size
/// `0 ..= max_size` (saturating).
pub fn count_normal_inhabitants(env: &TypeEnv, target: &SimpleType, max_size: usize) -> Vec<u128> {
    let mut space = Space::new();
    let ctx = space.env_ctx(env);
    let ty = space.ty(target);
    (0..=max_size).map(|s| space.count_nf(ctx, ty, s)).collect()
}

/// An enumeration of one type, by size class.
pub struct Enumeration {
    space: Space,
    ctx: CtxId,
    ty: TyId,
}

impl Enumeration {
    pub fn new(env: &TypeEnv, target: &SimpleType) -> Enumeration {
        let mut space = Space::new();
        let ctx = space.env_ctx(env);
        let ty = space.ty(target);
        Enumeration { space, ctx, ty }
    }

    pub fn count(&mut self, size: usize) -> u128 {
        self.space.count_nf(self.ctx, self.ty, size)
    }

    /// The `index`-th term of size exactly `size`.
    pub fn get(&mut self, size: usize, index: u128) -> Term {
        assert!(index < self.count(size), "index out of range");
        self.space.unrank(self.ctx, self.ty, size, index)
    }

    /// Terms of size exactly `size` with indices in `range`.
    pub fn slice(&mut self, size: usize, range: std::ops::Range<u128>) -> Vec<Term> {
        range
            .map(|i| self.space.unrank(self.ctx, self.ty, size, i))
            .collect()
    }
}

/// Every β-normal `M` with `env ⊢ M : target` and size at most
/// `budget.max_size`, ordered by size then structurally. Fails when more
/// than `budget.max_count` terms exist.
pub fn enumerate_normal_inhabitants(
    env: &TypeEnv,
    target: &SimpleType,
    budget: EnumBudget,
) -> Result<Vec<Term>, SolverError> {
    let (terms, complete) = enumerate_truncated(env, target, budget);
    if complete {
        Ok(terms)
    } else {
        Err(SolverError::BudgetExceeded {
            max_count: budget.max_count,
        })
    }
}

/// As [`enumerate_normal_inhabitants`], returning the first `max_count`
/// terms and whether the enumeration was complete.
pub fn enumerate_truncated(
    env: &TypeEnv,
    target: &SimpleType,
    budget: EnumBudget,
) -> (Vec<Term>, bool) {
    let mut e = Enumeration::new(env, target);
    let mut out = Vec::new();
    for size in 1..=budget.max_size {
        let c = e.count(size);
        let room = (budget.max_count - out.len()) as u128;
        if c > room {
            out.extend(e.slice(size, 0..room));
            return (out, false);
        }
        out.extend(e.slice(size, 0..c));
    }
    (out, true)
}

/// Result of a bounded search that did not run out of budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    /// The first verifying candidate in enumeration order.
    Found { term: Term, checked: u128 },
    /// Every candidate up to the size bound was checked and none verifies.
    NotFound { checked: u128 },
}

impl SolveOutcome {
    pub fn term(&self) -> Option<&Term> {
        match self {
            SolveOutcome::Found { term, .. } => Some(term),
            SolveOutcome::NotFound { .. } => None,
        }
    }
}

/// Search settings beyond the budget.
#[derive(Clone, Copy, Debug)]
pub struct SolveConfig {
    pub exec: Exec,
    /// Candidates generated and checked per batch.
    pub batch: usize,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            exec: Exec::default(),
            batch: 1 << 14,
        }
    }
}

/// Checks candidates of type `sigma` in enumeration order until one verifies.
pub fn solve_bounded(
    instance: &MatchingInstance,
    budget: EnumBudget,
) -> Result<SolveOutcome, SolverError> {
    solve_bounded_with(instance, budget, SolveConfig::default())
}

pub fn solve_bounded_with(
    instance: &MatchingInstance,
    budget: EnumBudget,
    config: SolveConfig,
) -> Result<SolveOutcome, SolverError> {
    let target = normalize(&instance.n, budget.fuel)
        .normal()
        .ok_or(SolverError::TargetDiverges)?;
    let mut e = Enumeration::new(&TypeEnv::empty(), &instance.sigma);
    let mut checked: u128 = 0;
    let mut undetermined = 0usize;
    let max_count = budget.max_count as u128;
    let batch = config.batch.max(1) as u128;
    for size in 1..=budget.max_size {
        let total = e.count(size);
        let mut start: u128 = 0;
        while start < total {
            if checked >= max_count {
                return Err(SolverError::BudgetExceeded {
                    max_count: budget.max_count,
                });
            }
            let end = total.min(start + batch).min(start + (max_count - checked));
            let candidates = e.slice(size, start..end);
            let outcomes = config.exec.map(&candidates, |m| {
                nbe_check_apply(&instance.f, std::slice::from_ref(m), &target, budget.fuel)
            });
            for (i, (m, o)) in candidates.iter().zip(&outcomes).enumerate() {
                match o {
                    NbeOutcome::Equal => {
                        if verify_solution(instance, m, budget.fuel) == Verdict::Ok {
                            return Ok(SolveOutcome::Found {
                                term: m.clone(),
                                checked: checked + i as u128 + 1,
                            });
                        }
                        undetermined += 1;
                    }
                    NbeOutcome::Different => {}
                    NbeOutcome::OutOfFuel => undetermined += 1,
                }
            }
            checked += end - start;
            start = end;
        }
    }
    if undetermined > 0 {
        return Err(SolverError::FuelExhausted {
            count: undetermined,
        });
    }
    Ok(SolveOutcome::NotFound { checked })
}
