//! Core of the reduction from simple semi-Thue reachability to simply typed
//! higher-order matching: λ-terms, simple types, rewriting systems, the
//! gadget library, instance compilation, witness construction, a semantic
//! verifier, a bounded solver and an intersection-type checker.

pub mod eval;
pub mod gadgets;
pub mod itypes;
pub mod par;
pub mod reduction;
pub mod solver;
pub mod ssts;
pub mod syntax;
pub mod term;
pub mod types;
pub mod verifier;
pub mod witness;

pub use par::Exec;
pub use ssts::{Derivation, Rule, Ssts, SstsError, Step, Symbol, Word};
pub use term::{beta_equiv, normalize, BetaEquiv, NormalizeResult, Term};
pub use types::{type_check, type_infer, type_order, SimpleType, TypeEnv};
