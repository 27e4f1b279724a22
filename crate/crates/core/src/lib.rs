//! Partial computations as first-class values.
//!
//! [`Delay<A>`] is the coinductive type of computations that either return
//! a value now or take one more step. On top of it this crate provides:
//!
//! - fuel-bounded, three-valued checks of convergence, weak bisimilarity
//!   and the convergence order ([`semantics`]);
//! - least fixed points of finitary operators on partial functions,
//!   computed by dovetailing the iterates ([`fixpoint`]);
//! - an interpreter for Kleene partial recursive function codes, with an
//!   independent big-step oracle ([`reccode`]);
//! - encodings of nested recursion ([`nested`]) and lazy partial naturals
//!   ([`lazy`]);
//! - executable monad and strength laws ([`monad_laws`]) and the
//!   command-line front end ([`cli`]).
//!
//! Numeric code is generic over [`Natural`]; the aliases below fix it to
//! arbitrary-precision integers.

pub mod cli;
pub mod delay;
pub mod fixpoint;
pub mod lazy;
pub mod monad_laws;
pub mod nested;
pub mod num;
pub mod reccode;
pub mod semantics;

pub use delay::{
    parallel_search, strength, strict_pair, strict_proj, strict_tuple, unfold, Delay,
    ProjectionError, RunResult, Step, Value,
};
pub use fixpoint::{Operator, PartialFn};
pub use lazy::LazyNat;
pub use num::Natural;
pub use reccode::RecCode;
pub use semantics::Verdict;

/// Arbitrary-precision natural numbers.
pub type NatValue = num_bigint::BigUint;

/// Partial natural numbers.
pub type NatDelay = Delay<NatValue>;

/// Partial functions on naturals.
pub type NatFn = PartialFn<NatValue, NatValue>;

/// Operators on partial functions of naturals.
pub type NatOperator = Operator<NatValue, NatValue>;
