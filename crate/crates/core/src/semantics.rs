//! Fuel-bounded observation of convergence, divergence, finiteness, weak
//! bisimilarity and the convergence order.
//!
//! None of these predicates is decidable, so every check returns a
//! three-valued [`Verdict`]. `Holds` and `Fails` are always correct;
//! `Unknown` makes no claim. Once a check settles at some fuel, it gives
//! the same answer at every larger fuel.

use std::collections::HashSet;
use std::fmt;
use std::hash::Hash;
use std::ops::ControlFlow;

use crate::delay::{Delay, RunResult, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Holds,
    Fails,
    /// Budget ran out before the question was settled.
    Unknown {
        fuel_spent: u64,
    },
}

impl Verdict {
    pub fn holds(self) -> bool {
        self == Verdict::Holds
    }

    pub fn fails(self) -> bool {
        self == Verdict::Fails
    }

    pub fn is_unknown(self) -> bool {
        matches!(self, Verdict::Unknown { .. })
    }

    /// Three-valued conjunction; `Fails` dominates, then `Unknown`.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Fails, _) | (_, Verdict::Fails) => Verdict::Fails,
            (Verdict::Unknown { fuel_spent: a }, Verdict::Unknown { fuel_spent: b }) => {
                Verdict::Unknown {
                    fuel_spent: a.max(b),
                }
            }
            (u @ Verdict::Unknown { .. }, _) | (_, u @ Verdict::Unknown { .. }) => u,
            (Verdict::Holds, Verdict::Holds) => Verdict::Holds,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds => f.write_str("HOLDS"),
            Verdict::Fails => f.write_str("FAILS"),
            Verdict::Unknown { fuel_spent } => write!(f, "UNKNOWN fuel={fuel_spent}"),
        }
    }
}

/// `x ⇓ a`, observed within `fuel` steps.
pub fn converges_to<A: Value + PartialEq>(x: &Delay<A>, a: &A, fuel: u64) -> Verdict {
    match x.run_for(fuel) {
        RunResult::Converged { value, .. } if value == *a => Verdict::Holds,
        RunResult::Converged { .. } => Verdict::Fails,
        RunResult::Exhausted { .. } => Verdict::Unknown { fuel_spent: fuel },
    }
}

/// Refutes divergence when `x` converges within `fuel`. Divergence itself
/// can never be confirmed by a finite run, so this never returns `Holds`.
pub fn diverges_bounded<A: Value>(x: &Delay<A>, fuel: u64) -> Verdict {
    match x.run_for(fuel) {
        RunResult::Converged { .. } => Verdict::Fails,
        RunResult::Exhausted { .. } => Verdict::Unknown { fuel_spent: fuel },
    }
}

/// Divergence of `unfold(seed, step)` by cycle detection on the seeds.
///
/// `Holds` if a seed repeats before any `Break`, `Fails` if a `Break` is
/// reached, `Unknown` once more than `state_bound` distinct seeds were seen.
pub fn diverges_finite_state<S, B, F>(seed: S, step: F, state_bound: u64) -> Verdict
where
    S: Eq + Hash + Clone,
    F: Fn(S) -> ControlFlow<B, S>,
{
    let mut seen = HashSet::new();
    let mut cur = seed;
    let mut spent = 0;
    loop {
        if !seen.insert(cur.clone()) {
            return Verdict::Holds;
        }
        if seen.len() as u64 > state_bound {
            return Verdict::Unknown { fuel_spent: spent };
        }
        match step(cur) {
            ControlFlow::Break(_) => return Verdict::Fails,
            ControlFlow::Continue(next) => cur = next,
        }
        spent += 1;
    }
}

/// `x` has a value within `fuel`. Never `Fails`.
pub fn is_finite<A: Value>(x: &Delay<A>, fuel: u64) -> Verdict {
    match x.run_for(fuel) {
        RunResult::Converged { .. } => Verdict::Holds,
        RunResult::Exhausted { .. } => Verdict::Unknown { fuel_spent: fuel },
    }
}

/// Weak bisimilarity `x ≈ y`: both sides run independently with the full
/// budget and their values are compared. Step counts are irrelevant.
pub fn bisim<A: Value + PartialEq>(x: &Delay<A>, y: &Delay<A>, fuel: u64) -> Verdict {
    match (x.run_for(fuel).into_value(), y.run_for(fuel).into_value()) {
        (Some(a), Some(b)) if a == b => Verdict::Holds,
        (Some(_), Some(_)) => Verdict::Fails,
        _ => Verdict::Unknown { fuel_spent: fuel },
    }
}

/// Convergence order `x ⊑ y`: every value of `x` is a value of `y`.
///
/// Only settled when `x` converges within `fuel`: `x` diverging makes the
/// relation true but that cannot be observed.
pub fn leq<A: Value + PartialEq>(x: &Delay<A>, y: &Delay<A>, fuel: u64) -> Verdict {
    match x.run_for(fuel).into_value() {
        Some(a) => converges_to(y, &a, fuel),
        None => Verdict::Unknown { fuel_spent: fuel },
    }
}
