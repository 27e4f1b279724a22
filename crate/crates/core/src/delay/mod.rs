//! The delay type and its combinators.
//!
//! A [`Delay<A>`] is a possibly infinite sequence of `later` constructors,
//! optionally ending in `now(a)`. Values are built lazily and are
//! observed one constructor at a time with [`Delay::step`] or under a fuel
//! budget with [`Delay::run_for`].
//!
//! All deferred computations handed to this module must be pure. Recursive
//! definitions written by hand must be guarded: every recursive call has
//! to sit under a [`Delay::later`]. The combinators here (`unfold`, `map`,
//! `bind`, `race`, `parallel_search`) are productive by construction.

mod term;

use std::fmt;
use std::marker::PhantomData;
use std::ops::ControlFlow;
use std::sync::Arc;

use thiserror::Error;

use self::term::{peel, Deferred, Erased, Peeled, Shared, Term};

/// Bound on the types a delay can carry.
pub trait Value: Clone + Send + Sync + 'static {}

impl<T: Clone + Send + Sync + 'static> Value for T {}

/// A partial element of `A`: either a value now, or one step followed by
/// another partial element.
pub struct Delay<A> {
    term: Term,
    marker: PhantomData<fn() -> A>,
}

/// The outermost constructor of a delay.
pub enum Step<A> {
    Now(A),
    Later(Delay<A>),
}

/// Outcome of running a delay under a fuel budget.
#[derive(Debug)]
pub enum RunResult<A> {
    /// Reached `now(value)` after peeling `steps` laters.
    Converged { value: A, steps: u64 },
    /// All fuel spent; `rest` is what remains after `fuel` laters.
    Exhausted { rest: Delay<A>, fuel: u64 },
}

impl<A> RunResult<A> {
    pub fn value(&self) -> Option<&A> {
        match self {
            RunResult::Converged { value, .. } => Some(value),
            RunResult::Exhausted { .. } => None,
        }
    }

    pub fn steps(&self) -> Option<u64> {
        match self {
            RunResult::Converged { steps, .. } => Some(*steps),
            RunResult::Exhausted { .. } => None,
        }
    }

    pub fn is_exhausted(&self) -> bool {
        matches!(self, RunResult::Exhausted { .. })
    }

    pub fn into_value(self) -> Option<A> {
        match self {
            RunResult::Converged { value, .. } => Some(value),
            RunResult::Exhausted { .. } => None,
        }
    }
}

/// Strict projection index outside `1..=len`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("projection index {index} out of range for a tuple of length {len}")]
pub struct ProjectionError {
    pub index: usize,
    pub len: usize,
}

impl<A> Clone for Delay<A> {
    fn clone(&self) -> Self {
        Delay::from_term(self.term.clone())
    }
}

impl<A> fmt::Debug for Delay<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.term {
            Term::Never => f.write_str("Delay(never)"),
            _ => f.write_str("Delay(..)"),
        }
    }
}

fn erase<A: Value>(a: A) -> Erased {
    Arc::new(a)
}

fn unerase<A: Value>(v: &Erased) -> A {
    v.downcast_ref::<A>()
        .expect("delay carries a value of its declared type")
        .clone()
}

impl<A> Delay<A> {
    fn from_term(term: Term) -> Self {
        Delay {
            term,
            marker: PhantomData,
        }
    }
}

impl<A: Value> Delay<A> {
    pub fn now(a: A) -> Self {
        Delay::from_term(Term::Now(erase(a)))
    }

    /// One step, then whatever `rest` produces.
    pub fn later<F>(rest: F) -> Self
    where
        F: Fn() -> Delay<A> + Send + Sync + 'static,
    {
        Delay::from_term(Term::Later(Arc::new(move || rest().term)))
    }

    /// Suspends the construction of a delay without adding a step.
    ///
    /// `build` must eventually return something other than another
    /// deferral, or peeling loops.
    pub(crate) fn defer<F>(build: F) -> Self
    where
        F: Fn() -> Delay<A> + Send + Sync + 'static,
    {
        Delay::from_term(Term::Defer(Arc::new(Deferred::new(Arc::new(move || {
            build().term
        })))))
    }

    /// The same computation, run at most once: its constructors are
    /// remembered as they are exposed, so a result used in several places
    /// is not recomputed. Values and step counts are unchanged.
    pub fn share(&self) -> Self {
        Delay::from_term(Shared::wrap(self.term.clone()))
    }

    /// The diverging computation: laters forever.
    pub fn never() -> Self {
        Delay::from_term(Term::Never)
    }

    /// `now(a)` under `n` laters.
    pub fn delay_by(a: A, n: u64) -> Self {
        unfold(n, move |k| match k.checked_sub(1) {
            None => ControlFlow::Break(a.clone()),
            Some(k) => ControlFlow::Continue(k),
        })
    }

    /// True only for delays built as (or reduced to) the literal `never`.
    /// A `false` answer says nothing about convergence.
    pub fn is_syntactically_never(&self) -> bool {
        self.term.is_never()
    }

    pub fn step(&self) -> Step<A> {
        match peel(&self.term) {
            Peeled::Value(v) => Step::Now(unerase(&v)),
            Peeled::Step(rest) => Step::Later(Delay::from_term(rest)),
        }
    }

    /// Peels at most `fuel` laters.
    pub fn run_for(&self, fuel: u64) -> RunResult<A> {
        let mut cur = self.term.clone();
        let mut steps = 0;
        loop {
            match peel(&cur) {
                Peeled::Value(v) => {
                    return RunResult::Converged {
                        value: unerase(&v),
                        steps,
                    }
                }
                Peeled::Step(rest) => {
                    if steps == fuel {
                        return RunResult::Exhausted {
                            rest: Delay::from_term(cur),
                            fuel,
                        };
                    }
                    steps += 1;
                    cur = rest;
                }
            }
        }
    }

    /// Lifting of a total function; step count is preserved.
    pub fn map<B, F>(&self, f: F) -> Delay<B>
    where
        B: Value,
        F: Fn(A) -> B + Send + Sync + 'static,
    {
        self.bind(move |a| Delay::now(f(a)))
    }

    /// Kleisli extension: run `self`, then `f` on its value. Steps add up.
    pub fn bind<B, F>(&self, f: F) -> Delay<B>
    where
        B: Value,
        F: Fn(A) -> Delay<B> + Send + Sync + 'static,
    {
        Delay::from_term(Term::bind(
            self.term.clone(),
            Arc::new(move |v: Erased| f(unerase::<A>(&v)).term),
        ))
    }

    /// First of the two to converge, preferring `self` on a tie.
    ///
    /// Not extensional: the winner depends on step counts, so the result
    /// is only well defined up to `≈` when the two arguments never converge
    /// to different values.
    pub fn race(&self, other: &Delay<A>) -> Delay<A> {
        Delay::from_term(Term::race([self.term.clone(), other.term.clone()]))
    }
}

impl<A: Value> Delay<Delay<A>> {
    /// Monad multiplication.
    pub fn join(&self) -> Delay<A> {
        self.bind(|inner| inner)
    }
}

/// Corecursive unfolding of a coalgebra: `Continue(s)` emits one later and
/// goes on from `s`, `Break(b)` stops with `now(b)`.
///
/// The first call to `step` happens eagerly; later calls happen one per
/// peeled step.
pub fn unfold<S, B, F>(seed: S, step: F) -> Delay<B>
where
    S: Value,
    B: Value,
    F: Fn(S) -> ControlFlow<B, S> + Send + Sync + 'static,
{
    fn go<S: Value, B: Value>(
        seed: S,
        step: Arc<dyn Fn(S) -> ControlFlow<B, S> + Send + Sync>,
    ) -> Delay<B> {
        match step(seed) {
            ControlFlow::Break(b) => Delay::now(b),
            ControlFlow::Continue(next) => Delay::later(move || go(next.clone(), step.clone())),
        }
    }
    go(seed, Arc::new(step))
}

/// Pairs a value with a computation. Steps are those of `y`.
pub fn strength<A: Value, B: Value>(a: A, y: &Delay<B>) -> Delay<(A, B)> {
    y.map(move |b| (a.clone(), b))
}

/// Runs `x` to a value, then `y`; steps add up.
pub fn strict_pair<A: Value, B: Value>(x: &Delay<A>, y: &Delay<B>) -> Delay<(A, B)> {
    let y = y.clone();
    x.bind(move |a| strength(a, &y))
}

/// Strict tuple: converges iff every component does, with the steps of
/// all components in order. The empty tuple is `now(vec![])`.
pub fn strict_tuple<A: Value>(xs: &[Delay<A>]) -> Delay<Vec<A>> {
    let Some((last, init)) = xs.split_last() else {
        return Delay::now(Vec::new());
    };
    // Right-nested as x1 ⊗ (x2 ⊗ (… ⊗ xn)), so x1's steps come first.
    let tail = last.map(|a| vec![a]);
    init.iter().rev().fold(tail, |acc, x| {
        strict_pair(x, &acc).map(|(a, mut rest)| {
            rest.insert(0, a);
            rest
        })
    })
}

/// Strict projection, 1-based. Diverges if any component diverges.
pub fn strict_proj<A: Value>(index: usize, xs: &[Delay<A>]) -> Result<Delay<A>, ProjectionError> {
    if index == 0 || index > xs.len() {
        return Err(ProjectionError {
            index,
            len: xs.len(),
        });
    }
    Ok(strict_tuple(xs).map(move |mut v| v.swap_remove(index - 1)))
}

/// Dovetails the sequence `f(0), f(1), …`: `f(n)` enters the race after
/// `n + 1` outer steps, and the first to converge wins (earlier entrants
/// win ties).
pub fn parallel_search<B, F>(f: F) -> Delay<B>
where
    B: Value,
    F: Fn(u64) -> Delay<B> + Send + Sync + 'static,
{
    Delay::from_term(Term::search(Arc::new(move |n| f(n).term)))
}
