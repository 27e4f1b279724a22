//! Least fixed points of operators on partial functions.
//!
//! An [`Operator`] maps partial functions `A → Delay<B>` to partial
//! functions. Its iterates from the everywhere-diverging function are
//! `k₀ = ⊥`, `kₙ₊₁ = F(kₙ)`, and [`fix`] runs all of them in parallel,
//! returning the first value any of them reaches.
//!
//! The operator must be *finitary*: whenever `F(f)(a)` converges, the
//! result depends only on the values of `f` at finitely many arguments.
//! This is a contract on the caller; it is not checked. Operators written
//! as ordinary recursive definitions (calling the given function on some
//! arguments and combining the results) satisfy it.

pub mod operators;

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::sync::{Arc, Mutex};

use crate::delay::{parallel_search, Delay, Value};

/// A partial function `A → Delay<B>`.
pub struct PartialFn<A, B>(Arc<dyn Fn(A) -> Delay<B> + Send + Sync>);

impl<A, B> Clone for PartialFn<A, B> {
    fn clone(&self) -> Self {
        PartialFn(self.0.clone())
    }
}

impl<A, B> fmt::Debug for PartialFn<A, B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("PartialFn(..)")
    }
}

impl<A: Value, B: Value> PartialFn<A, B> {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(A) -> Delay<B> + Send + Sync + 'static,
    {
        PartialFn(Arc::new(f))
    }

    /// Lifts a total function.
    pub fn total<F>(f: F) -> Self
    where
        F: Fn(A) -> B + Send + Sync + 'static,
    {
        PartialFn::new(move |a| Delay::now(f(a)))
    }

    pub fn call(&self, a: A) -> Delay<B> {
        (self.0)(a)
    }
}

type Body<A, B> = dyn Fn(&PartialFn<A, B>, A) -> Delay<B> + Send + Sync;

/// An operator `(A → Delay<B>) → (A → Delay<B>)`, given by its body
/// `F(f)(a)`.
pub struct Operator<A, B> {
    name: String,
    body: Arc<Body<A, B>>,
}

impl<A, B> Clone for Operator<A, B> {
    fn clone(&self) -> Self {
        Operator {
            name: self.name.clone(),
            body: self.body.clone(),
        }
    }
}

impl<A, B> fmt::Debug for Operator<A, B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Operator")
            .field("name", &self.name)
            .finish()
    }
}

impl<A: Value, B: Value> Operator<A, B> {
    /// `body(f, a)` computes `F(f)(a)`; it must be pure and finitary.
    pub fn new<F>(name: impl Into<String>, body: F) -> Self
    where
        F: Fn(&PartialFn<A, B>, A) -> Delay<B> + Send + Sync + 'static,
    {
        Operator {
            name: name.into(),
            body: Arc::new(body),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn apply(&self, f: &PartialFn<A, B>) -> PartialFn<A, B> {
        let body = self.body.clone();
        let f = f.clone();
        // Deferred so that building kₙ(a) does not recurse n levels deep.
        PartialFn::new(move |a: A| {
            let (body, f) = (body.clone(), f.clone());
            Delay::defer(move || body(&f, a.clone()))
        })
    }
}

/// The everywhere-diverging function.
pub fn bottom<A: Value, B: Value>() -> PartialFn<A, B> {
    PartialFn::new(|_| Delay::never())
}

/// `kₙ = Fⁿ(⊥)`.
pub fn iterate<A: Value, B: Value>(op: &Operator<A, B>, n: u64) -> PartialFn<A, B> {
    (0..n).fold(bottom(), |k, _| op.apply(&k))
}

/// Remembers the delay returned at each argument.
fn memoized<A, B>(f: PartialFn<A, B>) -> PartialFn<A, B>
where
    A: Value + Eq + Hash,
    B: Value,
{
    let table: Mutex<HashMap<A, Delay<B>>> = Mutex::new(HashMap::new());
    PartialFn::new(move |a: A| {
        if let Some(d) = table.lock().expect("memo poisoned").get(&a) {
            return d.clone();
        }
        let d = f.call(a.clone());
        table
            .lock()
            .expect("memo poisoned")
            .entry(a)
            .or_insert(d)
            .clone()
    })
}

/// Iterates built once and shared by every search over the same operator.
/// Each is memoized, so `kₙ(a)` reuses the already explored `kₙ₋₁` calls.
struct Iterates<A, B> {
    op: Operator<A, B>,
    cache: Mutex<Vec<PartialFn<A, B>>>,
}

impl<A: Value + Eq + Hash, B: Value> Iterates<A, B> {
    fn get(&self, n: u64) -> PartialFn<A, B> {
        let n = usize::try_from(n).expect("iterate index fits in memory");
        let mut cache = self.cache.lock().expect("iterate cache poisoned");
        if cache.is_empty() {
            cache.push(bottom());
        }
        while cache.len() <= n {
            let next = memoized(self.op.apply(cache.last().expect("non-empty")));
            cache.push(next);
        }
        cache[n].clone()
    }
}

// Each iterate holds the previous one; newest first keeps drops shallow.
impl<A, B> Drop for Iterates<A, B> {
    fn drop(&mut self) {
        if let Ok(cache) = self.cache.get_mut() {
            while cache.pop().is_some() {}
        }
    }
}

/// The least fixed point `Y(F)`: at each argument, the dovetailed search
/// over `k₀(a), k₁(a), …`.
///
/// `Y(F)(a)` converges to `b` exactly when some iterate does. For a
/// finitary `F` it is a fixed point of `F` up to `≈` and below every
/// prefixed point in the convergence order.
pub fn fix<A, B>(op: &Operator<A, B>) -> PartialFn<A, B>
where
    A: Value + Eq + Hash,
    B: Value,
{
    let iterates = Arc::new(Iterates {
        op: op.clone(),
        cache: Mutex::new(Vec::new()),
    });
    PartialFn::new(move |a: A| {
        let iterates = iterates.clone();
        parallel_search(move |n| iterates.get(n).call(a.clone()))
    })
}

#[cfg(test)]
mod tests {
    use super::operators::*;
    use super::*;
    use crate::semantics::{bisim, leq, Verdict};

    fn value<B: Value>(x: &Delay<B>, fuel: u64) -> Option<B> {
        x.run_for(fuel).into_value()
    }

    fn factorial_oracle(n: u64) -> u64 {
        (1..=n).product()
    }

    #[test]
    fn bottom_never_converges() {
        assert!(bottom::<u64, u64>().call(17).run_for(1000).is_exhausted());
        let k0 = iterate(&factorial::<u64>(), 0);
        assert!(k0.call(0).run_for(1000).is_exhausted());
        assert!(leq(&bottom::<u64, u64>().call(3), &Delay::now(6), 1000).is_unknown());
    }

    #[test]
    fn factorial_iterates() {
        let op = factorial::<u64>();
        assert_eq!(value(&iterate(&op, 1).call(0), 10), Some(1));
        // 5! unrolls five recursive calls plus the base case
        assert!(iterate(&op, 3).call(5).run_for(10_000).is_exhausted());
        assert!(iterate(&op, 5).call(5).run_for(10_000).is_exhausted());
        assert_eq!(
            value(&iterate(&op, 6).call(5), 10),
            Some(factorial_oracle(5))
        );
    }

    #[test]
    fn fixed_points_of_sample_operators() {
        assert_eq!(value(&fix(&factorial::<u64>()).call(5), 1000), Some(120));
        assert_eq!(value(&fix(&mccarthy91::<u64>()).call(99), 10_000), Some(91));
        assert_eq!(
            value(&fix(&ackermann::<u64>()).call((2, 3)), 10_000),
            Some(9)
        );
        assert_eq!(value(&fix(&division::<u64>()).call((17, 5)), 1000), Some(3));
        assert!(fix(&division::<u64>())
            .call((17, 0))
            .run_for(10_000)
            .is_exhausted());
        let stuck = fix(&diverging::<u64>());
        for a in [0u64, 1, 50] {
            assert!(stuck.call(a).run_for(10_000).is_exhausted());
        }
    }

    #[test]
    fn fix_is_a_least_fixed_point_for_factorial() {
        let op = factorial::<u64>();
        let y = fix(&op);
        let fy = op.apply(&y);
        let exact = PartialFn::total(factorial_oracle);
        for a in 0..=10 {
            assert_eq!(bisim(&fy.call(a), &y.call(a), 10_000), Verdict::Holds);
            assert_eq!(leq(&y.call(a), &exact.call(a), 10_000), Verdict::Holds);
        }
    }

    #[test]
    fn fix_agrees_with_some_iterate() {
        let op = mccarthy91::<u64>();
        let y = fix(&op);
        for a in [0u64, 45, 90, 100, 101, 150] {
            let fuel = 10_000;
            let b = value(&y.call(a), fuel).expect("McCarthy 91 terminates");
            let witness = (0..=fuel).find(|&n| value(&iterate(&op, n).call(a), fuel) == Some(b));
            assert!(witness.is_some(), "no iterate reaches {b} at {a}");
        }
    }

    #[test]
    fn operators_preserve_order() {
        // f ⊑ g pointwise (g defined on more points), so F f ⊑ F g
        let op = factorial::<u64>();
        let f = PartialFn::new(|n: u64| {
            if n < 3 {
                Delay::now(factorial_oracle(n))
            } else {
                Delay::never()
            }
        });
        let g = PartialFn::total(factorial_oracle);
        let (ff, fg) = (op.apply(&f), op.apply(&g));
        for a in 0..8 {
            assert_ne!(leq(&ff.call(a), &fg.call(a), 100), Verdict::Fails);
            if a <= 3 {
                assert_eq!(leq(&ff.call(a), &fg.call(a), 100), Verdict::Holds);
            }
        }
    }
}
