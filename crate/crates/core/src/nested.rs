//! Nested recursion turned into tail recursion over delays.
//!
//! [`nest`] counts pending nested calls in an accumulator. [`devil`] does
//! the same for the family `devil(a) = h(devilᵈ(i(a)))` (`d = 2` by
//! default), keeping the pending calls and post-maps on an explicit stack.
//! [`cps_fix`] handles the single-call case `d(a) = h(d(i(a)))` by
//! remembering how many times `h` is still owed.

use std::ops::ControlFlow;
use std::sync::Arc;

use crate::delay::{unfold, Delay, Value};
use crate::num::Natural;

/// `nest 0 = 0`, `nest (n+1) = nest (nest n)`.
pub fn nest<N: Natural>(n: N) -> Delay<N> {
    cnest(n, N::one())
}

/// `nestᵐ(n)`, one step per transition.
pub fn cnest<N: Natural>(n: N, m: N) -> Delay<N> {
    cnest_with(n, m, 2)
}

/// Like [`cnest`] for `nest (n+1) = nestᵈ(n)` with `d = depth`.
pub fn cnest_with<N: Natural>(n: N, m: N, depth: u64) -> Delay<N> {
    let depth = N::nat(depth);
    unfold((n, m), move |(n, m)| match (n.pred(), m.pred()) {
        (_, None) => ControlFlow::Break(n),
        (None, Some(m)) => ControlFlow::Continue((n, m)),
        (Some(n), Some(m)) => ControlFlow::Continue((n, m + depth.clone())),
    })
}

type Pred<A> = Arc<dyn Fn(&A) -> bool + Send + Sync>;
type Map<A> = Arc<dyn Fn(A) -> A + Send + Sync>;

/// Parameters of `devil(a) = if in_base(a) then g(a) else h(devilᵈ(i(a)))`.
///
/// `g` is only ever called on arguments satisfying `in_base`.
pub struct DevilSpec<A> {
    in_base: Pred<A>,
    g: Map<A>,
    i: Map<A>,
    // `None` is the identity.
    h: Option<Map<A>>,
    nesting: u64,
}

impl<A> Clone for DevilSpec<A> {
    fn clone(&self) -> Self {
        DevilSpec {
            in_base: self.in_base.clone(),
            g: self.g.clone(),
            i: self.i.clone(),
            h: self.h.clone(),
            nesting: self.nesting,
        }
    }
}

impl<A: Value> DevilSpec<A> {
    /// Nesting depth 2 and `h` the identity.
    pub fn new<P, G, I>(in_base: P, g: G, i: I) -> Self
    where
        P: Fn(&A) -> bool + Send + Sync + 'static,
        G: Fn(A) -> A + Send + Sync + 'static,
        I: Fn(A) -> A + Send + Sync + 'static,
    {
        DevilSpec {
            in_base: Arc::new(in_base),
            g: Arc::new(g),
            i: Arc::new(i),
            h: None,
            nesting: 2,
        }
    }

    /// Applies `h` after the nested calls return.
    pub fn with_post<H>(mut self, h: H) -> Self
    where
        H: Fn(A) -> A + Send + Sync + 'static,
    {
        self.h = Some(Arc::new(h));
        self
    }

    /// Number of nested calls in the recursive case; at least 1.
    pub fn with_nesting(mut self, depth: u64) -> Self {
        assert!(depth >= 1, "nesting depth must be at least 1");
        self.nesting = depth;
        self
    }
}

/// McCarthy's 91 function: `n − 10` above 100, else `f(f(n + 11))`.
pub fn mccarthy91<N: Natural>() -> DevilSpec<N> {
    DevilSpec::new(
        |n: &N| *n > N::nat(100),
        |n: N| n - N::nat(10),
        |n: N| n + N::nat(11),
    )
}

/// Work left to do once the current call returns.
#[derive(Clone)]
enum Frame {
    /// That many more calls of `devil` on the result.
    Calls(u64),
    Post,
}

/// Persistent stack of frames.
#[derive(Clone, Default)]
struct Frames(Option<Arc<(Frame, Frames)>>);

impl Frames {
    fn push(&self, frame: Frame) -> Frames {
        match (&frame, &self.0) {
            (Frame::Calls(k), Some(top)) => match &top.0 {
                Frame::Calls(j) => Frames(Some(Arc::new((Frame::Calls(j + k), top.1.clone())))),
                Frame::Post => Frames(Some(Arc::new((frame, self.clone())))),
            },
            _ => Frames(Some(Arc::new((frame, self.clone())))),
        }
    }
}

impl Drop for Frames {
    fn drop(&mut self) {
        let mut next = self.0.take();
        while let Some(node) = next {
            match Arc::try_unwrap(node) {
                Ok((_, mut rest)) => next = rest.0.take(),
                Err(_) => break,
            }
        }
    }
}

#[derive(Clone)]
enum Control<A> {
    Call(A),
    Return(A),
}

/// The devil's nest as a delay; one step per entry into the recursive case
/// and one per resumption of a pending call.
pub fn devil<A: Value>(spec: &DevilSpec<A>, a: A) -> Delay<A> {
    let spec = spec.clone();
    unfold(
        (Control::Call(a), Frames::default()),
        move |(mut control, mut frames)| loop {
            control = match control {
                Control::Call(a) if (spec.in_base)(&a) => Control::Return((spec.g)(a)),
                Control::Call(a) => {
                    if spec.h.is_some() {
                        frames = frames.push(Frame::Post);
                    }
                    if spec.nesting > 1 {
                        frames = frames.push(Frame::Calls(spec.nesting - 1));
                    }
                    return ControlFlow::Continue((Control::Call((spec.i)(a)), frames));
                }
                Control::Return(v) => {
                    let Some(top) = frames.0.clone() else {
                        return ControlFlow::Break(v);
                    };
                    frames = top.1.clone();
                    match top.0 {
                        Frame::Post => Control::Return(spec.h.as_ref().expect("post frame")(v)),
                        Frame::Calls(k) => {
                            if k > 1 {
                                frames = frames.push(Frame::Calls(k - 1));
                            }
                            return ControlFlow::Continue((Control::Call(v), frames));
                        }
                    }
                }
            }
        },
    )
}

/// `d(a) = if in_base(a) then g(a) else h(d(i(a)))` in continuation-passing
/// style: the continuation is `now ∘ hᵏ`, kept as the count `k`.
pub fn cps_fix<A, P, G, I, H>(in_base: P, g: G, i: I, h: H, a: A) -> Delay<A>
where
    A: Value,
    P: Fn(&A) -> bool + Send + Sync + 'static,
    G: Fn(A) -> A + Send + Sync + 'static,
    I: Fn(A) -> A + Send + Sync + 'static,
    H: Fn(A) -> A + Send + Sync + 'static,
{
    unfold((0u64, a), move |(k, a)| {
        if in_base(&a) {
            ControlFlow::Break((0..k).fold(g(a), |v, _| h(v)))
        } else {
            ControlFlow::Continue((k + 1, i(a)))
        }
    })
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;

    use super::*;
    use crate::semantics::{bisim, Verdict};

    fn run<A: Value>(x: &Delay<A>, fuel: u64) -> Option<(A, u64)> {
        let r = x.run_for(fuel);
        r.steps().map(|s| (r.into_value().expect("converged"), s))
    }

    fn nest_oracle(n: u64) -> u64 {
        match n {
            0 => 0,
            n => nest_oracle(nest_oracle(n - 1)),
        }
    }

    fn mccarthy_oracle(n: u64, memo: &mut HashMap<u64, u64>) -> u64 {
        if n > 100 {
            return n - 10;
        }
        if let Some(&v) = memo.get(&n) {
            return v;
        }
        let inner = mccarthy_oracle(n + 11, memo);
        let v = mccarthy_oracle(inner, memo);
        memo.insert(n, v);
        v
    }

    #[test]
    fn nest_is_zero() {
        for n in 0..=10u64 {
            assert_eq!(run(&nest(n), 10_000).map(|r| r.0), Some(0));
        }
        // (3,2) → (2,3) → (1,4) → (0,5) → (0,4) … → (0,0)
        assert_eq!(run(&cnest(3u64, 2), 100), Some((0, 8)));
        assert_eq!(run(&nest(0u64), 10), Some((0, 1)));
    }

    #[test]
    fn cnest_counts_applications() {
        for n in 0..=4u64 {
            for m in 0..=4u64 {
                let expected = Delay::now((0..m).fold(n, |x, _| nest_oracle(x)));
                assert_eq!(bisim(&cnest(n, m), &expected, 1000), Verdict::Holds);
            }
        }
    }

    #[test]
    fn variable_nesting() {
        // nest₃ (n+1) = nest₃ (nest₃ (nest₃ n)) is also constantly 0
        for n in 0..=6u64 {
            assert_eq!(run(&cnest_with(n, 1, 3), 10_000).map(|r| r.0), Some(0));
        }
    }

    #[test]
    fn mccarthy_matches_oracle() {
        let spec = mccarthy91::<u64>();
        let mut memo = HashMap::new();
        for n in 0..=200u64 {
            let expected = mccarthy_oracle(n, &mut memo);
            assert_eq!(
                run(&devil(&spec, n), 100_000).map(|r| r.0),
                Some(expected),
                "at {n}"
            );
        }
        assert_eq!(run(&devil(&spec, 99), 1000).map(|r| r.0), Some(91));
        assert_eq!(run(&devil(&spec, 200), 0), Some((190, 0)));
    }

    #[test]
    fn devil_steps_follow_the_counter() {
        // 100 → 111 → 101 → 91 with one call pending after the first step
        let spec = mccarthy91::<u64>();
        assert_eq!(run(&devil(&spec, 100), 100), Some((91, 2)));
    }

    #[test]
    fn devil_without_base_diverges() {
        let spec = DevilSpec::new(|_: &u64| false, |n| n, |n| n + 1);
        assert!(devil(&spec, 0).run_for(10_000).is_exhausted());
        let spec = spec.with_post(|n| n * 2);
        assert!(devil(&spec, 0).run_for(10_000).is_exhausted());
    }

    fn devil_oracle(a: i64, depth: &mut u32) -> Option<i64> {
        // devil(a) = if a ≤ 0 then 0 else devil(devil(a − 2)) + 1
        *depth += 1;
        if *depth > 10_000 {
            return None;
        }
        if a <= 0 {
            return Some(0);
        }
        let inner = devil_oracle(a - 2, depth)?;
        Some(devil_oracle(inner, depth)? + 1)
    }

    #[test]
    fn devil_with_post_map() {
        let spec = DevilSpec::new(|a: &i64| *a <= 0, |_| 0, |a| a - 2).with_post(|v| v + 1);
        for a in 0..12i64 {
            let expected = devil_oracle(a, &mut 0);
            assert_eq!(
                run(&devil(&spec, a), 100_000).map(|r| r.0),
                expected,
                "at {a}"
            );
        }
    }

    #[test]
    fn single_nesting_is_cps() {
        let spec = DevilSpec::new(|a: &u64| *a == 0, |_| 100, |a| a - 1)
            .with_post(|v| v + 1)
            .with_nesting(1);
        for a in 0..8u64 {
            let cps = cps_fix(|a: &u64| *a == 0, |_| 100, |a| a - 1, |v| v + 1, a);
            assert_eq!(run(&devil(&spec, a), 100), run(&cps, 100));
        }
    }

    #[test]
    fn cps_samples() {
        let d = |a: u64| cps_fix(|a: &u64| *a == 0, |_| 100, |a| a - 1, |v| v + 1, a);
        assert_eq!(run(&d(3), 100), Some((103, 3)));
        assert_eq!(run(&d(0), 0), Some((100, 0)));
        let stuck = cps_fix(|a: &u64| *a == 0, |_| 100, |a| a, |v| v + 1, 1);
        assert!(stuck.run_for(10_000).is_exhausted());
    }

    #[test]
    fn cps_with_identity_is_tail_recursion() {
        for a in 0..20u64 {
            let cps = cps_fix(
                |a: &u64| a.is_multiple_of(7),
                |a| a * 3,
                |a| a + 2,
                |v| v,
                a,
            );
            let plain = unfold(a, |a: u64| {
                if a.is_multiple_of(7) {
                    ControlFlow::Break(a * 3)
                } else {
                    ControlFlow::Continue(a + 2)
                }
            });
            assert_eq!(bisim(&cps, &plain, 1000), Verdict::Holds);
            assert_eq!(run(&cps, 1000), run(&plain, 1000));
        }
    }
}
