//! Lazy partial naturals.
//!
//! A [`LazyNat`] is a possibly infinite stream of constructors `zero`,
//! `succ` and `step`. Unlike a `Delay<N>`, it exposes partial information
//! about its value: `succ(succ(x))` is known to be at least 2 whatever `x`
//! turns out to be. That is enough to decide some comparisons whose strict
//! counterparts diverge, as the sloth example shows.

use std::fmt;
use std::ops::ControlFlow;
use std::sync::{Arc, OnceLock};

use crate::delay::{unfold, Delay, Step};
use crate::num::Natural;
use crate::semantics::Verdict;

/// A lazy partial natural number. Cloning shares the underlying nodes, and
/// each node computes its outermost constructor at most once.
#[derive(Clone)]
pub struct LazyNat(Repr);

#[derive(Clone)]
enum Repr {
    Never,
    Node(Arc<Node>),
}

type Build = Box<dyn Fn() -> LazyHead + Send + Sync>;

struct Node {
    head: OnceLock<LazyHead>,
    build: Option<Build>,
}

/// The outermost constructor of a [`LazyNat`].
#[derive(Clone)]
pub enum LazyHead {
    Zero,
    Succ(LazyNat),
    Step(LazyNat),
}

impl LazyNat {
    fn known(head: LazyHead) -> Self {
        LazyNat(Repr::Node(Arc::new(Node {
            head: OnceLock::from(head),
            build: None,
        })))
    }

    /// A node whose constructor is computed on first inspection. `build`
    /// must be pure and must terminate.
    pub fn defer<F>(build: F) -> Self
    where
        F: Fn() -> LazyHead + Send + Sync + 'static,
    {
        LazyNat(Repr::Node(Arc::new(Node {
            head: OnceLock::new(),
            build: Some(Box::new(build)),
        })))
    }

    pub fn zero() -> Self {
        LazyNat::known(LazyHead::Zero)
    }

    pub fn succ(pred: LazyNat) -> Self {
        LazyNat::known(LazyHead::Succ(pred))
    }

    pub fn step(rest: LazyNat) -> Self {
        LazyNat::known(LazyHead::Step(rest))
    }

    /// Steps forever.
    pub fn never() -> Self {
        LazyNat(Repr::Never)
    }

    /// Successors forever.
    pub fn omega() -> Self {
        LazyNat::defer(|| LazyHead::Succ(LazyNat::omega()))
    }

    /// Exposes the outermost constructor.
    pub fn peel(&self) -> LazyHead {
        match &self.0 {
            Repr::Never => LazyHead::Step(LazyNat::never()),
            Repr::Node(node) => {
                if let Some(h) = node.head.get() {
                    return h.clone();
                }
                let build = node.build.as_ref().expect("unbuilt node has a builder");
                let h = build();
                node.head.get_or_init(|| h).clone()
            }
        }
    }
}

// Memoized successor chains can be long; unlink them without recursion.
impl Drop for Node {
    fn drop(&mut self) {
        let mut next = self.head.take();
        while let Some(LazyHead::Succ(x) | LazyHead::Step(x)) = next {
            next = match x.0 {
                Repr::Node(node) => match Arc::try_unwrap(node) {
                    Ok(mut node) => node.head.take(),
                    Err(_) => None,
                },
                Repr::Never => None,
            };
        }
    }
}

impl fmt::Debug for LazyNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Never => f.write_str("LazyNat(never)"),
            Repr::Node(_) => f.write_str("LazyNat(..)"),
        }
    }
}

/// `sⁿ(0)`.
pub fn lazy_of<N: Natural>(n: N) -> LazyNat {
    match n.pred() {
        None => LazyNat::zero(),
        Some(m) => LazyNat::defer(move || LazyHead::Succ(lazy_of(m.clone()))),
    }
}

/// How an observation stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ended {
    Zero,
    Exhausted,
}

/// Successors seen before reaching zero or running out of fuel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Observation {
    pub succs: u64,
    pub ended: Ended,
}

/// Peels constructors until zero, spending one unit of fuel per `succ` or
/// `step`.
pub fn observe(x: &LazyNat, fuel: u64) -> Observation {
    let mut cur = x.clone();
    let mut succs = 0;
    let mut spent = 0;
    loop {
        let next = match cur.peel() {
            LazyHead::Zero => {
                return Observation {
                    succs,
                    ended: Ended::Zero,
                }
            }
            _ if spent == fuel => {
                return Observation {
                    succs,
                    ended: Ended::Exhausted,
                }
            }
            LazyHead::Succ(p) => {
                succs += 1;
                p
            }
            LazyHead::Step(r) => r,
        };
        spent += 1;
        cur = next;
    }
}

/// `x ⊕ 0 = x`, `x ⊕ s y = s (x ⊕ y)`, `x ⊕ ▷y = ▷(x ⊕ y)`.
pub fn lazy_plus(x: &LazyNat, y: &LazyNat) -> LazyNat {
    let (x, y) = (x.clone(), y.clone());
    LazyNat::defer(move || match y.peel() {
        LazyHead::Zero => x.peel(),
        LazyHead::Succ(y) => LazyHead::Succ(lazy_plus(&x, &y)),
        LazyHead::Step(y) => LazyHead::Step(lazy_plus(&x, &y)),
    })
}

/// Derivation search for `x ⪯ y`, one step per constructor stripped.
///
/// The relation is generated by `0 ⪯ y`, `x ⪯ y ⇒ s x ⪯ s y`,
/// `x ⪯ y ⇒ ▷x ⪯ y` and `x ⪯ y ⇒ x ⪯ ▷y`. The process answers `true` when
/// it finds a derivation and `false` when inversion leaves no rule, as for
/// `s x ⪯ 0`. Stripping `▷` from either side never changes the answer.
pub fn le_process(x: &LazyNat, y: &LazyNat) -> Delay<bool> {
    le_process_chunked(x, y, 1)
}

/// Like [`le_process`], but matches up to `pairs` successor pairs per
/// step. Each stripped `▷` still costs a step of its own.
pub fn le_process_chunked(x: &LazyNat, y: &LazyNat, pairs: u64) -> Delay<bool> {
    assert!(pairs >= 1, "at least one pair per step");
    unfold((x.clone(), y.clone()), move |(mut x, mut y)| {
        let mut matched = 0;
        loop {
            match x.peel() {
                LazyHead::Zero => return ControlFlow::Break(true),
                LazyHead::Step(x) => return ControlFlow::Continue((x, y)),
                LazyHead::Succ(px) => match y.peel() {
                    LazyHead::Zero => return ControlFlow::Break(false),
                    LazyHead::Step(y) => return ControlFlow::Continue((x, y)),
                    LazyHead::Succ(py) => {
                        matched += 1;
                        if matched == pairs {
                            return ControlFlow::Continue((px, py));
                        }
                        (x, y) = (px, py);
                    }
                },
            }
        }
    })
}

/// [`le_process`] under a fuel budget.
pub fn lazy_le(x: &LazyNat, y: &LazyNat, fuel: u64) -> Verdict {
    match le_process(x, y).run_for(fuel).into_value() {
        Some(true) => Verdict::Holds,
        Some(false) => Verdict::Fails,
        None => Verdict::Unknown { fuel_spent: fuel },
    }
}

type Branch = Arc<dyn Fn() -> LazyNat + Send + Sync>;

/// One `▷` per step of `cond`, then the chosen branch.
fn branch(cond: Delay<bool>, then: Branch, otherwise: Branch) -> LazyNat {
    LazyNat::defer(move || match cond.step() {
        Step::Now(true) => then().peel(),
        Step::Now(false) => otherwise().peel(),
        Step::Later(rest) => LazyHead::Step(branch(rest, then.clone(), otherwise.clone())),
    })
}

/// Successor pairs the sloth comparison matches per emitted step.
pub const SLOTH_PAIRS_PER_STEP: u64 = 8;

/// Lazy `f`: `f 0 = 0`, `f (s n) = f (g n) ⊕ g n`.
pub fn sloth_f_lazy(x: &LazyNat) -> LazyNat {
    let x = x.clone();
    LazyNat::defer(move || match x.peel() {
        LazyHead::Zero => LazyHead::Zero,
        LazyHead::Step(x) => LazyHead::Step(sloth_f_lazy(&x)),
        LazyHead::Succ(n) => {
            let gn = sloth_g_lazy(&n);
            lazy_plus(&sloth_f_lazy(&gn), &gn).peel()
        }
    })
}

/// Lazy `g`: `g 0 = 0`, `g (s m) = g (f m) ⊕ m` if `f m ⪯ m`, else `0`.
pub fn sloth_g_lazy(x: &LazyNat) -> LazyNat {
    let x = x.clone();
    LazyNat::defer(move || match x.peel() {
        LazyHead::Zero => LazyHead::Zero,
        LazyHead::Step(x) => LazyHead::Step(sloth_g_lazy(&x)),
        LazyHead::Succ(m) => {
            let fm = sloth_f_lazy(&m);
            let cond = le_process_chunked(&fm, &m, SLOTH_PAIRS_PER_STEP);
            branch(
                cond,
                Arc::new(move || lazy_plus(&sloth_g_lazy(&fm), &m)),
                Arc::new(LazyNat::zero),
            )
            .peel()
        }
    })
}

pub fn sloth_f<N: Natural>(n: N) -> LazyNat {
    sloth_f_lazy(&lazy_of(n))
}

pub fn sloth_g<N: Natural>(n: N) -> LazyNat {
    sloth_g_lazy(&lazy_of(n))
}

/// The same equations over strict delays: every comparison waits for both
/// sides to converge. Recursive calls are guarded by one step each.
pub fn strict_sloth_f<N: Natural>(n: N) -> Delay<N> {
    match n.pred() {
        None => Delay::now(N::zero()),
        Some(n) => Delay::later(move || {
            strict_sloth_g(n.clone()).bind(|gn: N| {
                let v = gn.clone();
                strict_sloth_f(gn).map(move |a| a + v.clone())
            })
        }),
    }
}

pub fn strict_sloth_g<N: Natural>(m: N) -> Delay<N> {
    match m.pred() {
        None => Delay::now(N::zero()),
        Some(m) => Delay::later(move || {
            let m = m.clone();
            strict_sloth_f(m.clone()).bind(move |fm: N| {
                if fm <= m {
                    let m = m.clone();
                    strict_sloth_g(fm).map(move |b| b + m.clone())
                } else {
                    Delay::now(N::zero())
                }
            })
        }),
    }
}
