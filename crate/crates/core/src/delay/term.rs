//! Untyped term representation behind [`Delay`](super::Delay).
//!
//! A term is a node of the (possibly infinite) tree of `now`/`later`
//! constructors, kept in a lazy form: `Later` holds a thunk, and `Bind`,
//! `Race` and `Search` are suspended combinator applications. [`peel`]
//! exposes exactly one constructor of the tree. Bind chains are unwound
//! onto an explicit continuation stack, so peeling never recurses through
//! them; nested races are flattened into a single competitor list.
//! `Shared` nodes remember each constructor once it has been exposed.

use std::any::Any;
use std::ops::Deref;
use std::sync::{Arc, Mutex, OnceLock};

pub(crate) type Erased = Arc<dyn Any + Send + Sync>;
pub(crate) type Thunk = Arc<dyn Fn() -> Term + Send + Sync>;
pub(crate) type Cont = Arc<dyn Fn(Erased) -> Term + Send + Sync>;
pub(crate) type Source = Arc<dyn Fn(u64) -> Term + Send + Sync>;

#[derive(Clone)]
pub(crate) enum Term {
    Now(Erased),
    Later(Thunk),
    /// Suspended construction; transparent, costs no step.
    Defer(Arc<Deferred>),
    Never,
    /// `x` followed by the continuations in `Conts`, innermost first.
    Bind(Sub, Conts),
    /// Left-biased race between at least two competitors.
    Race(Arc<[Term]>),
    Search(Arc<Search>),
    /// Memoized: peeled at most once, whoever asks.
    Shared(Arc<Shared>),
}

/// A suspended term, remembered once built.
pub(crate) struct Deferred {
    build: Thunk,
    // Never holds a `Defer`.
    built: OnceLock<Term>,
}

impl Deferred {
    pub(crate) fn new(build: Thunk) -> Self {
        Deferred {
            build,
            built: OnceLock::new(),
        }
    }
}

/// Builds a chain of deferrals down to its first other node and records
/// the result in every link.
fn force(d: &Arc<Deferred>) -> Term {
    let mut pending = Vec::new();
    let mut cur = Term::Defer(d.clone());
    while let Term::Defer(d) = cur {
        match d.built.get() {
            Some(t) => cur = t.clone(),
            None => {
                cur = (d.build)();
                pending.push(d);
            }
        }
    }
    for d in pending {
        let _ = d.built.set(cur.clone());
    }
    cur
}

/// A term together with its outermost constructor once known. A `Step`
/// head holds the remainder as another `Shared` node.
pub(crate) struct Shared {
    inner: Mutex<Option<Term>>,
    head: OnceLock<Peeled>,
}

impl Shared {
    pub(crate) fn wrap(t: Term) -> Term {
        match t {
            t @ (Term::Now(_) | Term::Never | Term::Shared(_)) => t,
            t => Term::Shared(Arc::new(Shared {
                inner: Mutex::new(Some(t)),
                head: OnceLock::new(),
            })),
        }
    }

    fn inner(&self) -> Option<Term> {
        self.inner.lock().expect("shared term poisoned").clone()
    }

    fn fill(&self, head: Peeled) {
        let _ = self.head.set(head);
        self.inner.lock().expect("shared term poisoned").take();
    }
}

// A long-running shared term is a chain of heads.
impl Drop for Shared {
    fn drop(&mut self) {
        let mut next = self.head.take();
        while let Some(Peeled::Step(Term::Shared(s))) = next {
            next = match Arc::try_unwrap(s) {
                Ok(mut s) => s.head.take(),
                Err(_) => None,
            };
        }
    }
}

/// Shared subterm of a `Bind`, dropped without recursion.
#[derive(Clone)]
pub(crate) struct Sub(Arc<Term>);

impl Deref for Sub {
    type Target = Term;

    fn deref(&self) -> &Term {
        &self.0
    }
}

fn placeholder() -> Arc<Term> {
    static NEVER: OnceLock<Arc<Term>> = OnceLock::new();
    NEVER.get_or_init(|| Arc::new(Term::Never)).clone()
}

// Left-nested binds form chains as long as the program that built them.
impl Drop for Sub {
    fn drop(&mut self) {
        let mut next = std::mem::replace(&mut self.0, placeholder());
        while let Ok(Term::Bind(mut inner, _)) = Arc::try_unwrap(next) {
            next = std::mem::replace(&mut inner.0, placeholder());
        }
    }
}

/// State of the dovetailing search: the sequence, the index of the next
/// element to enter, and the race run so far.
pub(crate) struct Search {
    source: Source,
    next: u64,
    pool: Term,
}

/// Result of exposing one constructor.
#[derive(Clone)]
pub(crate) enum Peeled {
    Value(Erased),
    Step(Term),
}

/// Persistent stack of continuations; the head is applied first.
#[derive(Clone, Default)]
pub(crate) struct Conts(Option<Arc<ContNode>>);

#[derive(Clone)]
enum Frame {
    Apply(Cont),
    /// Records the constructor reached at this point as the head of a
    /// shared term.
    Fill(Arc<Shared>),
}

struct ContNode {
    k: Frame,
    outer: Conts,
    // Some frame from here outwards is a `Fill`.
    fills: bool,
}

impl Conts {
    fn is_empty(&self) -> bool {
        self.0.is_none()
    }

    fn has_fills(&self) -> bool {
        self.0.as_ref().is_some_and(|n| n.fills)
    }

    fn push(k: Frame, outer: Conts) -> Self {
        let fills = matches!(k, Frame::Fill(_)) || outer.has_fills();
        Conts(Some(Arc::new(ContNode { k, outer, fills })))
    }

    fn single(k: Cont) -> Self {
        Conts::push(Frame::Apply(k), Conts::default())
    }

    fn pop(&mut self) -> Option<Frame> {
        let node = self.0.take()?;
        let k = node.k.clone();
        *self = node.outer.clone();
        Some(k)
    }

    /// `self` runs first, then `outer`.
    fn then(&self, outer: Conts) -> Conts {
        if outer.is_empty() {
            return self.clone();
        }
        let mut inner = Vec::new();
        let mut cur = &self.0;
        while let Some(node) = cur {
            inner.push(node.k.clone());
            cur = &node.outer.0;
        }
        inner
            .into_iter()
            .rev()
            .fold(outer, |acc, k| Conts::push(k, acc))
    }
}

// Long continuation stacks would otherwise be dropped recursively.
impl Drop for Conts {
    fn drop(&mut self) {
        let mut next = self.0.take();
        while let Some(node) = next {
            match Arc::try_unwrap(node) {
                Ok(mut node) => next = node.outer.0.take(),
                Err(_) => break,
            }
        }
    }
}

impl Term {
    // Nested binds are left nested here and flattened by `peel`, which
    // keeps repeated left-nested binding linear.
    pub(crate) fn bind(x: Term, k: Cont) -> Term {
        match x {
            Term::Never => Term::Never,
            x => Term::Bind(Sub(Arc::new(x)), Conts::single(k)),
        }
    }

    fn bind_all(x: Term, conts: Conts) -> Term {
        match x {
            Term::Never => Term::Never,
            x if conts.is_empty() => x,
            x => Term::Bind(Sub(Arc::new(x)), conts),
        }
    }

    /// Left-biased race. Nested races are flattened and `Never`
    /// competitors dropped; both rewrites preserve values and step counts.
    pub(crate) fn race<I: IntoIterator<Item = Term>>(competitors: I) -> Term {
        let mut flat = Vec::new();
        for c in competitors {
            match c {
                Term::Never => {}
                Term::Race(cs) => flat.extend(cs.iter().cloned()),
                c => flat.push(c),
            }
        }
        match flat.len() {
            0 => Term::Never,
            1 => flat.pop().expect("one competitor"),
            _ => Term::Race(flat.into()),
        }
    }

    pub(crate) fn search(source: Source) -> Term {
        Term::Search(Arc::new(Search {
            source,
            next: 0,
            pool: Term::Never,
        }))
    }

    pub(crate) fn is_never(&self) -> bool {
        matches!(self, Term::Never)
    }
}

/// Exposes the outermost constructor of `term`: its value if it is `now`,
/// otherwise the remainder after one `later`.
pub(crate) fn peel(term: &Term) -> Peeled {
    let mut cur = term.clone();
    let mut conts = Conts::default();
    loop {
        cur = match cur {
            Term::Now(v) => match conts.pop() {
                None => return Peeled::Value(v),
                Some(Frame::Apply(k)) => k(v),
                Some(Frame::Fill(s)) => {
                    s.fill(Peeled::Value(v.clone()));
                    Term::Now(v)
                }
            },
            Term::Never => return Peeled::Step(resume(Term::Never, conts)),
            Term::Defer(d) => force(&d),
            Term::Shared(s) => match (s.head.get(), s.inner()) {
                (Some(Peeled::Value(v)), _) => Term::Now(v.clone()),
                (Some(Peeled::Step(rest)), _) => return Peeled::Step(resume(rest.clone(), conts)),
                (None, Some(inner)) => {
                    conts = Conts::push(Frame::Fill(s.clone()), conts);
                    inner
                }
                // filled by another thread in between
                (None, None) => Term::Shared(s),
            },
            Term::Later(thunk) => return Peeled::Step(resume(thunk(), conts)),
            Term::Bind(x, js) => {
                conts = js.then(conts);
                (*x).clone()
            }
            Term::Race(cs) => match peel_race(&cs) {
                Ok(v) => Term::Now(v),
                Err(rests) => return Peeled::Step(resume(Term::race(rests), conts)),
            },
            Term::Search(s) => match peel(&s.pool) {
                Peeled::Value(v) => Term::Now(v),
                Peeled::Step(rest) => {
                    let entrant = (s.source)(s.next);
                    let next = Term::Search(Arc::new(Search {
                        source: s.source.clone(),
                        next: s.next + 1,
                        pool: Term::race([rest, entrant]),
                    }));
                    return Peeled::Step(resume(next, conts));
                }
            },
        }
    }
}

/// The remainder after a step taken under `conts`. Every shared term
/// being peeled gets its remainder recorded on the way out.
fn resume(rest: Term, mut conts: Conts) -> Term {
    let mut rest = rest;
    let mut segment = Vec::new();
    while conts.has_fills() {
        match conts.pop().expect("non-empty") {
            Frame::Apply(k) => segment.push(Frame::Apply(k)),
            Frame::Fill(s) => {
                let local = segment
                    .drain(..)
                    .rev()
                    .fold(Conts::default(), |acc, k| Conts::push(k, acc));
                rest = Shared::wrap(Term::bind_all(rest, local));
                s.fill(Peeled::Step(rest.clone()));
            }
        }
    }
    let local = segment
        .into_iter()
        .rev()
        .fold(conts, |acc, k| Conts::push(k, acc));
    Term::bind_all(rest, local)
}

fn peel_race(competitors: &[Term]) -> Result<Erased, Vec<Term>> {
    let mut rests = Vec::with_capacity(competitors.len());
    for c in competitors {
        match peel(c) {
            Peeled::Value(v) => return Ok(v),
            Peeled::Step(rest) => rests.push(rest),
        }
    }
    Err(rests)
}
