//! Codes for Kleene's partial recursive functions and their interpretation
//! as functions on partial naturals.
//!
//! A code of arity `n` is interpreted by [`eval`] as a map from `n` delayed
//! naturals to a delayed natural. The interpretation is strict: it only
//! converges when every argument converges. [`oracle_eval`] evaluates the
//! same codes directly on numbers under a step budget and is used to check
//! the interpreter.

pub mod corpus;
mod oracle;
mod syntax;

use std::sync::Arc;

use thiserror::Error;

use crate::delay::{strict_proj, Delay};
use crate::num::Natural;

pub use oracle::oracle_eval;
pub use syntax::{parse_code, CodeError, ParseError};

/// A partial recursive function code.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RecCode {
    /// The unary constant zero.
    Zero,
    /// The unary successor.
    Succ,
    /// `Proj { i, n }` picks the `i`-th of `n` arguments, counting from 1.
    Proj { i: usize, n: usize },
    /// `f ∘ ⟨g₁, …, gₖ⟩`.
    Comp(Box<RecCode>, Vec<RecCode>),
    /// `h(x̄, 0) = f(x̄)`, `h(x̄, y+1) = g(x̄, y, h(x̄, y))`.
    PrimRec(Box<RecCode>, Box<RecCode>),
    /// Least `y` with `f(x̄, y) = 0`.
    Min(Box<RecCode>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecError {
    /// `path` locates the offending subcode, e.g. `root.g2.f`.
    #[error("ill-formed code at {path}: {reason}")]
    IllFormed { path: String, reason: String },
    #[error("code of arity {expected} applied to {got} arguments")]
    ArityMismatch { expected: usize, got: usize },
}

impl RecCode {
    pub fn proj(i: usize, n: usize) -> Self {
        RecCode::Proj { i, n }
    }

    pub fn comp(f: RecCode, gs: Vec<RecCode>) -> Self {
        RecCode::Comp(Box::new(f), gs)
    }

    pub fn prim_rec(f: RecCode, g: RecCode) -> Self {
        RecCode::PrimRec(Box::new(f), Box::new(g))
    }

    pub fn min(f: RecCode) -> Self {
        RecCode::Min(Box::new(f))
    }

    /// Number of arguments, or the first arity violation found.
    pub fn arity(&self) -> Result<usize, RecError> {
        self.arity_at("root")
    }

    fn arity_at(&self, path: &str) -> Result<usize, RecError> {
        let ill = |reason: String| RecError::IllFormed {
            path: path.to_string(),
            reason,
        };
        match self {
            RecCode::Zero | RecCode::Succ => Ok(1),
            RecCode::Proj { i, n } => {
                if (1..=*n).contains(i) {
                    Ok(*n)
                } else {
                    Err(ill(format!("projection index {i} not in 1..={n}")))
                }
            }
            RecCode::Comp(f, gs) => {
                let k = f.arity_at(&format!("{path}.f"))?;
                if gs.is_empty() {
                    return Err(ill("composition without inner functions".into()));
                }
                let mut arities = Vec::with_capacity(gs.len());
                for (j, g) in gs.iter().enumerate() {
                    arities.push(g.arity_at(&format!("{path}.g{}", j + 1))?);
                }
                if k != gs.len() {
                    return Err(ill(format!(
                        "outer function has arity {k} but is given {} inner functions",
                        gs.len()
                    )));
                }
                let n = arities[0];
                match arities.iter().position(|&a| a != n) {
                    Some(j) => Err(ill(format!(
                        "inner function {} has arity {} but the first has arity {n}",
                        j + 1,
                        arities[j]
                    ))),
                    None => Ok(n),
                }
            }
            RecCode::PrimRec(f, g) => {
                let n = f.arity_at(&format!("{path}.f"))?;
                let m = g.arity_at(&format!("{path}.g"))?;
                if m != n + 2 {
                    return Err(ill(format!(
                        "step function needs arity {} but has {m}",
                        n + 2
                    )));
                }
                Ok(n + 1)
            }
            RecCode::Min(f) => match f.arity_at(&format!("{path}.f"))? {
                0 => Err(ill(
                    "minimized function must take at least one argument".into()
                )),
                n => Ok(n - 1),
            },
        }
    }
}

type Compiled<N> = Arc<dyn Fn(&[Delay<N>]) -> Delay<N> + Send + Sync>;

/// Interprets a code on delayed arguments.
pub fn eval<N: Natural>(code: &RecCode, args: &[Delay<N>]) -> Result<Delay<N>, RecError> {
    let expected = code.arity()?;
    if expected != args.len() {
        return Err(RecError::ArityMismatch {
            expected,
            got: args.len(),
        });
    }
    let args: Vec<_> = args.iter().map(Delay::share).collect();
    Ok(compile::<N>(code)(&args))
}

/// The interpretation as a reusable function; `code` must be well formed.
/// Arguments are used several times by strict projections, so every
/// intermediate result is shared.
fn compile<N: Natural>(code: &RecCode) -> Compiled<N> {
    match code {
        RecCode::Zero => Arc::new(|xs| xs[0].map(|_| N::zero())),
        RecCode::Succ => Arc::new(|xs| xs[0].map(|x| x.succ())),
        RecCode::Proj { i, .. } => {
            let i = *i;
            Arc::new(move |xs| strict_proj(i, xs).expect("arity checked"))
        }
        RecCode::Comp(f, gs) => {
            let f = compile::<N>(f);
            let gs: Vec<_> = gs.iter().map(compile::<N>).collect();
            Arc::new(move |xs| {
                let inner: Vec<_> = gs.iter().map(|g| g(xs).share()).collect();
                f(&inner)
            })
        }
        RecCode::PrimRec(f, g) => {
            let (f, g) = (compile::<N>(f), compile::<N>(g));
            Arc::new(move |xs| {
                let (y, xs) = xs.split_last().expect("arity at least one");
                let (f, g, xs) = (f.clone(), g.clone(), xs.to_vec());
                // h′ by recursion on the converged counter
                y.bind(move |m: N| {
                    let mut acc = f(&xs).share();
                    let mut i = N::zero();
                    let mut args = xs.clone();
                    while i < m {
                        args.truncate(xs.len());
                        args.push(Delay::now(i.clone()));
                        args.push(acc);
                        acc = g(&args).share();
                        i = i.succ();
                    }
                    acc
                })
            })
        }
        RecCode::Min(f) => {
            let f = compile::<N>(f);
            Arc::new(move |xs| search(f.clone(), xs.to_vec(), N::zero()))
        }
    }
}

/// `g′ x̄ i r`: waits for `r = f(x̄, i)`; answers `i` on zero, otherwise
/// takes one step and tests `i + 1`.
fn search<N: Natural>(f: Compiled<N>, xs: Vec<Delay<N>>, i: N) -> Delay<N> {
    let mut args = xs.clone();
    args.push(Delay::now(i.clone()));
    f(&args).bind(move |m: N| {
        if m.is_zero() {
            Delay::now(i.clone())
        } else {
            let (f, xs, next) = (f.clone(), xs.clone(), i.succ());
            Delay::later(move || search(f.clone(), xs.clone(), next.clone()))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::corpus::*;
    use super::*;
    use crate::semantics::converges_to;
    use crate::NatValue;

    fn nats(xs: &[u64]) -> Vec<Delay<u64>> {
        xs.iter().map(|&x| Delay::now(x)).collect()
    }

    #[test]
    fn arities() {
        assert_eq!(RecCode::proj(2, 3).arity(), Ok(3));
        assert_eq!(plus().arity(), Ok(2));
        assert_eq!(mult().arity(), Ok(2));
        assert_eq!(pred().arity(), Ok(1));
        assert_eq!(ident_by_min().arity(), Ok(1));
        assert_eq!(RecCode::min(RecCode::Succ).arity(), Ok(0));
        let bad = RecCode::comp(RecCode::Succ, vec![RecCode::Zero, RecCode::Zero]);
        assert!(matches!(bad.arity(), Err(RecError::IllFormed { path, .. }) if path == "root"));
        let nested = RecCode::prim_rec(RecCode::Zero, RecCode::proj(0, 3));
        assert!(
            matches!(nested.arity(), Err(RecError::IllFormed { path, .. }) if path == "root.g")
        );
        let mixed = RecCode::comp(plus(), vec![RecCode::proj(1, 2), RecCode::Zero]);
        assert!(mixed.arity().is_err());
        assert!(RecCode::comp(RecCode::Zero, vec![]).arity().is_err());
        assert!(RecCode::min(RecCode::min(RecCode::Succ)).arity().is_err());
    }

    #[test]
    fn evaluation_samples() {
        let r = eval(&plus(), &nats(&[2, 3])).unwrap().run_for(1000);
        assert_eq!(r.value(), Some(&5));
        let r = eval(&ident_by_min(), &nats(&[4])).unwrap().run_for(1000);
        assert_eq!((r.value(), r.steps()), (Some(&4), Some(4)));
        let stuck = eval(&always_diverge(), &nats(&[0])).unwrap();
        assert!(stuck.run_for(10_000).is_exhausted());
        assert_eq!(
            eval(&plus(), &nats(&[1])).unwrap_err(),
            RecError::ArityMismatch {
                expected: 2,
                got: 1
            }
        );
    }

    #[test]
    fn big_numerals() {
        let big: NatValue = "123456789012345678901234567890".parse().unwrap();
        let x = eval(
            &plus(),
            &[Delay::now(big.clone()), Delay::now(NatValue::from(3u32))],
        )
        .unwrap();
        assert_eq!(converges_to(&x, &(big + 3u32), 10), crate::Verdict::Holds);
    }

    #[test]
    fn arguments_are_forced() {
        for (name, code) in corpus() {
            let n = code.arity().unwrap();
            for pos in 0..n {
                let mut args = nats(&vec![2; n]);
                args[pos] = Delay::never();
                let r = eval(&code, &args).unwrap().run_for(10_000);
                assert!(r.is_exhausted(), "{name} ignores argument {}", pos + 1);
            }
        }
    }

    #[test]
    fn delayed_arguments_add_steps() {
        for (name, code) in corpus().into_iter().filter(|(n, _)| *n != "always_diverge") {
            let n = code.arity().unwrap();
            let base = eval(&code, &nats(&vec![3; n])).unwrap().run_for(10_000);
            let (v, s) = (*base.value().unwrap(), base.steps().unwrap());
            for pos in 0..n {
                for d in [1, 4] {
                    let mut args = nats(&vec![3; n]);
                    args[pos] = Delay::delay_by(3, d);
                    let r = eval(&code, &args).unwrap().run_for(10_000);
                    assert_eq!(r.value(), Some(&v), "{name}");
                    assert!(r.steps().unwrap() >= s + d, "{name} at {pos} delayed {d}");
                }
            }
        }
    }
}
