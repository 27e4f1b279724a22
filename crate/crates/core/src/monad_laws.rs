//! Monad and strength laws, checked on random finite delays.
//!
//! Each law is an equation between two delays, checked with
//! [`bisim`](crate::semantics::bisim), so it holds up to `≈`: a bind that
//! adds extra steps still passes, one that changes a value does not.
//! Inputs are naturals; sampled Kleisli arrows are step-padded affine maps.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::delay::{strength, Delay, RunResult, Step, Value};
use crate::semantics::{bisim, Verdict};
use crate::{NatDelay, NatValue};

/// Distribution of input delays: `delay_by(value, k)` with
/// `k ≤ max_delay`, plus `never()` about one time in ten when
/// `include_never` is set.
#[derive(Clone)]
pub struct DelayGen<A> {
    value: Arc<dyn Fn(&mut ChaCha8Rng) -> A + Send + Sync>,
    pub max_delay: u64,
    pub include_never: bool,
    pub seed: u64,
}

impl<A> fmt::Debug for DelayGen<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DelayGen")
            .field("max_delay", &self.max_delay)
            .field("include_never", &self.include_never)
            .field("seed", &self.seed)
            .finish()
    }
}

/// A sampled delay together with its description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sample<A> {
    Finite { value: A, steps: u64 },
    Never,
}

impl<A: Value> Sample<A> {
    pub fn to_delay(&self) -> Delay<A> {
        match self {
            Sample::Finite { value, steps } => Delay::delay_by(value.clone(), *steps),
            Sample::Never => Delay::never(),
        }
    }
}

impl<A: fmt::Display> fmt::Display for Sample<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sample::Finite { value, steps } => write!(f, "delay_by({value}, {steps})"),
            Sample::Never => f.write_str("never"),
        }
    }
}

impl<A: Value> DelayGen<A> {
    pub fn new<F>(value: F, max_delay: u64, include_never: bool, seed: u64) -> Self
    where
        F: Fn(&mut ChaCha8Rng) -> A + Send + Sync + 'static,
    {
        DelayGen {
            value: Arc::new(value),
            max_delay,
            include_never,
            seed,
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    pub fn value(&self, rng: &mut ChaCha8Rng) -> A {
        (self.value)(rng)
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Sample<A> {
        if self.include_never && rng.gen_ratio(1, 10) {
            return Sample::Never;
        }
        Sample::Finite {
            value: self.value(rng),
            steps: rng.gen_range(0..=self.max_delay),
        }
    }
}

impl DelayGen<NatValue> {
    /// Values uniform in `0..=max_value`.
    pub fn naturals(max_value: u64, max_delay: u64, include_never: bool, seed: u64) -> Self {
        DelayGen::new(
            move |rng| NatValue::from(rng.gen_range(0..=max_value)),
            max_delay,
            include_never,
            seed,
        )
    }
}

/// `a ↦ delay_by(mul·a + add, (a + shift) mod (max_pad + 1))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PaddedAffine {
    pub mul: u64,
    pub add: u64,
    pub shift: u64,
    pub max_pad: u64,
}

impl PaddedAffine {
    fn sample(rng: &mut ChaCha8Rng, max_pad: u64) -> Self {
        PaddedAffine {
            mul: rng.gen_range(0..=3),
            add: rng.gen_range(0..=5),
            shift: rng.gen_range(0..=max_pad),
            max_pad,
        }
    }

    pub fn arrow(self) -> KleisliFn {
        Arc::new(move |a: NatValue| {
            let pad = (a.clone() + self.shift) % (self.max_pad + 1);
            let pad = u64::try_from(pad).expect("pad below max_pad");
            Delay::delay_by(a * self.mul + self.add, pad)
        })
    }
}

impl fmt::Display for PaddedAffine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "a ↦ delay_by({}a + {}, (a + {}) mod {})",
            self.mul,
            self.add,
            self.shift,
            self.max_pad + 1
        )
    }
}

pub type KleisliFn = Arc<dyn Fn(NatValue) -> NatDelay + Send + Sync>;

/// An extension operator `(x, f) ↦ f*(x)`.
pub type Extension = Arc<dyn Fn(&NatDelay, KleisliFn) -> NatDelay + Send + Sync>;

/// The crate's own bind.
pub fn standard_extension() -> Extension {
    Arc::new(|x, f| x.bind(move |a| f(a)))
}

/// Bind with one extra step in front: value-correct, so the laws still
/// hold up to `≈`.
pub fn padded_extension() -> Extension {
    Arc::new(|x, f| {
        let y = x.bind(move |a| f(a));
        Delay::later(move || y.clone())
    })
}

/// Bind that skips the first step of the result and adds 1 to its value.
pub fn corrupting_extension() -> Extension {
    Arc::new(|x, f| {
        let y = x.bind(move |a| f(a));
        let y = match y.step() {
            Step::Now(v) => Delay::now(v),
            Step::Later(rest) => rest,
        };
        y.map(|v| v + 1u32)
    })
}

/// Outcome of one law over all samples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawReport {
    /// Short identifier such as `kleisli-assoc`.
    pub id: &'static str,
    /// The equation, e.g. `g* ∘ f* = (g* ∘ f)*`.
    pub law: &'static str,
    /// `Fails` if some sample fails, `Holds` if every sample holds,
    /// `Unknown` otherwise.
    pub verdict: Verdict,
    pub samples: u64,
    /// Samples with a `never` input on which both sides ran out of fuel.
    pub divergent: u64,
    /// The first failing sample, or the first `never` input on which one
    /// side converged.
    pub counterexample: Option<String>,
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}]: {} samples={} divergent={}",
            self.id, self.law, self.verdict, self.samples, self.divergent
        )?;
        if let Some(c) = &self.counterexample {
            write!(f, " counterexample: {c}")?;
        }
        Ok(())
    }
}

/// Accumulates sample verdicts for one law.
struct Tally {
    id: &'static str,
    law: &'static str,
    verdict: Verdict,
    samples: u64,
    divergent: u64,
    counterexample: Option<String>,
}

impl Tally {
    fn new(id: &'static str, law: &'static str) -> Self {
        Tally {
            id,
            law,
            verdict: Verdict::Holds,
            samples: 0,
            divergent: 0,
            counterexample: None,
        }
    }

    /// `divergent` marks inputs containing `never`: both sides should then
    /// exhaust the fuel, and the sample counts as `Unknown` either way.
    fn record<A, D>(
        &mut self,
        lhs: &Delay<A>,
        rhs: &Delay<A>,
        fuel: u64,
        divergent: bool,
        describe: D,
    ) where
        A: Value + PartialEq + fmt::Debug,
        D: FnOnce() -> String,
    {
        self.samples += 1;
        let (v, suspicious) = if divergent {
            let both = lhs.run_for(fuel).is_exhausted() && rhs.run_for(fuel).is_exhausted();
            self.divergent += u64::from(both);
            (Verdict::Unknown { fuel_spent: fuel }, !both)
        } else {
            (bisim(lhs, rhs, fuel), false)
        };
        if (v.fails() || suspicious) && self.counterexample.is_none() {
            let show = |x: &Delay<A>| match x.run_for(fuel) {
                RunResult::Converged { value, steps } => {
                    format!("now({value:?}) after {steps} steps")
                }
                RunResult::Exhausted { .. } => format!("no value within {fuel} steps"),
            };
            self.counterexample = Some(format!(
                "{}: lhs {}, rhs {}",
                describe(),
                show(lhs),
                show(rhs)
            ));
        }
        self.verdict = self.verdict.and(v);
    }

    fn report(self) -> LawReport {
        LawReport {
            id: self.id,
            law: self.law,
            verdict: self.verdict,
            samples: self.samples,
            divergent: self.divergent,
            counterexample: self.counterexample,
        }
    }
}

/// The three Kleisli-triple laws for the crate's bind.
pub fn check_kleisli_laws(gen: &DelayGen<NatValue>, samples: u64, fuel: u64) -> Vec<LawReport> {
    check_kleisli_laws_with(&standard_extension(), gen, samples, fuel)
}

/// The three Kleisli-triple laws for an arbitrary extension operator:
/// `η* = id`, `f* ∘ η = f` and `g* ∘ f* = (g* ∘ f)*`.
pub fn check_kleisli_laws_with(
    ext: &Extension,
    gen: &DelayGen<NatValue>,
    samples: u64,
    fuel: u64,
) -> Vec<LawReport> {
    let mut rng = gen.rng();
    let mut unit_left = Tally::new("kleisli-left-unit", "η* = id");
    let mut unit_right = Tally::new("kleisli-right-unit", "f* ∘ η = f");
    let mut assoc = Tally::new("kleisli-assoc", "g* ∘ f* = (g* ∘ f)*");
    let eta: KleisliFn = Arc::new(Delay::now);
    for _ in 0..samples {
        let x = gen.sample(&mut rng);
        let a = gen.value(&mut rng);
        let fp = PaddedAffine::sample(&mut rng, gen.max_delay);
        let gp = PaddedAffine::sample(&mut rng, gen.max_delay);
        let (f, g) = (fp.arrow(), gp.arrow());
        let xd = x.to_delay();
        let never = x == Sample::Never;

        unit_left.record(&ext(&xd, eta.clone()), &xd, fuel, never, || {
            format!("x = {x}")
        });

        let lhs = ext(&Delay::now(a.clone()), f.clone());
        unit_right.record(&lhs, &f(a.clone()), fuel, false, || {
            format!("a = {a}, f = {fp}")
        });

        let lhs = ext(&ext(&xd, f.clone()), g.clone());
        let (ext2, g2, f2) = (ext.clone(), g.clone(), f.clone());
        let composed: KleisliFn = Arc::new(move |a| ext2(&f2(a), g2.clone()));
        let rhs = ext(&xd, composed);
        assoc.record(&lhs, &rhs, fuel, never, || {
            format!("x = {x}, f = {fp}, g = {gp}")
        });
    }
    vec![unit_left.report(), unit_right.report(), assoc.report()]
}

/// The four strength laws for [`strength`], with `μ` taken to be `join`.
pub fn check_strength_laws(gen: &DelayGen<NatValue>, samples: u64, fuel: u64) -> Vec<LawReport> {
    let mut rng = gen.rng();
    let mut unit_r = Tally::new("strength-unit", "T(r) ∘ t = r");
    let mut assoc = Tally::new("strength-assoc", "T(α) ∘ t = t ∘ (id × t) ∘ α");
    let mut unit_eta = Tally::new("strength-eta", "t ∘ (id × η) = η");
    let mut mult = Tally::new("strength-mu", "t ∘ (id × μ) = μ ∘ T(t) ∘ t");
    for _ in 0..samples {
        let x = gen.sample(&mut rng);
        let xd = x.to_delay();
        let never = x == Sample::Never;
        let (a, b) = (gen.value(&mut rng), gen.value(&mut rng));

        let lhs = strength((), &xd).map(|((), v)| v);
        unit_r.record(&lhs, &xd, fuel, never, || format!("x = {x}"));

        let lhs = strength((a.clone(), b.clone()), &xd).map(|((a, b), c)| (a, (b, c)));
        let rhs = strength(a.clone(), &strength(b.clone(), &xd));
        assoc.record(&lhs, &rhs, fuel, never, || {
            format!("a = {a}, b = {b}, z = {x}")
        });

        let lhs = strength(a.clone(), &Delay::now(b.clone()));
        unit_eta.record(
            &lhs,
            &Delay::now((a.clone(), b.clone())),
            fuel,
            false,
            || format!("a = {a}, b = {b}"),
        );

        let inner = gen.sample(&mut rng);
        let w: Delay<NatDelay> = match &x {
            Sample::Finite { steps, .. } => Delay::delay_by(inner.to_delay(), *steps),
            Sample::Never => Delay::never(),
        };
        let lhs = strength(a.clone(), &w.join());
        let rhs = strength(a.clone(), &w).map(|(a, y)| strength(a, &y)).join();
        let divergent = never || inner == Sample::Never;
        mult.record(&lhs, &rhs, fuel, divergent, || {
            format!("a = {a}, outer = {x}, inner = {inner}")
        });
    }
    vec![
        unit_r.report(),
        assoc.report(),
        unit_eta.report(),
        mult.report(),
    ]
}
