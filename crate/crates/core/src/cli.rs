//! Command-line front end.
//!
//! ```text
//! partiality [--fuel N] [--trace] [--machine] eval <CODE> [ARGS]...
//! partiality [--fuel N] [--trace] [--machine] demo <nest|devil91|sloth|factorial-fix>
//! partiality [--fuel N] [--machine] check-laws [--samples N] [--seed S]
//! ```
//!
//! Results are printed as `CONVERGED <value> steps=<n>` or
//! `EXHAUSTED fuel=<n>`. Exit status is 0 on convergence, 2 on exhausted
//! fuel and 1 on usage or parse errors; `check-laws` exits 0 iff no law
//! fails. With `--machine` only result lines are printed.

use std::ffi::OsString;
use std::io::{self, Write};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use crate::delay::Step;
use crate::fixpoint::{fix, operators};
use crate::lazy::{observe, sloth_f, sloth_g, strict_sloth_g, Ended, LazyHead, LazyNat};
use crate::monad_laws::{check_kleisli_laws, check_strength_laws, DelayGen, LawReport};
use crate::nested::{devil, mccarthy91, nest};
use crate::reccode::{corpus, eval, parse_code, CodeError};
use crate::{NatDelay, NatValue};

pub const EXIT_CONVERGED: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_EXHAUSTED: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Parser)]
#[command(
    name = "partiality",
    version,
    about = "Run partial computations under fuel"
)]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Maximum number of steps to peel.
    #[arg(long, global = true, default_value_t = 100_000)]
    pub fuel: u64,
    /// Print one line per peeled step.
    #[arg(long, global = true)]
    pub trace: bool,
    /// Print result lines only.
    #[arg(long, global = true)]
    pub machine: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Evaluate a code, given as text or as a bundled name such as `plus`.
    Eval { code: String, args: Vec<NatValue> },
    /// Run a bundled demonstration.
    Demo { name: Demo },
    /// Check the monad and strength laws on random delays.
    CheckLaws {
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Demo {
    Nest,
    Devil91,
    Sloth,
    FactorialFix,
}

/// Parses `args` (program name first) and runs the command.
pub fn run_args<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match CliConfig::try_parse_from(args) {
        Ok(config) => match run(&config, out) {
            Ok(code) => code,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                EXIT_ERROR
            }
        },
        Err(e) => match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                let _ = write!(out, "{e}");
                EXIT_CONVERGED
            }
            _ => {
                let _ = write!(err, "{e}");
                EXIT_ERROR
            }
        },
    }
}

/// Runs a parsed command and returns the exit status. Code errors are
/// reported on `out` as an `ERROR` line.
pub fn run(config: &CliConfig, out: &mut impl Write) -> io::Result<i32> {
    let mut r = Runner { config, out };
    match &config.command {
        Command::Eval { code, args } => r.eval(code, args),
        Command::Demo { name } => match name {
            Demo::Nest => r.nest(),
            Demo::Devil91 => r.devil91(),
            Demo::Sloth => r.sloth(),
            Demo::FactorialFix => r.factorial_fix(),
        },
        Command::CheckLaws { samples, seed } => r.check_laws(*samples, *seed),
    }
}

struct Runner<'a, W> {
    config: &'a CliConfig,
    out: &'a mut W,
}

impl<W: Write> Runner<'_, W> {
    fn note(&mut self, text: &str) -> io::Result<()> {
        if !self.config.machine {
            writeln!(self.out, "# {text}")?;
        }
        Ok(())
    }

    /// Runs `x` under the configured fuel and prints the result line.
    fn report(&mut self, label: &str, x: &NatDelay) -> io::Result<bool> {
        let fuel = self.config.fuel;
        let mut cur = x.clone();
        let mut steps = 0;
        let result = loop {
            match cur.step() {
                Step::Now(v) => break Some(v),
                Step::Later(_) if steps == fuel => break None,
                Step::Later(rest) => {
                    steps += 1;
                    if self.config.trace {
                        writeln!(self.out, "{label}STEP {steps}")?;
                    }
                    cur = rest;
                }
            }
        };
        match &result {
            Some(v) => writeln!(self.out, "{label}CONVERGED {v} steps={steps}")?,
            None => writeln!(self.out, "{label}EXHAUSTED fuel={fuel}")?,
        }
        Ok(result.is_some())
    }

    fn eval(&mut self, text: &str, args: &[NatValue]) -> io::Result<i32> {
        let code = match corpus::named(text)
            .map(Ok)
            .unwrap_or_else(|| parse_code(text))
        {
            Ok(code) => code,
            Err(e) => return self.error(&e),
        };
        let delayed: Vec<_> = args.iter().cloned().map(NatDelay::now).collect();
        let x = match eval(&code, &delayed) {
            Ok(x) => x,
            Err(e) => return self.error(&CodeError::Rec(e)),
        };
        self.note(&format!("{code}"))?;
        Ok(status(self.report("", &x)?))
    }

    fn error(&mut self, e: &CodeError) -> io::Result<i32> {
        writeln!(self.out, "ERROR {e}")?;
        Ok(EXIT_ERROR)
    }

    fn nest(&mut self) -> io::Result<i32> {
        self.note("nest 0 = 0, nest (n+1) = nest (nest n)")?;
        let mut ok = true;
        for n in 0..=10u32 {
            ok &= self.report(&format!("nest({n}) "), &nest(NatValue::from(n)))?;
        }
        Ok(status(ok))
    }

    fn devil91(&mut self) -> io::Result<i32> {
        self.note("McCarthy 91: m(n) = n - 10 if n > 100, else m(m(n + 11))")?;
        let spec = mccarthy91::<NatValue>();
        let mut ok = true;
        for n in [0u32, 1, 45, 89, 90, 99, 100, 101, 102, 111, 150] {
            ok &= self.report(&format!("devil91({n}) "), &devil(&spec, NatValue::from(n)))?;
        }
        Ok(status(ok))
    }

    fn factorial_fix(&mut self) -> io::Result<i32> {
        self.note("least fixed point of F(f)(n) = if n = 0 then 1 else n * f(n - 1)")?;
        let fact = fix(&operators::factorial::<NatValue>());
        let mut ok = true;
        for n in 0..=10u32 {
            ok &= self.report(&format!("factorial({n}) "), &fact.call(NatValue::from(n)))?;
        }
        Ok(status(ok))
    }

    fn sloth(&mut self) -> io::Result<i32> {
        self.note("observations of lazy f(13) and g(14)")?;
        let fuel = self.config.fuel;
        let g = self.observe("sloth g(14) ", &sloth_g(NatValue::from(14u32)))?;
        self.observe("sloth f(13) ", &sloth_f(NatValue::from(13u32)))?;
        self.note("the strict version of g(14) under the same fuel")?;
        let strict_fuel = fuel;
        let strict = strict_sloth_g(NatValue::from(14u32)).run_for(strict_fuel);
        match strict.into_value() {
            Some(v) => writeln!(self.out, "strict g(14) CONVERGED {v}")?,
            None => writeln!(self.out, "strict g(14) EXHAUSTED fuel={strict_fuel}")?,
        }
        Ok(status(g == Ended::Zero))
    }

    fn observe(&mut self, label: &str, x: &LazyNat) -> io::Result<Ended> {
        let fuel = self.config.fuel;
        if self.config.trace {
            let mut cur = x.clone();
            for i in 1..=fuel {
                let (name, next) = match cur.peel() {
                    LazyHead::Zero => break,
                    LazyHead::Succ(p) => ("SUCC", p),
                    LazyHead::Step(r) => ("STEP", r),
                };
                writeln!(self.out, "{label}{name} {i}")?;
                cur = next;
            }
        }
        let obs = observe(x, fuel);
        match obs.ended {
            Ended::Zero => writeln!(self.out, "{label}OBSERVED {} ended=zero", obs.succs)?,
            Ended::Exhausted => writeln!(
                self.out,
                "{label}OBSERVED {} ended=exhausted fuel={fuel}",
                obs.succs
            )?,
        }
        Ok(obs.ended)
    }

    fn check_laws(&mut self, samples: u64, seed: u64) -> io::Result<i32> {
        let fuel = self.config.fuel;
        self.note(&format!("{samples} samples, fuel {fuel}, seed {seed}"))?;
        let gen = DelayGen::naturals(20, 8, true, seed);
        let mut reports: Vec<LawReport> = check_kleisli_laws(&gen, samples, fuel);
        reports.extend(check_strength_laws(&gen, samples, fuel));
        let mut failed = false;
        for r in &reports {
            writeln!(
                self.out,
                "LAW {} {} samples={} divergent={}",
                r.id, r.verdict, r.samples, r.divergent
            )?;
            if let Some(c) = &r.counterexample {
                writeln!(self.out, "COUNTEREXAMPLE {} {c}", r.id)?;
            }
            failed |= r.verdict.fails();
        }
        Ok(if failed { EXIT_ERROR } else { EXIT_CONVERGED })
    }
}

fn status(converged: bool) -> i32 {
    if converged {
        EXIT_CONVERGED
    } else {
        EXIT_EXHAUSTED
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_args(
            std::iter::once("partiality").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        let mut text = String::from_utf8(out).unwrap();
        text.push_str(&String::from_utf8(err).unwrap());
        (code, text)
    }

    #[test]
    fn eval_plus() {
        assert_eq!(
            run_str(&["--machine", "eval", "R(P 1 1; C(S; P 3 3))", "2", "3"]),
            (0, "CONVERGED 5 steps=0\n".into())
        );
        assert_eq!(
            run_str(&["eval", "plus", "2", "3", "--machine"]).1,
            "CONVERGED 5 steps=0\n"
        );
    }

    #[test]
    fn eval_exhausts() {
        assert_eq!(
            run_str(&["--machine", "--fuel", "100", "eval", "always_diverge", "0"]),
            (2, "EXHAUSTED fuel=100\n".into())
        );
    }

    #[test]
    fn trace_lines() {
        let (code, text) = run_str(&["--machine", "--trace", "eval", "ident_by_min", "2"]);
        assert_eq!(code, 0);
        assert_eq!(text, "STEP 1\nSTEP 2\nCONVERGED 2 steps=2\n");
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_str(&["eval", "C(S; Z, Z)", "1"]).0, 1);
        assert_eq!(run_str(&["eval", "Q", "1"]).0, 1);
        assert_eq!(run_str(&["eval", "plus", "1"]).0, 1);
        assert_eq!(run_str(&["eval", "plus", "1", "x"]).0, 1);
        assert_eq!(run_str(&["eval", "plus", "1", "-3"]).0, 1);
        assert_eq!(run_str(&["demo", "nope"]).0, 1);
        assert_eq!(run_str(&[]).0, 1);
        assert_eq!(run_str(&["--help"]).0, 0);
        assert_eq!(run_str(&["--version"]).0, 0);
    }

    #[test]
    fn demos_succeed() {
        for demo in ["nest", "devil91", "factorial-fix"] {
            let (code, text) = run_str(&["--machine", "demo", demo]);
            assert_eq!(code, 0, "{text}");
            assert!(!text.contains("EXHAUSTED"));
        }
        let (_, text) = run_str(&["--machine", "demo", "devil91"]);
        assert!(text.contains("devil91(45) CONVERGED 91 "));
        assert!(text.contains("devil91(150) CONVERGED 140 steps=0"));
    }

    #[test]
    fn sloth_demo() {
        let (code, text) = run_str(&["--machine", "--fuel", "1000", "demo", "sloth"]);
        assert_eq!(code, 0);
        assert!(
            text.contains("sloth g(14) OBSERVED 0 ended=zero\n"),
            "{text}"
        );
        assert!(
            text.contains("sloth f(13) OBSERVED 19 ended=exhausted fuel=1000\n"),
            "{text}"
        );
        assert!(
            text.contains("strict g(14) EXHAUSTED fuel=1000\n"),
            "{text}"
        );
    }

    #[test]
    fn check_laws_passes() {
        let (code, text) = run_str(&[
            "--machine",
            "--fuel",
            "64",
            "check-laws",
            "--samples",
            "100",
        ]);
        assert_eq!(code, 0, "{text}");
        assert_eq!(text.lines().count(), 7);
        assert!(!text.contains("FAILS"));
    }
}
