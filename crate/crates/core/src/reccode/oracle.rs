//! Direct evaluation of codes on numbers, without delays.

use super::{RecCode, RecError};
use crate::num::Natural;

/// Classical big-step evaluation. Every subcode evaluation costs one unit
/// of `fuel`; `Ok(None)` means the budget ran out.
pub fn oracle_eval<N: Natural>(
    code: &RecCode,
    args: &[N],
    fuel: u64,
) -> Result<Option<N>, RecError> {
    let expected = code.arity()?;
    if expected != args.len() {
        return Err(RecError::ArityMismatch {
            expected,
            got: args.len(),
        });
    }
    let mut budget = fuel;
    Ok(run(code, args, &mut budget))
}

fn run<N: Natural>(code: &RecCode, xs: &[N], budget: &mut u64) -> Option<N> {
    *budget = budget.checked_sub(1)?;
    match code {
        RecCode::Zero => Some(N::zero()),
        RecCode::Succ => Some(xs[0].succ()),
        RecCode::Proj { i, .. } => Some(xs[i - 1].clone()),
        RecCode::Comp(f, gs) => {
            let mut ys = Vec::with_capacity(gs.len());
            for g in gs {
                ys.push(run(g, xs, budget)?);
            }
            run(f, &ys, budget)
        }
        RecCode::PrimRec(f, g) => {
            let (y, xs) = xs.split_last()?;
            let mut acc = run(f, xs, budget)?;
            let mut i = N::zero();
            while i < *y {
                let mut args = xs.to_vec();
                args.push(i.clone());
                args.push(acc);
                acc = run(g, &args, budget)?;
                i = i.succ();
            }
            Some(acc)
        }
        RecCode::Min(f) => {
            let mut y = N::zero();
            loop {
                let mut args = xs.to_vec();
                args.push(y.clone());
                if run(f, &args, budget)?.is_zero() {
                    return Some(y);
                }
                y = y.succ();
            }
        }
    }
}
