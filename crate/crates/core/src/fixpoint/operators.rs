//! Sample operators, each the recursion scheme of a familiar function.

use crate::delay::Delay;
use crate::fixpoint::Operator;
use crate::num::Natural;

/// `F f 0 = 1`, `F f (m+1) = (m+1) · f(m)`.
pub fn factorial<N: Natural>() -> Operator<N, N> {
    Operator::new("factorial", |f, n: N| match n.pred() {
        None => Delay::now(N::one()),
        Some(m) => f.call(m).map(move |r| r * n.clone()),
    })
}

/// `F f n = n − 10` if `n > 100`, else `f(f(n + 11))`.
pub fn mccarthy91<N: Natural>() -> Operator<N, N> {
    Operator::new("mccarthy91", |f, n: N| {
        if n > N::nat(100) {
            Delay::now(n - N::nat(10))
        } else {
            let outer = f.clone();
            f.call(n + N::nat(11)).bind(move |r| outer.call(r))
        }
    })
}

/// Ackermann–Péter function on pairs.
pub fn ackermann<N: Natural>() -> Operator<(N, N), N> {
    Operator::new("ackermann", |f, (m, n): (N, N)| {
        match (m.pred(), n.pred()) {
            (None, _) => Delay::now(n.succ()),
            (Some(m1), None) => f.call((m1, N::one())),
            (Some(m1), Some(n1)) => {
                let outer = f.clone();
                f.call((m, n1)).bind(move |r| outer.call((m1.clone(), r)))
            }
        }
    })
}

/// `F f = f`: every iterate is `⊥`.
pub fn diverging<N: Natural>() -> Operator<N, N> {
    Operator::new("diverging", |f, n: N| f.call(n))
}

/// Integer division by repeated subtraction; loops on divisor zero.
pub fn division<N: Natural>() -> Operator<(N, N), N> {
    Operator::new("division", |f, (x, y): (N, N)| {
        if y.is_zero() {
            f.call((x, y))
        } else if x < y {
            Delay::now(N::zero())
        } else {
            f.call((x - y.clone(), y)).map(|q| q.succ())
        }
    })
}
