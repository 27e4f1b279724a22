//! A small library of codes.

use super::RecCode;
use super::RecCode::{Succ, Zero};

fn p(i: usize, n: usize) -> RecCode {
    RecCode::proj(i, n)
}

/// `x + y`, by recursion on `y`.
pub fn plus() -> RecCode {
    RecCode::prim_rec(p(1, 1), RecCode::comp(Succ, vec![p(3, 3)]))
}

/// `x · y`, by recursion on `y` over [`plus`].
pub fn mult() -> RecCode {
    RecCode::prim_rec(Zero, RecCode::comp(plus(), vec![p(1, 3), p(3, 3)]))
}

/// `x ∸ 1`.
pub fn pred() -> RecCode {
    // (x, y) ↦ y ∸ 1 on the diagonal
    let pred2 = RecCode::prim_rec(Zero, p(2, 3));
    RecCode::comp(pred2, vec![p(1, 1), p(1, 1)])
}

/// `x ∸ y`.
pub fn monus() -> RecCode {
    RecCode::prim_rec(p(1, 1), RecCode::comp(pred(), vec![p(3, 3)]))
}

/// The identity, as the least `y` with `x ∸ y = 0`.
pub fn ident_by_min() -> RecCode {
    RecCode::min(monus())
}

/// Least `y` with `y + 1 = 0`: undefined everywhere.
pub fn always_diverge() -> RecCode {
    RecCode::min(RecCode::comp(Succ, vec![p(2, 2)]))
}

/// All of the above, by name.
pub fn corpus() -> Vec<(&'static str, RecCode)> {
    vec![
        ("plus", plus()),
        ("mult", mult()),
        ("pred", pred()),
        ("monus", monus()),
        ("ident_by_min", ident_by_min()),
        ("always_diverge", always_diverge()),
    ]
}

/// Looks up a code of [`corpus`] by name.
pub fn named(name: &str) -> Option<RecCode> {
    corpus()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, c)| c)
}
