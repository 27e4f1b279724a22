//! Natural-number scalars.
//!
//! Everything that computes on numerals (recursive-function codes, the
//! nested-recursion encodings, lazy naturals, the sample operators) is
//! generic over [`Natural`]. The crate root fixes [`crate::NatValue`] to an
//! arbitrary-precision integer; `u64` works too when overflow is not a concern.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_traits::{CheckedSub, FromPrimitive, ToPrimitive, Unsigned};

/// A non-negative integer type usable as the value type of partial computations.
pub trait Natural:
    Unsigned
    + CheckedSub
    + FromPrimitive
    + ToPrimitive
    + Clone
    + Ord
    + Hash
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Embeds a machine integer.
    fn nat(n: u64) -> Self {
        <Self as FromPrimitive>::from_u64(n).expect("every u64 is a natural")
    }

    fn succ(&self) -> Self {
        self.clone() + Self::one()
    }

    /// `None` at zero.
    fn pred(&self) -> Option<Self> {
        self.checked_sub(&Self::one())
    }

    /// Truncated subtraction.
    fn monus(&self, other: &Self) -> Self {
        self.checked_sub(other).unwrap_or_else(Self::zero)
    }
}

impl<T> Natural for T where
    T: Unsigned
        + CheckedSub
        + FromPrimitive
        + ToPrimitive
        + Clone
        + Ord
        + Hash
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn roundtrip<N: Natural>() {
        let three = N::nat(3);
        assert_eq!(three.succ(), N::nat(4));
        assert_eq!(three.pred(), Some(N::nat(2)));
        assert_eq!(N::zero().pred(), None);
        assert_eq!(N::nat(2).monus(&N::nat(5)), N::zero());
        assert_eq!(N::nat(7).monus(&N::nat(5)), N::nat(2));
    }

    #[test]
    fn machine_and_big_naturals_agree() {
        roundtrip::<u64>();
        roundtrip::<u32>();
        roundtrip::<BigUint>();
    }
}
