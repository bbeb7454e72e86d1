use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::Add;
use std::str::FromStr;

use num_traits::{PrimInt, Unsigned};

/// Unsigned integer type usable as an edge weight.
pub trait Scalar:
    PrimInt + Unsigned + fmt::Debug + fmt::Display + FromStr + std::hash::Hash + Default + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: PrimInt + Unsigned + fmt::Debug + fmt::Display + FromStr + std::hash::Hash + Default + Send + Sync + 'static
{
}

/// Edge weight: a finite nonnegative integer or the absorbing `Infinite`.
///
/// Addition saturates: any sum involving `Infinite` is `Infinite`, and a
/// finite sum that overflows the scalar type is also `Infinite`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Weight<W = u64> {
    Finite(W),
    Infinite,
}

impl<W: Scalar> Weight<W> {
    pub const INFINITE: Self = Weight::Infinite;

    pub fn zero() -> Self {
        Weight::Finite(W::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Weight::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Weight::Infinite)
    }

    pub fn finite(&self) -> Option<W> {
        match *self {
            Weight::Finite(w) => Some(w),
            Weight::Infinite => None,
        }
    }
}

impl<W: Scalar> Default for Weight<W> {
    fn default() -> Self {
        Weight::zero()
    }
}

impl<W: Scalar> From<W> for Weight<W> {
    fn from(w: W) -> Self {
        Weight::Finite(w)
    }
}

impl<W: Scalar> Add for Weight<W> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (Weight::Finite(a), Weight::Finite(b)) => match a.checked_add(&b) {
                Some(s) => Weight::Finite(s),
                None => Weight::Infinite,
            },
            _ => Weight::Infinite,
        }
    }
}

impl<W: Scalar> Sum for Weight<W> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Weight::zero(), |a, b| a + b)
    }
}

impl<W: Scalar> PartialOrd for Weight<W> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<W: Scalar> Ord for Weight<W> {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Weight::Finite(a), Weight::Finite(b)) => a.cmp(b),
            (Weight::Finite(_), Weight::Infinite) => Ordering::Less,
            (Weight::Infinite, Weight::Finite(_)) => Ordering::Greater,
            (Weight::Infinite, Weight::Infinite) => Ordering::Equal,
        }
    }
}

impl<W: Scalar> fmt::Display for Weight<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Finite(w) => write!(f, "{w}"),
            Weight::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid weight token {0:?}")]
pub struct ParseWeightError(pub String);

impl<W: Scalar> FromStr for Weight<W> {
    type Err = ParseWeightError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "inf" {
            return Ok(Weight::Infinite);
        }
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseWeightError(s.to_string()));
        }
        s.parse::<W>()
            .map(Weight::Finite)
            .map_err(|_| ParseWeightError(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type W = Weight<u64>;

    #[test]
    fn infinite_absorbs() {
        assert_eq!(W::Finite(3) + W::Infinite, W::Infinite);
        assert_eq!(W::Infinite + W::Finite(0), W::Infinite);
        assert_eq!(W::Finite(3) + W::Finite(4), W::Finite(7));
    }

    #[test]
    fn overflow_saturates() {
        assert_eq!(W::Finite(u64::MAX) + W::Finite(1), W::Infinite);
        assert_eq!(Weight::<u8>::Finite(200) + Weight::Finite(100), Weight::Infinite);
    }

    #[test]
    fn parse_tokens() {
        assert_eq!("inf".parse::<W>(), Ok(W::Infinite));
        assert_eq!("17".parse::<W>(), Ok(W::Finite(17)));
        assert!("-1".parse::<W>().is_err());
        assert!("Inf".parse::<W>().is_err());
        assert!("".parse::<W>().is_err());
    }

    proptest! {
        #[test]
        fn finite_below_infinite(a in any::<u64>()) {
            prop_assert!(W::Finite(a) < W::Infinite);
        }

        #[test]
        fn add_commutes_and_associates(a in 0u64..1 << 40, b in 0u64..1 << 40, c in 0u64..1 << 40, inf in 0u8..4) {
            let pick = |x: u64, i: u8| if inf == i { W::Infinite } else { W::Finite(x) };
            let (x, y, z) = (pick(a, 1), pick(b, 2), pick(c, 3));
            prop_assert_eq!(x + y, y + x);
            prop_assert_eq!((x + y) + z, x + (y + z));
        }
    }
}
