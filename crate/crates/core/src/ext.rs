//! Extended reals with the conventions of convex analysis.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal<T> {
    NegInf,
    Finite(T),
    PosInf,
}

impl<T: Scalar> ExtReal<T> {
    pub fn zero() -> Self {
        ExtReal::Finite(T::zero())
    }

    /// Maps IEEE infinities onto the matching variant.
    pub fn from_float(x: T) -> Self {
        if x == T::infinity() {
            ExtReal::PosInf
        } else if x == T::neg_infinity() {
            ExtReal::NegInf
        } else {
            ExtReal::Finite(x)
        }
    }

    pub fn to_float(self) -> T {
        match self {
            ExtReal::NegInf => T::neg_infinity(),
            ExtReal::Finite(x) => x,
            ExtReal::PosInf => T::infinity(),
        }
    }

    pub fn finite(self) -> Option<T> {
        match self {
            ExtReal::Finite(x) => Some(x),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn is_pos_inf(self) -> bool {
        matches!(self, ExtReal::PosInf)
    }

    /// Sum; `+inf + -inf` is an error.
    pub fn checked_add(self, other: Self) -> Result<Self> {
        use ExtReal::*;
        match (self, other) {
            (PosInf, NegInf) | (NegInf, PosInf) => Err(Error::IndefiniteSum),
            (PosInf, _) | (_, PosInf) => Ok(PosInf),
            (NegInf, _) | (_, NegInf) => Ok(NegInf),
            (Finite(a), Finite(b)) => Ok(Finite(a + b)),
        }
    }

    pub fn checked_sub(self, other: Self) -> Result<Self> {
        self.checked_add(-other)
    }

    /// Multiplication by a nonnegative weight with `0 * inf = 0`, the
    /// convention used when accumulating integrals.
    pub fn scale_nonneg(self, w: T) -> Self {
        debug_assert!(w >= T::zero());
        if w == T::zero() {
            return Self::zero();
        }
        match self {
            ExtReal::Finite(x) => ExtReal::Finite(x * w),
            other => other,
        }
    }

    pub fn sum<I: IntoIterator<Item = Self>>(items: I) -> Result<Self> {
        items
            .into_iter()
            .try_fold(Self::zero(), |acc, x| acc.checked_add(x))
    }

    pub fn approx_eq(self, other: Self, tol: T) -> bool {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => T::approx_eq(a, b, tol),
            (a, b) => a == b,
        }
    }
}

impl<T: Scalar> std::ops::Neg for ExtReal<T> {
    type Output = Self;
    fn neg(self) -> Self {
        match self {
            ExtReal::NegInf => ExtReal::PosInf,
            ExtReal::Finite(x) => ExtReal::Finite(-x),
            ExtReal::PosInf => ExtReal::NegInf,
        }
    }
}

impl<T: Scalar> PartialOrd for ExtReal<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.to_float().partial_cmp(&other.to_float())
    }
}

impl<T: Scalar> From<T> for ExtReal<T> {
    fn from(x: T) -> Self {
        Self::from_float(x)
    }
}

impl<T: Scalar> fmt::Display for ExtReal<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::NegInf => write!(f, "-inf"),
            ExtReal::PosInf => write!(f, "inf"),
            ExtReal::Finite(x) => write!(f, "{x}"),
        }
    }
}
