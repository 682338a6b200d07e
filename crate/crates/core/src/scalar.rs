//! Scalar abstraction shared by the exact polyhedral algebra.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating point scalar: `f32` or `f64`.
///
/// Every polyhedral operation is closed-form, so rounding does not compound;
/// the only type-dependent knob is the tolerance used when deciding that two
/// slopes, intercepts or breakpoints coincide.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Dedup tolerance for slopes, intercepts and breakpoints.
    fn canon_tol() -> Self;

    /// Tolerance for membership and inclusion tests on computed values.
    fn feas_tol() -> Self;

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    fn half() -> Self {
        Self::lit(0.5)
    }

    /// `tol * max(1, |a|, |b|)`.
    fn scaled_tol(tol: Self, a: Self, b: Self) -> Self {
        let mut m = Self::one();
        if a.is_finite() {
            m = m.max(a.abs());
        }
        if b.is_finite() {
            m = m.max(b.abs());
        }
        tol * m
    }

    fn approx_eq(a: Self, b: Self, tol: Self) -> bool {
        if a.is_infinite() || b.is_infinite() {
            return a == b;
        }
        (a - b).abs() <= Self::scaled_tol(tol, a, b)
    }
}

impl Scalar for f64 {
    fn canon_tol() -> Self {
        1e-12
    }
    fn feas_tol() -> Self {
        1e-10
    }
}

impl Scalar for f32 {
    fn canon_tol() -> Self {
        1e-5
    }
    fn feas_tol() -> Self {
        1e-4
    }
}
