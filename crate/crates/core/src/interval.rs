//! Closed intervals of the extended line and finite unions of them.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Closed interval `[lo, hi]`; infinite endpoints are open rays.
///
/// The empty interval is stored as `lo = +inf, hi = -inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval<T> {
    lo: T,
    hi: T,
}

impl<T: Scalar> Interval<T> {
    pub fn new(lo: T, hi: T) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi || lo == T::infinity() || hi == T::neg_infinity()
        {
            return Err(Error::BadInterval {
                lo: lo.to_f64().unwrap_or(f64::NAN),
                hi: hi.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Interval { lo, hi })
    }

    /// Builds `[lo, hi]`, returning the empty interval when `lo > hi`.
    pub fn new_or_empty(lo: T, hi: T) -> Self {
        Self::new(lo, hi).unwrap_or_else(|_| Self::empty())
    }

    pub fn empty() -> Self {
        Interval {
            lo: T::infinity(),
            hi: T::neg_infinity(),
        }
    }

    pub fn point(x: T) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn real_line() -> Self {
        Interval {
            lo: T::neg_infinity(),
            hi: T::infinity(),
        }
    }

    pub fn lo(&self) -> T {
        self.lo
    }

    pub fn hi(&self) -> T {
        self.hi
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn is_point(&self) -> bool {
        !self.is_empty() && self.lo == self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn length(&self) -> T {
        if self.is_empty() {
            T::zero()
        } else {
            self.hi - self.lo
        }
    }

    pub fn contains(&self, x: T) -> bool {
        !self.is_empty() && self.lo <= x && x <= self.hi
    }

    /// Membership allowing a relative slack of `tol` at finite endpoints.
    pub fn contains_tol(&self, x: T, tol: T) -> bool {
        if self.is_empty() {
            return false;
        }
        let slack = T::scaled_tol(tol, x, T::zero());
        (self.lo == T::neg_infinity() || x >= self.lo - slack)
            && (self.hi == T::infinity() || x <= self.hi + slack)
    }

    /// Nearest point of the interval; `None` when empty.
    pub fn clamp(&self, x: T) -> Option<T> {
        if self.is_empty() {
            None
        } else {
            Some(x.max(self.lo).min(self.hi))
        }
    }

    /// Midpoint when bounded, otherwise the point closest to zero.
    pub fn center(&self) -> Option<T> {
        if self.is_empty() {
            None
        } else if self.is_bounded() {
            Some((self.lo + self.hi) * T::half())
        } else {
            self.clamp(T::zero())
        }
    }

    pub fn intersect(&self, other: &Self) -> Self {
        Self::new_or_empty(self.lo.max(other.lo), self.hi.min(other.hi))
    }

    /// Convex hull of the union.
    pub fn hull(&self, other: &Self) -> Self {
        if self.is_empty() {
            return *other;
        }
        if other.is_empty() {
            return *self;
        }
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// Minkowski sum.
    pub fn sum(&self, other: &Self) -> Self {
        if self.is_empty() || other.is_empty() {
            return Self::empty();
        }
        Interval {
            lo: self.lo + other.lo,
            hi: self.hi + other.hi,
        }
    }

    /// Image under `x -> c + m x`; `0 * unbounded = {c}`.
    pub fn affine_image(&self, c: T, m: T) -> Self {
        if self.is_empty() {
            return Self::empty();
        }
        if m == T::zero() {
            return Self::point(c);
        }
        let (a, b) = (c + m * self.lo, c + m * self.hi);
        Interval {
            lo: a.min(b),
            hi: a.max(b),
        }
    }

    pub fn is_subset_tol(&self, other: &Self, tol: T) -> bool {
        if self.is_empty() {
            return true;
        }
        if other.is_empty() {
            return false;
        }
        let lo_ok = other.lo == T::neg_infinity()
            || (self.lo != T::neg_infinity()
                && self.lo >= other.lo - T::scaled_tol(tol, self.lo, other.lo));
        let hi_ok = other.hi == T::infinity()
            || (self.hi != T::infinity()
                && self.hi <= other.hi + T::scaled_tol(tol, self.hi, other.hi));
        lo_ok && hi_ok
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        match (self.is_empty(), other.is_empty()) {
            (true, true) => true,
            (false, false) => {
                T::approx_eq(self.lo, other.lo, tol) && T::approx_eq(self.hi, other.hi, tol)
            }
            _ => false,
        }
    }

    /// Interior, as an open interval given by its closure endpoints; `None`
    /// when the interior is empty.
    pub fn interior(&self) -> Option<(T, T)> {
        if self.is_empty() || self.lo == self.hi {
            None
        } else {
            Some((self.lo, self.hi))
        }
    }

    /// Deterministic sample of the relative interior: the quarter points and
    /// inset endpoints for bounded intervals, a fixed ladder for rays.
    pub fn relative_interior_samples(&self, inset: T) -> Vec<T> {
        if self.is_empty() {
            return Vec::new();
        }
        if self.is_point() {
            return vec![self.lo];
        }
        let q = T::lit(0.25);
        match (self.lo.is_finite(), self.hi.is_finite()) {
            (true, true) => {
                let w = self.hi - self.lo;
                vec![
                    self.lo + w * T::half(),
                    self.lo + w * q,
                    self.lo + w * (T::one() - q),
                    self.lo + w * inset,
                    self.hi - w * inset,
                ]
            }
            (true, false) => [inset, q, T::half(), T::one()]
                .iter()
                .map(|&d| self.lo + d)
                .collect(),
            (false, true) => [inset, q, T::half(), T::one()]
                .iter()
                .map(|&d| self.hi - d)
                .collect(),
            (false, false) => [0.0, 0.5, -0.5, 0.25, -0.25, 1.0, -1.0]
                .iter()
                .map(|&d| T::lit(d))
                .collect(),
        }
    }
}

impl<T: Scalar> fmt::Display for Interval<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "{{}}")
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}

/// Finite union of pairwise disjoint closed intervals, sorted and maximal.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalUnion<T> {
    parts: Vec<Interval<T>>,
}

impl<T: Scalar> IntervalUnion<T> {
    pub fn empty() -> Self {
        IntervalUnion { parts: Vec::new() }
    }

    /// Normalizes an arbitrary list: drops empties, sorts, merges overlapping
    /// or touching parts.
    pub fn from_intervals<I: IntoIterator<Item = Interval<T>>>(items: I) -> Self {
        let mut v: Vec<Interval<T>> = items.into_iter().filter(|i| !i.is_empty()).collect();
        v.sort_by(|a, b| a.lo.partial_cmp(&b.lo).expect("interval endpoints are not NaN"));
        let mut parts: Vec<Interval<T>> = Vec::with_capacity(v.len());
        for iv in v {
            match parts.last_mut() {
                Some(last) if iv.lo <= last.hi => last.hi = last.hi.max(iv.hi),
                _ => parts.push(iv),
            }
        }
        IntervalUnion { parts }
    }

    pub fn single(iv: Interval<T>) -> Self {
        Self::from_intervals([iv])
    }

    pub fn parts(&self) -> &[Interval<T>] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains(&self, x: T) -> bool {
        self.parts.iter().any(|p| p.contains(x))
    }

    pub fn contains_tol(&self, x: T, tol: T) -> bool {
        self.parts.iter().any(|p| p.contains_tol(x, tol))
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::from_intervals(self.parts.iter().chain(other.parts.iter()).copied())
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        for a in &self.parts {
            for b in &other.parts {
                out.push(a.intersect(b));
            }
        }
        Self::from_intervals(out)
    }

    pub fn hull(&self) -> Interval<T> {
        self.parts
            .iter()
            .fold(Interval::empty(), |acc, p| acc.hull(p))
    }

    /// `self ⊆ other` up to `tol`: each part must fit inside a single part
    /// of `other` (parts of `other` are maximal, so this is exact).
    pub fn is_subset_tol(&self, other: &Self, tol: T) -> bool {
        self.parts
            .iter()
            .all(|p| other.parts.iter().any(|q| p.is_subset_tol(q, tol)))
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.is_subset_tol(other, tol) && other.is_subset_tol(self, tol)
    }
}

impl<T: Scalar> fmt::Display for IntervalUnion<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "{{}}");
        }
        for (k, p) in self.parts.iter().enumerate() {
            if k > 0 {
                write!(f, " u ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn malformed_interval_rejected() {
        assert!(Interval::new(1.0, 0.0).is_err());
        assert!(Interval::new(f64::INFINITY, f64::INFINITY).is_err());
        assert!(Interval::new(0.0, f64::INFINITY).is_ok());
    }

    #[test]
    fn union_merges_touching_parts() {
        let u = IntervalUnion::from_intervals([
            Interval::new(1.0, 2.0).unwrap(),
            Interval::new(0.0, 1.0).unwrap(),
            Interval::point(5.0),
            Interval::empty(),
        ]);
        assert_eq!(u.parts().len(), 2);
        assert_eq!(u.parts()[0], Interval::new(0.0, 2.0).unwrap());
    }

    #[test]
    fn subset_of_union_needs_single_part() {
        let a = IntervalUnion::single(Interval::new(0.0, 1.0).unwrap());
        let b = IntervalUnion::from_intervals([Interval::point(0.0), Interval::point(1.0)]);
        assert!(b.is_subset_tol(&a, 1e-12));
        assert!(!a.is_subset_tol(&b, 1e-12));
        assert!(IntervalUnion::<f64>::empty().is_subset_tol(&b, 0.0));
    }

    #[test]
    fn affine_image_flips_and_collapses() {
        let i = Interval::new(0.0, 1.0).unwrap();
        assert_eq!(i.affine_image(0.0, -2.0), Interval::new(-2.0, 0.0).unwrap());
        assert_eq!(
            Interval::<f64>::real_line().affine_image(3.0, 0.0),
            Interval::point(3.0)
        );
    }

    #[test]
    fn ray_samples_stay_inside() {
        let r = Interval::new(-2.0, f64::INFINITY).unwrap();
        for x in r.relative_interior_samples(1e-6) {
            assert!(x > -2.0);
        }
        assert_eq!(Interval::point(3.0).relative_interior_samples(1e-6), vec![3.0]);
    }
}
