//! Closed proper polyhedral convex functions on the line.
//!
//! A [`PolyConvexFn`] is `x -> max_i (a_i x + b_i)` restricted to a closed
//! interval domain and `+inf` outside it. Every operation here (conjugation,
//! recession, inf-convolution with a ball, subdifferentials) stays inside the
//! class and is computed in closed form.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::interval::Interval;
use crate::scalar::Scalar;

/// Affine function `t -> slope * t + intercept`.
///
/// A zero slope with an infinite intercept is allowed and denotes a constant
/// infinite bound (used for unbounded set-valued maps).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Affine<T> {
    pub slope: T,
    pub intercept: T,
}

impl<T: Scalar> Affine<T> {
    pub fn new(slope: T, intercept: T) -> Self {
        Affine { slope, intercept }
    }

    pub fn constant(c: T) -> Self {
        Affine::new(T::zero(), c)
    }

    /// The affine function through `(t0, v0)` and `(t1, v1)`.
    pub fn through(t0: T, v0: T, t1: T, v1: T) -> Self {
        if v0.is_infinite() || v1.is_infinite() {
            debug_assert!(v0 == v1);
            return Affine::constant(v0);
        }
        let slope = (v1 - v0) / (t1 - t0);
        Affine::new(slope, v0 - slope * t0)
    }

    pub fn eval(&self, t: T) -> T {
        if self.slope == T::zero() {
            self.intercept
        } else {
            self.slope * t + self.intercept
        }
    }

    pub fn is_finite(&self) -> bool {
        self.slope.is_finite() && self.intercept.is_finite()
    }

    /// Abscissa where `self` and `other` agree, if the slopes differ.
    pub fn crossing(&self, other: &Self) -> Option<T> {
        let ds = self.slope - other.slope;
        if ds == T::zero() || !self.is_finite() || !other.is_finite() {
            None
        } else {
            Some((other.intercept - self.intercept) / ds)
        }
    }
}

/// Closed proper polyhedral convex function in canonical form.
///
/// Canonical means: pieces sorted by strictly increasing slope, each piece
/// attains the maximum on a subinterval of the domain of positive length,
/// and a point domain carries a single zero-slope piece.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyConvexFn<T> {
    pieces: Vec<Affine<T>>,
    dom: Interval<T>,
}

/// Canonical form of `max_i (a_i x + b_i)` on `dom`.
pub fn canonicalize<T: Scalar>(pieces: &[Affine<T>], dom: Interval<T>) -> Result<PolyConvexFn<T>> {
    if dom.is_empty() {
        return Err(Error::EmptyDomain);
    }
    if pieces.is_empty() {
        return Err(Error::NoPieces);
    }
    if pieces.iter().any(|p| !p.is_finite()) {
        return Err(Error::BadCoefficient("affine piece"));
    }
    let tol = T::canon_tol();

    if dom.is_point() {
        let x = dom.lo();
        let v = pieces
            .iter()
            .map(|p| p.eval(x))
            .fold(T::neg_infinity(), T::max);
        return Ok(PolyConvexFn {
            pieces: vec![Affine::constant(v)],
            dom,
        });
    }

    let mut sorted = pieces.to_vec();
    sorted.sort_by(|p, q| {
        p.slope
            .partial_cmp(&q.slope)
            .unwrap_or(Ordering::Equal)
            .then(q.intercept.partial_cmp(&p.intercept).unwrap_or(Ordering::Equal))
    });
    // Equal slopes: keep the largest intercept (first after the sort).
    let mut dedup: Vec<Affine<T>> = Vec::with_capacity(sorted.len());
    for p in sorted {
        match dedup.last() {
            Some(last) if T::approx_eq(last.slope, p.slope, tol) => {}
            _ => dedup.push(p),
        }
    }

    // Upper envelope over the whole line.
    let mut hull: Vec<Affine<T>> = Vec::with_capacity(dedup.len());
    for p in dedup {
        while hull.len() >= 2 {
            let l1 = hull[hull.len() - 2];
            let l2 = hull[hull.len() - 1];
            let x12 = l1.crossing(&l2).expect("distinct slopes");
            let x13 = l1.crossing(&p).expect("distinct slopes");
            if x13 <= x12 + T::scaled_tol(tol, x12, x13) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }

    // Keep the pieces whose active interval meets the domain in positive length.
    let n = hull.len();
    let mut kept = Vec::with_capacity(n);
    for i in 0..n {
        let left = if i == 0 {
            T::neg_infinity()
        } else {
            hull[i - 1].crossing(&hull[i]).expect("distinct slopes")
        };
        let right = if i + 1 == n {
            T::infinity()
        } else {
            hull[i].crossing(&hull[i + 1]).expect("distinct slopes")
        };
        let a = left.max(dom.lo());
        let b = right.min(dom.hi());
        if b - a > T::scaled_tol(tol, a, b) {
            kept.push(hull[i]);
        }
    }
    if kept.is_empty() {
        // Domain shorter than the tolerance: keep the piece active at its midpoint.
        let x = dom.center().expect("nonempty");
        let best = hull
            .iter()
            .copied()
            .max_by(|p, q| p.eval(x).partial_cmp(&q.eval(x)).unwrap_or(Ordering::Equal))
            .expect("nonempty hull");
        kept.push(best);
    }
    Ok(PolyConvexFn { pieces: kept, dom })
}

impl<T: Scalar> PolyConvexFn<T> {
    /// Canonicalizing constructor.
    pub fn new(pieces: Vec<Affine<T>>, dom: Interval<T>) -> Result<Self> {
        canonicalize(&pieces, dom)
    }

    pub fn from_pairs(pairs: &[(T, T)], dom: Interval<T>) -> Result<Self> {
        let pieces: Vec<_> = pairs.iter().map(|&(a, b)| Affine::new(a, b)).collect();
        canonicalize(&pieces, dom)
    }

    /// `|x|`.
    pub fn abs() -> Self {
        Self::from_pairs(&[(-T::one(), T::zero()), (T::one(), T::zero())], Interval::real_line())
            .expect("valid")
    }

    /// Indicator of a nonempty interval.
    pub fn indicator(dom: Interval<T>) -> Result<Self> {
        canonicalize(&[Affine::constant(T::zero())], dom)
    }

    pub fn affine(slope: T, intercept: T) -> Self {
        canonicalize(&[Affine::new(slope, intercept)], Interval::real_line()).expect("valid")
    }

    pub fn pieces(&self) -> &[Affine<T>] {
        &self.pieces
    }

    pub fn dom(&self) -> Interval<T> {
        self.dom
    }

    /// Exact value; `+inf` off the domain.
    pub fn eval(&self, x: T) -> ExtReal<T> {
        if !self.dom.contains(x) {
            return ExtReal::PosInf;
        }
        ExtReal::Finite(self.max_piece(x))
    }

    /// Value of the max-affine formula, ignoring the domain.
    pub fn max_piece(&self, x: T) -> T {
        self.pieces
            .iter()
            .map(|p| p.eval(x))
            .fold(T::neg_infinity(), T::max)
    }

    /// Kinks strictly inside the domain, increasing.
    pub fn breakpoints(&self) -> Vec<T> {
        self.pieces
            .windows(2)
            .map(|w| w[0].crossing(&w[1]).expect("canonical slopes differ"))
            .collect()
    }

    /// Kinks plus the finite domain endpoints, increasing.
    pub fn vertices(&self) -> Vec<T> {
        let mut v = Vec::with_capacity(self.pieces.len() + 1);
        if self.dom.lo().is_finite() {
            v.push(self.dom.lo());
        }
        v.extend(self.breakpoints());
        if self.dom.hi().is_finite() && !self.dom.is_point() {
            v.push(self.dom.hi());
        }
        v
    }

    pub fn min_slope(&self) -> T {
        self.pieces[0].slope
    }

    pub fn max_slope(&self) -> T {
        self.pieces[self.pieces.len() - 1].slope
    }

    /// Legendre–Fenchel conjugate `v -> sup_x (v x - f(x))`.
    ///
    /// The conjugate is the max of the affine maps `v -> x_j v - f(x_j)` over
    /// the vertices `x_j`; its domain is bounded on a side exactly when the
    /// domain of `f` is unbounded on that side, by the extreme slope there.
    pub fn conjugate(&self) -> Self {
        let lo = if self.dom.lo() == T::neg_infinity() {
            self.min_slope()
        } else {
            T::neg_infinity()
        };
        let hi = if self.dom.hi() == T::infinity() {
            self.max_slope()
        } else {
            T::infinity()
        };
        let dom = Interval::new(lo, hi).expect("slopes are sorted");
        let verts = self.vertices();
        let pieces: Vec<Affine<T>> = if verts.is_empty() {
            // Single affine piece on the whole line.
            vec![Affine::constant(-self.pieces[0].intercept)]
        } else {
            verts
                .iter()
                .map(|&x| Affine::new(x, -self.max_piece(x)))
                .collect()
        };
        canonicalize(&pieces, dom).expect("conjugate of proper polyhedral is proper")
    }

    /// Recession function, read off the extreme slopes and the domain.
    pub fn recession(&self) -> Self {
        let right = self.dom.hi() == T::infinity();
        let left = self.dom.lo() == T::neg_infinity();
        let (pieces, dom) = match (left, right) {
            (true, true) => (
                vec![
                    Affine::new(self.min_slope(), T::zero()),
                    Affine::new(self.max_slope(), T::zero()),
                ],
                Interval::real_line(),
            ),
            (false, true) => (
                vec![Affine::new(self.max_slope(), T::zero())],
                Interval::new(T::zero(), T::infinity()).expect("valid"),
            ),
            (true, false) => (
                vec![Affine::new(self.min_slope(), T::zero())],
                Interval::new(T::neg_infinity(), T::zero()).expect("valid"),
            ),
            (false, false) => (vec![Affine::constant(T::zero())], Interval::point(T::zero())),
        };
        canonicalize(&pieces, dom).expect("recession is proper")
    }

    /// `inf f`, or `-inf` when unbounded below.
    pub fn infimum(&self) -> ExtReal<T> {
        if (self.dom.lo() == T::neg_infinity() && self.min_slope() > T::zero())
            || (self.dom.hi() == T::infinity() && self.max_slope() < T::zero())
        {
            return ExtReal::NegInf;
        }
        let verts = self.vertices();
        if verts.is_empty() {
            // Single zero-slope piece on the line.
            return ExtReal::Finite(self.pieces[0].intercept);
        }
        ExtReal::Finite(
            verts
                .iter()
                .map(|&x| self.max_piece(x))
                .fold(T::infinity(), T::min),
        )
    }

    /// Set of minimizers (empty when the infimum is not attained).
    pub fn argmin(&self) -> Interval<T> {
        let Some(m) = self.infimum().finite() else {
            return Interval::empty();
        };
        let tol = T::canon_tol();
        let zero_at = |x: T| T::approx_eq(self.max_piece(x), m, tol);
        if self.pieces.len() == 1 && self.pieces[0].slope == T::zero() {
            return self.dom;
        }
        let verts = self.vertices();
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for &x in &verts {
            if zero_at(x) {
                lo = lo.min(x);
                hi = hi.max(x);
            }
        }
        // A flat piece running off to infinity.
        if self.dom.lo() == T::neg_infinity() && self.min_slope() == T::zero() {
            lo = T::neg_infinity();
        }
        if self.dom.hi() == T::infinity() && self.max_slope() == T::zero() {
            hi = T::infinity();
        }
        Interval::new_or_empty(lo, hi)
    }

    /// `∂f(x)` with activity and endpoint tests at tolerance `tol`.
    pub fn subdifferential_tol(&self, x: T, tol: T) -> Interval<T> {
        if !self.dom.contains_tol(x, tol) {
            return Interval::empty();
        }
        let x = self.dom.clamp(x).expect("nonempty");
        let m = self.max_piece(x);
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for p in &self.pieces {
            if T::approx_eq(p.eval(x), m, tol) {
                lo = lo.min(p.slope);
                hi = hi.max(p.slope);
            }
        }
        let at_lo = self.dom.lo().is_finite() && T::approx_eq(x, self.dom.lo(), tol);
        let at_hi = self.dom.hi().is_finite() && T::approx_eq(x, self.dom.hi(), tol);
        if at_lo {
            lo = T::neg_infinity();
        }
        if at_hi {
            hi = T::infinity();
        }
        Interval::new_or_empty(lo, hi)
    }

    pub fn subdifferential(&self, x: T) -> Interval<T> {
        self.subdifferential_tol(x, T::canon_tol())
    }

    /// Inf-convolution with the indicator of `[-eps, eps]`:
    /// `x -> min_{|x'| <= eps} f(x + x')`.
    ///
    /// Each piece slides by `eps` towards the minimum; a flat piece at the
    /// infimum fills the gap when the infimum is finite.
    pub fn epsilon_regularize(&self, eps: T) -> Result<Self> {
        if !(eps > T::zero()) {
            return Err(Error::BadCoefficient("regularization radius"));
        }
        let mut pieces: Vec<Affine<T>> = self
            .pieces
            .iter()
            .map(|p| Affine::new(p.slope, p.intercept - eps * p.slope.abs()))
            .collect();
        if let ExtReal::Finite(m) = self.infimum() {
            pieces.push(Affine::constant(m));
        }
        let dom = Interval::new(self.dom.lo() - eps, self.dom.hi() + eps)?;
        canonicalize(&pieces, dom)
    }

    /// Pointwise sum.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        let dom = self.dom.intersect(&other.dom);
        let mut pieces = Vec::with_capacity(self.pieces.len() * other.pieces.len());
        for p in &self.pieces {
            for q in &other.pieces {
                pieces.push(Affine::new(p.slope + q.slope, p.intercept + q.intercept));
            }
        }
        canonicalize(&pieces, dom)
    }

    /// `c f` for `c > 0`.
    pub fn scale(&self, c: T) -> Result<Self> {
        if !(c > T::zero()) || !c.is_finite() {
            return Err(Error::BadCoefficient("scale factor"));
        }
        let pieces: Vec<_> = self
            .pieces
            .iter()
            .map(|p| Affine::new(p.slope * c, p.intercept * c))
            .collect();
        canonicalize(&pieces, self.dom)
    }

    /// Piece-list and domain equality at tolerance `tol`.
    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.dom.approx_eq(&other.dom, tol)
            && self.pieces.len() == other.pieces.len()
            && self.pieces.iter().zip(&other.pieces).all(|(p, q)| {
                T::approx_eq(p.slope, q.slope, tol) && T::approx_eq(p.intercept, q.intercept, tol)
            })
    }

    /// Converts the scalar type.
    pub fn cast<U: Scalar>(&self) -> PolyConvexFn<U> {
        let c = |x: T| U::from_f64(x.to_f64().expect("finite or infinite")).expect("castable");
        PolyConvexFn {
            pieces: self
                .pieces
                .iter()
                .map(|p| Affine::new(c(p.slope), c(p.intercept)))
                .collect(),
            dom: Interval::new(c(self.dom.lo()), c(self.dom.hi())).expect("same interval"),
        }
    }
}

impl<T: Scalar> fmt::Display for PolyConvexFn<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "max(")?;
        for (k, p) in self.pieces.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}x{:+}", p.slope, p.intercept)?;
        }
        write!(f, ") on {}", self.dom)
    }
}

pub fn eval<T: Scalar>(f: &PolyConvexFn<T>, x: T) -> ExtReal<T> {
    f.eval(x)
}

pub fn conjugate<T: Scalar>(f: &PolyConvexFn<T>) -> PolyConvexFn<T> {
    f.conjugate()
}

pub fn recession<T: Scalar>(f: &PolyConvexFn<T>) -> PolyConvexFn<T> {
    f.recession()
}

pub fn subdifferential<T: Scalar>(f: &PolyConvexFn<T>, x: T) -> Interval<T> {
    f.subdifferential(x)
}

pub fn epsilon_regularize<T: Scalar>(f: &PolyConvexFn<T>, eps: T) -> Result<PolyConvexFn<T>> {
    f.epsilon_regularize(eps)
}

/// Support function `x -> sup_{y in A} x y` of a nonempty interval.
pub fn support_function<T: Scalar>(a: &Interval<T>) -> Result<PolyConvexFn<T>> {
    if a.is_empty() {
        return Err(Error::EmptyDomain);
    }
    let z = T::zero();
    let (pieces, dom) = match (a.lo().is_finite(), a.hi().is_finite()) {
        (true, true) => (
            vec![Affine::new(a.lo(), z), Affine::new(a.hi(), z)],
            Interval::real_line(),
        ),
        (true, false) => (
            vec![Affine::new(a.lo(), z)],
            Interval::new(T::neg_infinity(), z)?,
        ),
        (false, true) => (vec![Affine::new(a.hi(), z)], Interval::new(z, T::infinity())?),
        (false, false) => (vec![Affine::constant(z)], Interval::point(z)),
    };
    canonicalize(&pieces, dom)
}

/// Support function value without building the function.
pub fn support_value<T: Scalar>(a: &Interval<T>, x: T) -> ExtReal<T> {
    if a.is_empty() {
        return ExtReal::NegInf;
    }
    if x == T::zero() {
        return ExtReal::zero();
    }
    let end = if x > T::zero() { a.hi() } else { a.lo() };
    ExtReal::from_float(x * end)
}

/// Normal cone `N_A(x)`; empty when `x` is not in `A`.
pub fn normal_cone<T: Scalar>(a: &Interval<T>, x: T) -> Interval<T> {
    normal_cone_tol(a, x, T::zero())
}

pub fn normal_cone_tol<T: Scalar>(a: &Interval<T>, x: T, tol: T) -> Interval<T> {
    if !a.contains_tol(x, tol) {
        return Interval::empty();
    }
    let at_lo = a.lo().is_finite() && T::approx_eq(x, a.lo(), tol);
    let at_hi = a.hi().is_finite() && T::approx_eq(x, a.hi(), tol);
    let lo = if at_lo { T::neg_infinity() } else { T::zero() };
    let hi = if at_hi { T::infinity() } else { T::zero() };
    Interval::new(lo, hi).expect("valid cone")
}
