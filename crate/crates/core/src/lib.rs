//! Polyhedral convex functions, interval-valued mappings on cell complexes,
//! signed measures and the integral functionals built from them.

pub mod complex;
pub mod convex;
pub mod corpus;
pub mod error;
pub mod ext;
pub mod functionals;
pub mod integrand;
pub mod interval;
pub mod lp;
pub mod measure;
pub mod plfn;
pub mod regularity;
pub mod scalar;
pub mod setmap;

pub use complex::{CellComplex, Refinement};
pub use convex::{Affine, PolyConvexFn};
pub use error::{Error, Result};
pub use ext::ExtReal;
pub use integrand::{CellIntegrand, IntegrandField, Weight};
pub use interval::{Interval, IntervalUnion};
pub use measure::{BaseMeasure, Derivative, DerivativeBase, SignedMeasure};
pub use plfn::PlFunction;
pub use scalar::Scalar;
pub use setmap::{BoxMap, CellBounds, IntervalMap, MapOp, MapOpOutput, Side, UnionMap, Verdict};

pub type PolyConvexFn64 = PolyConvexFn<f64>;
pub type PolyConvexFn32 = PolyConvexFn<f32>;
pub type Interval64 = Interval<f64>;
pub type Interval32 = Interval<f32>;
pub type CellComplex64 = CellComplex<f64>;
pub type CellComplex32 = CellComplex<f32>;
pub type IntervalMap64 = IntervalMap<f64>;
pub type IntervalMap32 = IntervalMap<f32>;
pub type UnionMap64 = UnionMap<f64>;
pub type UnionMap32 = UnionMap<f32>;
pub type SignedMeasure64 = SignedMeasure<f64>;
pub type SignedMeasure32 = SignedMeasure<f32>;
pub type BaseMeasure64 = BaseMeasure<f64>;
pub type BaseMeasure32 = BaseMeasure<f32>;
pub type PlFunction64 = PlFunction<f64>;
pub type PlFunction32 = PlFunction<f32>;
