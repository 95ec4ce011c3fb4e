//! Weakly simple realisations of imprecise polylines.
//!
//! The crate decides simplicity and weak simplicity of polylines with exact
//! predicates, builds imprecise polylines (sequences of translated unit disks,
//! unit squares or vertical segments) from planar monotone 3SAT instances, and
//! searches finite candidate sets for weakly simple realisations.
//!
//! All geometry is generic over a [`Scalar`]: any signed ring with a total
//! order on the values actually used. The defaults are arbitrary precision
//! rationals ([`Rat`]); the search code drops to `i128` after clearing
//! denominators when that is exact.

pub mod equivalence;
pub mod error;
pub mod gadgets;
pub mod geometry;
pub mod instance;
pub mod reduction;
pub mod render;
pub mod sat;
pub mod scalar;
pub mod solver;
pub mod weak;

pub use error::{Error, Result};
pub use geometry::{Point2, Segment2, SegmentRelation};
pub use scalar::Scalar;

/// Exact rational scalar used throughout the toolkit.
pub type Rat = num_rational::BigRational;
/// A point with rational coordinates.
pub type Point = Point2<Rat>;
/// A segment with rational endpoints.
pub type Segment = Segment2<Rat>;
/// A polyline with rational vertices.
pub type Polyline = weak::Polyline<Rat>;

/// Rational `num / den`.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(num.into(), den.into())
}

/// Rational integer.
pub fn int(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// Point with integer coordinates.
pub fn pt(x: i64, y: i64) -> Point {
    Point2::new(int(x), int(y))
}
