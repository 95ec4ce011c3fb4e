//! Exact points, segments and the predicates built on them.
//!
//! Every predicate is a polynomial sign test, so results are exact for any
//! exact [`Scalar`]. Tangent constructions that would need square roots are
//! rewritten as sign conditions on `a * sqrt(k) + b`.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point2<T> {
    pub fn new(x: T, y: T) -> Self {
        Point2 { x, y }
    }

    pub fn origin() -> Self {
        Point2::new(T::zero(), T::zero())
    }

    pub fn cross(&self, other: &Self) -> T {
        self.x.clone() * other.y.clone() - self.y.clone() * other.x.clone()
    }

    pub fn dot(&self, other: &Self) -> T {
        self.x.clone() * other.x.clone() + self.y.clone() * other.y.clone()
    }

    pub fn norm2(&self) -> T {
        self.dot(self)
    }

    pub fn scale(&self, k: &T) -> Self {
        Point2::new(self.x.clone() * k.clone(), self.y.clone() * k.clone())
    }

    /// Rotation by 90 degrees counterclockwise.
    pub fn perp(&self) -> Self {
        Point2::new(-self.y.clone(), self.x.clone())
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Point2<U> {
        Point2 {
            x: f(&self.x),
            y: f(&self.y),
        }
    }
}

impl<T: Scalar> Add for &Point2<T> {
    type Output = Point2<T>;
    fn add(self, rhs: Self) -> Point2<T> {
        Point2::new(
            self.x.clone() + rhs.x.clone(),
            self.y.clone() + rhs.y.clone(),
        )
    }
}

impl<T: Scalar> Sub for &Point2<T> {
    type Output = Point2<T>;
    fn sub(self, rhs: Self) -> Point2<T> {
        Point2::new(
            self.x.clone() - rhs.x.clone(),
            self.y.clone() - rhs.y.clone(),
        )
    }
}

impl<T: Scalar> Add for Point2<T> {
    type Output = Point2<T>;
    fn add(self, rhs: Self) -> Point2<T> {
        &self + &rhs
    }
}

impl<T: Scalar> Sub for Point2<T> {
    type Output = Point2<T>;
    fn sub(self, rhs: Self) -> Point2<T> {
        &self - &rhs
    }
}

impl<T: Scalar> Neg for Point2<T> {
    type Output = Point2<T>;
    fn neg(self) -> Point2<T> {
        Point2::new(-self.x, -self.y)
    }
}

impl<T: Scalar> Mul<&T> for &Point2<T> {
    type Output = Point2<T>;
    fn mul(self, k: &T) -> Point2<T> {
        self.scale(k)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Segment2<T> {
    pub a: Point2<T>,
    pub b: Point2<T>,
}

impl<T: Scalar> Segment2<T> {
    pub fn new(a: Point2<T>, b: Point2<T>) -> Self {
        Segment2 { a, b }
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }

    pub fn reversed(&self) -> Self {
        Segment2::new(self.b.clone(), self.a.clone())
    }
}

/// How two closed segments meet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SegmentRelation {
    Disjoint,
    /// Interiors meet transversally in a single point.
    ProperCross,
    /// They share points, but neither transversally nor along a positive-length piece.
    Touch,
    /// Collinear with a shared piece of positive length.
    Overlap,
}

/// Sign of `(q - p) x (r - p)`: +1 for a left turn, -1 for a right turn.
pub fn orientation<T: Scalar>(p: &Point2<T>, q: &Point2<T>, r: &Point2<T>) -> i8 {
    (q - p).cross(&(r - p)).sign()
}

fn between<T: Scalar>(lo: &T, v: &T, hi: &T) -> bool {
    if lo <= hi {
        lo <= v && v <= hi
    } else {
        hi <= v && v <= lo
    }
}

/// `p` lies on the closed segment `ab` (which may be degenerate).
pub fn on_segment<T: Scalar>(p: &Point2<T>, a: &Point2<T>, b: &Point2<T>) -> bool {
    orientation(a, b, p) == 0 && between(&a.x, &p.x, &b.x) && between(&a.y, &p.y, &b.y)
}

/// `p` lies on the open segment `ab`, excluding both endpoints.
pub fn in_segment_interior<T: Scalar>(p: &Point2<T>, a: &Point2<T>, b: &Point2<T>) -> bool {
    p != a && p != b && on_segment(p, a, b)
}

pub fn segment_relation<T: Scalar>(s: &Segment2<T>, t: &Segment2<T>) -> SegmentRelation {
    relation(&s.a, &s.b, &t.a, &t.b)
}

pub(crate) fn relation<T: Scalar>(
    a: &Point2<T>,
    b: &Point2<T>,
    c: &Point2<T>,
    d: &Point2<T>,
) -> SegmentRelation {
    use SegmentRelation::*;
    match (a == b, c == d) {
        (true, true) => return if a == c { Touch } else { Disjoint },
        (true, false) => return if on_segment(a, c, d) { Touch } else { Disjoint },
        (false, true) => return if on_segment(c, a, b) { Touch } else { Disjoint },
        _ => {}
    }
    let o1 = orientation(a, b, c);
    let o2 = orientation(a, b, d);
    let o3 = orientation(c, d, a);
    let o4 = orientation(c, d, b);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return ProperCross;
    }
    if o1 == 0 && o2 == 0 {
        // Collinear: compare parameter intervals along ab.
        let dir = b - a;
        let len = dir.norm2();
        let tc = (c - a).dot(&dir);
        let td = (d - a).dot(&dir);
        let (lo, hi) = if tc <= td { (tc, td) } else { (td, tc) };
        let lo = if lo > T::zero() { lo } else { T::zero() };
        let hi = if hi < len { hi } else { len };
        return if lo < hi {
            Overlap
        } else if lo == hi {
            Touch
        } else {
            Disjoint
        };
    }
    if (o1 == 0 && on_segment(c, a, b))
        || (o2 == 0 && on_segment(d, a, b))
        || (o3 == 0 && on_segment(a, c, d))
        || (o4 == 0 && on_segment(b, c, d))
    {
        Touch
    } else {
        Disjoint
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolygonLocation {
    Inside,
    Boundary,
    Outside,
}

/// Classify `p` against the closed polygon with the given vertex cycle.
pub fn point_in_polygon<T: Scalar>(p: &Point2<T>, poly: &[Point2<T>]) -> Result<PolygonLocation> {
    if poly.len() < 3 {
        return Err(Error::DegeneratePolygon(poly.len()));
    }
    let mut inside = false;
    for i in 0..poly.len() {
        let a = &poly[i];
        let b = &poly[(i + 1) % poly.len()];
        if on_segment(p, a, b) {
            return Ok(PolygonLocation::Boundary);
        }
        // Half-open rule on y; the crossing lies right of p iff p is on the
        // inner side of the upward-directed edge.
        if (a.y > p.y) != (b.y > p.y) {
            let o = orientation(a, b, p);
            let crosses = if b.y > a.y { o > 0 } else { o < 0 };
            if crosses {
                inside = !inside;
            }
        }
    }
    Ok(if inside {
        PolygonLocation::Inside
    } else {
        PolygonLocation::Outside
    })
}

/// Sign of `coef * sqrt(k) + beta` for `k >= 0`.
fn sign_sqrt_sum<T: Scalar>(coef: &T, k: &T, beta: &T) -> i8 {
    let s1 = if k.is_zero() { 0 } else { coef.sign() };
    let s2 = beta.sign();
    if s1 == 0 {
        return s2;
    }
    if s2 == 0 || s1 == s2 {
        return s1;
    }
    let lhs = coef.clone() * coef.clone() * k.clone();
    let rhs = beta.clone() * beta.clone();
    if lhs > rhs {
        s1
    } else if lhs < rhs {
        s2
    } else {
        0
    }
}

/// Whether `p` lies strictly above both tangent lines from `apex` to the unit
/// disk centred at `disk_center`.
///
/// Equivalently, `p` is strictly above every non-vertical line through `apex`
/// that meets the disk. When such a line can be vertical the answer is false.
pub fn point_above_tangents<T: Scalar>(
    p: &Point2<T>,
    apex: &Point2<T>,
    disk_center: &Point2<T>,
) -> Result<bool> {
    let c = disk_center - apex;
    if c.norm2() <= T::one() {
        return Err(Error::ApexInDisk);
    }
    if c.x.abs() <= T::one() {
        return Ok(false);
    }
    let d = p - apex;
    let side = c.cross(&d).sign() * c.x.sign();
    if side <= 0 {
        return Ok(false);
    }
    let dist = d.cross(&c);
    Ok(dist.clone() * dist > d.norm2())
}

/// The four common tangent lines of two disjoint unit disks, as side
/// functions: each returns the sign of a point relative to one tangent.
fn tangent_sides<T: Scalar>(c1: &Point2<T>, c2: &Point2<T>, q: &Point2<T>) -> [i8; 4] {
    let dir = c2 - c1;
    let len2 = dir.norm2();
    // Outer tangents: cross(dir, x - c1) = +-|dir|.
    let a = dir.cross(&(q - c1));
    let outer_hi = sign_sqrt_sum(&-T::one(), &len2, &a);
    let outer_lo = sign_sqrt_sum(&T::one(), &len2, &a);
    // Inner tangents through the midpoint m with direction
    // h * sqrt(|h|^2 - 1) +- perp(h), where h = c1 - m.
    let two = T::two();
    let four = two.clone() * two.clone();
    // Work with doubled coordinates to stay in the ring: 2h = c1 - c2, 2(q - m) = 2q - c1 - c2.
    let h2 = c1 - c2;
    let v2 = Point2::new(
        two.clone() * q.x.clone() - c1.x.clone() - c2.x.clone(),
        two.clone() * q.y.clone() - c1.y.clone() - c2.y.clone(),
    );
    // |2h|^2 - 4 = 4(|h|^2 - 1); the common factor 2 in sqrt is positive.
    let k = h2.norm2() - four;
    let cross_hv = h2.cross(&v2);
    let dot_hv = h2.dot(&v2);
    let inner_a = sign_sqrt_sum(&cross_hv, &k, &-(dot_hv.clone() * two.clone()));
    let inner_b = sign_sqrt_sum(&cross_hv, &k, &(dot_hv * two));
    [outer_hi, outer_lo, inner_a, inner_b]
}

/// Whether all four common tangents of the unit disks at `c1` and `c2` meet
/// the closed segment `s`.
pub fn tangents_cross_segment<T: Scalar>(
    c1: &Point2<T>,
    c2: &Point2<T>,
    s: &Segment2<T>,
) -> Result<bool> {
    let four = T::two() * T::two();
    if (c2 - c1).norm2() <= four {
        return Err(Error::DisksNotDisjoint);
    }
    let sa = tangent_sides(c1, c2, &s.a);
    let sb = tangent_sides(c1, c2, &s.b);
    Ok(sa.iter().zip(sb.iter()).all(|(x, y)| x * y <= 0))
}

/// Order two direction vectors by angle in `[0, 2pi)`, measured from the
/// positive x axis.
pub fn compare_angle<T: Scalar>(u: &Point2<T>, v: &Point2<T>) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    fn half<T: Scalar>(p: &Point2<T>) -> u8 {
        if p.y > T::zero() || (p.y.is_zero() && p.x > T::zero()) {
            0
        } else {
            1
        }
    }
    match half(u).cmp(&half(v)) {
        Ordering::Equal => {
            let c = u.cross(v);
            if c.is_positive() {
                Ordering::Less
            } else if c.is_negative() {
                Ordering::Greater
            } else {
                Ordering::Equal
            }
        }
        o => o,
    }
}
