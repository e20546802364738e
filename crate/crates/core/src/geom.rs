//! Planar primitives, exact-sign predicates and the circle constructions that
//! the metrics are assembled from.
//!
//! The sign of [`orientation`] and [`in_circumcircle`] comes from adaptive
//! exact arithmetic; every other quantity here is plain `f64`.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    #[inline]
    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    #[inline]
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    /// Counterclockwise perpendicular.
    #[inline]
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    #[inline]
    pub fn midpoint(self, other: Point) -> Point {
        Point::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    fn coord(self) -> robust::Coord<f64> {
        robust::Coord {
            x: self.x,
            y: self.y,
        }
    }
}

impl Add for Point {
    type Output = Point;
    #[inline]
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    #[inline]
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    #[inline]
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Neg for Point {
    type Output = Point;
    #[inline]
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Point, radius: f64) -> Self {
        debug_assert!(radius >= 0.0 && radius.is_finite());
        Circle { center, radius }
    }

    pub fn area(&self) -> f64 {
        PI * self.radius * self.radius
    }

    /// Strict containment with a relative tolerance of `1e-12 * radius`.
    pub fn strictly_contains(&self, p: Point) -> bool {
        self.center.dist(p) < self.radius * (1.0 - 1e-12)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Self {
        Segment { a, b }
    }

    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }

    /// Euclidean distance from `p` to the closed segment.
    pub fn distance_to(&self, p: Point) -> f64 {
        let d = self.b - self.a;
        let len2 = d.norm2();
        if len2 == 0.0 {
            return p.dist(self.a);
        }
        let t = ((p - self.a).dot(d) / len2).clamp(0.0, 1.0);
        p.dist(self.a + d * t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    CounterClockwise,
    Clockwise,
    Collinear,
}

impl Orientation {
    pub fn reversed(self) -> Orientation {
        match self {
            Orientation::CounterClockwise => Orientation::Clockwise,
            Orientation::Clockwise => Orientation::CounterClockwise,
            Orientation::Collinear => Orientation::Collinear,
        }
    }
}

/// Exact orientation of the triple `(a, b, c)`.
pub fn orientation(a: Point, b: Point, c: Point) -> Orientation {
    let det = robust::orient2d(a.coord(), b.coord(), c.coord());
    if det > 0.0 {
        Orientation::CounterClockwise
    } else if det < 0.0 {
        Orientation::Clockwise
    } else {
        Orientation::Collinear
    }
}

/// Whether `d` lies strictly inside the circle through `a`, `b`, `c`,
/// independent of the winding of the triangle.
pub fn in_circumcircle(a: Point, b: Point, c: Point, d: Point) -> Result<bool> {
    let sign = match orientation(a, b, c) {
        Orientation::CounterClockwise => 1.0,
        Orientation::Clockwise => -1.0,
        Orientation::Collinear => return Err(Error::DegenerateTriangle),
    };
    Ok(sign * robust::incircle(a.coord(), b.coord(), c.coord(), d.coord()) > 0.0)
}

/// Twice the signed area of `(a, b, c)` in plain floating point.
#[inline]
pub fn signed_area2(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

pub fn triangle_area(a: Point, b: Point, c: Point) -> f64 {
    0.5 * signed_area2(a, b, c).abs()
}

pub fn circumcircle(a: Point, b: Point, c: Point) -> Result<Circle> {
    if orientation(a, b, c) == Orientation::Collinear {
        return Err(Error::DegenerateTriangle);
    }
    let center = circumcenter_unchecked(a, b, c);
    Ok(Circle::new(center, center.dist(a)))
}

/// Circumcenter computed relative to `a`; the caller guarantees a proper triangle.
pub(crate) fn circumcenter_unchecked(a: Point, b: Point, c: Point) -> Point {
    let ab = b - a;
    let ac = c - a;
    let d = 2.0 * ab.cross(ac);
    let ab2 = ab.norm2();
    let ac2 = ac.norm2();
    let ux = (ac.y * ab2 - ab.y * ac2) / d;
    let uy = (ab.x * ac2 - ac.x * ab2) / d;
    Point::new(a.x + ux, a.y + uy)
}

pub fn inscribed_circle(a: Point, b: Point, c: Point) -> Result<Circle> {
    if orientation(a, b, c) == Orientation::Collinear {
        return Err(Error::DegenerateTriangle);
    }
    let la = b.dist(c);
    let lb = c.dist(a);
    let lc = a.dist(b);
    let perimeter = la + lb + lc;
    let center = Point::new(
        (a.x * la + b.x * lb + c.x * lc) / perimeter,
        (a.y * la + b.y * lb + c.y * lc) / perimeter,
    );
    let radius = triangle_area(a, b, c) / (0.5 * perimeter);
    Ok(Circle::new(center, radius))
}

/// Unsigned angle at `apex` between the rays towards `p1` and `p2`.
pub fn angle_at(apex: Point, p1: Point, p2: Point) -> Result<f64> {
    let r1 = p1 - apex;
    let r2 = p2 - apex;
    if r1.norm2() == 0.0 || r2.norm2() == 0.0 {
        return Err(Error::DegeneratePoints);
    }
    Ok(angle_between(r1, r2))
}

#[inline]
pub(crate) fn angle_between(r1: Point, r2: Point) -> f64 {
    r1.cross(r2).abs().atan2(r1.dot(r2))
}

/// Which of the two regions cut off by a chord is requested.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChordSide {
    ContainsCenter,
    OppositeCenter,
}

/// Area of the circular segment cut off by `chord` on the requested side.
pub fn circular_segment_area(circle: Circle, chord: Segment, side: ChordSide) -> Result<f64> {
    let tol = 1e-9 * circle.radius.max(f64::MIN_POSITIVE);
    for end in [chord.a, chord.b] {
        if (end.dist(circle.center) - circle.radius).abs() > tol {
            return Err(Error::NotAChord);
        }
    }
    let minor = minor_segment_area(circle, chord.a, chord.b);
    Ok(match side {
        ChordSide::OppositeCenter => minor,
        ChordSide::ContainsCenter => circle.area() - minor,
    })
}

/// `r²(φ − sin φ cos φ)` with `φ` half the central angle of the chord `ab`.
pub(crate) fn minor_segment_area(circle: Circle, a: Point, b: Point) -> f64 {
    let chord = b - a;
    let half = 0.5 * chord.norm();
    if half == 0.0 {
        return 0.0;
    }
    // distance from the center to the chord's line
    let d = ((circle.center - a).cross(chord) / (2.0 * half)).abs();
    let phi = half.atan2(d);
    let r = circle.radius;
    r * r * (phi - phi.sin() * phi.cos())
}

/// Area of the part of `circle` on the same side of line `ab` as `side_point`.
/// `a` and `b` are assumed to be on the circle.
pub(crate) fn segment_area_towards(circle: Circle, a: Point, b: Point, side_point: Point) -> f64 {
    let minor = minor_segment_area(circle, a, b);
    let center_side = signed_area2(a, b, circle.center);
    let wanted = signed_area2(a, b, side_point);
    if center_side == 0.0 {
        0.5 * circle.area()
    } else if (center_side > 0.0) == (wanted > 0.0) {
        circle.area() - minor
    } else {
        minor
    }
}

/// Length of the intersection of the closed disk with the segment.
pub fn chord_overlap_length(circle: Circle, seg: Segment) -> f64 {
    let d = seg.b - seg.a;
    let len2 = d.norm2();
    if len2 == 0.0 {
        return 0.0;
    }
    let f = seg.a - circle.center;
    // |f + t d|² = r²  ⇔  len2 t² + 2 (f·d) t + |f|² − r² = 0
    let half_b = f.dot(d);
    let c = f.norm2() - circle.radius * circle.radius;
    let disc = half_b * half_b - len2 * c;
    if disc <= 0.0 {
        return 0.0;
    }
    let sq = disc.sqrt();
    let t0 = ((-half_b - sq) / len2).max(0.0);
    let t1 = ((-half_b + sq) / len2).min(1.0);
    if t1 <= t0 {
        0.0
    } else {
        (t1 - t0) * len2.sqrt()
    }
}

/// A planar similarity: optional reflection across the x-axis, then rotation,
/// uniform scaling and translation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Similarity {
    pub rotation: f64,
    pub scale: f64,
    pub translation: (f64, f64),
    pub reflect: bool,
}

impl Similarity {
    pub fn new(rotation: f64, scale: f64, translation: (f64, f64), reflect: bool) -> Result<Self> {
        if scale.is_nan() || scale <= 0.0 || !scale.is_finite() {
            return Err(Error::InvalidScale(scale));
        }
        Ok(Similarity {
            rotation,
            scale,
            translation,
            reflect,
        })
    }

    pub fn identity() -> Self {
        Similarity {
            rotation: 0.0,
            scale: 1.0,
            translation: (0.0, 0.0),
            reflect: false,
        }
    }

    pub fn apply(&self, p: Point) -> Point {
        let y = if self.reflect { -p.y } else { p.y };
        let (s, c) = self.rotation.sin_cos();
        let rx = c * p.x - s * y;
        let ry = s * p.x + c * y;
        Point::new(
            self.scale * rx + self.translation.0,
            self.scale * ry + self.translation.1,
        )
    }

    pub fn apply_circle(&self, circle: Circle) -> Circle {
        Circle::new(self.apply(circle.center), circle.radius * self.scale)
    }
}
