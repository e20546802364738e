use std::f64::consts::PI;

use super::{ElementId, ElementScore, ScoreOrientation};
use crate::geom::{angle_between, circumcenter_unchecked, in_circumcircle, signed_area2, Point};
use crate::point_set::PointSet;
use crate::triangulation::Quadrilateral;

fn corners(ps: &PointSet, q: Quadrilateral) -> (Point, Point, Point, Point) {
    (ps[q.u], ps[q.v], ps[q.p], ps[q.q])
}

fn score(q: Quadrilateral, value: f64) -> ElementScore {
    ElementScore {
        element: ElementId::Quadrilateral(q),
        value,
        orientation: ScoreOrientation::LowerBetter,
    }
}

fn locally_delaunay(u: Point, v: Point, p: Point, q: Point) -> bool {
    !in_circumcircle(u, v, p, q).expect("quadrilateral triangles are non-degenerate")
}

/// Excess of the two angles opposite `uv` over π, or 0.
pub fn opposing_angles_value(u: Point, v: Point, p: Point, q: Point) -> f64 {
    let sum = angle_between(u - p, v - p) + angle_between(u - q, v - q);
    (sum - PI).max(0.0)
}

/// Distance between the two circumcenters relative to `|uv|`, or 0 when the
/// quadrilateral is locally Delaunay.
pub fn dual_edge_ratio_value(u: Point, v: Point, p: Point, q: Point) -> f64 {
    if locally_delaunay(u, v, p, q) {
        return 0.0;
    }
    let cp = circumcenter_unchecked(u, v, p);
    let cq = circumcenter_unchecked(u, v, q);
    cp.dist(cq) / u.dist(v)
}

/// Area where the local Voronoi cells of `p` and `q` overlap, relative to
/// `|uv|²`, or 0 when the quadrilateral is locally Delaunay.
pub fn dual_area_overlap_value(u: Point, v: Point, p: Point, q: Point) -> f64 {
    if locally_delaunay(u, v, p, q) {
        return 0.0;
    }
    // work relative to u so the area sums do not cancel large coordinates
    let (u, v, p, q) = (Point::new(0.0, 0.0), v - u, p - u, q - u);
    let poly = [
        circumcenter_unchecked(u, v, p),
        circumcenter_unchecked(v, p, q),
        circumcenter_unchecked(u, v, q),
        circumcenter_unchecked(u, p, q),
    ];
    let area = if is_convex(&poly) {
        polygon_area(&poly)
    } else {
        clipped_overlap_area(u, v, p, q, &poly)
    };
    area / u.dist(v).powi(2)
}

fn is_convex(poly: &[Point]) -> bool {
    let n = poly.len();
    let signs: Vec<f64> = (0..n)
        .map(|i| signed_area2(poly[i], poly[(i + 1) % n], poly[(i + 2) % n]))
        .collect();
    signs.iter().all(|&s| s > 0.0) || signs.iter().all(|&s| s < 0.0)
}

pub(crate) fn polygon_area(poly: &[Point]) -> f64 {
    let n = poly.len();
    let Some(&o) = poly.first() else {
        return 0.0;
    };
    let twice: f64 = (0..n).map(|i| (poly[i] - o).cross(poly[(i + 1) % n] - o)).sum();
    0.5 * twice.abs()
}

/// Keeps the part of `poly` where `n · x <= c`.
pub(crate) fn clip_halfplane(poly: &[Point], n: Point, c: f64) -> Vec<Point> {
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        let fa = n.dot(a) - c;
        let fb = n.dot(b) - c;
        if fa <= 0.0 {
            out.push(a);
        }
        if (fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0) {
            out.push(a + (b - a) * (fa / (fa - fb)));
        }
    }
    out
}

/// Fallback for slivers whose four cell vertices do not form a clean convex
/// polygon: clip a box around them by the four bisector halfplanes.
fn clipped_overlap_area(u: Point, v: Point, p: Point, q: Point, hint: &[Point]) -> f64 {
    let (mut lo, mut hi) = (hint[0], hint[0]);
    for &h in hint {
        lo = Point::new(lo.x.min(h.x), lo.y.min(h.y));
        hi = Point::new(hi.x.max(h.x), hi.y.max(h.y));
    }
    let pad = (hi - lo).norm() + 1.0;
    let mut poly = vec![
        Point::new(lo.x - pad, lo.y - pad),
        Point::new(hi.x + pad, lo.y - pad),
        Point::new(hi.x + pad, hi.y + pad),
        Point::new(lo.x - pad, hi.y + pad),
    ];
    // closer to s than to t: 2x·(t − s) <= |t|² − |s|²
    for (s, t) in [(p, u), (p, v), (q, u), (q, v)] {
        poly = clip_halfplane(&poly, (t - s) * 2.0, t.norm2() - s.norm2());
        if poly.len() < 3 {
            return 0.0;
        }
    }
    polygon_area(&poly)
}

pub fn opposing_angles(ps: &PointSet, q: Quadrilateral) -> ElementScore {
    let (u, v, p, qq) = corners(ps, q);
    score(q, opposing_angles_value(u, v, p, qq))
}

pub fn dual_edge_ratio(ps: &PointSet, q: Quadrilateral) -> ElementScore {
    let (u, v, p, qq) = corners(ps, q);
    score(q, dual_edge_ratio_value(u, v, p, qq))
}

pub fn dual_area_overlap(ps: &PointSet, q: Quadrilateral) -> ElementScore {
    let (u, v, p, qq) = corners(ps, q);
    score(q, dual_area_overlap_value(u, v, p, qq))
}
