use std::f64::consts::PI;

use super::{ElementId, ElementScore, ScoreOrientation};
use crate::delaunay::VoronoiDiagram;
use crate::geom::{angle_between, chord_overlap_length, orientation, Circle, Orientation, Point, Segment};
use crate::point_set::PointSet;
use crate::triangulation::{edge, Edge};

fn score(e: Edge, value: f64) -> ElementScore {
    ElementScore {
        element: ElementId::Edge(e),
        value,
        orientation: ScoreOrientation::HigherBetter,
    }
}

/// Angle between the largest empty arcs on both sides of `uv`, capped at π.
///
/// The arc through a blocker `x` meets `u` at a tangent-chord angle equal to
/// the inscribed angle on the other side, `π − ∠uxv`; the largest empty arc on
/// a side is the one through the blocker with the widest angle.
pub fn lens_value(u: Point, v: Point, points: &[Point]) -> f64 {
    let (mut left, mut right) = (0.0f64, 0.0f64);
    for &x in points {
        match orientation(u, v, x) {
            Orientation::CounterClockwise => left = left.max(angle_between(u - x, v - x)),
            Orientation::Clockwise => right = right.max(angle_between(u - x, v - x)),
            Orientation::Collinear => {}
        }
    }
    ((PI - left) + (PI - right)).min(PI)
}

/// Largest fraction of `uv` covered by one of the given empty circles.
pub fn shrunk_circle_value(u: Point, v: Point, circles: impl IntoIterator<Item = Circle>) -> f64 {
    let seg = Segment::new(u, v);
    let len = seg.length();
    circles
        .into_iter()
        .map(|c| chord_overlap_length(c, seg) / len)
        .fold(0.0f64, f64::max)
        .clamp(0.0, 1.0)
}

pub fn lens(e: Edge, ps: &PointSet) -> ElementScore {
    let (u, v) = edge(e.0, e.1);
    score((u, v), lens_value(ps[u], ps[v], ps.points()))
}

/// Uses the maximal empty circles at the Voronoi vertices, which are the
/// Delaunay circumcircles.
pub fn shrunk_circle(e: Edge, vd: &VoronoiDiagram) -> ElementScore {
    let (u, v) = edge(e.0, e.1);
    let ps = vd.points();
    let circles = vd
        .vertices
        .iter()
        .map(|w| Circle::new(w.center, w.radius));
    score((u, v), shrunk_circle_value(ps[u], ps[v], circles))
}
