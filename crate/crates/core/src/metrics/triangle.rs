use super::local_voronoi::LocalVoronoiDiagram;
use super::{ElementId, ElementScore, ScoreOrientation};
use crate::delaunay::VoronoiDiagram;
use crate::geom::{
    angle_between, circumcircle, inscribed_circle, orientation, segment_area_towards, triangle_area,
    Circle, Point, Segment,
};
use crate::point_set::PointSet;
use crate::triangulation::sorted_triple;

fn score(t: [usize; 3], value: f64) -> ElementScore {
    ElementScore {
        element: ElementId::Triangle(t),
        value,
        orientation: ScoreOrientation::HigherBetter,
    }
}

fn outer_circle(a: Point, b: Point, c: Point) -> Circle {
    circumcircle(a, b, c).expect("triangles of a valid triangulation are non-degenerate")
}

/// Fraction of the circumcircle outside the triangle covered by the three
/// largest empty arcs, one per side.
pub fn triangular_lens_value(a: Point, b: Point, c: Point, points: &[Point]) -> f64 {
    let circle = outer_circle(a, b, c);
    let mut covered = 0.0;
    for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
        let outside = orientation(x, y, z).reversed();
        let blocker = points
            .iter()
            .filter(|&&p| circle.strictly_contains(p) && orientation(x, y, p) == outside)
            .map(|&p| (angle_between(x - p, y - p), p))
            .max_by(|l, r| l.0.total_cmp(&r.0));
        covered += match blocker {
            Some((_, p)) => segment_area_towards(outer_circle(x, y, p), x, y, p),
            None => segment_area_towards(circle, x, y, x + (x - z)),
        };
    }
    (covered / (circle.area() - triangle_area(a, b, c))).min(1.0)
}

fn shrunk_score(a: Point, b: Point, c: Point, diagram: Option<LocalVoronoiDiagram>) -> f64 {
    let Some(diagram) = diagram else {
        return 1.0;
    };
    let big = diagram.circle.radius;
    let inner = inscribed_circle(a, b, c)
        .expect("triangles of a valid triangulation are non-degenerate")
        .radius;
    let sides = [Segment::new(a, b), Segment::new(b, c), Segment::new(c, a)];
    let best = diagram
        .largest_feasible_circle(&sides)
        .map_or(inner, |circle| circle.radius);
    ((best * best - inner * inner) / (big * big - inner * inner)).clamp(0.0, 1.0)
}

/// Shrunk circumcircle score against an arbitrary point list, comparing every
/// pair of interior sites.
pub fn shrunk_circumcircle_value(a: Point, b: Point, c: Point, points: &[Point]) -> f64 {
    let circle = outer_circle(a, b, c);
    let sites: Vec<Point> = points
        .iter()
        .copied()
        .filter(|&p| circle.strictly_contains(p))
        .collect();
    if sites.is_empty() {
        return shrunk_score(a, b, c, None);
    }
    let k = sites.len();
    let all: Vec<Vec<usize>> = (0..k).map(|i| (0..k).filter(|&j| j != i).collect()).collect();
    shrunk_score(a, b, c, Some(LocalVoronoiDiagram::build(circle, sites, &all)))
}

pub fn triangular_lens(t: [usize; 3], ps: &PointSet) -> ElementScore {
    let t = sorted_triple(t);
    score(t, triangular_lens_value(ps[t[0]], ps[t[1]], ps[t[2]], ps.points()))
}

/// Uses the full Voronoi diagram to restrict bisectors to Delaunay neighbours.
pub fn shrunk_circumcircle(t: [usize; 3], vd: &VoronoiDiagram) -> ElementScore {
    let t = sorted_triple(t);
    let ps = vd.points();
    let (a, b, c) = (ps[t[0]], ps[t[1]], ps[t[2]]);
    let circle = outer_circle(a, b, c);
    let inside: Vec<usize> = (0..ps.len())
        .filter(|&i| circle.strictly_contains(ps[i]))
        .collect();
    if inside.is_empty() {
        return score(t, shrunk_score(a, b, c, None));
    }
    let mut local = vec![usize::MAX; ps.len()];
    for (k, &i) in inside.iter().enumerate() {
        local[i] = k;
    }
    let neighbors: Vec<Vec<usize>> = inside
        .iter()
        .map(|&i| {
            vd.neighbors(i)
                .filter(|&j| local[j] != usize::MAX)
                .map(|j| local[j])
                .collect()
        })
        .collect();
    let sites = inside.iter().map(|&i| ps[i]).collect();
    let diagram = LocalVoronoiDiagram::build(circle, sites, &neighbors);
    score(t, shrunk_score(a, b, c, Some(diagram)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delaunay::voronoi;
    use approx::assert_abs_diff_eq;
    use std::sync::Arc;

    fn p4() -> Arc<PointSet> {
        Arc::new(PointSet::from_coords(&[(0., 0.), (2., 0.), (1., 0.5), (1., -0.5)]).unwrap())
    }

    #[test]
    fn p4_triangular_lens() {
        let ps = p4();
        let v = triangular_lens([0, 1, 2], &ps).value;
        assert_abs_diff_eq!(v, (0.69890 + 0.19890) / 4.40874, epsilon = 1e-4);
        assert_abs_diff_eq!(v, 0.20364, epsilon = 1e-5);
    }

    #[test]
    fn p4_shrunk_circumcircle() {
        let ps = p4();
        let vd = voronoi(&ps);
        let v = shrunk_circumcircle([0, 1, 2], &vd).value;
        assert_abs_diff_eq!(v, 0.1301, epsilon = 2e-3);
        let standalone = shrunk_circumcircle_value(ps[0], ps[1], ps[2], ps.points());
        assert_abs_diff_eq!(v, standalone, epsilon = 1e-12);
    }

    #[test]
    fn delaunay_triangles_score_one() {
        let ps = p4();
        let vd = voronoi(&ps);
        for &t in vd.delaunay().triangles() {
            assert_abs_diff_eq!(triangular_lens(t, &ps).value, 1.0, epsilon = 1e-12);
            assert_eq!(shrunk_circumcircle(t, &vd).value, 1.0);
        }
    }

    #[test]
    fn blockers_near_midpoints_drive_lens_to_zero() {
        let (a, b, c) = (Point::new(0., 0.), Point::new(2., 0.), Point::new(1., 1.7));
        let circle = outer_circle(a, b, c);
        let mut last = 1.0;
        for eps in [1e-1, 1e-2, 1e-3] {
            let blockers: Vec<Point> = [(a, b), (b, c), (c, a)]
                .iter()
                .map(|&(x, y)| {
                    let mid = x.midpoint(y);
                    mid + (mid - circle.center) * (eps / (mid - circle.center).norm())
                })
                .collect();
            let v = triangular_lens_value(a, b, c, &blockers);
            assert!(v < last);
            last = v;
        }
        assert!(last < 0.01);
    }
}
