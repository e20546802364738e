//! Independent reference computations and hand-built fixtures shared by the
//! integration tests and the acceptance run.
#![allow(dead_code)]

use std::f64::consts::PI;
use std::sync::Arc;

use neardelaunay::{Point, PointSet, Triangulation};

pub fn arc(ps: PointSet) -> Arc<PointSet> {
    Arc::new(ps)
}

pub fn pt(x: f64, y: f64) -> Point {
    Point::new(x, y)
}

pub fn tri(ps: &Arc<PointSet>, tris: &[[usize; 3]]) -> Triangulation {
    let t = Triangulation::new(ps.clone(), tris.iter().copied()).unwrap();
    assert!(t.validate());
    t
}

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

fn circumcenter(a: Point, b: Point, c: Point) -> Point {
    let d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
    let a2 = a.x * a.x + a.y * a.y;
    let b2 = b.x * b.x + b.y * b.y;
    let c2 = c.x * c.x + c.y * c.y;
    pt(
        (a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d,
        (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d,
    )
}

fn dist(a: Point, b: Point) -> f64 {
    ((a.x - b.x).powi(2) + (a.y - b.y).powi(2)).sqrt()
}

/// Lens by drawing, for every blocker, the arc through u, v and the blocker
/// and measuring the angle between its tangent at u and the chord.
pub fn lens_oracle(u: Point, v: Point, points: &[Point]) -> f64 {
    let chord = pt(v.x - u.x, v.y - u.y);
    let len = dist(u, v);
    let (mut left, mut right) = (PI, PI);
    for &x in points {
        let side = cross(u, v, x);
        if side == 0.0 {
            continue;
        }
        let c = circumcenter(u, v, x);
        // tangent at u, turned towards the blocker's side
        let mut t = pt(-(u.y - c.y), u.x - c.x);
        if (chord.x * t.y - chord.y * t.x) * side < 0.0 {
            t = pt(-t.x, -t.y);
        }
        let cos = (t.x * chord.x + t.y * chord.y) / (dist(t, pt(0.0, 0.0)) * len);
        let angle = cos.clamp(-1.0, 1.0).acos();
        if side > 0.0 {
            left = left.min(angle);
        } else {
            right = right.min(angle);
        }
    }
    (left + right).min(PI)
}

/// Sutherland–Hodgman clip keeping `a·x + b·y <= c`.
fn clip(poly: &[Point], a: f64, b: f64, c: f64) -> Vec<Point> {
    let f = |p: Point| a * p.x + b * p.y - c;
    let mut out = Vec::new();
    for i in 0..poly.len() {
        let (s, e) = (poly[i], poly[(i + 1) % poly.len()]);
        let (fs, fe) = (f(s), f(e));
        if fs <= 0.0 {
            out.push(s);
        }
        if fs * fe < 0.0 {
            let t = fs / (fs - fe);
            out.push(pt(s.x + t * (e.x - s.x), s.y + t * (e.y - s.y)));
        }
    }
    out
}

fn shoelace(poly: &[Point]) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            a.x * b.y - a.y * b.x
        })
        .sum::<f64>()
        .abs()
        / 2.0
}

/// Dual area overlap of a quadrilateral that is not locally Delaunay: the
/// region nearer to both p and q than to u and v, over |uv|².
pub fn dual_area_overlap_oracle(u: Point, v: Point, p: Point, q: Point) -> f64 {
    let big = 1e4 * (1.0 + dist(u, v));
    let rough = clip_overlap(u, v, p, q, pt(-big, -big), pt(big, big));
    if rough.len() < 3 {
        return 0.0;
    }
    // clip again from a box just around the region, away from the huge
    // coordinates of the first pass
    let (lo, hi) = bbox(&rough);
    let pad = pt((hi.x - lo.x).max(1e-9), (hi.y - lo.y).max(1e-9));
    let fine = clip_overlap(u, v, p, q, pt(lo.x - pad.x, lo.y - pad.y), pt(hi.x + pad.x, hi.y + pad.y));
    if fine.len() < 3 {
        return 0.0;
    }
    shoelace(&fine) / dist(u, v).powi(2)
}

fn clip_overlap(u: Point, v: Point, p: Point, q: Point, lo: Point, hi: Point) -> Vec<Point> {
    let mut poly = vec![lo, pt(hi.x, lo.y), hi, pt(lo.x, hi.y)];
    for (s, t) in [(p, u), (p, v), (q, u), (q, v)] {
        // |x − s|² <= |x − t|²
        let a = 2.0 * (t.x - s.x);
        let b = 2.0 * (t.y - s.y);
        let c = t.x * t.x + t.y * t.y - s.x * s.x - s.y * s.y;
        poly = clip(&poly, a, b, c);
        if poly.len() < 3 {
            return Vec::new();
        }
    }
    poly
}

/// Length of segment uv inside the disk.
pub fn overlap(center: Point, r: f64, u: Point, v: Point) -> f64 {
    let d = pt(v.x - u.x, v.y - u.y);
    let w = pt(u.x - center.x, u.y - center.y);
    let a = d.x * d.x + d.y * d.y;
    let b = 2.0 * (d.x * w.x + d.y * w.y);
    let c = w.x * w.x + w.y * w.y - r * r;
    let disc = b * b - 4.0 * a * c;
    if disc <= 0.0 {
        return 0.0;
    }
    let s = disc.sqrt();
    let t0 = ((-b - s) / (2.0 * a)).max(0.0);
    let t1 = ((-b + s) / (2.0 * a)).min(1.0);
    (t1 - t0).max(0.0) * a.sqrt()
}

/// Maximizes `f` over a square by a coarse grid followed by repeated zooms
/// around the best few cells.
pub fn grid_maximize(lo: Point, hi: Point, steps: usize, f: impl Fn(Point) -> Option<f64>) -> Option<f64> {
    let cell = pt((hi.x - lo.x) / steps as f64, (hi.y - lo.y) / steps as f64);
    let mut found: Vec<(f64, Point)> = Vec::new();
    for i in 0..=steps {
        for j in 0..=steps {
            let c = pt(lo.x + i as f64 * cell.x, lo.y + j as f64 * cell.y);
            if let Some(val) = f(c) {
                found.push((val, c));
            }
        }
    }
    found.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best = found.first().map(|b| b.0)?;
    for &(_, seed) in found.iter().take(12) {
        let (mut centre, mut half) = (seed, pt(cell.x * 2.0, cell.y * 2.0));
        for _ in 0..10 {
            let k = 10;
            let mut local = None::<(f64, Point)>;
            for i in -k..=k {
                for j in -k..=k {
                    let c = pt(
                        centre.x + half.x * i as f64 / k as f64,
                        centre.y + half.y * j as f64 / k as f64,
                    );
                    if let Some(val) = f(c) {
                        if local.is_none_or(|l| val > l.0) {
                            local = Some((val, c));
                        }
                    }
                }
            }
            if let Some((val, c)) = local {
                best = best.max(val);
                centre = c;
            }
            half = pt(half.x / 4.0, half.y / 4.0);
        }
    }
    Some(best)
}

fn bbox(points: &[Point]) -> (Point, Point) {
    let mut lo = points[0];
    let mut hi = points[0];
    for p in points {
        lo = pt(lo.x.min(p.x), lo.y.min(p.y));
        hi = pt(hi.x.max(p.x), hi.y.max(p.y));
    }
    (lo, hi)
}

/// Shrunk circle by searching circle centres: each centre carries the largest
/// circle empty of points, scored by its overlap with uv. Thin hull triangles
/// put useful centres far outside the points, so boxes of growing size are
/// searched.
pub fn shrunk_circle_oracle(u: Point, v: Point, points: &[Point]) -> f64 {
    let (lo, hi) = bbox(points);
    let len = dist(u, v);
    let score = |c: Point| {
        let r = points.iter().map(|&p| dist(c, p)).fold(f64::INFINITY, f64::min);
        Some(overlap(c, r, u, v) / len)
    };
    [0.5, 5.0, 50.0]
        .iter()
        .map(|&margin| {
            let m = pt((hi.x - lo.x) * margin, (hi.y - lo.y) * margin);
            grid_maximize(pt(lo.x - m.x, lo.y - m.y), pt(hi.x + m.x, hi.y + m.y), 400, score).unwrap()
        })
        .fold(0.0, f64::max)
        .min(1.0)
}

fn segment_distance(x: Point, a: Point, b: Point) -> f64 {
    let d = pt(b.x - a.x, b.y - a.y);
    let t = (((x.x - a.x) * d.x + (x.y - a.y) * d.y) / (d.x * d.x + d.y * d.y)).clamp(0.0, 1.0);
    dist(x, pt(a.x + t * d.x, a.y + t * d.y))
}

fn inradius(a: Point, b: Point, c: Point) -> f64 {
    let area = cross(a, b, c).abs() / 2.0;
    2.0 * area / (dist(a, b) + dist(b, c) + dist(c, a))
}

/// Shrunk circumcircle by searching centres inside the circumcircle: each
/// centre carries the largest circle inside it avoiding every interior point,
/// kept only if it still reaches all three sides.
pub fn shrunk_circumcircle_oracle(a: Point, b: Point, c: Point, points: &[Point]) -> f64 {
    let o = circumcenter(a, b, c);
    let big = dist(o, a);
    let sites: Vec<Point> = points
        .iter()
        .copied()
        .filter(|&p| dist(p, o) < big * (1.0 - 1e-9))
        .collect();
    if sites.is_empty() {
        return 1.0;
    }
    let inner = inradius(a, b, c);
    let best = grid_maximize(pt(o.x - big, o.y - big), pt(o.x + big, o.y + big), 400, |x| {
        let mut r = big - dist(x, o);
        for &s in &sites {
            r = r.min(dist(x, s));
        }
        let reaches = [(a, b), (b, c), (c, a)]
            .iter()
            .all(|&(p, q)| segment_distance(x, p, q) <= r);
        (r > 0.0 && reaches).then_some(r)
    })
    .unwrap_or(inner)
    .max(inner);
    ((best * best - inner * inner) / (big * big - inner * inner)).clamp(0.0, 1.0)
}

/// Four-point set whose `uv` diagonal has apex angles `theta` above and `phi`
/// below, with |uv| = 2.
pub fn kite(theta: f64, phi: f64) -> Arc<PointSet> {
    arc(PointSet::from_coords(&[
        (0.0, 0.0),
        (2.0, 0.0),
        (1.0, 1.0 / (theta / 2.0).tan()),
        (1.0, -1.0 / (phi / 2.0).tan()),
    ])
    .unwrap())
}

/// The standard four-point example with the `uv` diagonal.
pub fn p4() -> Arc<PointSet> {
    arc(neardelaunay::fixtures::p4())
}

/// P4 with the upper apex moved along the circle through u, v and the lower
/// apex, so both circumcenters stay where they were relative to uv's midpoint.
pub fn p4_moved_apex() -> Arc<PointSet> {
    let p = (1.0 + 1.25 * 1.2f64.cos(), -0.75 + 1.25 * 1.2f64.sin());
    arc(PointSet::from_coords(&[(0.0, 0.0), (2.0, 0.0), p, (1.0, -0.5)]).unwrap())
}

/// P4 with the blocker below uv moved to another point of the circle through
/// u, v and the original blocker. Triangle `[0, 1, 2]` keeps its triangular
/// lens but its shrunk circumcircle changes.
pub fn p4_moved_blocker() -> Arc<PointSet> {
    let x = (1.0 + 1.25 * 0.4f64.sin(), 0.75 - 1.25 * 0.4f64.cos());
    arc(PointSet::from_coords(&[(0.0, 0.0), (2.0, 0.0), (1.0, 0.5), x]).unwrap())
}

/// The triangulation of a four-point set using diagonal `01`.
pub fn uv_diagonal(ps: &Arc<PointSet>) -> Triangulation {
    tri(ps, &[[0, 1, 2], [0, 1, 3]])
}

/// Every metric's element scores.
pub fn all_scores(t: &Triangulation) -> Vec<(neardelaunay::MetricId, Vec<neardelaunay::ElementScore>)> {
    neardelaunay::MetricId::ALL
        .iter()
        .map(|&m| (m, neardelaunay::evaluate(t, m)))
        .collect()
}

pub fn close_relative(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()) + 1e-12
}

/// Random similarity parameters: rotation, scale, translation, reflection.
pub fn random_similarity(rng: &mut impl rand::Rng) -> (f64, f64, (f64, f64), bool) {
    (
        rng.gen_range(0.0..std::f64::consts::TAU),
        rng.gen_range(-3.0f64..3.0).exp(),
        (rng.gen_range(-50.0..50.0), rng.gen_range(-50.0..50.0)),
        rng.gen_bool(0.5),
    )
}

/// Smallest normalized orientation or in-circle determinant over all triples
/// and quadruples: how far the set is from a degenerate configuration.
pub fn degeneracy_margin(points: &[Point]) -> f64 {
    let n = points.len();
    let mut margin = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (a, b, c) = (points[i], points[j], points[k]);
                margin = margin.min(cross(a, b, c).abs() / (dist(a, b) * dist(a, c)));
                let o = circumcenter(a, b, c);
                let r = dist(o, a);
                for (l, &d) in points.iter().enumerate() {
                    if l != i && l != j && l != k {
                        margin = margin.min((dist(o, d) - r).abs() / r);
                    }
                }
            }
        }
    }
    margin
}

/// Moves every point by at most `delta` in each coordinate.
pub fn perturbed(ps: &PointSet, delta: f64, rng: &mut impl rand::Rng) -> PointSet {
    PointSet::new(
        ps.iter()
            .map(|p| pt(p.x + rng.gen_range(-delta..delta), p.y + rng.gen_range(-delta..delta)))
            .collect(),
    )
    .expect("perturbation keeps general position")
}

/// Samples the overlap of the maximal empty circles along each bounded
/// Voronoi edge with every segment between two input points, returning the
/// most negative normalized second difference.
pub fn worst_overlap_curvature(ps: &Arc<PointSet>) -> f64 {
    let vd = neardelaunay::voronoi(ps);
    let pts = ps.points();
    let mut worst = f64::INFINITY;
    for e in &vd.edges {
        let neardelaunay::delaunay::VoronoiEnd::Vertex(end) = e.end else {
            continue;
        };
        let (a, b) = (vd.vertices[e.start].center, vd.vertices[end].center);
        let site = pts[e.sites.0];
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let (u, v) = (pts[i], pts[j]);
                let f: Vec<f64> = (0..=100)
                    .map(|k| {
                        let t = k as f64 / 100.0;
                        let c = pt(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y));
                        overlap(c, dist(c, site), u, v)
                    })
                    .collect();
                for w in f.windows(3) {
                    worst = worst.min((w[0] - 2.0 * w[1] + w[2]) / dist(u, v));
                }
            }
        }
    }
    worst
}

/// Largest amount by which an interior sample of the overlap along a bounded
/// Voronoi edge exceeds both endpoint values, over all segments.
pub fn worst_interior_excess(ps: &Arc<PointSet>) -> f64 {
    let vd = neardelaunay::voronoi(ps);
    let pts = ps.points();
    let mut worst = f64::NEG_INFINITY;
    for e in &vd.edges {
        let neardelaunay::delaunay::VoronoiEnd::Vertex(end) = e.end else {
            continue;
        };
        let (a, b) = (vd.vertices[e.start].center, vd.vertices[end].center);
        let site = pts[e.sites.0];
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let f = |t: f64| {
                    let c = pt(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y));
                    overlap(c, dist(c, site), pts[i], pts[j])
                };
                let ends = f(0.0).max(f(1.0));
                for k in 1..100 {
                    worst = worst.max(f(k as f64 / 100.0) - ends);
                }
            }
        }
    }
    worst
}

/// Two triangulations on which metric `same` agrees and `differs` does not.
pub struct Divergence {
    pub name: &'static str,
    pub same: neardelaunay::MetricId,
    pub differs: neardelaunay::MetricId,
    pub same_values: (f64, f64),
    pub differ_values: (f64, f64),
}

fn sum_of(t: &Triangulation, m: neardelaunay::MetricId) -> f64 {
    neardelaunay::evaluate(t, m).iter().map(|s| s.value).sum()
}

fn element_of(t: &Triangulation, m: neardelaunay::MetricId, e: neardelaunay::ElementId) -> f64 {
    neardelaunay::evaluate(t, m)
        .into_iter()
        .find(|s| s.element == e)
        .expect("element present")
        .value
}

/// Hand-built pairs separating neighbouring metrics. Quadrilateral and edge
/// metrics are compared on whole-triangulation sums; the triangle pair is
/// compared on the triangle whose blocker moved.
pub fn divergences() -> Vec<Divergence> {
    use neardelaunay::MetricId::*;
    let pair = |name, a: &Triangulation, b: &Triangulation, same, differs| Divergence {
        name,
        same,
        differs,
        same_values: (sum_of(a, same), sum_of(b, same)),
        differ_values: (sum_of(a, differs), sum_of(b, differs)),
    };
    let (k1, k2) = (uv_diagonal(&kite(2.0, 2.0)), uv_diagonal(&kite(2.2, 1.8)));
    let (q1, q2) = (uv_diagonal(&p4()), uv_diagonal(&p4_moved_apex()));
    let b2 = uv_diagonal(&p4_moved_blocker());
    let top = neardelaunay::ElementId::Triangle([0, 1, 2]);
    vec![
        pair("equal apex-angle sums", &k1, &k2, OpposingAngles, DualEdgeRatio),
        pair("equal apex-angle sums", &k1, &k2, OpposingAngles, DualAreaOverlap),
        pair("apex moved on the lower circle", &q1, &q2, DualEdgeRatio, DualAreaOverlap),
        pair("apex moved on the lower circle", &q1, &q2, Lens, ShrunkCircle),
        Divergence {
            name: "blocker moved on its circle",
            same: TriangularLens,
            differs: ShrunkCircumcircle,
            same_values: (element_of(&q1, TriangularLens, top), element_of(&b2, TriangularLens, top)),
            differ_values: (
                element_of(&q1, ShrunkCircumcircle, top),
                element_of(&b2, ShrunkCircumcircle, top),
            ),
        },
    ]
}
