//! Local Voronoi diagram of a circle and the sites strictly inside it: the
//! locus of centers of maximal empty circles contained in the circle.
//!
//! A circle centered in the cell of site `s` that touches `s` and the outer
//! circle `C` (center `O`, radius `R`) has its center on the ellipse with foci
//! `O` and `s` and major axis `R`. Between two sites the locus is a piece of
//! their bisector.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::geom::{Circle, Point, Segment};

/// Elliptical arcs are parametrized by the eccentric angle measured from the
/// site's side, over the window `[π, 3π]`, so that a full ellipse starts and
/// ends at the point furthest from its site.
const WINDOW: (f64, f64) = (PI, 3.0 * PI);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ellipse {
    pub center: Point,
    pub semi_major: f64,
    pub semi_minor: f64,
    /// Unit direction of the major axis, from the circle center towards the site.
    pub axis: Point,
    /// Half the distance between the foci.
    pub focal: f64,
}

impl Ellipse {
    /// The ellipse with foci at the circle's center and at `site`, whose focal
    /// distances sum to the radius.
    pub fn for_site(circle: Circle, site: Point) -> Ellipse {
        let offset = site - circle.center;
        let dist = offset.norm();
        let axis = if dist > 0.0 {
            offset * (1.0 / dist)
        } else {
            Point::new(1.0, 0.0)
        };
        let a = 0.5 * circle.radius;
        let focal = 0.5 * dist;
        Ellipse {
            center: circle.center.midpoint(site),
            semi_major: a,
            semi_minor: (a * a - focal * focal).max(0.0).sqrt(),
            axis,
            focal,
        }
    }

    pub fn minor_axis(&self) -> Point {
        self.axis.perp()
    }

    pub fn point(&self, phi: f64) -> Point {
        self.center
            + self.axis * (self.semi_major * phi.cos())
            + self.minor_axis() * (self.semi_minor * phi.sin())
    }

    /// Distance from `point(phi)` to the site focus, i.e. the radius of the
    /// maximal circle centered there.
    pub fn site_distance(&self, phi: f64) -> f64 {
        self.semi_major - self.focal * phi.cos()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LocalSegment {
    /// Arc `from..=to` of the ellipse of `site`, in the `[π, 3π]` window.
    Elliptical {
        site: usize,
        ellipse: Ellipse,
        from: f64,
        to: f64,
    },
    /// Piece `origin + t·direction`, `t ∈ [from, to]`, of the bisector of two
    /// sites. `origin` is their midpoint and `direction` a unit vector.
    Straight {
        sites: (usize, usize),
        origin: Point,
        direction: Point,
        from: f64,
        to: f64,
    },
}

impl LocalSegment {
    pub fn range(&self) -> (f64, f64) {
        match *self {
            LocalSegment::Elliptical { from, to, .. } | LocalSegment::Straight { from, to, .. } => {
                (from, to)
            }
        }
    }

    pub fn center_at(&self, t: f64) -> Point {
        match *self {
            LocalSegment::Elliptical { ellipse, .. } => ellipse.point(t),
            LocalSegment::Straight {
                origin, direction, ..
            } => origin + direction * t,
        }
    }

    pub fn endpoints(&self) -> (Point, Point) {
        let (a, b) = self.range();
        (self.center_at(a), self.center_at(b))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalVoronoiDiagram {
    pub circle: Circle,
    pub sites: Vec<Point>,
    pub segments: Vec<LocalSegment>,
}

/// Builds the local Voronoi diagram, comparing every pair of sites.
pub fn local_voronoi(circle: Circle, inside_sites: &[Point]) -> Result<LocalVoronoiDiagram> {
    if let Some(i) = inside_sites.iter().position(|&s| !circle.strictly_contains(s)) {
        return Err(Error::SiteOutsideCircle(i));
    }
    let k = inside_sites.len();
    let all: Vec<Vec<usize>> = (0..k).map(|i| (0..k).filter(|&j| j != i).collect()).collect();
    Ok(LocalVoronoiDiagram::build(circle, inside_sites.to_vec(), &all))
}

impl LocalVoronoiDiagram {
    /// `neighbors[i]` must contain every site whose Voronoi cell borders the
    /// cell of `i` inside the circle; extra entries are harmless.
    pub(crate) fn build(circle: Circle, sites: Vec<Point>, neighbors: &[Vec<usize>]) -> Self {
        let mut segments = Vec::new();
        for (i, &s) in sites.iter().enumerate() {
            let ellipse = Ellipse::for_site(circle, s);
            let mut arcs = vec![WINDOW];
            for &k in &neighbors[i] {
                arcs = intersect(&arcs, &closer_arcs(&ellipse, s, sites[k]));
                if arcs.is_empty() {
                    break;
                }
            }
            segments.extend(arcs.into_iter().filter(|(a, b)| b > a).map(|(from, to)| {
                LocalSegment::Elliptical {
                    site: i,
                    ellipse,
                    from,
                    to,
                }
            }));
        }
        for i in 0..sites.len() {
            for &j in &neighbors[i] {
                if j <= i {
                    continue;
                }
                if let Some(seg) = straight_segment(circle, &sites, neighbors, i, j) {
                    segments.push(seg);
                }
            }
        }
        LocalVoronoiDiagram {
            circle,
            sites,
            segments,
        }
    }

    /// The largest circle centered on the diagram that meets every given side
    /// (closed segments, tangency counts). Only critical placements are
    /// examined: segment endpoints, the furthest point of each ellipse, and
    /// the placements where the circle starts or stops touching a side.
    pub fn largest_feasible_circle(&self, sides: &[Segment]) -> Option<Circle> {
        let tol = 1e-9 * self.circle.radius;
        let mut best: Option<Circle> = None;
        for seg in &self.segments {
            let (from, to) = seg.range();
            let mut params = vec![from, to];
            match *seg {
                LocalSegment::Elliptical { ellipse, .. } => {
                    params.extend([WINDOW.0, WINDOW.1]);
                    for side in sides {
                        params.extend(ellipse_side_placements(&ellipse, side));
                    }
                }
                LocalSegment::Straight {
                    sites: (i, _),
                    origin,
                    direction,
                    ..
                } => {
                    for side in sides {
                        params.extend(bisector_side_placements(
                            origin,
                            direction,
                            self.sites[i],
                            side,
                        ));
                    }
                }
            }
            for t in params {
                if !(t >= from - 1e-12 && t <= to + 1e-12) {
                    continue;
                }
                let t = t.clamp(from, to);
                let center = seg.center_at(t);
                let radius = match *seg {
                    LocalSegment::Elliptical { ellipse, .. } => ellipse.site_distance(t),
                    LocalSegment::Straight { sites: (i, _), .. } => center.dist(self.sites[i]),
                };
                if best.is_some_and(|b| b.radius >= radius) {
                    continue;
                }
                if sides.iter().all(|s| s.distance_to(center) <= radius + tol) {
                    best = Some(Circle::new(center, radius));
                }
            }
        }
        best
    }
}

/// Angles in the window where the ellipse point is at least as close to `s`
/// as to `t`.
fn closer_arcs(e: &Ellipse, s: Point, t: Point) -> Vec<(f64, f64)> {
    // |x − s|² ≤ |x − t|²  ⇔  2 (x − M)·(t − s) ≤ |t − M|² − |s − M|²
    let diff = t - s;
    let a = 2.0 * e.semi_major * e.axis.dot(diff);
    let b = 2.0 * e.semi_minor * e.minor_axis().dot(diff);
    let d = (t - e.center).norm2() - (s - e.center).norm2();
    trig_sublevel(a, b, d)
}

/// `{φ ∈ window : a cos φ + b sin φ ≤ d}` as sorted closed intervals.
fn trig_sublevel(a: f64, b: f64, d: f64) -> Vec<(f64, f64)> {
    let rho = a.hypot(b);
    if d >= rho {
        return vec![WINDOW];
    }
    if d <= -rho {
        return Vec::new();
    }
    let psi = b.atan2(a);
    let delta = (d / rho).acos();
    let start = wrap(psi + delta);
    let end = start + TAU - 2.0 * delta;
    if end <= WINDOW.1 {
        vec![(start, end)]
    } else {
        vec![(WINDOW.0, end - TAU), (start, WINDOW.1)]
    }
}

fn wrap(phi: f64) -> f64 {
    WINDOW.0 + (phi - WINDOW.0).rem_euclid(TAU)
}

fn intersect(xs: &[(f64, f64)], ys: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < xs.len() && j < ys.len() {
        let lo = xs[i].0.max(ys[j].0);
        let hi = xs[i].1.min(ys[j].1);
        if lo <= hi {
            out.push((lo, hi));
        }
        if xs[i].1 < ys[j].1 {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

/// Real roots of `a t² + b t + c = 0`, tolerating a vanishing leading term.
fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale == 0.0 {
        return Vec::new();
    }
    if a.abs() <= 1e-14 * scale {
        return if b != 0.0 { vec![-c / b] } else { Vec::new() };
    }
    let disc = b * b - 4.0 * a * c;
    if disc < -1e-14 * b * b.max(1.0) {
        return Vec::new();
    }
    let sq = disc.max(0.0).sqrt();
    // numerically stable pairing
    let q = -0.5 * (b + b.signum() * sq);
    if q == 0.0 {
        return vec![0.0];
    }
    vec![q / a, c / q]
}

/// Bisector piece of sites `i` and `j` where both are nearest among their
/// neighbours and the maximal circle stays inside `circle`.
fn straight_segment(
    circle: Circle,
    sites: &[Point],
    neighbors: &[Vec<usize>],
    i: usize,
    j: usize,
) -> Option<LocalSegment> {
    let (si, sj) = (sites[i], sites[j]);
    let origin = si.midpoint(sj);
    let span = sj - si;
    let direction = span.perp() * (1.0 / span.norm());
    let h = 0.5 * span.norm();
    let r = circle.radius;
    let to_origin = origin - circle.center;

    // r(t) + |x(t) − O| ≤ R with r(t) = √(h² + t²): squaring twice gives
    // 2R r(t) = k0 + k1 t, then 4R²(h² + t²) = (k0 + k1 t)².
    let k0 = r * r + h * h - to_origin.norm2();
    let k1 = -2.0 * direction.dot(to_origin);
    let mut roots: Vec<f64> = quadratic_roots(4.0 * r * r - k1 * k1, -2.0 * k0 * k1, 4.0 * r * r * h * h - k0 * k0)
        .into_iter()
        .filter(|&t| k0 + k1 * t >= -1e-12 * r * r)
        .collect();
    if roots.len() < 2 {
        return None;
    }
    roots.sort_by(f64::total_cmp);
    let (mut lo, mut hi) = (roots[0], roots[roots.len() - 1]);

    for &k in neighbors[i].iter().chain(&neighbors[j]) {
        if k == i || k == j {
            continue;
        }
        // |x − si|² ≤ |x − sk|²  ⇔  2t d·(sk − si) ≤ |sk − m|² − |si − m|²
        let g = 2.0 * direction.dot(sites[k] - si);
        let d = (sites[k] - origin).norm2() - h * h;
        if g.abs() <= 1e-15 * (sites[k] - si).norm() {
            if d < 0.0 {
                return None;
            }
        } else if g > 0.0 {
            hi = hi.min(d / g);
        } else {
            lo = lo.max(d / g);
        }
        if lo >= hi {
            return None;
        }
    }
    Some(LocalSegment::Straight {
        sites: (i, j),
        origin,
        direction,
        from: lo,
        to: hi,
    })
}

/// Angles where the maximal circle on the ellipse touches the side's line or
/// passes through one of its endpoints.
fn ellipse_side_placements(e: &Ellipse, side: &Segment) -> Vec<f64> {
    let mut out = Vec::new();
    let (a, b, c) = (e.semi_major, e.semi_minor, e.focal);
    let (e1, e2) = (e.axis, e.minor_axis());
    let dir = side.b - side.a;
    let n = dir.perp() * (1.0 / dir.norm());
    let offset = n.dot(e.center - side.a);
    for sign in [1.0, -1.0] {
        // n·(x − p1) = ±r(φ)
        out.extend(trig_roots(a * n.dot(e1) + sign * c, b * n.dot(e2), sign * a - offset));
    }
    for end in [side.a, side.b] {
        // |x − end| = r(φ)
        let m = e.center - end;
        out.extend(trig_roots(
            2.0 * a * (m.dot(e1) + c),
            2.0 * b * m.dot(e2),
            c * c - m.norm2(),
        ));
    }
    out
}

/// Solutions of `a cos φ + b sin φ = d`, wrapped into the window.
fn trig_roots(a: f64, b: f64, d: f64) -> Vec<f64> {
    let rho = a.hypot(b);
    if rho == 0.0 {
        return Vec::new();
    }
    let ratio = d / rho;
    if ratio.abs() > 1.0 + 1e-12 {
        return Vec::new();
    }
    let psi = b.atan2(a);
    let delta = ratio.clamp(-1.0, 1.0).acos();
    let mut out = vec![wrap(psi + delta), wrap(psi - delta)];
    // the seam is both ends of the window
    if out.contains(&WINDOW.0) {
        out.push(WINDOW.1);
    }
    out
}

/// Bisector parameters where the circle through `site` centered on the line
/// touches the side's line or passes through one of its endpoints.
fn bisector_side_placements(origin: Point, direction: Point, site: Point, side: &Segment) -> Vec<f64> {
    let mut out = Vec::new();
    let dir = side.b - side.a;
    let n = dir.perp() * (1.0 / dir.norm());
    let alpha = n.dot(origin - side.a);
    let beta = n.dot(direction);
    let h2 = (origin - site).norm2();
    // (α + βt)² = h² + t²
    out.extend(quadratic_roots(beta * beta - 1.0, 2.0 * alpha * beta, alpha * alpha - h2));
    for end in [side.a, side.b] {
        let denom = 2.0 * direction.dot(site - end);
        if denom != 0.0 {
            out.push((h2 - (origin - end).norm2()) / denom);
        }
    }
    out
}
