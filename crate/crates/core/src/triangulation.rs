//! Triangulations as canonical sets of index triples, plus the queries and
//! constraints the optimizer works with.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{orientation, triangle_area, Orientation, Point};
use crate::point_set::PointSet;

/// Undirected edge stored with the smaller index first.
pub type Edge = (usize, usize);

#[inline]
pub fn edge(a: usize, b: usize) -> Edge {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

#[inline]
pub(crate) fn sorted_triple(mut t: [usize; 3]) -> [usize; 3] {
    t.sort_unstable();
    t
}

/// An interior edge `(u, v)` with the apexes of its two incident triangles.
/// `p` lies to the left of `u → v`, `q` to the right, and `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Quadrilateral {
    pub u: usize,
    pub v: usize,
    pub p: usize,
    pub q: usize,
}

impl Quadrilateral {
    /// Orders the apexes of edge `(a, b)` so that `p` is on the left of `u → v`.
    pub fn new(points: &PointSet, a: usize, b: usize, x: usize, y: usize) -> Self {
        let (u, v) = edge(a, b);
        if orientation(points[u], points[v], points[x]) == Orientation::CounterClockwise {
            Quadrilateral { u, v, p: x, q: y }
        } else {
            Quadrilateral { u, v, p: y, q: x }
        }
    }

    pub fn edge(&self) -> Edge {
        (self.u, self.v)
    }
}

/// A triangulation over a shared point set. Triangles are stored with sorted
/// indices and the list is sorted lexicographically.
#[derive(Debug, Clone)]
pub struct Triangulation {
    points: Arc<PointSet>,
    triangles: Vec<[usize; 3]>,
}

impl PartialEq for Triangulation {
    fn eq(&self, other: &Self) -> bool {
        self.same_point_set(other) && self.triangles == other.triangles
    }
}

impl Triangulation {
    /// Canonicalizes the triangle list. Only index sanity is checked here; use
    /// [`Triangulation::validate`] for the geometric invariants.
    pub fn new(
        points: Arc<PointSet>,
        triangles: impl IntoIterator<Item = [usize; 3]>,
    ) -> Result<Self> {
        let n = points.len();
        let mut tris = Vec::new();
        for t in triangles {
            if t.iter().any(|&i| i >= n) {
                return Err(Error::InvalidTriangulation(format!(
                    "triangle {t:?} references a point outside 0..{n}"
                )));
            }
            if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                return Err(Error::InvalidTriangulation(format!(
                    "triangle {t:?} repeats a vertex"
                )));
            }
            tris.push(sorted_triple(t));
        }
        tris.sort_unstable();
        Ok(Triangulation {
            points,
            triangles: tris,
        })
    }

    /// The caller guarantees sorted triples in sorted order.
    pub(crate) fn from_canonical(points: Arc<PointSet>, triangles: Vec<[usize; 3]>) -> Self {
        debug_assert!(triangles.windows(2).all(|w| w[0] <= w[1]));
        Triangulation { points, triangles }
    }

    pub fn points(&self) -> &Arc<PointSet> {
        &self.points
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn into_triangles(self) -> Vec<[usize; 3]> {
        self.triangles
    }

    pub fn same_point_set(&self, other: &Triangulation) -> bool {
        Arc::ptr_eq(&self.points, &other.points) || *self.points == *other.points
    }

    /// Incident triangle indices per edge, in canonical edge order.
    pub fn edge_triangles(&self) -> BTreeMap<Edge, Vec<usize>> {
        let mut map: BTreeMap<Edge, Vec<usize>> = BTreeMap::new();
        for (ti, t) in self.triangles.iter().enumerate() {
            for (a, b) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
                map.entry((a, b)).or_default().push(ti);
            }
        }
        map
    }

    pub fn edges(&self) -> Vec<Edge> {
        let mut edges: Vec<Edge> = self
            .triangles
            .iter()
            .flat_map(|t| [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])])
            .collect();
        edges.sort_unstable();
        edges.dedup();
        edges
    }

    pub fn has_edge(&self, e: Edge) -> bool {
        let (a, b) = edge(e.0, e.1);
        self.triangles
            .iter()
            .any(|t| t.contains(&a) && t.contains(&b))
    }

    pub fn hull_edges(&self) -> Vec<Edge> {
        self.edge_triangles()
            .into_iter()
            .filter(|(_, ts)| ts.len() == 1)
            .map(|(e, _)| e)
            .collect()
    }

    /// Checks that the triangles tile the convex hull: index sanity, Euler
    /// counts, hull-edge agreement, pairwise disjoint interiors and area.
    pub fn validate(&self) -> bool {
        let pts = self.points.points();
        let n = pts.len();
        let hull = convex_hull(pts);
        let h = hull.len();
        if n < 3 || self.triangles.len() + h + 2 != 2 * n {
            return false;
        }
        let mut used = vec![false; n];
        for t in &self.triangles {
            if orientation(pts[t[0]], pts[t[1]], pts[t[2]]) == Orientation::Collinear {
                return false;
            }
            for &i in t {
                used[i] = true;
            }
        }
        if used.iter().any(|u| !u) {
            return false;
        }
        let et = self.edge_triangles();
        if et.len() + h + 3 != 3 * n || et.values().any(|ts| ts.len() > 2) {
            return false;
        }
        let boundary: BTreeSet<Edge> = et
            .iter()
            .filter(|(_, ts)| ts.len() == 1)
            .map(|(e, _)| *e)
            .collect();
        let hull_set: BTreeSet<Edge> = (0..h).map(|i| edge(hull[i], hull[(i + 1) % h])).collect();
        if boundary != hull_set {
            return false;
        }
        let corners: Vec<[Point; 3]> = self
            .triangles
            .iter()
            .map(|t| [pts[t[0]], pts[t[1]], pts[t[2]]])
            .collect();
        for i in 0..corners.len() {
            for j in i + 1..corners.len() {
                if !interiors_disjoint(&corners[i], &corners[j]) {
                    return false;
                }
            }
        }
        let hull_area: f64 = (1..h.saturating_sub(1))
            .map(|i| triangle_area(pts[hull[0]], pts[hull[i]], pts[hull[i + 1]]))
            .sum();
        let area: f64 = corners.iter().map(|c| triangle_area(c[0], c[1], c[2])).sum();
        (area - hull_area).abs() <= 1e-9 * hull_area
    }

    /// One quadrilateral per non-hull edge, in canonical edge order.
    pub fn interior_quadrilaterals(&self) -> Vec<Quadrilateral> {
        self.edge_triangles()
            .into_iter()
            .filter(|(_, ts)| ts.len() == 2)
            .map(|((u, v), ts)| {
                let x = apex(&self.triangles[ts[0]], u, v);
                let y = apex(&self.triangles[ts[1]], u, v);
                Quadrilateral::new(&self.points, u, v, x, y)
            })
            .collect()
    }

    pub fn total_edge_length(&self) -> f64 {
        self.edges()
            .iter()
            .map(|&(a, b)| self.points[a].dist(self.points[b]))
            .sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.points.len()];
        for (a, b) in self.edges() {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// `dt_length` is the total edge length of the Delaunay triangulation.
    pub fn satisfies(&self, constraint: &Constraint, dt_length: f64) -> bool {
        match constraint {
            Constraint::RequiredEdges(edges) => edges.iter().all(|&e| self.has_edge(e)),
            Constraint::MinTotalLength(f) => self.total_edge_length() >= f * dt_length,
            Constraint::MaxTotalLength(f) => self.total_edge_length() <= f * dt_length,
            Constraint::MaxDegree(k) => self.max_degree() <= *k,
        }
    }

    /// Edges of `self` missing from `other`.
    pub fn edge_diff(&self, other: &Triangulation) -> Result<BTreeSet<Edge>> {
        if !self.same_point_set(other) {
            return Err(Error::MismatchedPointSets);
        }
        let theirs: BTreeSet<Edge> = other.edges().into_iter().collect();
        Ok(self
            .edges()
            .into_iter()
            .filter(|e| !theirs.contains(e))
            .collect())
    }

    /// Replaces the diagonal `e` of its quadrilateral, if that quadrilateral is convex.
    pub fn flip(&self, e: Edge) -> Option<Triangulation> {
        let (u, v) = edge(e.0, e.1);
        let incident: Vec<usize> = (0..self.triangles.len())
            .filter(|&i| self.triangles[i].contains(&u) && self.triangles[i].contains(&v))
            .collect();
        if incident.len() != 2 {
            return None;
        }
        let p = apex(&self.triangles[incident[0]], u, v);
        let q = apex(&self.triangles[incident[1]], u, v);
        flip_triangles(self.points.points(), &self.triangles, (u, v), p, q)
            .map(|tris| Triangulation::from_canonical(self.points.clone(), tris))
    }

    /// Every triangulation one flip away, in canonical edge order.
    pub fn flip_neighbors(&self) -> Vec<Triangulation> {
        flip_neighbors_raw(self.points.points(), &self.triangles)
            .into_iter()
            .map(|tris| Triangulation::from_canonical(self.points.clone(), tris))
            .collect()
    }
}

#[inline]
pub(crate) fn apex(t: &[usize; 3], u: usize, v: usize) -> usize {
    *t.iter().find(|&&x| x != u && x != v).expect("triangle has three vertices")
}

fn flip_triangles(
    pts: &[Point],
    tris: &[[usize; 3]],
    (u, v): Edge,
    p: usize,
    q: usize,
) -> Option<Vec<[usize; 3]>> {
    let ou = orientation(pts[p], pts[q], pts[u]);
    let ov = orientation(pts[p], pts[q], pts[v]);
    if ou == Orientation::Collinear || ov == Orientation::Collinear || ou == ov {
        return None;
    }
    let old_a = sorted_triple([u, v, p]);
    let old_b = sorted_triple([u, v, q]);
    let mut out: Vec<[usize; 3]> = tris
        .iter()
        .copied()
        .filter(|t| *t != old_a && *t != old_b)
        .collect();
    out.push(sorted_triple([p, q, u]));
    out.push(sorted_triple([p, q, v]));
    out.sort_unstable();
    Some(out)
}

/// Flip neighbours of a canonical triangle list.
pub(crate) fn flip_neighbors_raw(pts: &[Point], tris: &[[usize; 3]]) -> Vec<Vec<[usize; 3]>> {
    let mut half: Vec<(Edge, usize)> = Vec::with_capacity(tris.len() * 3);
    for t in tris {
        half.push(((t[0], t[1]), t[2]));
        half.push(((t[0], t[2]), t[1]));
        half.push(((t[1], t[2]), t[0]));
    }
    half.sort_unstable();
    let mut out = Vec::new();
    for w in half.windows(2) {
        if w[0].0 == w[1].0 {
            if let Some(next) = flip_triangles(pts, tris, w[0].0, w[0].1, w[1].1) {
                out.push(next);
            }
        }
    }
    out
}

fn interiors_disjoint(a: &[Point; 3], b: &[Point; 3]) -> bool {
    separated_by_edge_of(a, b) || separated_by_edge_of(b, a)
}

fn separated_by_edge_of(t: &[Point; 3], other: &[Point; 3]) -> bool {
    let ccw = orientation(t[0], t[1], t[2]) == Orientation::CounterClockwise;
    (0..3).any(|i| {
        let (a, b) = if ccw {
            (t[i], t[(i + 1) % 3])
        } else {
            (t[(i + 1) % 3], t[i])
        };
        other
            .iter()
            .all(|&p| orientation(a, b, p) != Orientation::CounterClockwise)
    })
}

/// Convex hull vertex indices in counterclockwise order (monotone chain).
pub fn convex_hull(pts: &[Point]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&a, &b| {
        pts[a]
            .x
            .total_cmp(&pts[b].x)
            .then(pts[a].y.total_cmp(&pts[b].y))
    });
    if idx.len() < 3 {
        return idx;
    }
    let mut hull: Vec<usize> = Vec::with_capacity(2 * idx.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &usize>> = if pass == 0 {
            Box::new(idx.iter())
        } else {
            Box::new(idx.iter().rev())
        };
        for &i in iter {
            while hull.len() >= start + 2 {
                let a = hull[hull.len() - 2];
                let b = hull[hull.len() - 1];
                if orientation(pts[a], pts[b], pts[i]) == Orientation::CounterClockwise {
                    break;
                }
                hull.pop();
            }
            hull.push(i);
        }
        hull.pop();
    }
    hull
}

/// A feasibility constraint from the optimization experiments. Length factors
/// are multiples of the Delaunay triangulation's total edge length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Constraint {
    RequiredEdges(BTreeSet<Edge>),
    MinTotalLength(f64),
    MaxTotalLength(f64),
    MaxDegree(usize),
}

impl Constraint {
    pub fn unconstrained() -> Self {
        Constraint::RequiredEdges(BTreeSet::new())
    }

    pub fn required_edges(edges: impl IntoIterator<Item = Edge>) -> Self {
        Constraint::RequiredEdges(edges.into_iter().map(|(a, b)| edge(a, b)).collect())
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Constraint::RequiredEdges(edges) => {
                if let Some((a, b)) = edges.iter().find(|(a, b)| a == b) {
                    return Err(Error::InvalidConstraint(format!(
                        "edge ({a}, {b}) is a loop"
                    )));
                }
                Ok(())
            }
            Constraint::MinTotalLength(f) | Constraint::MaxTotalLength(f) => {
                if *f > 0.0 && f.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidConstraint(format!(
                        "length factor must be positive, got {f}"
                    )))
                }
            }
            Constraint::MaxDegree(k) => {
                if *k >= 3 {
                    Ok(())
                } else {
                    Err(Error::InvalidConstraint(format!(
                        "degree bound must be at least 3, got {k}"
                    )))
                }
            }
        }
    }
}
