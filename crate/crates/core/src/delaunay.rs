//! Delaunay triangulation, its Voronoi dual, and the constrained Delaunay
//! triangulation.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geom::{circumcenter_unchecked, orientation, Orientation, Point};
use crate::point_set::PointSet;
use crate::triangulation::{apex, edge, sorted_triple, Edge, Triangulation};

/// Mutable triangle mesh with counterclockwise triangles and a directed edge
/// index. Only used while constructing triangulations.
struct Mesh<'a> {
    pts: &'a [Point],
    tris: Vec<[usize; 3]>,
    half: HashMap<(usize, usize), usize>,
}

impl<'a> Mesh<'a> {
    fn new(pts: &'a [Point]) -> Self {
        Mesh {
            pts,
            tris: Vec::with_capacity(2 * pts.len()),
            half: HashMap::with_capacity(6 * pts.len()),
        }
    }

    fn push(&mut self, t: [usize; 3]) {
        let idx = self.tris.len();
        self.tris.push(t);
        self.index(idx);
    }

    fn index(&mut self, idx: usize) {
        let [a, b, c] = self.tris[idx];
        self.half.insert((a, b), idx);
        self.half.insert((b, c), idx);
        self.half.insert((c, a), idx);
    }

    fn unindex(&mut self, idx: usize) {
        let [a, b, c] = self.tris[idx];
        self.half.remove(&(a, b));
        self.half.remove(&(b, c));
        self.half.remove(&(c, a));
    }

    /// Third vertex of the triangle that owns the directed edge `u → v`.
    fn apex(&self, u: usize, v: usize) -> Option<usize> {
        self.half.get(&(u, v)).map(|&t| apex(&self.tris[t], u, v))
    }

    fn has_edge(&self, u: usize, v: usize) -> bool {
        self.half.contains_key(&(u, v)) || self.half.contains_key(&(v, u))
    }

    /// Flips interior edge `{u, v}`; returns the new diagonal.
    fn flip(&mut self, u: usize, v: usize) -> (usize, usize) {
        let t1 = self.half[&(u, v)];
        let t2 = self.half[&(v, u)];
        let p = apex(&self.tris[t1], u, v);
        let q = apex(&self.tris[t2], v, u);
        self.unindex(t1);
        self.unindex(t2);
        self.tris[t1] = [u, q, p];
        self.tris[t2] = [q, v, p];
        self.index(t1);
        self.index(t2);
        (p, q)
    }

    /// Lawson flipping until every queued edge not in `fixed` is locally Delaunay.
    fn legalize(&mut self, mut queue: VecDeque<Edge>, fixed: &HashSet<Edge>) {
        while let Some((u, v)) = queue.pop_front() {
            if fixed.contains(&edge(u, v)) {
                continue;
            }
            let (Some(p), Some(q)) = (self.apex(u, v), self.apex(v, u)) else {
                continue;
            };
            let pts = self.pts;
            if incircle_ccw(pts[u], pts[v], pts[p], pts[q]) {
                self.flip(u, v);
                queue.extend([(u, q), (q, v), (v, p), (p, u)]);
            }
        }
    }

    fn all_edges(&self) -> VecDeque<Edge> {
        let mut edges: Vec<Edge> = self
            .half
            .keys()
            .filter(|(a, b)| a < b || !self.half.contains_key(&(*b, *a)))
            .map(|&(a, b)| edge(a, b))
            .collect();
        edges.sort_unstable();
        edges.into()
    }

    fn into_triangulation(self, points: &Arc<PointSet>) -> Triangulation {
        let mut tris: Vec<[usize; 3]> = self.tris.into_iter().map(sorted_triple).collect();
        tris.sort_unstable();
        Triangulation::from_canonical(points.clone(), tris)
    }
}


fn coord(p: Point) -> robust::Coord<f64> {
    robust::Coord { x: p.x, y: p.y }
}

/// `d` strictly inside the circumcircle of the counterclockwise triangle `abc`.
fn incircle_ccw(a: Point, b: Point, c: Point, d: Point) -> bool {
    robust::incircle(coord(a), coord(b), coord(c), coord(d)) > 0.0
}

/// The Delaunay triangulation, by sweep-order incremental insertion with
/// Lawson flips. The point set is already in general position, so the result
/// is unique.
pub fn delaunay(points: &Arc<PointSet>) -> Triangulation {
    let pts = points.points();
    delaunay_mesh(pts).into_triangulation(points)
}

fn delaunay_mesh(pts: &[Point]) -> Mesh<'_> {
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&a, &b| pts[a].x.total_cmp(&pts[b].x).then(pts[a].y.total_cmp(&pts[b].y)));
    let mut mesh = Mesh::new(pts);
    let fixed = HashSet::new();

    // Seed with the first two points and the first point not collinear with them.
    let (a, b) = (order[0], order[1]);
    let k = (2..order.len())
        .find(|&k| orientation(pts[a], pts[b], pts[order[k]]) != Orientation::Collinear)
        .expect("general position guarantees a non-collinear triple");
    let c = order.remove(k);
    order.insert(2, c);
    let mut hull = if orientation(pts[a], pts[b], pts[c]) == Orientation::CounterClockwise {
        vec![a, b, c]
    } else {
        vec![a, c, b]
    };
    mesh.push([hull[0], hull[1], hull[2]]);

    for &p in &order[3..] {
        let h = hull.len();
        let visible: Vec<bool> = (0..h)
            .map(|i| orientation(pts[hull[i]], pts[hull[(i + 1) % h]], pts[p]) == Orientation::Clockwise)
            .collect();
        // visible hull edges form one contiguous run; find where it starts
        let start = (0..h)
            .find(|&i| visible[i] && !visible[(i + h - 1) % h])
            .expect("a point outside the hull sees at least one hull edge");
        let mut queue = VecDeque::new();
        let mut i = start;
        let mut run = 0;
        while visible[i] {
            let (u, v) = (hull[i], hull[(i + 1) % h]);
            mesh.push([v, u, p]);
            queue.push_back((u, v));
            run += 1;
            i = (i + 1) % h;
        }
        // the run covers vertices start..=start+run; drop its interior ones
        let first = hull[start];
        let last = hull[(start + run) % h];
        let mut next = Vec::with_capacity(h + 1);
        let mut j = (start + run) % h;
        loop {
            next.push(hull[j]);
            if hull[j] == first {
                break;
            }
            j = (j + 1) % h;
        }
        debug_assert_eq!(next[0], last);
        next.push(p);
        hull = next;
        mesh.legalize(queue, &fixed);
    }
    let all = mesh.all_edges();
    mesh.legalize(all, &fixed);
    mesh
}

/// Endpoint of a Voronoi edge that is not a vertex: a unit direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VoronoiEnd {
    Vertex(usize),
    Unbounded(Point),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoronoiVertex {
    pub center: Point,
    pub radius: f64,
    /// Sites on the vertex's empty circle, sorted.
    pub sites: [usize; 3],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoronoiEdge {
    /// The two sites whose bisector carries this edge, sorted.
    pub sites: Edge,
    pub start: usize,
    pub end: VoronoiEnd,
}

/// Voronoi diagram derived from the Delaunay dual. Vertex `i` is the
/// circumcenter of Delaunay triangle `i` in canonical order, and edge `j` is
/// dual to Delaunay edge `j` in canonical order.
#[derive(Debug, Clone)]
pub struct VoronoiDiagram {
    pub vertices: Vec<VoronoiVertex>,
    pub edges: Vec<VoronoiEdge>,
    /// Incident edge indices per site.
    pub cells: Vec<Vec<usize>>,
    triangulation: Triangulation,
}

impl VoronoiDiagram {
    pub fn from_delaunay(dt: Triangulation) -> Self {
        let pts = dt.points().clone();
        let vertices: Vec<VoronoiVertex> = dt
            .triangles()
            .iter()
            .map(|&[a, b, c]| {
                let center = circumcenter_unchecked(pts[a], pts[b], pts[c]);
                let radius = (center.dist(pts[a]) + center.dist(pts[b]) + center.dist(pts[c])) / 3.0;
                VoronoiVertex { center, radius, sites: [a, b, c] }
            })
            .collect();
        let mut edges = Vec::new();
        let mut cells = vec![Vec::new(); pts.len()];
        for ((a, b), ts) in dt.edge_triangles() {
            let end = if ts.len() == 2 {
                VoronoiEnd::Vertex(ts[1])
            } else {
                let w = apex(&dt.triangles()[ts[0]], a, b);
                let mut dir = (pts[b] - pts[a]).perp();
                if dir.dot(pts[w] - pts[a]) > 0.0 {
                    dir = -dir;
                }
                VoronoiEnd::Unbounded(dir * (1.0 / dir.norm()))
            };
            cells[a].push(edges.len());
            cells[b].push(edges.len());
            edges.push(VoronoiEdge { sites: (a, b), start: ts[0], end });
        }
        VoronoiDiagram { vertices, edges, cells, triangulation: dt }
    }

    /// The Delaunay triangulation this diagram is dual to.
    pub fn delaunay(&self) -> &Triangulation {
        &self.triangulation
    }

    pub fn points(&self) -> &Arc<PointSet> {
        self.triangulation.points()
    }

    /// Sites sharing a Voronoi edge with `site`.
    pub fn neighbors(&self, site: usize) -> impl Iterator<Item = usize> + '_ {
        self.cells[site].iter().map(move |&e| {
            let (a, b) = self.edges[e].sites;
            if a == site {
                b
            } else {
                a
            }
        })
    }
}

pub fn voronoi(points: &Arc<PointSet>) -> VoronoiDiagram {
    VoronoiDiagram::from_delaunay(delaunay(points))
}

/// Whether segments `ab` and `cd` cross at a point interior to both.
fn properly_cross(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o1 = orientation(a, b, c);
    let o2 = orientation(a, b, d);
    let o3 = orientation(c, d, a);
    let o4 = orientation(c, d, b);
    o1 != Orientation::Collinear
        && o2 != Orientation::Collinear
        && o3 != Orientation::Collinear
        && o4 != Orientation::Collinear
        && o1 != o2
        && o3 != o4
}

fn on_open_segment(a: Point, b: Point, p: Point) -> bool {
    orientation(a, b, p) == Orientation::Collinear && (p - a).dot(b - a) > 0.0 && (p - b).dot(a - b) > 0.0
}

fn validate_constraint_edges(pts: &[Point], required: &BTreeSet<Edge>) -> Result<()> {
    let n = pts.len();
    for &(a, b) in required {
        if a >= n || b >= n {
            return Err(Error::InvalidConstraintEdges(format!(
                "edge ({a}, {b}) references a point outside 0..{n}"
            )));
        }
        if a == b {
            return Err(Error::InvalidConstraintEdges(format!("edge ({a}, {b}) is a loop")));
        }
        if let Some(i) = (0..n).find(|&i| on_open_segment(pts[a], pts[b], pts[i])) {
            return Err(Error::InvalidConstraintEdges(format!(
                "point {i} lies on edge ({a}, {b})"
            )));
        }
    }
    let list: Vec<Edge> = required.iter().copied().collect();
    for (i, &(a, b)) in list.iter().enumerate() {
        for &(c, d) in &list[i + 1..] {
            if properly_cross(pts[a], pts[b], pts[c], pts[d]) {
                return Err(Error::InvalidConstraintEdges(format!(
                    "edges ({a}, {b}) and ({c}, {d}) cross"
                )));
            }
        }
    }
    Ok(())
}

/// Constrained Delaunay triangulation. Each missing required edge is forced in
/// by flipping the edges it crosses, then free edges are flipped until locally
/// Delaunay.
pub fn cdt(points: &Arc<PointSet>, required: &BTreeSet<Edge>) -> Result<Triangulation> {
    let pts = points.points();
    let required: BTreeSet<Edge> = required.iter().map(|&(a, b)| edge(a, b)).collect();
    validate_constraint_edges(pts, &required)?;
    let mut mesh = delaunay_mesh(pts);
    for &(a, b) in &required {
        if mesh.has_edge(a, b) {
            continue;
        }
        let mut crossing: VecDeque<Edge> = mesh
            .all_edges()
            .into_iter()
            .filter(|&(x, y)| properly_cross(pts[a], pts[b], pts[x], pts[y]))
            .collect();
        while let Some((u, v)) = crossing.pop_front() {
            let (p, q) = match (mesh.apex(u, v), mesh.apex(v, u)) {
                (Some(p), Some(q)) => (p, q),
                _ => unreachable!("an edge crossing a chord of the hull is interior"),
            };
            let ou = orientation(pts[p], pts[q], pts[u]);
            let ov = orientation(pts[p], pts[q], pts[v]);
            if ou == ov || ou == Orientation::Collinear || ov == Orientation::Collinear {
                crossing.push_back((u, v));
                continue;
            }
            let (p, q) = mesh.flip(u, v);
            if properly_cross(pts[a], pts[b], pts[p], pts[q]) {
                crossing.push_back((p, q));
            }
        }
        debug_assert!(mesh.has_edge(a, b));
    }
    let fixed: HashSet<Edge> = required.iter().copied().collect();
    let all = mesh.all_edges();
    mesh.legalize(all, &fixed);
    Ok(mesh.into_triangulation(points))
}

/// Whether every interior edge outside `fixed` is locally Delaunay.
pub fn is_locally_delaunay_except(t: &Triangulation, fixed: &BTreeSet<Edge>) -> bool {
    let pts = t.points();
    t.interior_quadrilaterals().iter().all(|q| {
        fixed.contains(&q.edge()) || !incircle_ccw(pts[q.u], pts[q.v], pts[q.p], pts[q.q])
    })
}
