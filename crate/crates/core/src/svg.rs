//! Deterministic SVG rendering of triangulations.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::geom::Point;
use crate::triangulation::{edge, Edge, Triangulation};

const SIZE: f64 = 512.0;
const MARGIN: f64 = 0.05;

/// Black edges and points; edges in `diff` are green and edges in
/// `constrained` red.
pub fn render_svg(t: &Triangulation, constrained: &BTreeSet<Edge>, diff: &BTreeSet<Edge>) -> String {
    let pts = t.points();
    let (mut lo, mut hi) = (pts[0], pts[0]);
    for p in pts.iter() {
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let extent = (hi.x - lo.x).max(hi.y - lo.y);
    let scale = SIZE * (1.0 - 2.0 * MARGIN) / extent;
    let mid = lo.midpoint(hi);
    let map = |p: Point| -> (f64, f64) {
        (
            SIZE / 2.0 + (p.x - mid.x) * scale,
            SIZE / 2.0 - (p.y - mid.y) * scale,
        )
    };

    let constrained: BTreeSet<Edge> = constrained.iter().map(|&(a, b)| edge(a, b)).collect();
    let diff: BTreeSet<Edge> = diff.iter().map(|&(a, b)| edge(a, b)).collect();
    let edges = t.edges();
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SIZE} {SIZE}" width="{SIZE}" height="{SIZE}">"#
    );
    let _ = writeln!(out, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    let layer = |e: &Edge| {
        if constrained.contains(e) {
            2
        } else if diff.contains(e) {
            1
        } else {
            0
        }
    };
    let styles = [("black", 1.5), ("green", 2.5), ("red", 2.5)];
    for (index, (color, width)) in styles.into_iter().enumerate() {
        for e in edges.iter().filter(|e| layer(e) == index) {
            let (x1, y1) = map(pts[e.0]);
            let (x2, y2) = map(pts[e.1]);
            let _ = writeln!(
                out,
                r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="{color}" stroke-width="{width}"/>"#
            );
        }
    }
    for p in pts.iter() {
        let (x, y) = map(*p);
        let _ = writeln!(out, r#"<circle cx="{x:.3}" cy="{y:.3}" r="3.5" fill="black"/>"#);
    }
    out.push_str("</svg>\n");
    out
}
