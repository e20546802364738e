//! Point and triangulation text files, and JSON number formatting.
//!
//! A point file is a count `n` followed by `n` lines `x y`. A triangulation
//! file is a point file followed by one `i j k` line per triangle, 0-based.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::point_set::PointSet;
use crate::triangulation::Triangulation;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Non-blank lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_header_and_points<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
) -> Result<Vec<Point>> {
    let (line, header) = lines.next().ok_or_else(|| parse_err(1, "missing point count"))?;
    let n: usize = header
        .parse()
        .map_err(|_| parse_err(line, format!("expected a point count, found '{header}'")))?;
    if n < 3 {
        return Err(parse_err(line, format!("need at least 3 points, got {n}")));
    }
    let mut points = Vec::with_capacity(n);
    for k in 0..n {
        let (line, text) = lines
            .next()
            .ok_or_else(|| parse_err(line + k + 1, format!("expected {n} points, found {k}")))?;
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(parse_err(line, format!("expected 'x y', found '{text}'")));
        }
        let coord = |s: &str| -> Result<f64> {
            let v: f64 = s
                .parse()
                .map_err(|_| parse_err(line, format!("invalid number '{s}'")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(parse_err(line, format!("non-finite coordinate '{s}'")))
            }
        };
        points.push(Point::new(coord(fields[0])?, coord(fields[1])?));
    }
    Ok(points)
}

pub fn parse_points(text: &str) -> Result<PointSet> {
    let mut lines = content_lines(text);
    let points = parse_header_and_points(&mut lines)?;
    if let Some((line, extra)) = lines.next() {
        return Err(parse_err(line, format!("unexpected trailing content '{extra}'")));
    }
    PointSet::new(points)
}

/// Parses a triangulation file and checks that it tiles the hull.
pub fn parse_triangulation(text: &str) -> Result<Triangulation> {
    let mut lines = content_lines(text);
    let points = Arc::new(PointSet::new(parse_header_and_points(&mut lines)?)?);
    let mut triangles = Vec::new();
    for (line, text) in lines {
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(parse_err(line, format!("expected 'i j k', found '{text}'")));
        }
        let mut t = [0usize; 3];
        for (slot, f) in t.iter_mut().zip(&fields) {
            *slot = f
                .parse()
                .map_err(|_| parse_err(line, format!("invalid index '{f}'")))?;
        }
        triangles.push(t);
    }
    let t = Triangulation::new(points, triangles)?;
    if !t.validate() {
        return Err(Error::InvalidTriangulation(
            "triangles do not tile the convex hull".into(),
        ));
    }
    Ok(t)
}

pub fn write_points(ps: &PointSet) -> String {
    let mut out = format!("{}\n", ps.len());
    for p in ps.iter() {
        out.push_str(&format!("{} {}\n", p.x, p.y));
    }
    out
}

pub fn write_triangulation(t: &Triangulation) -> String {
    let mut out = write_points(t.points());
    for [a, b, c] in t.triangles() {
        out.push_str(&format!("{a} {b} {c}\n"));
    }
    out
}

/// Rounds to 12 significant digits, the precision of every JSON number we emit.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// JSON number at 12 significant digits.
pub fn json_number(x: f64) -> serde_json::Value {
    serde_json::Number::from_f64(round_sig(x))
        .map(serde_json::Value::Number)
        .unwrap_or(serde_json::Value::Null)
}
