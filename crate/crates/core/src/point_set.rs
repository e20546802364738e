use std::ops::Index;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Degeneracy, Error, Result};
use crate::geom::{Point, Similarity};

/// Relative threshold below which an orientation or in-circle determinant is
/// treated as degenerate. Determinants are compared against the product of the
/// edge lengths that bound them, so the orientation test amounts to the sine of
/// the angle at the first point.
pub const DEGENERACY_GUARD: f64 = 1e-12;

/// An ordered, validated planar point set. Indices are stable identities.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Vec<Point>,
}

impl PointSet {
    /// Builds a point set and runs [`validate_general_position`] on it.
    pub fn new(points: Vec<Point>) -> Result<Self> {
        validate_general_position(&points)?;
        Ok(PointSet { points })
    }

    pub fn from_coords(coords: &[(f64, f64)]) -> Result<Self> {
        Self::new(coords.iter().map(|&(x, y)| Point::new(x, y)).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn iter(&self) -> impl Iterator<Item = &Point> {
        self.points.iter()
    }

    /// Applies a similarity to every point, preserving index order.
    pub fn transformed(&self, similarity: &Similarity) -> Result<PointSet> {
        PointSet::new(self.points.iter().map(|&p| similarity.apply(p)).collect())
    }

    /// Uniform random points in the unit square from a fixed seed, redrawn
    /// until the set is in general position.
    pub fn random(n: usize, seed: u64) -> Result<PointSet> {
        if n < 3 {
            return Err(Error::TooFewPoints(n));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let pts: Vec<Point> = (0..n)
                .map(|_| Point::new(rng.gen::<f64>(), rng.gen::<f64>()))
                .collect();
            if let Ok(ps) = PointSet::new(pts) {
                return Ok(ps);
            }
        }
    }
}

impl Index<usize> for PointSet {
    type Output = Point;
    fn index(&self, i: usize) -> &Point {
        &self.points[i]
    }
}

pub fn similarity_transform(
    ps: &PointSet,
    rotation: f64,
    scale: f64,
    translation: (f64, f64),
    reflect: bool,
) -> Result<PointSet> {
    let s = Similarity::new(rotation, scale, translation, reflect)?;
    ps.transformed(&s)
}

/// Checks finiteness, the minimum size, distinctness, and that no three
/// points are collinear and no four cocircular (up to [`DEGENERACY_GUARD`]).
pub fn validate_general_position(points: &[Point]) -> Result<()> {
    let n = points.len();
    if let Some(i) = points.iter().position(|p| !p.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    if n < 3 {
        return Err(Error::TooFewPoints(n));
    }
    for i in 0..n {
        for j in i + 1..n {
            if points[i] == points[j] {
                return Err(Error::DuplicatePoint(i, j));
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if nearly_collinear(points[i], points[j], points[k]) {
                    return Err(Error::GeneralPositionViolated(Degeneracy::Collinear([
                        i, j, k,
                    ])));
                }
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for l in k + 1..n {
                    if nearly_cocircular(points[i], points[j], points[k], points[l]) {
                        return Err(Error::GeneralPositionViolated(Degeneracy::Cocircular(
                            [i, j, k, l],
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

fn coord(p: Point) -> robust::Coord<f64> {
    robust::Coord { x: p.x, y: p.y }
}

pub(crate) fn nearly_collinear(a: Point, b: Point, c: Point) -> bool {
    let det = robust::orient2d(coord(a), coord(b), coord(c));
    let scale = (b - a).norm() * (c - a).norm();
    det == 0.0 || det.abs() <= DEGENERACY_GUARD * scale
}

pub(crate) fn nearly_cocircular(a: Point, b: Point, c: Point, d: Point) -> bool {
    let det = robust::incircle(coord(a), coord(b), coord(c), coord(d));
    let (ad, bd, cd) = (a - d, b - d, c - d);
    let (a, b, c) = (ad.norm(), bd.norm(), cd.norm());
    let scale = a * b * c * (a + b + c);
    det == 0.0 || det.abs() <= DEGENERACY_GUARD * scale
}
