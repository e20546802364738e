//! Exhaustive enumeration of triangulations by traversing the flip graph.

use std::collections::HashSet;
use std::sync::Arc;

use crate::delaunay::delaunay;
use crate::error::{Error, Result};
use crate::point_set::PointSet;
use crate::triangulation::{flip_neighbors_raw, Triangulation};

pub const DEFAULT_ENUMERATION_CAP: usize = 12;

/// Every triangulation of the point set, sorted by canonical triangle list.
pub fn enumerate_triangulations(points: &Arc<PointSet>) -> Result<Vec<Triangulation>> {
    enumerate_triangulations_capped(points, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_triangulations_capped(
    points: &Arc<PointSet>,
    cap: usize,
) -> Result<Vec<Triangulation>> {
    if points.len() > cap {
        return Err(Error::EnumerationTooLarge { n: points.len(), cap });
    }
    let pts = points.points();
    let start = delaunay(points).into_triangles();
    let mut seen: HashSet<Vec<[usize; 3]>> = HashSet::new();
    let mut stack = vec![start.clone()];
    seen.insert(start);
    while let Some(current) = stack.pop() {
        for next in flip_neighbors_raw(pts, &current) {
            if !seen.contains(&next) {
                seen.insert(next.clone());
                stack.push(next);
            }
        }
    }
    let mut all: Vec<Vec<[usize; 3]>> = seen.into_iter().collect();
    all.sort_unstable();
    Ok(all
        .into_iter()
        .map(|tris| Triangulation::from_canonical(points.clone(), tris))
        .collect())
}
