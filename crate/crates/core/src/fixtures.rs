//! Named point sets used by the experiments and tests.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::point_set::PointSet;

/// Convex quadrilateral `u, v, p, q` whose Delaunay diagonal is `pq`.
pub fn p4() -> PointSet {
    PointSet::from_coords(&[(0., 0.), (2., 0.), (1., 0.5), (1., -0.5)]).expect("valid fixture")
}

/// `n` points in convex position on an ellipse, with uneven spacing so that
/// no four are cocircular.
pub fn convex_polygon(n: usize) -> Result<PointSet> {
    let coords: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let t = i as f64 / n as f64 * TAU + 0.05 * (i * i) as f64 / n as f64;
            (2.0 * t.cos(), t.sin())
        })
        .collect();
    PointSet::from_coords(&coords)
}

/// A hub joined to nine rim points in its Delaunay triangulation, so the hub
/// has degree 9.
pub fn wheel() -> PointSet {
    let mut coords = vec![(0.03, -0.02)];
    for i in 0..9 {
        let i = i as f64;
        let t = i * TAU / 9.0 + 0.06 * (2.9 * i).sin();
        let r = 1.0 + 0.05 * (1.7 * i + 0.3).sin();
        coords.push((r * t.cos(), r * t.sin()));
    }
    PointSet::from_coords(&coords).expect("valid fixture")
}

/// Nine points on a shallow downward parabola and one far point below. The
/// Delaunay triangulation joins the far point to most of the chain, so there
/// are triangulations both much shorter (below 0.8×) and much longer (above
/// 1.2×) than it.
pub fn long_delaunay() -> PointSet {
    let mut coords: Vec<(f64, f64)> = (0..9)
        .map(|i| {
            let x = i as f64 - 4.0 + 0.013 * ((i * 7 % 5) as f64);
            (x, -0.09 * x * x)
        })
        .collect();
    coords.push((0.31, -12.0));
    PointSet::from_coords(&coords).expect("valid fixture")
}

/// Looks a fixture up by name.
pub fn by_name(name: &str) -> Result<PointSet> {
    match name {
        "p4" => Ok(p4()),
        "wheel" => Ok(wheel()),
        "long_delaunay" => Ok(long_delaunay()),
        _ => Err(Error::InvalidSpec(format!("unknown fixture '{name}'"))),
    }
}
