//! Near-Delaunay metrics for planar triangulations and exhaustive
//! constrained optimization over them.

pub mod delaunay;
pub mod enumerate;
pub mod error;
pub mod experiment;
pub mod fixtures;
pub mod geom;
pub mod io;
pub mod metrics;
pub mod optimize;
pub mod point_set;
pub mod svg;
pub mod triangulation;

pub use delaunay::{cdt, delaunay, voronoi, VoronoiDiagram};
pub use enumerate::{enumerate_triangulations, enumerate_triangulations_capped};
pub use error::{Error, Result};
pub use geom::{Circle, Point, Segment};
pub use metrics::{evaluate, ElementId, ElementScore, MetricContext, MetricId, ScoreOrientation};
pub use optimize::{optimize, AggregationMode, OptimizeOutcome, Optimizer, ScoreVector};
pub use point_set::PointSet;
pub use triangulation::{Constraint, Edge, Quadrilateral, Triangulation};
