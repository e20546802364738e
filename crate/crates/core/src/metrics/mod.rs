//! The seven near-Delaunay metrics. Each scores one element of a
//! triangulation: an interior quadrilateral, an edge, or a triangle.

mod edge;
pub mod local_voronoi;
mod quad;
mod triangle;

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::delaunay::{voronoi, VoronoiDiagram};
use crate::error::{Error, Result};
use crate::point_set::PointSet;
use crate::triangulation::{Edge, Quadrilateral, Triangulation};

pub use edge::{lens, lens_value, shrunk_circle, shrunk_circle_value};
pub use local_voronoi::{local_voronoi, Ellipse, LocalSegment, LocalVoronoiDiagram};
pub use quad::{
    dual_area_overlap, dual_area_overlap_value, dual_edge_ratio, dual_edge_ratio_value,
    opposing_angles, opposing_angles_value,
};
pub use triangle::{
    shrunk_circumcircle, shrunk_circumcircle_value, triangular_lens, triangular_lens_value,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricId {
    OpposingAngles,
    DualEdgeRatio,
    DualAreaOverlap,
    Lens,
    ShrunkCircle,
    TriangularLens,
    ShrunkCircumcircle,
}

/// Which way a metric's values improve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoreOrientation {
    LowerBetter,
    HigherBetter,
}

impl ScoreOrientation {
    /// Whether `a` is strictly better than `b` by more than `tol`.
    pub fn better(self, a: f64, b: f64, tol: f64) -> bool {
        match self {
            ScoreOrientation::LowerBetter => a < b - tol,
            ScoreOrientation::HigherBetter => a > b + tol,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementKind {
    Quadrilateral,
    Edge,
    Triangle,
}

impl MetricId {
    pub const ALL: [MetricId; 7] = [
        MetricId::OpposingAngles,
        MetricId::DualEdgeRatio,
        MetricId::DualAreaOverlap,
        MetricId::Lens,
        MetricId::ShrunkCircle,
        MetricId::TriangularLens,
        MetricId::ShrunkCircumcircle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MetricId::OpposingAngles => "opposing_angles",
            MetricId::DualEdgeRatio => "dual_edge_ratio",
            MetricId::DualAreaOverlap => "dual_area_overlap",
            MetricId::Lens => "lens",
            MetricId::ShrunkCircle => "shrunk_circle",
            MetricId::TriangularLens => "triangular_lens",
            MetricId::ShrunkCircumcircle => "shrunk_circumcircle",
        }
    }

    pub fn kind(self) -> ElementKind {
        match self {
            MetricId::OpposingAngles | MetricId::DualEdgeRatio | MetricId::DualAreaOverlap => {
                ElementKind::Quadrilateral
            }
            MetricId::Lens | MetricId::ShrunkCircle => ElementKind::Edge,
            MetricId::TriangularLens | MetricId::ShrunkCircumcircle => ElementKind::Triangle,
        }
    }

    pub fn orientation(self) -> ScoreOrientation {
        match self.kind() {
            ElementKind::Quadrilateral => ScoreOrientation::LowerBetter,
            _ => ScoreOrientation::HigherBetter,
        }
    }

    /// The score every element of a Delaunay triangulation receives.
    pub fn perfect(self) -> f64 {
        match self {
            MetricId::OpposingAngles | MetricId::DualEdgeRatio | MetricId::DualAreaOverlap => 0.0,
            MetricId::Lens => std::f64::consts::PI,
            _ => 1.0,
        }
    }
}

impl fmt::Display for MetricId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MetricId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        MetricId::ALL
            .into_iter()
            .find(|m| m.name() == key)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown metric '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementId {
    Quadrilateral(Quadrilateral),
    Edge(Edge),
    Triangle([usize; 3]),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElementScore {
    pub element: ElementId,
    pub value: f64,
    pub orientation: ScoreOrientation,
}

/// Per-point-set data shared by metric evaluations. The Voronoi diagram is
/// built on first use, so quadrilateral metrics never pay for it.
#[derive(Debug)]
pub struct MetricContext {
    points: Arc<PointSet>,
    voronoi: OnceLock<VoronoiDiagram>,
}

impl MetricContext {
    pub fn new(points: &Arc<PointSet>) -> Self {
        MetricContext {
            points: points.clone(),
            voronoi: OnceLock::new(),
        }
    }

    pub fn points(&self) -> &Arc<PointSet> {
        &self.points
    }

    pub fn voronoi(&self) -> &VoronoiDiagram {
        self.voronoi.get_or_init(|| voronoi(&self.points))
    }

    /// Score of a single element under `metric`. The element must match the
    /// metric's kind.
    pub fn score(&self, metric: MetricId, element: ElementId) -> f64 {
        let ps = &*self.points;
        match (metric, element) {
            (MetricId::OpposingAngles, ElementId::Quadrilateral(q)) => opposing_angles(ps, q).value,
            (MetricId::DualEdgeRatio, ElementId::Quadrilateral(q)) => dual_edge_ratio(ps, q).value,
            (MetricId::DualAreaOverlap, ElementId::Quadrilateral(q)) => {
                dual_area_overlap(ps, q).value
            }
            (MetricId::Lens, ElementId::Edge(e)) => lens(e, ps).value,
            (MetricId::ShrunkCircle, ElementId::Edge(e)) => shrunk_circle(e, self.voronoi()).value,
            (MetricId::TriangularLens, ElementId::Triangle(t)) => triangular_lens(t, ps).value,
            (MetricId::ShrunkCircumcircle, ElementId::Triangle(t)) => {
                shrunk_circumcircle(t, self.voronoi()).value
            }
            (m, e) => panic!("metric {m} does not score element {e:?}"),
        }
    }
}

/// The elements `metric` decomposes `t` into, in canonical order.
pub fn elements(t: &Triangulation, metric: MetricId) -> Vec<ElementId> {
    match metric.kind() {
        ElementKind::Quadrilateral => t
            .interior_quadrilaterals()
            .into_iter()
            .map(ElementId::Quadrilateral)
            .collect(),
        ElementKind::Edge => t.edges().into_iter().map(ElementId::Edge).collect(),
        ElementKind::Triangle => t.triangles().iter().map(|&t| ElementId::Triangle(t)).collect(),
    }
}

/// One score per element of the metric's decomposition, in canonical order.
pub fn evaluate(t: &Triangulation, metric: MetricId) -> Vec<ElementScore> {
    evaluate_with(&MetricContext::new(t.points()), t, metric)
}

pub fn evaluate_with(ctx: &MetricContext, t: &Triangulation, metric: MetricId) -> Vec<ElementScore> {
    let orientation = metric.orientation();
    elements(t, metric)
        .into_iter()
        .map(|element| ElementScore {
            element,
            value: ctx.score(metric, element),
            orientation,
        })
        .collect()
}
