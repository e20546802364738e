//! Aggregating element scores and exhaustive constrained optimization.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::delaunay::delaunay;
use crate::enumerate::enumerate_triangulations_capped;
use crate::enumerate::DEFAULT_ENUMERATION_CAP;
use crate::error::{Error, Result};
use crate::metrics::{elements, ElementId, ElementScore, MetricContext, MetricId, ScoreOrientation};
use crate::point_set::PointSet;
use crate::triangulation::{Constraint, Triangulation};

/// Absolute tolerance before two sorted elements count as different.
pub const LEX_TOLERANCE: f64 = 1e-12;
/// Relative tolerance before two sums count as different.
pub const SUM_TOLERANCE: f64 = 1e-9;

const CHUNK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AggregationMode {
    Sum,
    BottleneckLex,
}

impl AggregationMode {
    pub const ALL: [AggregationMode; 2] = [AggregationMode::Sum, AggregationMode::BottleneckLex];

    pub fn name(self) -> &'static str {
        match self {
            AggregationMode::Sum => "sum",
            AggregationMode::BottleneckLex => "bottleneck",
        }
    }
}

impl fmt::Display for AggregationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AggregationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sum" => Ok(AggregationMode::Sum),
            "bottleneck" | "bottleneck_lex" | "max" => Ok(AggregationMode::BottleneckLex),
            _ => Err(Error::InvalidSpec(format!("unknown aggregation mode '{s}'"))),
        }
    }
}

/// Element scores of one triangulation under one metric, in canonical element order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreVector {
    pub metric: MetricId,
    pub orientation: ScoreOrientation,
    pub values: Vec<f64>,
}

impl ScoreVector {
    pub fn new(metric: MetricId, values: Vec<f64>) -> Self {
        ScoreVector {
            metric,
            orientation: metric.orientation(),
            values,
        }
    }

    pub fn from_scores(metric: MetricId, scores: &[ElementScore]) -> Self {
        Self::new(metric, scores.iter().map(|s| s.value).collect())
    }

    /// Values ordered worst first.
    pub fn sorted_worst_first(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        match self.orientation {
            ScoreOrientation::LowerBetter => v.sort_by(|a, b| b.total_cmp(a)),
            ScoreOrientation::HigherBetter => v.sort_by(f64::total_cmp),
        }
        v
    }

    /// The worst element value, or the perfect value for an empty vector.
    pub fn worst(&self) -> f64 {
        self.sorted_worst_first()
            .first()
            .copied()
            .unwrap_or_else(|| self.metric.perfect())
    }

    /// The headline number for a mode: the sum, or the worst element.
    pub fn aggregate(&self, mode: AggregationMode) -> f64 {
        match mode {
            AggregationMode::Sum => aggregate_sum(self),
            AggregationMode::BottleneckLex => self.worst(),
        }
    }
}

pub fn aggregate_sum(sv: &ScoreVector) -> f64 {
    sv.values.iter().sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    ACloser,
    BCloser,
    Equal,
}

/// Compares worst elements first; the first pair differing by more than
/// [`LEX_TOLERANCE`] decides.
pub fn compare_bottleneck_lex(a: &ScoreVector, b: &ScoreVector) -> Result<Comparison> {
    if a.metric != b.metric || a.orientation != b.orientation {
        return Err(Error::IncomparableScores);
    }
    Ok(lex_compare(a.orientation, &a.sorted_worst_first(), &b.sorted_worst_first()))
}

fn lex_compare(orientation: ScoreOrientation, a: &[f64], b: &[f64]) -> Comparison {
    for (&x, &y) in a.iter().zip(b) {
        if orientation.better(x, y, LEX_TOLERANCE) {
            return Comparison::ACloser;
        }
        if orientation.better(y, x, LEX_TOLERANCE) {
            return Comparison::BCloser;
        }
    }
    Comparison::Equal
}

fn compare_sum(orientation: ScoreOrientation, a: f64, b: f64) -> Comparison {
    let tol = SUM_TOLERANCE * a.abs().max(b.abs());
    if orientation.better(a, b, tol) {
        Comparison::ACloser
    } else if orientation.better(b, a, tol) {
        Comparison::BCloser
    } else {
        Comparison::Equal
    }
}

#[derive(Debug, Clone)]
pub struct Optimum {
    pub triangulation: Triangulation,
    pub scores: ScoreVector,
    /// Sum, or worst element for bottleneck mode.
    pub aggregate: f64,
}

#[derive(Debug, Clone)]
pub enum OptimizeOutcome {
    Optimal(Optimum),
    NoFeasible,
}

impl OptimizeOutcome {
    pub fn triangulation(&self) -> Option<&Triangulation> {
        match self {
            OptimizeOutcome::Optimal(o) => Some(&o.triangulation),
            OptimizeOutcome::NoFeasible => None,
        }
    }
}

/// Enumerates a point set's triangulations once and answers repeated
/// optimization queries. Element scores are cached per metric, since most
/// elements are shared by many triangulations.
pub struct Optimizer {
    triangulations: Vec<Triangulation>,
    delaunay: Triangulation,
    delaunay_length: f64,
    context: MetricContext,
    cache: [OnceLock<HashMap<ElementId, f64>>; 7],
    elements: [OnceLock<Vec<Vec<ElementId>>>; 3],
}

impl Optimizer {
    pub fn new(points: &Arc<PointSet>) -> Result<Self> {
        Self::with_cap(points, DEFAULT_ENUMERATION_CAP)
    }

    pub fn with_cap(points: &Arc<PointSet>, cap: usize) -> Result<Self> {
        let triangulations = enumerate_triangulations_capped(points, cap)?;
        let dt = delaunay(points);
        Ok(Optimizer {
            triangulations,
            delaunay_length: dt.total_edge_length(),
            delaunay: dt,
            context: MetricContext::new(points),
            cache: Default::default(),
            elements: Default::default(),
        })
    }

    pub fn points(&self) -> &Arc<PointSet> {
        self.context.points()
    }

    pub fn triangulations(&self) -> &[Triangulation] {
        &self.triangulations
    }

    pub fn delaunay(&self) -> &Triangulation {
        &self.delaunay
    }

    pub fn delaunay_length(&self) -> f64 {
        self.delaunay_length
    }

    pub fn context(&self) -> &MetricContext {
        &self.context
    }

    fn elements_of(&self, metric: MetricId) -> &Vec<Vec<ElementId>> {
        let slot = match metric.kind() {
            crate::metrics::ElementKind::Quadrilateral => 0,
            crate::metrics::ElementKind::Edge => 1,
            crate::metrics::ElementKind::Triangle => 2,
        };
        self.elements[slot].get_or_init(|| {
            self.triangulations
                .par_iter()
                .map(|t| elements(t, metric))
                .collect()
        })
    }

    fn scores_of(&self, metric: MetricId) -> &HashMap<ElementId, f64> {
        let slot = MetricId::ALL.iter().position(|&m| m == metric).unwrap();
        self.cache[slot].get_or_init(|| {
            let unique: BTreeSet<ElementId> = self.elements_of(metric).iter().flatten().copied().collect();
            let unique: Vec<ElementId> = unique.into_iter().collect();
            let values: Vec<f64> = unique
                .par_iter()
                .map(|&e| self.context.score(metric, e))
                .collect();
            unique.into_iter().zip(values).collect()
        })
    }

    /// Score vector of the `index`-th enumerated triangulation.
    pub fn score_vector(&self, index: usize, metric: MetricId) -> ScoreVector {
        let cache = self.scores_of(metric);
        let values = self.elements_of(metric)[index].iter().map(|e| cache[e]).collect();
        ScoreVector::new(metric, values)
    }

    /// Indices of the enumerated triangulations satisfying `constraint`.
    pub fn feasible(&self, constraint: &Constraint) -> Vec<usize> {
        (0..self.triangulations.len())
            .filter(|&i| self.triangulations[i].satisfies(constraint, self.delaunay_length))
            .collect()
    }

    pub fn optimize(
        &self,
        constraint: &Constraint,
        metric: MetricId,
        mode: AggregationMode,
    ) -> Result<OptimizeOutcome> {
        constraint.validate()?;
        let feasible = self.feasible(constraint);
        if feasible.is_empty() {
            return Ok(OptimizeOutcome::NoFeasible);
        }
        let orientation = metric.orientation();
        let key = |i: usize| -> (usize, Vec<f64>, f64) {
            let sv = self.score_vector(i, metric);
            let sorted = sv.sorted_worst_first();
            (i, sorted, aggregate_sum(&sv))
        };
        // earlier canonical index wins ties, so only a strict improvement replaces
        let pick = |best: (usize, Vec<f64>, f64), next: (usize, Vec<f64>, f64)| {
            let cmp = match mode {
                AggregationMode::Sum => compare_sum(orientation, next.2, best.2),
                AggregationMode::BottleneckLex => lex_compare(orientation, &next.1, &best.1),
            };
            if cmp == Comparison::ACloser {
                next
            } else {
                best
            }
        };
        let winners: Vec<(usize, Vec<f64>, f64)> = feasible
            .par_chunks(CHUNK)
            .map(|chunk| {
                let mut it = chunk.iter().map(|&i| key(i));
                let first = it.next().expect("chunks are non-empty");
                it.fold(first, pick)
            })
            .collect();
        let mut it = winners.into_iter();
        let first = it.next().expect("at least one feasible triangulation");
        let (index, _, _) = it.fold(first, pick);
        let triangulation = self.triangulations[index].clone();
        debug_assert!(triangulation.satisfies(constraint, self.delaunay_length));
        let scores = self.score_vector(index, metric);
        Ok(OptimizeOutcome::Optimal(Optimum {
            aggregate: scores.aggregate(mode),
            triangulation,
            scores,
        }))
    }
}

/// One-shot optimization; prefer [`Optimizer`] for repeated queries.
pub fn optimize(
    points: &Arc<PointSet>,
    constraint: &Constraint,
    metric: MetricId,
    mode: AggregationMode,
) -> Result<OptimizeOutcome> {
    Optimizer::new(points)?.optimize(constraint, metric, mode)
}
