//! Batch driver: every point set × constraint × metric × mode, with an SVG per
//! cell and a deterministic JSON report.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::delaunay::{cdt, delaunay};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::io::{parse_points, round_sig};
use crate::metrics::MetricId;
use crate::optimize::{AggregationMode, OptimizeOutcome, Optimizer};
use crate::point_set::PointSet;
use crate::svg::render_svg;
use crate::triangulation::{convex_hull, edge, Constraint, Edge, Triangulation};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub struct RandomSource {
    pub n: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSetSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<(f64, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random: Option<RandomSource>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixture: Option<String>,
    /// Edges for required-edge runs; picked automatically when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub required_edges: Option<Vec<Edge>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConstraintSpec {
    RequiredEdges,
    MinTotalLength { factor: f64 },
    MaxTotalLength { factor: f64 },
    MaxDegree { bound: usize },
}

impl ConstraintSpec {
    /// Short label used in file names.
    pub fn label(&self) -> &'static str {
        match self {
            ConstraintSpec::RequiredEdges => "cdt",
            ConstraintSpec::MinTotalLength { .. } => "minLength",
            ConstraintSpec::MaxTotalLength { .. } => "maxLength",
            ConstraintSpec::MaxDegree { .. } => "maxDegree",
        }
    }

    fn validate(&self) -> Result<()> {
        self.resolve(BTreeSet::new()).validate()
    }

    fn resolve(&self, required: BTreeSet<Edge>) -> Constraint {
        match *self {
            ConstraintSpec::RequiredEdges => Constraint::RequiredEdges(required),
            ConstraintSpec::MinTotalLength { factor } => Constraint::MinTotalLength(factor),
            ConstraintSpec::MaxTotalLength { factor } => Constraint::MaxTotalLength(factor),
            ConstraintSpec::MaxDegree { bound } => Constraint::MaxDegree(bound),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub output_dir: PathBuf,
    pub point_sets: Vec<PointSetSpec>,
    pub constraints: Vec<ConstraintSpec>,
    #[serde(default = "all_metrics")]
    pub metrics: Vec<MetricId>,
    #[serde(default = "all_modes")]
    pub modes: Vec<AggregationMode>,
}

fn all_metrics() -> Vec<MetricId> {
    MetricId::ALL.to_vec()
}

fn all_modes() -> Vec<AggregationMode> {
    AggregationMode::ALL.to_vec()
}

impl ExperimentSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ExperimentSpec =
            serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        for c in &spec.constraints {
            c.validate()?;
        }
        for ps in &spec.point_sets {
            let sources = [
                ps.file.is_some(),
                ps.points.is_some(),
                ps.random.is_some(),
                ps.fixture.is_some(),
            ];
            if sources.iter().filter(|&&s| s).count() != 1 {
                return Err(Error::InvalidSpec(format!(
                    "point set '{}' needs exactly one of file, points, random, fixture",
                    ps.name
                )));
            }
        }
        Ok(spec)
    }

    /// Reads an experiment file and checks that every referenced file exists. Relative
    /// paths are resolved against the experiment file's directory.
    pub fn load(path: &Path) -> Result<(Self, PathBuf)> {
        let spec = Self::from_json(&fs::read_to_string(path)?)?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        for ps in &spec.point_sets {
            if let Some(file) = &ps.file {
                if !base.join(file).is_file() {
                    return Err(Error::InvalidSpec(format!(
                        "point file '{}' does not exist",
                        file.display()
                    )));
                }
            }
        }
        Ok((spec, base))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CellStatus {
    Optimal,
    NoFeasible,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointSetInfo {
    pub index: usize,
    pub name: String,
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub n: usize,
    pub required_edges: Vec<Edge>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellReport {
    pub point_set: usize,
    pub constraint: String,
    pub metric: MetricId,
    pub mode: AggregationMode,
    pub status: CellStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub triangles: Option<Vec<[usize; 3]>>,
    /// Sum, or worst element in bottleneck mode.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aggregate: Option<f64>,
    /// Edges of the optimum missing from the reference triangulation.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge_diff: Option<Vec<Edge>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matches_reference: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub svg: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Cells sharing a point set, constraint and mode.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupReport {
    pub point_set: usize,
    pub constraint: String,
    pub mode: AggregationMode,
    /// `cdt` for required-edge runs, `dt` otherwise.
    pub reference: String,
    pub reference_svg: Option<String>,
    pub metrics: Vec<MetricId>,
    /// `agreement[i][j]`: metrics `i` and `j` chose the same triangulation
    /// (or both found none).
    pub agreement: Vec<Vec<bool>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub point_sets: Vec<PointSetInfo>,
    pub cells: Vec<CellReport>,
    pub groups: Vec<GroupReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellTiming {
    pub point_set: usize,
    pub constraint: String,
    pub metric: MetricId,
    pub mode: AggregationMode,
    pub seconds: f64,
}

/// Report plus the wall times, which are kept apart so the report itself is
/// reproducible byte for byte.
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub report: RunReport,
    pub timings: Vec<CellTiming>,
}

fn load_point_set(spec: &PointSetSpec, base: &Path) -> Result<(PointSet, String, Option<u64>)> {
    if let Some(file) = &spec.file {
        let path = base.join(file);
        let ps = parse_points(&fs::read_to_string(&path)?)?;
        return Ok((ps, format!("file:{}", file.display()), None));
    }
    if let Some(points) = &spec.points {
        return Ok((PointSet::from_coords(points)?, "inline".into(), None));
    }
    if let Some(r) = &spec.random {
        return Ok((PointSet::random(r.n, r.seed)?, "random".into(), Some(r.seed)));
    }
    if let Some(name) = &spec.fixture {
        return Ok((fixtures::by_name(name)?, format!("fixture:{name}"), None));
    }
    Err(Error::InvalidSpec(format!("point set '{}' has no source", spec.name)))
}

/// The shortest non-Delaunay edge, preferring ones not joining two hull
/// points. Empty when every pair is a Delaunay edge.
pub fn pick_required_edge(dt: &Triangulation) -> BTreeSet<Edge> {
    let pts = dt.points();
    let dt_edges: BTreeSet<Edge> = dt.edges().into_iter().collect();
    let hull: BTreeSet<usize> = convex_hull(pts.points()).into_iter().collect();
    let n = pts.len();
    let candidates: Vec<Edge> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|e| !dt_edges.contains(e))
        .collect();
    let length = |e: &Edge| pts[e.0].dist(pts[e.1]);
    let shortest = |it: &mut dyn Iterator<Item = &Edge>| {
        it.min_by(|a, b| length(a).total_cmp(&length(b)).then(a.cmp(b)))
            .copied()
    };
    let inner = shortest(
        &mut candidates
            .iter()
            .filter(|e| !(hull.contains(&e.0) && hull.contains(&e.1))),
    );
    inner
        .or_else(|| shortest(&mut candidates.iter()))
        .into_iter()
        .collect()
}

struct Loaded {
    info: PointSetInfo,
    points: Option<Arc<PointSet>>,
}

pub fn run_experiment(spec: &ExperimentSpec, base: &Path) -> Result<ExperimentOutput> {
    let out_dir = base.join(&spec.output_dir);
    fs::create_dir_all(&out_dir)?;

    let loaded: Vec<Loaded> = spec
        .point_sets
        .iter()
        .enumerate()
        .map(|(index, ps_spec)| match load_point_set(ps_spec, base) {
            Ok((ps, source, seed)) => {
                let ps = Arc::new(ps);
                let required = match &ps_spec.required_edges {
                    Some(edges) => edges.iter().map(|&(a, b)| edge(a, b)).collect(),
                    None => pick_required_edge(&delaunay(&ps)),
                };
                Loaded {
                    info: PointSetInfo {
                        index,
                        name: ps_spec.name.clone(),
                        source,
                        seed,
                        n: ps.len(),
                        required_edges: required.into_iter().collect(),
                        error: None,
                    },
                    points: Some(ps),
                }
            }
            Err(e) => Loaded {
                info: PointSetInfo {
                    index,
                    name: ps_spec.name.clone(),
                    source: "unavailable".into(),
                    seed: ps_spec.random.as_ref().map(|r| r.seed),
                    n: 0,
                    required_edges: Vec::new(),
                    error: Some(e.to_string()),
                },
                points: None,
            },
        })
        .collect();

    let per_set: Vec<Result<PointSetRun>> = loaded
        .par_iter()
        .map(|l| run_point_set(spec, &out_dir, l))
        .collect();

    let mut cells = Vec::new();
    let mut groups = Vec::new();
    let mut timings = Vec::new();
    for r in per_set {
        let (c, g, t) = r?;
        cells.extend(c);
        groups.extend(g);
        timings.extend(t);
    }
    let report = RunReport {
        point_sets: loaded.into_iter().map(|l| l.info).collect(),
        cells,
        groups,
    };
    fs::write(out_dir.join("report.json"), serde_json::to_string_pretty(&report)? + "\n")?;
    fs::write(out_dir.join("timings.json"), serde_json::to_string_pretty(&timings)? + "\n")?;
    Ok(ExperimentOutput { report, timings })
}

fn error_cell(index: usize, label: &str, metric: MetricId, mode: AggregationMode, msg: String) -> CellReport {
    CellReport {
        point_set: index,
        constraint: label.to_string(),
        metric,
        mode,
        status: CellStatus::Error,
        triangles: None,
        aggregate: None,
        edge_diff: None,
        matches_reference: None,
        svg: None,
        error: Some(msg),
    }
}

type PointSetRun = (Vec<CellReport>, Vec<GroupReport>, Vec<CellTiming>);

fn run_point_set(spec: &ExperimentSpec, out_dir: &Path, loaded: &Loaded) -> Result<PointSetRun> {
    let index = loaded.info.index;
    let mut cells = Vec::new();
    let mut groups = Vec::new();
    let mut timings = Vec::new();

    let optimizer = match &loaded.points {
        Some(ps) => Optimizer::new(ps).map_err(|e| e.to_string()),
        None => Err(loaded.info.error.clone().unwrap_or_default()),
    };
    let required: BTreeSet<Edge> = loaded.info.required_edges.iter().copied().collect();

    for cspec in &spec.constraints {
        let label = cspec.label();
        let constraint = cspec.resolve(required.clone());
        let opt = match &optimizer {
            Ok(opt) => opt,
            Err(msg) => {
                for &mode in &spec.modes {
                    for &metric in &spec.metrics {
                        cells.push(error_cell(index, label, metric, mode, msg.clone()));
                    }
                }
                continue;
            }
        };
        let is_cdt = matches!(cspec, ConstraintSpec::RequiredEdges);
        let reference = if is_cdt {
            cdt(opt.points(), &required)
        } else {
            Ok(opt.delaunay().clone())
        };
        let reference = match reference {
            Ok(t) => t,
            Err(e) => {
                for &mode in &spec.modes {
                    for &metric in &spec.metrics {
                        cells.push(error_cell(index, label, metric, mode, e.to_string()));
                    }
                }
                continue;
            }
        };
        let red: BTreeSet<Edge> = if is_cdt { required.clone() } else { BTreeSet::new() };
        let reference_svg = format!("{label}{index}_reference.svg");
        fs::write(out_dir.join(&reference_svg), render_svg(&reference, &red, &BTreeSet::new()))?;

        for &mode in &spec.modes {
            let mode_label = match mode {
                AggregationMode::Sum => "sum",
                AggregationMode::BottleneckLex => "max",
            };
            let mut chosen: Vec<Option<Option<Triangulation>>> = Vec::new();
            for &metric in &spec.metrics {
                let start = Instant::now();
                let outcome = opt.optimize(&constraint, metric, mode);
                let seconds = start.elapsed().as_secs_f64();
                timings.push(CellTiming {
                    point_set: index,
                    constraint: label.to_string(),
                    metric,
                    mode,
                    seconds,
                });
                let svg_name = format!("{label}{index}{mode_label}_{metric}.svg");
                let cell = match outcome {
                    Ok(OptimizeOutcome::Optimal(best)) => {
                        let diff = best.triangulation.edge_diff(&reference)?;
                        fs::write(out_dir.join(&svg_name), render_svg(&best.triangulation, &red, &diff))?;
                        let cell = CellReport {
                            point_set: index,
                            constraint: label.to_string(),
                            metric,
                            mode,
                            status: CellStatus::Optimal,
                            triangles: Some(best.triangulation.triangles().to_vec()),
                            aggregate: Some(round_sig(best.aggregate)),
                            matches_reference: Some(diff.is_empty()),
                            edge_diff: Some(diff.into_iter().collect()),
                            svg: Some(svg_name),
                            error: None,
                        };
                        chosen.push(Some(Some(best.triangulation)));
                        cell
                    }
                    Ok(OptimizeOutcome::NoFeasible) => {
                        // nothing satisfies the constraint: show the Delaunay triangulation
                        fs::write(
                            out_dir.join(&svg_name),
                            render_svg(opt.delaunay(), &red, &BTreeSet::new()),
                        )?;
                        chosen.push(Some(None));
                        CellReport {
                            point_set: index,
                            constraint: label.to_string(),
                            metric,
                            mode,
                            status: CellStatus::NoFeasible,
                            triangles: None,
                            aggregate: None,
                            edge_diff: None,
                            matches_reference: None,
                            svg: Some(svg_name),
                            error: None,
                        }
                    }
                    Err(e) => {
                        chosen.push(None);
                        error_cell(index, label, metric, mode, e.to_string())
                    }
                };
                cells.push(cell);
            }
            let agreement = (0..chosen.len())
                .map(|i| {
                    (0..chosen.len())
                        .map(|j| i == j || (chosen[i].is_some() && chosen[i] == chosen[j]))
                        .collect()
                })
                .collect();
            groups.push(GroupReport {
                point_set: index,
                constraint: label.to_string(),
                mode,
                reference: if is_cdt { "cdt" } else { "dt" }.to_string(),
                reference_svg: Some(reference_svg.clone()),
                metrics: spec.metrics.clone(),
                agreement,
            });
        }
    }
    Ok((cells, groups, timings))
}
