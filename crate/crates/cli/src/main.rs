use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use neardelaunay::experiment::{run_experiment, CellStatus, ExperimentSpec};
use neardelaunay::io::{json_number, parse_points, parse_triangulation, write_triangulation};
use neardelaunay::metrics::evaluate;
use neardelaunay::svg::render_svg;
use neardelaunay::triangulation::edge;
use neardelaunay::{
    cdt, delaunay, enumerate_triangulations_capped, AggregationMode, Constraint, Edge, Error,
    MetricId, OptimizeOutcome, Optimizer, PointSet, ScoreVector, Triangulation,
};

/// Exit status when a constraint admits no triangulation.
const EXIT_NO_FEASIBLE: u8 = 2;

#[derive(Parser)]
#[command(name = "neardelaunay", version, about = "Near-Delaunay metrics and constrained optimal triangulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score a triangulation under one or more metrics (JSON on stdout).
    Score {
        points: PathBuf,
        triangulation: PathBuf,
        /// Metric to report; repeatable, all metrics when omitted.
        #[arg(long = "metric")]
        metrics: Vec<MetricId>,
        #[arg(long, default_value = "sum")]
        mode: AggregationMode,
    },
    /// Find the best triangulation under a constraint.
    Optimize {
        #[command(flatten)]
        input: PointsInput,
        #[command(flatten)]
        constraint: ConstraintArgs,
        #[arg(long)]
        metric: MetricId,
        #[arg(long, default_value = "sum")]
        mode: AggregationMode,
        #[command(flatten)]
        output: Output,
    },
    /// Delaunay triangulation.
    Delaunay {
        #[command(flatten)]
        input: PointsInput,
        #[command(flatten)]
        output: Output,
    },
    /// Constrained Delaunay triangulation containing the required edges.
    Cdt {
        #[command(flatten)]
        input: PointsInput,
        #[arg(long = "required-edge", value_parser = parse_edge, required = true)]
        required_edges: Vec<Edge>,
        #[command(flatten)]
        output: Output,
    },
    /// List every triangulation, or only count them.
    Enumerate {
        #[command(flatten)]
        input: PointsInput,
        #[arg(long)]
        count: bool,
        /// Largest point count accepted.
        #[arg(long, default_value_t = neardelaunay::enumerate::DEFAULT_ENUMERATION_CAP)]
        cap: usize,
    },
    /// Draw a triangulation, marking edges absent from the Delaunay (or
    /// constrained Delaunay) triangulation in green.
    Render {
        triangulation: PathBuf,
        #[arg(long = "required-edge", value_parser = parse_edge)]
        required_edges: Vec<Edge>,
        #[arg(long)]
        svg: PathBuf,
    },
    /// Run a batch experiment described by a JSON file.
    Experiment { spec: PathBuf },
}

#[derive(Args)]
struct PointsInput {
    /// Point file; omit to use --seed.
    #[arg(required_unless_present = "seed", conflicts_with = "seed")]
    points: Option<PathBuf>,
    /// Random points in the unit square from this seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 10, requires = "seed")]
    n_points: usize,
}

impl PointsInput {
    fn load(&self) -> neardelaunay::Result<Arc<PointSet>> {
        let ps = match (&self.points, self.seed) {
            (Some(path), _) => parse_points(&read(path)?)?,
            (None, Some(seed)) => PointSet::random(self.n_points, seed)?,
            (None, None) => unreachable!("clap requires one source"),
        };
        Ok(Arc::new(ps))
    }
}

#[derive(Args)]
struct ConstraintArgs {
    /// Edge `i,j` that must appear; repeatable.
    #[arg(long = "required-edge", value_parser = parse_edge)]
    required_edges: Vec<Edge>,
    /// Total edge length at least F times the Delaunay total.
    #[arg(long)]
    min_length_factor: Option<f64>,
    /// Total edge length at most F times the Delaunay total.
    #[arg(long)]
    max_length_factor: Option<f64>,
    /// Every vertex degree at most K.
    #[arg(long)]
    max_degree: Option<usize>,
}

impl ConstraintArgs {
    fn constraint(&self) -> neardelaunay::Result<Constraint> {
        let mut found = Vec::new();
        if !self.required_edges.is_empty() {
            found.push(Constraint::required_edges(self.required_edges.iter().copied()));
        }
        if let Some(f) = self.min_length_factor {
            found.push(Constraint::MinTotalLength(f));
        }
        if let Some(f) = self.max_length_factor {
            found.push(Constraint::MaxTotalLength(f));
        }
        if let Some(k) = self.max_degree {
            found.push(Constraint::MaxDegree(k));
        }
        if found.len() != 1 {
            return Err(Error::InvalidConstraint(format!(
                "exactly one constraint kind is needed, got {}",
                found.len()
            )));
        }
        let c = found.pop().unwrap();
        c.validate()?;
        Ok(c)
    }
}

#[derive(Args)]
struct Output {
    /// Write the triangulation here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

impl Output {
    fn emit(&self, t: &Triangulation) -> neardelaunay::Result<()> {
        let text = write_triangulation(t);
        match &self.output {
            Some(path) => fs::write(path, text)?,
            None => print!("{text}"),
        }
        Ok(())
    }

    fn svg(&self, t: &Triangulation, red: &BTreeSet<Edge>, green: &BTreeSet<Edge>) -> neardelaunay::Result<()> {
        if let Some(path) = &self.svg {
            fs::write(path, render_svg(t, red, green))?;
        }
        Ok(())
    }
}

fn parse_edge(s: &str) -> Result<Edge, String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected 'i,j', got '{s}'"))?;
    let a: usize = a.trim().parse().map_err(|_| format!("invalid index '{a}'"))?;
    let b: usize = b.trim().parse().map_err(|_| format!("invalid index '{b}'"))?;
    Ok(edge(a, b))
}

fn read(path: &Path) -> neardelaunay::Result<String> {
    fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    })
}

enum Done {
    Ok,
    NoFeasible,
}

fn run(cli: Cli) -> neardelaunay::Result<Done> {
    match cli.command {
        Command::Score {
            points,
            triangulation,
            metrics,
            mode,
        } => {
            let ps = parse_points(&read(&points)?)?;
            let t = parse_triangulation(&read(&triangulation)?)?;
            if ps != **t.points() {
                return Err(Error::MismatchedPointSets);
            }
            let metrics = if metrics.is_empty() { MetricId::ALL.to_vec() } else { metrics };
            let mut report = Map::new();
            for metric in metrics {
                let scores = evaluate(&t, metric);
                let elements: Vec<Value> = scores
                    .iter()
                    .map(|s| json!({"element": s.element, "value": json_number(s.value)}))
                    .collect();
                let aggregate = ScoreVector::from_scores(metric, &scores).aggregate(mode);
                report.insert(
                    metric.to_string(),
                    json!({"elements": elements, "aggregate": json_number(aggregate)}),
                );
            }
            println!("{}", serde_json::to_string_pretty(&Value::Object(report))?);
            Ok(Done::Ok)
        }
        Command::Optimize {
            input,
            constraint,
            metric,
            mode,
            output,
        } => {
            let constraint = constraint.constraint()?;
            let ps = input.load()?;
            let opt = Optimizer::new(&ps)?;
            let (red, reference) = match &constraint {
                Constraint::RequiredEdges(edges) => (edges.clone(), cdt(&ps, edges)?),
                _ => (BTreeSet::new(), opt.delaunay().clone()),
            };
            match opt.optimize(&constraint, metric, mode)? {
                OptimizeOutcome::Optimal(best) => {
                    let diff = best.triangulation.edge_diff(&reference)?;
                    output.svg(&best.triangulation, &red, &diff)?;
                    output.emit(&best.triangulation)?;
                    Ok(Done::Ok)
                }
                OptimizeOutcome::NoFeasible => {
                    output.svg(opt.delaunay(), &red, &BTreeSet::new())?;
                    Ok(Done::NoFeasible)
                }
            }
        }
        Command::Delaunay { input, output } => {
            let t = delaunay(&input.load()?);
            output.svg(&t, &BTreeSet::new(), &BTreeSet::new())?;
            output.emit(&t)?;
            Ok(Done::Ok)
        }
        Command::Cdt {
            input,
            required_edges,
            output,
        } => {
            let ps = input.load()?;
            let required: BTreeSet<Edge> = required_edges.into_iter().collect();
            let t = cdt(&ps, &required)?;
            let diff = t.edge_diff(&delaunay(&ps))?;
            output.svg(&t, &required, &diff)?;
            output.emit(&t)?;
            Ok(Done::Ok)
        }
        Command::Enumerate { input, count, cap } => {
            let all = enumerate_triangulations_capped(&input.load()?, cap)?;
            if count {
                println!("{}", all.len());
            } else {
                let texts: Vec<String> = all.iter().map(write_triangulation).collect();
                print!("{}", texts.join("\n"));
            }
            Ok(Done::Ok)
        }
        Command::Render {
            triangulation,
            required_edges,
            svg,
        } => {
            let t = parse_triangulation(&read(&triangulation)?)?;
            let required: BTreeSet<Edge> = required_edges.into_iter().collect();
            let reference = if required.is_empty() {
                delaunay(t.points())
            } else {
                cdt(t.points(), &required)?
            };
            let diff = t.edge_diff(&reference)?;
            fs::write(svg, render_svg(&t, &required, &diff))?;
            Ok(Done::Ok)
        }
        Command::Experiment { spec } => {
            let (spec, base) = ExperimentSpec::load(&spec)?;
            let out = run_experiment(&spec, &base)?;
            let count = |s: CellStatus| out.report.cells.iter().filter(|c| c.status == s).count();
            println!(
                "{} cells: {} optimal, {} no feasible, {} errors; report in {}",
                out.report.cells.len(),
                count(CellStatus::Optimal),
                count(CellStatus::NoFeasible),
                count(CellStatus::Error),
                base.join(&spec.output_dir).join("report.json").display()
            );
            Ok(Done::Ok)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Done::Ok) => ExitCode::SUCCESS,
        Ok(Done::NoFeasible) => {
            eprintln!("no feasible triangulation");
            ExitCode::from(EXIT_NO_FEASIBLE)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
