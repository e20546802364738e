mod common;

use std::collections::BTreeSet;
use std::fs;

use common::*;
use neardelaunay::experiment::{run_experiment, CellStatus, ExperimentSpec};
use neardelaunay::{
    cdt, enumerate_triangulations, evaluate, AggregationMode, Constraint, MetricId, OptimizeOutcome,
    Optimizer, PointSet, ScoreOrientation,
};

/// Worst-first values with "worse" meaning larger for lower-is-better.
fn badness(metric: MetricId, values: &[f64]) -> Vec<f64> {
    let mut b: Vec<f64> = values
        .iter()
        .map(|&v| match metric.orientation() {
            ScoreOrientation::LowerBetter => v,
            ScoreOrientation::HigherBetter => -v,
        })
        .collect();
    b.sort_by(|x, y| y.total_cmp(x));
    b
}

/// Best objective found by scoring every feasible triangulation directly.
fn brute_force(ps: &std::sync::Arc<PointSet>, c: &Constraint, metric: MetricId, mode: AggregationMode) -> Option<Vec<f64>> {
    let all = enumerate_triangulations(ps).unwrap();
    let dt_len = neardelaunay::delaunay(ps).total_edge_length();
    all.iter()
        .filter(|t| t.satisfies(c, dt_len))
        .map(|t| {
            let values: Vec<f64> = evaluate(t, metric).iter().map(|s| s.value).collect();
            match mode {
                AggregationMode::Sum => vec![badness(metric, &[values.iter().sum()])[0]],
                AggregationMode::BottleneckLex => badness(metric, &values),
            }
        })
        .min_by(|a, b| a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal))
}

#[test]
fn optimum_matches_brute_force() {
    for seed in 0..4 {
        let ps = arc(PointSet::random(7, seed).unwrap());
        let opt = Optimizer::new(&ps).unwrap();
        let constraints = [
            Constraint::MaxDegree(4),
            Constraint::MinTotalLength(1.1),
            Constraint::required_edges(opt.triangulations()[0].edges().into_iter().take(3)),
        ];
        for c in &constraints {
            for metric in MetricId::ALL {
                for mode in AggregationMode::ALL {
                    let want = brute_force(&ps, c, metric, mode);
                    match opt.optimize(c, metric, mode).unwrap() {
                        OptimizeOutcome::NoFeasible => assert!(want.is_none()),
                        OptimizeOutcome::Optimal(best) => {
                            assert!(best.triangulation.satisfies(c, opt.delaunay_length()));
                            let want = want.expect("feasible");
                            let got = match mode {
                                AggregationMode::Sum => vec![badness(metric, &[best.aggregate])[0]],
                                AggregationMode::BottleneckLex => badness(metric, &best.scores.values),
                            };
                            for (g, w) in got.iter().zip(&want) {
                                assert!((g - w).abs() <= 1e-9 * w.abs().max(1.0), "{metric} {mode}: {got:?} vs {want:?}");
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn unconstrained_optimum_is_delaunay() {
    let ps = arc(PointSet::random(8, 6).unwrap());
    let opt = Optimizer::new(&ps).unwrap();
    for metric in MetricId::ALL {
        for mode in AggregationMode::ALL {
            let o = opt.optimize(&Constraint::unconstrained(), metric, mode).unwrap();
            assert_eq!(o.triangulation().unwrap(), opt.delaunay(), "{metric} {mode}");
        }
    }
}

#[test]
fn required_edge_on_p4_has_one_answer() {
    let ps = p4();
    let opt = Optimizer::new(&ps).unwrap();
    let c = Constraint::required_edges([(0, 1)]);
    let want = cdt(&ps, &BTreeSet::from([(0, 1)])).unwrap();
    for metric in MetricId::ALL {
        let o = opt.optimize(&c, metric, AggregationMode::Sum).unwrap();
        assert_eq!(o.triangulation().unwrap(), &want);
    }
}

#[test]
fn length_bounds() {
    let long = arc(neardelaunay::fixtures::long_delaunay());
    let opt = Optimizer::new(&long).unwrap();
    for c in [Constraint::MinTotalLength(1.2), Constraint::MaxTotalLength(0.8)] {
        let o = opt.optimize(&c, MetricId::Lens, AggregationMode::Sum).unwrap();
        assert!(matches!(o, OptimizeOutcome::Optimal(_)), "{c:?}");
    }
    for seed in 0..5 {
        let ps = arc(PointSet::random(9, seed).unwrap());
        let o = neardelaunay::optimize(&ps, &Constraint::MaxTotalLength(0.8), MetricId::Lens, AggregationMode::Sum);
        assert!(matches!(o.unwrap(), OptimizeOutcome::NoFeasible));
    }
}

#[test]
fn wheel_degree_bound_separates_metrics() {
    let ps = arc(neardelaunay::fixtures::wheel());
    let opt = Optimizer::new(&ps).unwrap();
    let c = Constraint::MaxDegree(5);
    let chosen: BTreeSet<Vec<[usize; 3]>> = MetricId::ALL
        .iter()
        .map(|&m| opt.optimize(&c, m, AggregationMode::Sum).unwrap().triangulation().unwrap().triangles().to_vec())
        .collect();
    assert!(chosen.len() >= 2);
}

#[test]
fn experiment_report_is_reproducible() {
    let dir = tempfile_dir();
    let spec = ExperimentSpec::from_json(
        r#"{
            "output_dir": "out",
            "point_sets": [
                {"name": "a", "random": {"n": 7, "seed": 1}},
                {"name": "w", "fixture": "p4", "required_edges": [[0, 1]]},
                {"name": "bad", "points": [[0, 0], [1, 1], [2, 2]]}
            ],
            "constraints": [
                {"kind": "required_edges"},
                {"kind": "max_total_length", "factor": 0.8},
                {"kind": "max_degree", "bound": 4}
            ],
            "metrics": ["lens", "shrunk_circle", "dual_edge_ratio"]
        }"#,
    )
    .unwrap();
    let first = run_experiment(&spec, &dir).unwrap();
    let bytes = fs::read(dir.join("out/report.json")).unwrap();
    let second = run_experiment(&spec, &dir).unwrap();
    assert_eq!(bytes, fs::read(dir.join("out/report.json")).unwrap());
    assert_eq!(first.report, second.report);

    let report = &first.report;
    assert_eq!(report.cells.len(), 3 * 3 * 3 * 2);
    assert!(report.point_sets[2].error.is_some());
    assert!(report.cells.iter().filter(|c| c.point_set == 2).all(|c| c.status == CellStatus::Error));
    assert!(report
        .cells
        .iter()
        .filter(|c| c.point_set == 0 && c.constraint == "maxLength")
        .all(|c| c.status == CellStatus::NoFeasible));
    for g in &report.groups {
        let n = g.metrics.len();
        for i in 0..n {
            assert!(g.agreement[i][i]);
            for j in 0..n {
                assert_eq!(g.agreement[i][j], g.agreement[j][i]);
            }
        }
    }
    for c in report.cells.iter().filter(|c| c.svg.is_some()) {
        assert!(dir.join("out").join(c.svg.as_ref().unwrap()).exists());
    }
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn empty_metric_list_gives_no_cells() {
    let dir = tempfile_dir();
    let spec = ExperimentSpec::from_json(
        r#"{"output_dir": "o", "point_sets": [{"name": "p", "fixture": "p4"}],
            "constraints": [{"kind": "max_degree", "bound": 3}], "metrics": []}"#,
    )
    .unwrap();
    let out = run_experiment(&spec, &dir).unwrap();
    assert!(out.report.cells.is_empty());
    let text = fs::read_to_string(dir.join("o/report.json")).unwrap();
    assert!(serde_json::from_str::<serde_json::Value>(&text).is_ok());
    fs::remove_dir_all(&dir).unwrap();
}

fn tempfile_dir() -> std::path::PathBuf {
    use std::sync::atomic::{AtomicUsize, Ordering};
    static NEXT: AtomicUsize = AtomicUsize::new(0);
    let dir = std::env::temp_dir().join(format!(
        "neardelaunay-test-{}-{}",
        std::process::id(),
        NEXT.fetch_add(1, Ordering::Relaxed)
    ));
    fs::create_dir_all(&dir).unwrap();
    dir
}
