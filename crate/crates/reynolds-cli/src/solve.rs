//! The `solve` verb: one problem, one pressure table, one run summary.

use crate::config::{self, ProblemConfig, SolverConfig};
use crate::output;
use crate::problem::{self, Problem};
use crate::{EXIT_OK, EXIT_UNCONVERGED};
use reynolds_core::discretize::strip_pressure_to_1d;
use reynolds_core::oracle;
use reynolds_core::solver1d::{complementarity_residual_1d, solve_fast_1d, solve_sor_1d};
use reynolds_core::solver2d::{complementarity_residual, solve_projected, SolveOptions};
use reynolds_core::{Error, PressureField1D, PressureField2D};
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

/// Command-line overrides; each one beats the corresponding config key.
pub struct Overrides {
    pub tol: Option<f64>,
    pub omega: Option<f64>,
    pub max_iter: Option<usize>,
}

#[derive(Clone, Copy, PartialEq)]
enum Method {
    Fast1D,
    Sor1D,
    Projected,
    Oracle,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Fast1D => "fast1d",
            Method::Sor1D => "sor1d",
            Method::Projected => "projected",
            Method::Oracle => "oracle",
        }
    }
}

fn method_of(cfg: &SolverConfig, problem: &Problem) -> Result<Method, String> {
    let requested = cfg.method.as_deref().unwrap_or("auto");
    match (requested, problem) {
        ("auto" | "fast1d", Problem::Line(_)) => Ok(Method::Fast1D),
        ("sor1d", Problem::Line(_)) => Ok(Method::Sor1D),
        ("auto", Problem::Rect(_)) => Ok(Method::Projected),
        ("fast1d" | "sor1d", Problem::Rect(_)) => {
            Err(format!("method {requested} only works on line grids"))
        }
        ("projected", _) => Ok(Method::Projected),
        ("oracle", _) => Ok(Method::Oracle),
        (other, _) => Err(format!(
            "unknown method {other:?}; use auto, fast1d, sor1d, projected, or oracle"
        )),
    }
}

fn solve_options(cfg: &SolverConfig, over: &Overrides) -> Result<SolveOptions, String> {
    let mut opts = SolveOptions::default();
    if let Some(v) = cfg.tol {
        opts.tol = v;
    }
    if let Some(v) = cfg.max_iter {
        opts.max_iter = v;
    }
    if let Some(v) = cfg.omega {
        opts.omega = v;
    }
    if let Some(v) = cfg.per_node_clamp {
        opts.per_node_clamp = v;
    }
    if let Some(v) = cfg.record_history {
        opts.record_history = v;
    }
    if let Some(v) = over.tol {
        opts.tol = v;
    }
    if let Some(v) = over.omega {
        opts.omega = v;
    }
    if let Some(v) = over.max_iter {
        opts.max_iter = v;
    }
    opts.validate().map_err(|e| e.to_string())?;
    Ok(opts)
}

struct Outcome {
    values: Vec<f64>,
    iterations: Option<usize>,
    final_change: Option<f64>,
    converged: bool,
    note: Option<String>,
}

/// Where a solver error should land: bad problem setup is the caller's
/// fault (exit 1), a failure during the run is reported as non-convergence
/// (exit 2).
enum SolverFailure {
    Input(String),
    Runtime(String),
}

fn runtime(e: Error) -> SolverFailure {
    SolverFailure::Runtime(e.to_string())
}

fn oracle_failure(e: Error) -> SolverFailure {
    match e {
        Error::EnumerationLimit { .. } | Error::Domain(_) => SolverFailure::Input(e.to_string()),
        other => SolverFailure::Runtime(other.to_string()),
    }
}

fn run_solver(
    problem: &Problem,
    method: Method,
    opts: &SolveOptions,
    oracle_limit: usize,
) -> Result<Outcome, SolverFailure> {
    match (problem, method) {
        (Problem::Line(tri), Method::Fast1D) => {
            let (p, _segments) = solve_fast_1d(tri).map_err(runtime)?;
            Ok(direct_outcome(p.values().to_vec(), None))
        }
        (Problem::Line(tri), Method::Sor1D) => {
            let (p, report) = solve_sor_1d(tri, opts).map_err(runtime)?;
            Ok(Outcome {
                values: p.values().to_vec(),
                iterations: Some(report.iterations),
                final_change: Some(report.final_change),
                converged: report.converged,
                note: None,
            })
        }
        (Problem::Line(tri), Method::Projected) => {
            let strip = tri.to_strip().map_err(runtime)?;
            let init = PressureField2D::zeros(strip.grid());
            let (p2, _active, report) = solve_projected(&strip, &init, opts).map_err(runtime)?;
            let p = strip_pressure_to_1d(tri.grid(), &p2).map_err(runtime)?;
            Ok(Outcome {
                values: p.values().to_vec(),
                iterations: Some(report.iterations),
                final_change: Some(report.final_change),
                converged: report.converged,
                note: None,
            })
        }
        (Problem::Line(tri), Method::Oracle) => {
            let result = oracle::enumerate_active_sets_1d(tri, oracle_limit)
                .map_err(oracle_failure)?;
            let distinct = result.distinct_solutions();
            let note = format!(
                "oracle: {} fixed-point representation(s), {} distinct solution(s), \
                 family of {}",
                result.fixed_points.len(),
                distinct.len(),
                result.family.len()
            );
            if let [entry] = distinct.as_slice() {
                Ok(direct_outcome(entry.1.values().to_vec(), Some(note)))
            } else {
                Ok(Outcome {
                    values: vec![0.0; tri.grid().n_nodes()],
                    iterations: None,
                    final_change: None,
                    converged: false,
                    note: Some(note),
                })
            }
        }
        (Problem::Rect(coeffs), Method::Projected) => {
            let init = PressureField2D::zeros(coeffs.grid());
            let (p, _active, report) = solve_projected(coeffs, &init, opts).map_err(runtime)?;
            Ok(Outcome {
                values: p.values().to_vec(),
                iterations: Some(report.iterations),
                final_change: Some(report.final_change),
                converged: report.converged,
                note: None,
            })
        }
        (Problem::Rect(coeffs), Method::Oracle) => {
            let result =
                oracle::enumerate_active_sets(coeffs, oracle_limit).map_err(oracle_failure)?;
            let distinct = result.distinct_solutions();
            let note = format!(
                "oracle: {} fixed-point representation(s), {} distinct solution(s), \
                 family of {}",
                result.fixed_points.len(),
                distinct.len(),
                result.family.len()
            );
            if let [entry] = distinct.as_slice() {
                Ok(direct_outcome(entry.1.values().to_vec(), Some(note)))
            } else {
                Ok(Outcome {
                    values: vec![0.0; coeffs.grid().node_count()],
                    iterations: None,
                    final_change: None,
                    converged: false,
                    note: Some(note),
                })
            }
        }
        (Problem::Rect(_), Method::Fast1D | Method::Sor1D) => {
            unreachable!("method_of rejects 1D-only methods on rectangles")
        }
    }
}

fn direct_outcome(values: Vec<f64>, note: Option<String>) -> Outcome {
    Outcome { values, iterations: None, final_change: None, converged: true, note }
}

fn residuals(problem: &Problem, values: &[f64]) -> Result<(f64, f64), String> {
    match problem {
        Problem::Line(tri) => {
            let p = PressureField1D::from_values(tri.grid(), values.to_vec())
                .map_err(|e| e.to_string())?;
            complementarity_residual_1d(tri, &p).map_err(|e| e.to_string())
        }
        Problem::Rect(coeffs) => {
            let p = PressureField2D::from_values(coeffs.grid(), values.to_vec())
                .map_err(|e| e.to_string())?;
            complementarity_residual(coeffs, &p).map_err(|e| e.to_string())
        }
    }
}

fn grid_line(problem: &Problem) -> String {
    match problem {
        Problem::Line(tri) => {
            let g = tri.grid();
            format!(
                "line, {} nodes, x [{}, {}]",
                g.n_nodes(),
                g.x(0),
                g.x(g.n_nodes() - 1)
            )
        }
        Problem::Rect(coeffs) => {
            let g = coeffs.grid();
            format!(
                "rect, {} x {} nodes, x [{}, {}], y [{}, {}]",
                g.nx(),
                g.ny(),
                g.x(0),
                g.x(g.nx() - 1),
                g.y(0),
                g.y(g.ny() - 1)
            )
        }
    }
}

pub fn run(config_path: &Path, over: &Overrides) -> Result<i32, String> {
    let cfg: ProblemConfig = config::load(config_path)?;
    let base = config::base_dir(config_path);
    let problem = problem::build(&cfg, &base)?;
    let method = method_of(&cfg.solver, &problem)?;
    let opts = solve_options(&cfg.solver, over)?;
    let oracle_limit = cfg.solver.oracle_limit.unwrap_or(oracle::DEFAULT_LIMIT);

    let started = Instant::now();
    let outcome = match run_solver(&problem, method, &opts, oracle_limit) {
        Ok(outcome) => outcome,
        Err(SolverFailure::Input(msg)) => return Err(msg),
        Err(SolverFailure::Runtime(msg)) => {
            eprintln!("solver failed: {msg}");
            return Ok(EXIT_UNCONVERGED);
        }
    };
    let wall = started.elapsed().as_secs_f64();
    let (eq_residual, slack_residual) = residuals(&problem, &outcome.values)?;
    let active_nodes = outcome.values.iter().filter(|&&v| v > 0.0).count();

    let csv = match &problem {
        Problem::Line(tri) => output::csv_1d(tri.grid(), &outcome.values),
        Problem::Rect(coeffs) => output::csv_2d(coeffs.grid(), &outcome.values),
    };
    let csv_path = config::resolve_path(
        &base,
        cfg.output.csv.as_deref().unwrap_or(Path::new("pressure.csv")),
    );
    output::write_file(&csv_path, &csv)?;

    let mut summary = String::new();
    let _ = writeln!(summary, "command: solve");
    let _ = writeln!(summary, "method: {}", method.name());
    let _ = writeln!(summary, "grid: {}", grid_line(&problem));
    let _ = writeln!(summary, "converged: {}", outcome.converged);
    match outcome.iterations {
        Some(n) => {
            let _ = writeln!(summary, "iterations: {n}");
        }
        None => {
            let _ = writeln!(summary, "iterations: direct");
        }
    }
    if let Some(change) = outcome.final_change {
        let _ = writeln!(summary, "final_change: {change:e}");
    }
    let _ = writeln!(summary, "eq_residual: {eq_residual:e}");
    let _ = writeln!(summary, "slack_residual: {slack_residual:e}");
    let _ = writeln!(summary, "active_nodes: {} of {}", active_nodes, problem.node_count());
    if let Some(note) = &outcome.note {
        let _ = writeln!(summary, "note: {note}");
    }
    let _ = writeln!(summary, "csv: {}", csv_path.display());
    let _ = writeln!(summary, "wall_seconds: {wall}");

    let summary_path = config::resolve_path(
        &base,
        cfg.output.summary.as_deref().unwrap_or(Path::new("summary.txt")),
    );
    output::write_file(&summary_path, &summary)?;
    print!("{summary}");

    Ok(if outcome.converged { EXIT_OK } else { EXIT_UNCONVERGED })
}

#[cfg(test)]
mod tests {
    use super::*;
    use reynolds_core::discretize::{build_tridiagonal_1d, CoefficientFields1D};
    use reynolds_core::Grid1D;

    fn line_problem() -> Problem {
        let grid = Grid1D::from_extent(-3.0, 3.0, 7).unwrap();
        let coef = CoefficientFields1D::constant(grid, 1.0, -2.0).unwrap();
        Problem::Line(build_tridiagonal_1d(&coef).unwrap())
    }

    #[test]
    fn auto_picks_the_dimension_native_method() {
        let cfg = SolverConfig::default();
        assert!(matches!(method_of(&cfg, &line_problem()), Ok(Method::Fast1D)));

        let bad = SolverConfig { method: Some("simplex".into()), ..Default::default() };
        assert!(method_of(&bad, &line_problem()).is_err());
    }

    #[test]
    fn flags_beat_config_values() {
        let cfg = SolverConfig {
            tol: Some(1e-6),
            omega: Some(1.2),
            max_iter: Some(10),
            ..Default::default()
        };
        let over = Overrides { tol: Some(1e-12), omega: None, max_iter: Some(99) };
        let opts = solve_options(&cfg, &over).unwrap();
        assert_eq!(opts.tol, 1e-12);
        assert_eq!(opts.omega, 1.2);
        assert_eq!(opts.max_iter, 99);
    }

    #[test]
    fn bad_option_values_are_input_errors() {
        let cfg = SolverConfig { omega: Some(2.5), ..Default::default() };
        let over = Overrides { tol: None, omega: None, max_iter: None };
        let err = solve_options(&cfg, &over).unwrap_err();
        assert!(err.contains("relaxation factor"), "got: {err}");
    }
}
