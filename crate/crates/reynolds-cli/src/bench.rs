//! The `bench` verb: segment solver versus projected SOR on a periodic
//! well family.
//!
//! The family keeps the physics fixed while the grid grows: every block of
//! 100 nodes (dx = 0.01, so one length unit) carries a suction well of
//! strength −2 spanning nodes 30..70 of the block, against a +4 background.
//! Each well pressurizes a pocket of roughly 60 nodes regardless of how
//! many blocks the grid has, so the active structure — and the SOR sweep
//! count — is size-independent and wall time isolates per-node cost.

use crate::config::{self, BenchConfig};
use crate::{output, EXIT_OK};
use reynolds_core::discretize::{build_tridiagonal_1d, CoefficientFields1D, Tridiag1D};
use reynolds_core::solver1d::{complementarity_residual_1d, solve_fast_1d, solve_sor_1d};
use reynolds_core::solver2d::SolveOptions;
use reynolds_core::{Grid1D, PressureField1D};
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

/// Below this the solve is too short to time meaningfully.
pub const MIN_NODES: usize = 64;

/// Sweep cap for the matched-accuracy SOR runs; the family converges in a
/// few hundred sweeps, so hitting this means something is wrong.
const SOR_SWEEP_CAP: usize = 200_000;

/// The benchmark problem at `n` nodes.
pub fn well_family(n: usize) -> Tridiag1D {
    let grid = Grid1D::new(n, 0.0, 0.01).expect("valid benchmark grid");
    let f1 = vec![1.0; n - 1];
    let f3: Vec<f64> =
        (0..n).map(|i| if (30..70).contains(&(i % 100)) { -2.0 } else { 4.0 }).collect();
    let coef = CoefficientFields1D::from_values(grid, f1, f3).expect("valid benchmark fields");
    build_tridiagonal_1d(&coef).expect("valid benchmark stencil")
}

/// Worst complementarity violation, either kind.
pub fn max_residual(tri: &Tridiag1D, p: &PressureField1D) -> f64 {
    let (eq, slack) = complementarity_residual_1d(tri, p).expect("solver output is admissible");
    eq.max(slack)
}

/// Median wall time of `reps` runs of `f`, after one discarded warmup run.
pub fn median_secs(reps: usize, mut f: impl FnMut()) -> f64 {
    f();
    let mut times: Vec<f64> = (0..reps)
        .map(|_| {
            let start = Instant::now();
            f();
            start.elapsed().as_secs_f64()
        })
        .collect();
    times.sort_by(f64::total_cmp);
    times[reps / 2]
}

/// One measured size.
pub struct BenchRow {
    pub n: usize,
    pub t_fast: f64,
    pub t_sor: f64,
    pub speedup: f64,
    pub residual_fast: f64,
    pub residual_sor: f64,
}

/// Find an SOR tolerance whose complementarity residual is no worse than
/// `target`, tightening tenfold from 1e-8.  The search stops at 1e-16:
/// beyond that the sweep-to-sweep change drowns in rounding noise.
fn matched_sor_options(
    tri: &Tridiag1D,
    target: f64,
    omega: f64,
) -> Result<(SolveOptions, f64), String> {
    let mut opts = SolveOptions {
        tol: 1e-8,
        max_iter: SOR_SWEEP_CAP,
        omega,
        record_history: false,
        per_node_clamp: true,
    };
    loop {
        let (p, report) =
            solve_sor_1d(tri, &opts).map_err(|e| format!("SOR failed while matching: {e}"))?;
        if !report.converged {
            return Err(format!(
                "SOR did not converge at tol {} within {} sweeps",
                opts.tol, opts.max_iter
            ));
        }
        let residual = max_residual(tri, &p);
        if residual <= target || opts.tol <= 1e-16 {
            return Ok((opts, residual));
        }
        opts.tol *= 0.1;
    }
}

/// Time both solvers at one size.  SOR runs at matched accuracy: its
/// tolerance is tightened until its residual is no worse than the segment
/// solver's (floored at 1e-14, the practical limit of the sweep-change
/// stopping rule).
pub fn bench_one(n: usize, reps: usize, omega: f64) -> Result<BenchRow, String> {
    let tri = well_family(n);

    let (p_fast, _) = solve_fast_1d(&tri).map_err(|e| format!("segment solve failed: {e}"))?;
    let residual_fast = max_residual(&tri, &p_fast);
    let target = residual_fast.max(1e-14);
    let (sor_opts, residual_sor) = matched_sor_options(&tri, target, omega)?;

    let t_fast = median_secs(reps, || {
        let result = solve_fast_1d(&tri).expect("segment solve failed during timing");
        std::hint::black_box(&result);
    });
    let t_sor = median_secs(reps, || {
        let result = solve_sor_1d(&tri, &sor_opts).expect("SOR failed during timing");
        std::hint::black_box(&result);
    });

    Ok(BenchRow { n, t_fast, t_sor, speedup: t_sor / t_fast, residual_fast, residual_sor })
}

fn validate(bench: &BenchConfig) -> Result<(usize, f64), String> {
    if bench.n_values.is_empty() {
        return Err("bench needs at least one entry in n_values".into());
    }
    for &n in &bench.n_values {
        if n < MIN_NODES {
            return Err(format!(
                "bench refuses n = {n}: below {MIN_NODES} nodes the timing is all noise"
            ));
        }
    }
    let reps = bench.repetitions.unwrap_or(5);
    if reps == 0 {
        return Err("repetitions must be at least 1".into());
    }
    let omega = bench.omega.unwrap_or(1.9);
    if !(omega.is_finite() && omega > 0.0 && omega < 2.0) {
        return Err(format!("relaxation factor must lie in (0, 2), got {omega}"));
    }
    Ok((reps, omega))
}

pub fn run(config_path: &Path) -> Result<i32, String> {
    let cfg = config::load(config_path)?;
    let base = config::base_dir(config_path);
    let bench = cfg.bench.as_ref().ok_or("config needs a [bench] section")?;
    let (reps, omega) = validate(bench)?;

    let mut table = String::from("N,t_fast,t_sor,speedup,residual_fast,residual_sor\n");
    for &n in &bench.n_values {
        let row = bench_one(n, reps, omega)?;
        let _ = writeln!(
            table,
            "{},{},{},{},{},{}",
            row.n, row.t_fast, row.t_sor, row.speedup, row.residual_fast, row.residual_sor
        );
    }

    print!("{table}");
    if let Some(path) = &bench.csv {
        let path = config::resolve_path(&base, path);
        output::write_file(&path, &table)?;
        println!("csv: {}", path.display());
    }
    Ok(EXIT_OK)
}
