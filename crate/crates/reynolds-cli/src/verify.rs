//! The `verify` verb: randomized cross-checks against the exhaustive
//! enumeration oracle.
//!
//! Five check groups run over seeded random problems, alternating line and
//! rectangle geometry:
//!
//! * uniqueness — enumeration finds exactly one distinct solution,
//! * greatest element — that solution's active set is the union of every
//!   nonnegative-solution set and is itself in the family,
//! * union closure — sampled family pairs stay in the family under union,
//!   with pointwise dominance,
//! * cross-solver agreement — the production solvers land on the oracle's
//!   solution,
//! * strict positivity — a single negative source node pressurizes the
//!   whole interior.
//!
//! The seed comes from `REYNOLDS_SEED`, then the config, then a default,
//! so a failing run can always be replayed exactly.

use crate::config;
use crate::{EXIT_OK, EXIT_UNCONVERGED};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reynolds_core::discretize::{
    build_stencil_2d, build_tridiagonal_1d, strip_pressure_to_1d, CoefficientFields1D,
    CoefficientFields2D, CoefficientGrid2D, Tridiag1D,
};
use reynolds_core::oracle::{
    check_maximality, check_strict_positivity, check_union_closure, enumerate_active_sets,
    OracleResult2D, DEFAULT_LIMIT,
};
use reynolds_core::solver1d::{solve_fast_1d, solve_sor_1d};
use reynolds_core::solver2d::{solve_projected, SolveOptions};
use reynolds_core::{Grid1D, Grid2D, PressureField2D};
use std::path::Path;

const MAX_REPORTED_FAILURES: usize = 10;

struct Tally {
    pass: usize,
    total: usize,
}

impl Tally {
    fn new() -> Self {
        Tally { pass: 0, total: 0 }
    }

    fn record(&mut self, ok: bool) {
        self.total += 1;
        if ok {
            self.pass += 1;
        }
    }
}

struct Checks {
    uniqueness: Tally,
    greatest: Tally,
    closure: Tally,
    agreement: Tally,
    positivity: Tally,
    failures: Vec<String>,
}

impl Checks {
    fn new() -> Self {
        Checks {
            uniqueness: Tally::new(),
            greatest: Tally::new(),
            closure: Tally::new(),
            agreement: Tally::new(),
            positivity: Tally::new(),
            failures: Vec::new(),
        }
    }

    fn fail(&mut self, message: String) {
        if self.failures.len() < MAX_REPORTED_FAILURES {
            self.failures.push(message);
        }
    }
}

fn random_tri(rng: &mut ChaCha8Rng) -> Tridiag1D {
    let n = rng.random_range(5..=10);
    let dx = rng.random_range(0.1..1.0);
    let grid = Grid1D::new(n, 0.0, dx).expect("valid random grid");
    let f1: Vec<f64> = (0..n - 1).map(|_| rng.random_range(0.2..5.0)).collect();
    let f3: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
    let coef = CoefficientFields1D::from_values(grid, f1, f3).expect("valid random fields");
    build_tridiagonal_1d(&coef).expect("valid random stencil")
}

fn random_rect(rng: &mut ChaCha8Rng, limit: usize) -> CoefficientGrid2D {
    let (nx, ny) = loop {
        let nx = rng.random_range(4..=6);
        let ny = rng.random_range(4..=6);
        if (nx - 2) * (ny - 2) <= limit {
            break (nx, ny);
        }
    };
    let step = rng.random_range(0.1..1.0);
    let grid = Grid2D::new(nx, ny, 0.0, 0.0, step, step).expect("valid random grid");
    let f1: Vec<f64> = (0..(nx - 1) * ny).map(|_| rng.random_range(0.2..5.0)).collect();
    let f2: Vec<f64> = (0..nx * (ny - 1)).map(|_| rng.random_range(0.2..5.0)).collect();
    let f3: Vec<f64> = (0..nx * ny).map(|_| rng.random_range(-3.0..3.0)).collect();
    let coef = CoefficientFields2D::from_values(grid, f1, f2, f3).expect("valid random fields");
    build_stencil_2d(&coef).expect("valid random stencil")
}

/// Union closure over a small sample of family pairs: all pairs among the
/// first few members plus a handful of random ones.
fn closure_holds(
    rng: &mut ChaCha8Rng,
    coeffs: &CoefficientGrid2D,
    result: &OracleResult2D,
) -> Result<bool, String> {
    let family = &result.family;
    if family.is_empty() {
        return Ok(true);
    }
    let head = family.len().min(4);
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for a in 0..head {
        for b in a..head {
            pairs.push((a, b));
        }
    }
    for _ in 0..4 {
        pairs.push((
            rng.random_range(0..family.len()),
            rng.random_range(0..family.len()),
        ));
    }
    for (a, b) in pairs {
        let ok = check_union_closure(coeffs, &family[a], &family[b])
            .map_err(|e| format!("union closure check failed to run: {e}"))?;
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_line_problem(
    rng: &mut ChaCha8Rng,
    checks: &mut Checks,
    limit: usize,
    index: usize,
) -> Result<(), String> {
    let tri = random_tri(rng);
    let strip = tri.to_strip().map_err(|e| e.to_string())?;
    let result = enumerate_active_sets(&strip, limit).map_err(|e| e.to_string())?;

    let distinct = result.distinct_solutions();
    let unique = distinct.len() == 1;
    checks.uniqueness.record(unique);
    if !unique {
        checks.fail(format!(
            "problem {index} (line): {} distinct solutions instead of 1",
            distinct.len()
        ));
        return Ok(());
    }

    let greatest = check_maximality(&result).map_err(|e| e.to_string())?;
    checks.greatest.record(greatest);
    if !greatest {
        checks.fail(format!("problem {index} (line): fixed point is not the family union"));
    }

    let closed = closure_holds(rng, &strip, &result)?;
    checks.closure.record(closed);
    if !closed {
        checks.fail(format!("problem {index} (line): family is not union closed"));
    }

    let p_oracle =
        strip_pressure_to_1d(tri.grid(), &distinct[0].1).map_err(|e| e.to_string())?;

    let (p_fast, _) = solve_fast_1d(&tri).map_err(|e| e.to_string())?;
    let fast_diff = p_fast.max_abs_diff(&p_oracle).map_err(|e| e.to_string())?;

    let sor_opts = SolveOptions { tol: 1e-12, ..Default::default() };
    let (p_sor, sor_report) = solve_sor_1d(&tri, &sor_opts).map_err(|e| e.to_string())?;
    let sor_diff = p_sor.max_abs_diff(&p_oracle).map_err(|e| e.to_string())?;

    let proj_opts = SolveOptions { tol: 1e-13, ..Default::default() };
    let init = PressureField2D::zeros(strip.grid());
    let (p_proj, _, proj_report) =
        solve_projected(&strip, &init, &proj_opts).map_err(|e| e.to_string())?;
    let p_proj = strip_pressure_to_1d(tri.grid(), &p_proj).map_err(|e| e.to_string())?;
    let proj_diff = p_proj.max_abs_diff(&p_oracle).map_err(|e| e.to_string())?;

    let agree = fast_diff <= 1e-9
        && sor_diff <= 1e-8
        && proj_diff <= 1e-9
        && sor_report.converged
        && proj_report.converged;
    checks.agreement.record(agree);
    if !agree {
        checks.fail(format!(
            "problem {index} (line): solver disagreement (fast {fast_diff:.2e}, \
             sor {sor_diff:.2e}, projected {proj_diff:.2e})"
        ));
    }
    Ok(())
}

fn check_rect_problem(
    rng: &mut ChaCha8Rng,
    checks: &mut Checks,
    limit: usize,
    index: usize,
) -> Result<(), String> {
    let coeffs = random_rect(rng, limit);
    let result = enumerate_active_sets(&coeffs, limit).map_err(|e| e.to_string())?;

    let distinct = result.distinct_solutions();
    let unique = distinct.len() == 1;
    checks.uniqueness.record(unique);
    if !unique {
        checks.fail(format!(
            "problem {index} (rect): {} distinct solutions instead of 1",
            distinct.len()
        ));
        return Ok(());
    }

    let greatest = check_maximality(&result).map_err(|e| e.to_string())?;
    checks.greatest.record(greatest);
    if !greatest {
        checks.fail(format!("problem {index} (rect): fixed point is not the family union"));
    }

    let closed = closure_holds(rng, &coeffs, &result)?;
    checks.closure.record(closed);
    if !closed {
        checks.fail(format!("problem {index} (rect): family is not union closed"));
    }

    let proj_opts = SolveOptions { tol: 1e-13, ..Default::default() };
    let init = PressureField2D::zeros(coeffs.grid());
    let (p_proj, _, report) =
        solve_projected(&coeffs, &init, &proj_opts).map_err(|e| e.to_string())?;
    let diff = p_proj.max_abs_diff(&distinct[0].1).map_err(|e| e.to_string())?;
    let agree = diff <= 1e-9 && report.converged;
    checks.agreement.record(agree);
    if !agree {
        checks.fail(format!("problem {index} (rect): projected is {diff:.2e} from the oracle"));
    }
    Ok(())
}

/// One source node strictly negative, the rest zero: the solution must be
/// positive at every interior node.
fn check_hopf_problem(
    rng: &mut ChaCha8Rng,
    checks: &mut Checks,
    index: usize,
) -> Result<(), String> {
    let rect = index % 2 == 1;
    let coeffs = if rect {
        let nx = rng.random_range(4..=6);
        let ny = rng.random_range(4..=6);
        let step = rng.random_range(0.1..1.0);
        let grid = Grid2D::new(nx, ny, 0.0, 0.0, step, step).expect("valid grid");
        let f1: Vec<f64> = (0..(nx - 1) * ny).map(|_| rng.random_range(0.2..5.0)).collect();
        let f2: Vec<f64> = (0..nx * (ny - 1)).map(|_| rng.random_range(0.2..5.0)).collect();
        let mut f3 = vec![0.0; nx * ny];
        let hot_i = rng.random_range(1..nx - 1);
        let hot_j = rng.random_range(1..ny - 1);
        f3[hot_j * nx + hot_i] = -rng.random_range(0.5..3.0);
        let coef =
            CoefficientFields2D::from_values(grid, f1, f2, f3).expect("valid fields");
        build_stencil_2d(&coef).expect("valid stencil")
    } else {
        let n = rng.random_range(5..=10);
        let dx = rng.random_range(0.1..1.0);
        let grid = Grid1D::new(n, 0.0, dx).expect("valid grid");
        let f1: Vec<f64> = (0..n - 1).map(|_| rng.random_range(0.2..5.0)).collect();
        let mut f3 = vec![0.0; n];
        f3[rng.random_range(1..n - 1)] = -rng.random_range(0.5..3.0);
        let coef = CoefficientFields1D::from_values(grid, f1, f3).expect("valid fields");
        let tri = build_tridiagonal_1d(&coef).expect("valid stencil");
        tri.to_strip().map_err(|e| e.to_string())?
    };
    let positive = check_strict_positivity(&coeffs).map_err(|e| e.to_string())?;
    checks.positivity.record(positive);
    if !positive {
        checks.fail(format!(
            "problem {index} ({}): single negative source left interior zeros",
            if rect { "rect" } else { "line" }
        ));
    }
    Ok(())
}

fn resolve_seed(config_seed: Option<u64>) -> Result<u64, String> {
    match std::env::var("REYNOLDS_SEED") {
        Ok(text) => text
            .trim()
            .parse::<u64>()
            .map_err(|_| format!("REYNOLDS_SEED must be an unsigned integer, got {text:?}")),
        Err(std::env::VarError::NotPresent) => Ok(config_seed.unwrap_or(42)),
        Err(e) => Err(format!("cannot read REYNOLDS_SEED: {e}")),
    }
}

pub fn run(config_path: &Path) -> Result<i32, String> {
    let cfg = config::load(config_path)?;
    let problems = cfg.verify.problems.unwrap_or(50);
    if problems == 0 {
        return Err("verify needs at least one problem".into());
    }
    let limit = cfg.verify.limit.unwrap_or(DEFAULT_LIMIT);
    let seed = resolve_seed(cfg.verify.seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Checks::new();

    println!("verify: seed {seed}, {problems} problems, oracle limit {limit}");
    for index in 0..problems {
        if index % 2 == 0 {
            check_line_problem(&mut rng, &mut checks, limit, index)?;
        } else {
            check_rect_problem(&mut rng, &mut checks, limit, index)?;
        }
    }
    for index in 0..problems {
        check_hopf_problem(&mut rng, &mut checks, index)?;
    }

    println!("uniqueness: {}/{}", checks.uniqueness.pass, checks.uniqueness.total);
    println!("greatest element: {}/{}", checks.greatest.pass, checks.greatest.total);
    println!("union closure: {}/{}", checks.closure.pass, checks.closure.total);
    println!("cross-solver agreement: {}/{}", checks.agreement.pass, checks.agreement.total);
    println!("strict positivity: {}/{}", checks.positivity.pass, checks.positivity.total);

    let all_pass = checks.failures.is_empty()
        && checks.uniqueness.pass == checks.uniqueness.total
        && checks.greatest.pass == checks.greatest.total
        && checks.closure.pass == checks.closure.total
        && checks.agreement.pass == checks.agreement.total
        && checks.positivity.pass == checks.positivity.total;

    if all_pass {
        println!("result: PASS");
        Ok(EXIT_OK)
    } else {
        for failure in &checks.failures {
            eprintln!("failed: {failure}");
        }
        println!("result: FAIL");
        Ok(EXIT_UNCONVERGED)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a_seeded_batch_passes_every_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut checks = Checks::new();
        for index in 0..6 {
            if index % 2 == 0 {
                check_line_problem(&mut rng, &mut checks, DEFAULT_LIMIT, index).unwrap();
            } else {
                check_rect_problem(&mut rng, &mut checks, DEFAULT_LIMIT, index).unwrap();
            }
            check_hopf_problem(&mut rng, &mut checks, index).unwrap();
        }
        assert!(checks.failures.is_empty(), "failures: {:?}", checks.failures);
        assert_eq!(checks.uniqueness.pass, 6);
        assert_eq!(checks.positivity.pass, 6);
    }

    #[test]
    fn the_seed_makes_problem_draws_reproducible() {
        let mut a = ChaCha8Rng::seed_from_u64(9);
        let mut b = ChaCha8Rng::seed_from_u64(9);
        let ta = random_tri(&mut a);
        let tb = random_tri(&mut b);
        assert_eq!(ta.grid().n_nodes(), tb.grid().n_nodes());
        for i in ta.grid().interior() {
            assert_eq!(ta.a(i), tb.a(i));
            assert_eq!(ta.c(i), tb.c(i));
        }
    }
}
