//! Projected Gauss–Seidel / SOR with zero clamping.
//!
//! Each sweep visits the interior nodes in ascending flat-index order and
//! replaces the pressure by the relaxed stencil candidate, clamped at zero.
//! Fixed points of the sweep are exactly the solutions of the discrete
//! complementarity problem: positive nodes satisfy their five-point
//! equation, clamped nodes have a candidate that is not positive.
//!
//! With the default relaxation factor `omega = 1` and per-node clamping,
//! starting from zero pressure, the iterates are pointwise nondecreasing, so
//! the set of positive nodes only ever grows.  [`SolveReport`] counts the
//! shrink events so that claim can be checked instead of assumed.

use crate::active_set::ActiveSet2D;
use crate::discretize::CoefficientGrid2D;
use crate::error::{Error, Result};
use crate::field::PressureField2D;
use crate::linalg::{Banded, SparseRows};

/// Active subsystems at most this large are solved by banded elimination;
/// larger ones go through conjugate gradients.
const DIRECT_SOLVE_LIMIT: usize = 10_000;

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Convergence threshold on the infinity norm of one sweep's change.
    pub tol: f64,
    /// Hard cap on the number of sweeps.
    pub max_iter: usize,
    /// Relaxation factor, in `(0, 2)`.  `1` is plain Gauss–Seidel.
    pub omega: f64,
    /// Record the number of positive nodes after every sweep.
    pub record_history: bool,
    /// Clamp each node as it is updated (default).  With `false` the clamp
    /// is applied once at the end of each sweep, letting negative trial
    /// values propagate within the sweep.
    pub per_node_clamp: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 200_000,
            omega: 1.0,
            record_history: false,
            per_node_clamp: true,
        }
    }
}

impl SolveOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::Domain(format!("tolerance must be positive, got {}", self.tol)));
        }
        if !(self.omega.is_finite() && self.omega > 0.0 && self.omega < 2.0) {
            return Err(Error::Domain(format!(
                "relaxation factor must lie in (0, 2), got {}",
                self.omega
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::Domain("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    /// Sweeps performed.
    pub iterations: usize,
    /// Infinity norm of the last sweep's change.
    pub final_change: f64,
    /// Whether `final_change < tol` was reached within `max_iter`.
    pub converged: bool,
    /// Positive-node count after each sweep, if requested.
    pub active_history: Option<Vec<usize>>,
    /// Number of node updates that moved a positive pressure back to zero.
    pub active_shrink_events: usize,
}

fn check_same_grid(coeffs: &CoefficientGrid2D, p: &PressureField2D) -> Result<()> {
    if coeffs.grid() != p.grid() {
        return Err(Error::GridMismatch(
            "pressure field and stencil live on different grids".into(),
        ));
    }
    Ok(())
}

/// One clamped relaxation sweep in ascending flat-index order.  Returns the
/// infinity norm of the change and the number of positive-to-zero updates.
fn sweep(
    coeffs: &CoefficientGrid2D,
    p: &mut PressureField2D,
    omega: f64,
    per_node_clamp: bool,
    before: &mut Vec<f64>,
) -> (f64, usize) {
    let grid = coeffs.grid();
    let nx = grid.nx();
    let ny = grid.ny();
    let values = p.values_mut();

    if !per_node_clamp {
        before.clear();
        before.extend_from_slice(values);
    }

    let mut max_change = 0.0f64;
    let mut shrinks = 0usize;
    for j in 1..ny - 1 {
        for i in 1..nx - 1 {
            let idx = j * nx + i;
            let (k1, k2, k3, k4, d) = coeffs.parts_at(idx);
            let diag = k1 + k2 + k3 + k4;
            let pull =
                k1 * values[idx + 1] + k2 * values[idx - 1] + k3 * values[idx + nx] + k4 * values[idx - nx];
            let candidate = (pull - d) / diag;
            let old = values[idx];
            let relaxed = (1.0 - omega) * old + omega * candidate;
            if per_node_clamp {
                let new = relaxed.max(0.0);
                if new == 0.0 && old > 0.0 {
                    shrinks += 1;
                }
                max_change = max_change.max((new - old).abs());
                values[idx] = new;
            } else {
                values[idx] = relaxed;
            }
        }
    }

    if !per_node_clamp {
        for j in 1..ny - 1 {
            for i in 1..nx - 1 {
                let idx = j * nx + i;
                let new = values[idx].max(0.0);
                let old = before[idx];
                if new == 0.0 && old > 0.0 {
                    shrinks += 1;
                }
                max_change = max_change.max((new - old).abs());
                values[idx] = new;
            }
        }
    }

    (max_change, shrinks)
}

/// One projected Gauss–Seidel/SOR sweep with per-node clamping.
///
/// Returns the infinity norm of the change.  `omega` must lie in `(0, 2)`.
pub fn pgs_sweep(coeffs: &CoefficientGrid2D, p: &mut PressureField2D, omega: f64) -> Result<f64> {
    check_same_grid(coeffs, p)?;
    if !(omega.is_finite() && omega > 0.0 && omega < 2.0) {
        return Err(Error::Domain(format!("relaxation factor must lie in (0, 2), got {omega}")));
    }
    let mut scratch = Vec::new();
    let (change, _) = sweep(coeffs, p, omega, true, &mut scratch);
    Ok(change)
}

/// Run clamped relaxation sweeps from `init` until the largest per-sweep
/// change drops below `opts.tol` or `opts.max_iter` sweeps have run.
///
/// `init` must be a valid pressure field: nonnegative, zero on the boundary
/// ring.  Returns the final field, its positive set, and a report; the
/// output field is nonnegative with zero boundary by construction.
pub fn solve_projected(
    coeffs: &CoefficientGrid2D,
    init: &PressureField2D,
    opts: &SolveOptions,
) -> Result<(PressureField2D, ActiveSet2D, SolveReport)> {
    opts.validate()?;
    check_same_grid(coeffs, init)?;
    let grid = coeffs.grid();
    for j in 0..grid.ny() {
        for i in 0..grid.nx() {
            let v = init.at(i, j);
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Domain(format!(
                    "initial pressure at ({i}, {j}) must be finite and nonnegative, got {v}"
                )));
            }
            if v != 0.0 && !grid.is_interior(i, j) {
                return Err(Error::Domain(format!(
                    "initial pressure must vanish on the boundary, node ({i}, {j}) is {v}"
                )));
            }
        }
    }

    let mut p = init.clone();
    let mut history = opts.record_history.then(Vec::new);
    let mut shrink_events = 0usize;
    let mut scratch = Vec::new();
    let mut iterations = 0usize;
    let mut final_change = f64::INFINITY;
    let mut converged = false;

    while iterations < opts.max_iter {
        let (change, shrinks) = sweep(coeffs, &mut p, opts.omega, opts.per_node_clamp, &mut scratch);
        iterations += 1;
        shrink_events += shrinks;
        final_change = change;
        if let Some(h) = history.as_mut() {
            h.push(p.values().iter().filter(|&&v| v > 0.0).count());
        }
        if change < opts.tol {
            converged = true;
            break;
        }
    }

    let active = p.positive_set();
    let report = SolveReport {
        iterations,
        final_change,
        converged,
        active_history: history,
        active_shrink_events: shrink_events,
    };
    Ok((p, active, report))
}

/// Residuals of the complementarity conditions, in pressure units.
///
/// Returns `(equation_residual, slack_violation)`:
/// * `equation_residual` — over nodes with `p > 0`, the largest distance
///   between the pressure and its stencil candidate `(sum k p_nb - D) / K`;
/// * `slack_violation` — over interior nodes with `p = 0`, the largest
///   positive candidate (a positive candidate means the node should not be
///   pinned).
///
/// Both are zero (to rounding) exactly at the solution.  `p` must be
/// nonnegative with zero boundary values.
pub fn complementarity_residual(
    coeffs: &CoefficientGrid2D,
    p: &PressureField2D,
) -> Result<(f64, f64)> {
    check_same_grid(coeffs, p)?;
    let grid = coeffs.grid();
    for j in 0..grid.ny() {
        for i in 0..grid.nx() {
            let v = p.at(i, j);
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Domain(format!(
                    "pressure at ({i}, {j}) must be finite and nonnegative, got {v}"
                )));
            }
            if v != 0.0 && !grid.is_interior(i, j) {
                return Err(Error::Domain(format!(
                    "pressure must vanish on the boundary, node ({i}, {j}) is {v}"
                )));
            }
        }
    }

    let nx = grid.nx();
    let values = p.values();
    let mut eq = 0.0f64;
    let mut slack = 0.0f64;
    for (i, j) in grid.interior_nodes() {
        let idx = j * nx + i;
        let (k1, k2, k3, k4, d) = coeffs.parts_at(idx);
        let diag = k1 + k2 + k3 + k4;
        let pull =
            k1 * values[idx + 1] + k2 * values[idx - 1] + k3 * values[idx + nx] + k4 * values[idx - nx];
        let candidate = (pull - d) / diag;
        if values[idx] > 0.0 {
            eq = eq.max((candidate - values[idx]).abs());
        } else {
            slack = slack.max(candidate);
        }
    }
    Ok((eq, slack.max(0.0)))
}

/// Solve the five-point equations restricted to `active`, with `p = 0`
/// everywhere else, by a direct (or, for very large sets, conjugate
/// gradient) method.
///
/// The output can be negative: this is the membership test used by the
/// enumeration oracle, which inspects the sign pattern of the result.
pub fn solve_on_active_set(
    coeffs: &CoefficientGrid2D,
    active: &ActiveSet2D,
) -> Result<PressureField2D> {
    if coeffs.grid() != active.grid() {
        return Err(Error::GridMismatch(
            "active set and stencil live on different grids".into(),
        ));
    }
    let grid = coeffs.grid();
    let nx = grid.nx();
    let mask = active.mask();

    // Rank the unknowns by ascending flat index.
    let mut rank = vec![usize::MAX; grid.node_count()];
    let mut nodes = Vec::new();
    for (i, j) in grid.interior_nodes() {
        let idx = grid.idx(i, j);
        if mask[idx] {
            rank[idx] = nodes.len();
            nodes.push(idx);
        }
    }
    let n = nodes.len();
    let mut p = PressureField2D::zeros(grid);
    if n == 0 {
        return Ok(p);
    }

    // Neighbor offsets paired with their coupling accessor index:
    // (offset, which k) = east, west, north, south.
    let neighbor = |idx: usize| {
        let (k1, k2, k3, k4, _) = coeffs.parts_at(idx);
        [
            (idx + 1, k1),
            (idx - 1, k2),
            (idx + nx, k3),
            (idx - nx, k4),
        ]
    };

    let solution = if n <= DIRECT_SOLVE_LIMIT {
        let mut half_bw = 0usize;
        for (r, &idx) in nodes.iter().enumerate() {
            for (nb, k) in neighbor(idx) {
                if k != 0.0 && rank[nb] != usize::MAX {
                    half_bw = half_bw.max(rank[nb].abs_diff(r));
                }
            }
        }
        let mut m = Banded::zeros(n, half_bw);
        let mut rhs = vec![0.0; n];
        for (r, &idx) in nodes.iter().enumerate() {
            let (k1, k2, k3, k4, d) = coeffs.parts_at(idx);
            m.add(r, r, k1 + k2 + k3 + k4);
            for (nb, k) in neighbor(idx) {
                if k != 0.0 && rank[nb] != usize::MAX {
                    m.add(r, rank[nb], -k);
                }
            }
            rhs[r] = -d;
        }
        m.solve(rhs)?
    } else {
        let mut rows = Vec::with_capacity(n);
        let mut rhs = vec![0.0; n];
        for (r, &idx) in nodes.iter().enumerate() {
            let (k1, k2, k3, k4, d) = coeffs.parts_at(idx);
            let mut row = vec![(r, k1 + k2 + k3 + k4)];
            for (nb, k) in neighbor(idx) {
                if k != 0.0 && rank[nb] != usize::MAX {
                    row.push((rank[nb], -k));
                }
            }
            rows.push(row);
            rhs[r] = -d;
        }
        SparseRows { rows }.solve_cg(&rhs)?
    };

    let values = p.values_mut();
    for (r, &idx) in nodes.iter().enumerate() {
        values[idx] = solution[r];
    }
    Ok(p)
}
