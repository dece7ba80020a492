//! Exhaustive reference solver for desk-size grids.
//!
//! The complementarity problem fixes, for every interior node, one of two
//! states: its equation holds, or it is pinned to zero.  On a grid with a
//! handful of interior nodes every candidate active set can simply be tried:
//! solve the equations restricted to the set, keep the result when it is a
//! plausible pressure, and test the pinned nodes' slack to see whether it is
//! an actual solution.
//!
//! Three families of facts fall out of the enumeration, and the test suite
//! leans on all of them:
//!
//! * the problem has exactly one solution (one active set passes both
//!   tests);
//! * the sets whose constrained solution is nonnegative form a lattice
//!   fragment: the union of two such sets is again one, and the solution on
//!   the union dominates both — [`check_union_closure`];
//! * the solution's active set is the greatest member of that family —
//!   [`check_maximality`] — and a connected negative source region forces
//!   strictly positive pressure across the whole interior —
//!   [`check_strict_positivity`].
//!
//! Everything here is exponential in the interior size and exists to certify
//! the production solvers at small scale, not to be fast.

use crate::active_set::{ActiveSet1D, ActiveSet2D};
use crate::discretize::{strip_active_to_1d, strip_pressure_to_1d, CoefficientGrid2D, Tridiag1D};
use crate::error::{Error, Result};
use crate::field::{PressureField1D, PressureField2D};
use crate::solver2d::solve_on_active_set;

/// Default ceiling on the interior size; 2^16 subset solves is where "a few
/// seconds" ends on a desk machine.
pub const DEFAULT_LIMIT: usize = 16;

/// Everything the enumeration finds for one problem.
#[derive(Debug, Clone)]
pub struct OracleResult2D {
    /// Active sets whose constrained solution passed both the
    /// nonnegativity and the slack test, with that solution (clamped at
    /// zero); ordered by active count, then by enumeration index.
    ///
    /// A node resting exactly on the free boundary (zero pressure and a
    /// tight equation) makes the *set* representation ambiguous: including
    /// or excluding it changes nothing about the pressure.  All such
    /// representations are listed; the pressure itself is what is unique.
    pub fixed_points: Vec<(ActiveSet2D, PressureField2D)>,
    /// Active sets whose constrained solution is nonnegative (the slack at
    /// pinned nodes may still be violated).  Superset of the fixed points'
    /// sets; same ordering.
    pub family: Vec<ActiveSet2D>,
}

impl OracleResult2D {
    /// One representative per distinct pressure solution, smallest set
    /// first (which is the support `{p > 0}` representation).  Well-posed
    /// problems yield exactly one entry.
    pub fn distinct_solutions(&self) -> Vec<&(ActiveSet2D, PressureField2D)> {
        let mut reps: Vec<&(ActiveSet2D, PressureField2D)> = Vec::new();
        for entry in &self.fixed_points {
            let is_new = reps.iter().all(|(_, kept)| {
                let scale = kept.values().iter().fold(0.0f64, |s, v| s.max(v.abs()));
                match entry.1.max_abs_diff(kept) {
                    Ok(d) => d > 1e-9 * (1.0 + scale),
                    Err(_) => true,
                }
            });
            if is_new {
                reps.push(entry);
            }
        }
        reps
    }
}

/// 1D counterpart of [`OracleResult2D`].
#[derive(Debug, Clone)]
pub struct OracleResult1D {
    pub fixed_points: Vec<(ActiveSet1D, PressureField1D)>,
    pub family: Vec<ActiveSet1D>,
}

impl OracleResult1D {
    /// See [`OracleResult2D::distinct_solutions`].
    pub fn distinct_solutions(&self) -> Vec<&(ActiveSet1D, PressureField1D)> {
        let mut reps: Vec<&(ActiveSet1D, PressureField1D)> = Vec::new();
        for entry in &self.fixed_points {
            let is_new = reps.iter().all(|(_, kept)| {
                let scale = kept.values().iter().fold(0.0f64, |s, v| s.max(v.abs()));
                match entry.1.max_abs_diff(kept) {
                    Ok(d) => d > 1e-9 * (1.0 + scale),
                    Err(_) => true,
                }
            });
            if is_new {
                reps.push(entry);
            }
        }
        reps
    }
}

/// Try every subset of interior nodes as an active set.
///
/// Refuses grids with more than `limit` (or 31) interior nodes with
/// [`Error::EnumerationLimit`].  Subsets whose restricted system is singular
/// (a region fully decoupled from any pinned node) are skipped: they
/// determine no pressure and can represent no solution.
pub fn enumerate_active_sets(
    coeffs: &CoefficientGrid2D,
    limit: usize,
) -> Result<OracleResult2D> {
    let grid = coeffs.grid();
    let m = grid.interior_count();
    if m > limit.min(31) {
        return Err(Error::EnumerationLimit { interior: m, limit: limit.min(31) });
    }
    let nodes: Vec<(usize, usize)> = grid.interior_nodes().collect();

    // (popcount, mask) keys keep the reported order small-sets-first and
    // deterministic.
    let mut keyed: Vec<(u32, u32)> = (0..(1u32 << m)).map(|mask| (mask.count_ones(), mask)).collect();
    keyed.sort_unstable();

    let mut fixed_points = Vec::new();
    let mut family = Vec::new();

    for (_, mask) in keyed {
        let mut active_mask = vec![false; grid.node_count()];
        for (bit, &(i, j)) in nodes.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                active_mask[grid.idx(i, j)] = true;
            }
        }
        let set = ActiveSet2D::from_mask(grid, active_mask)?;

        let p = match solve_on_active_set(coeffs, &set) {
            Ok(p) => p,
            Err(Error::SingularSystem(_)) => continue,
            Err(other) => return Err(other),
        };

        let scale = p.values().iter().fold(0.0f64, |s, v| s.max(v.abs()));
        let nonneg_tol = -1e-12 * (1.0 + scale);
        if p.values().iter().any(|&v| v < nonneg_tol) {
            continue;
        }

        let slack_tol = 1e-10 * (1.0 + scale);
        let mut is_fixed_point = true;
        for &(i, j) in &nodes {
            if set.is_active(i, j) {
                continue;
            }
            let idx = grid.idx(i, j);
            let (k1, k2, k3, k4, d) = coeffs.parts_at(idx);
            let values = p.values();
            let pull = k1 * values[idx + 1]
                + k2 * values[idx - 1]
                + k3 * values[idx + grid.nx()]
                + k4 * values[idx - grid.nx()];
            let candidate = (pull - d) / (k1 + k2 + k3 + k4);
            if candidate > slack_tol {
                is_fixed_point = false;
                break;
            }
        }

        if is_fixed_point {
            let clamped: Vec<f64> = p.values().iter().map(|v| v.max(0.0)).collect();
            fixed_points.push((set.clone(), PressureField2D::from_values(grid, clamped)?));
        }
        family.push(set);
    }

    Ok(OracleResult2D { fixed_points, family })
}

/// [`enumerate_active_sets`] for a tridiagonal problem, via the strip
/// embedding.
pub fn enumerate_active_sets_1d(tri: &Tridiag1D, limit: usize) -> Result<OracleResult1D> {
    let grid = tri.grid();
    let strip = tri.to_strip()?;
    let result = enumerate_active_sets(&strip, limit)?;

    let mut fixed_points = Vec::with_capacity(result.fixed_points.len());
    for (set, p) in &result.fixed_points {
        fixed_points.push((strip_active_to_1d(grid, set)?, strip_pressure_to_1d(grid, p)?));
    }
    let mut family = Vec::with_capacity(result.family.len());
    for set in &result.family {
        family.push(strip_active_to_1d(grid, set)?);
    }
    Ok(OracleResult1D { fixed_points, family })
}

/// Verify that the solution on `a ∪ b` dominates the solutions on `a` and
/// on `b` pointwise (within `1e-10` scaled), and is itself nonnegative.
///
/// `a` and `b` must be family members (nonnegative constrained solutions);
/// passing arbitrary sets makes the premise false and the check
/// meaningless.
pub fn check_union_closure(
    coeffs: &CoefficientGrid2D,
    a: &ActiveSet2D,
    b: &ActiveSet2D,
) -> Result<bool> {
    let union = a.union(b)?;
    let pa = solve_on_active_set(coeffs, a)?;
    let pb = solve_on_active_set(coeffs, b)?;
    let pu = match solve_on_active_set(coeffs, &union) {
        Ok(p) => p,
        // Two separately grounded regions can union into one that encloses
        // a floating patch; that union is outside the family by dint of
        // having no solution at all, which the check must surface.
        Err(Error::SingularSystem(_)) => return Ok(false),
        Err(other) => return Err(other),
    };

    let scale = pu
        .values()
        .iter()
        .chain(pa.values())
        .chain(pb.values())
        .fold(0.0f64, |s, v| s.max(v.abs()));
    let tol = 1e-10 * (1.0 + scale);

    let ok = pu
        .values()
        .iter()
        .zip(pa.values().iter().zip(pb.values()))
        .all(|(&u, (&va, &vb))| u >= va.max(vb) - tol && u >= -tol);
    Ok(ok)
}

/// Verify the order-theoretic shape of the family: the union of all
/// members is itself a member (closure at the top), and that greatest
/// member is a fixed-point representation — constraining to it produces
/// the solution.
pub fn check_maximality(result: &OracleResult2D) -> Result<bool> {
    let mut iter = result.family.iter();
    let Some(first) = iter.next() else {
        // The empty set is always a family member; an empty family means
        // the enumeration was fed garbage.
        return Ok(false);
    };
    let mut top = first.clone();
    for set in iter {
        top = top.union(set)?;
    }
    let in_family = result.family.iter().any(|s| s.mask() == top.mask());
    let is_fixed_point = result.fixed_points.iter().any(|(s, _)| s.mask() == top.mask());
    Ok(in_family && is_fixed_point)
}

/// Verify the strict-positivity propagation: when no node pushes against
/// the pressure (`d <= 0` everywhere) and at least one interior node has
/// `d < 0`, the full-interior solution must be strictly positive at every
/// interior node — the support spreads through the stencil graph without
/// stopping.
///
/// Fails with [`Error::Domain`] when the premise does not hold.
pub fn check_strict_positivity(coeffs: &CoefficientGrid2D) -> Result<bool> {
    let grid = coeffs.grid();
    let mut any_negative = false;
    for (i, j) in grid.interior_nodes() {
        let d = coeffs.d(i, j);
        if d > 0.0 {
            return Err(Error::Domain(format!(
                "source at ({i}, {j}) is positive; the positivity claim needs d <= 0 everywhere"
            )));
        }
        any_negative |= d < 0.0;
    }
    if !any_negative {
        return Err(Error::Domain(
            "positivity claim needs at least one strictly negative source".into(),
        ));
    }

    let all: Vec<(usize, usize)> = grid.interior_nodes().collect();
    let full = ActiveSet2D::from_indices(grid, &all)?;
    let p = solve_on_active_set(coeffs, &full)?;
    Ok(grid
        .interior_nodes()
        .all(|(i, j)| p.at(i, j) > 0.0))
}
