//! Discretization: physical film data to coefficient fields to stencils.
//!
//! The continuous problem is `d/dx(f1 dp/dx) + d/dy(f2 dp/dy) = f3` with
//! `f1 = f2 = rho * h^e / (divisor * eta)` and
//! `f3 = 6 (Vx d(rho h)/dx + Vy d(rho h)/dy + 2 d(rho h)/dt)`.
//!
//! On a uniform node grid the five-point discretization at node `(i, j)` is
//!
//! ```text
//!   k1 p(i+1,j) + k2 p(i-1,j) + k3 p(i,j+1) + k4 p(i,j-1) - K p(i,j) = D
//! ```
//!
//! with `k1 = f1(i+1/2,j)/dx^2`, `k2 = f1(i-1/2,j)/dx^2`,
//! `k3 = f2(i,j+1/2)/dy^2`, `k4 = f2(i,j-1/2)/dy^2`, `K = k1+k2+k3+k4` and
//! `D = f3(i,j)`.  Midpoint diffusivities are arithmetic means of the two
//! adjacent node values.  In 1D the same stencil collapses to
//! `A p(i-1) + B p(i+1) - (A+B) p(i) = C`.

use crate::active_set::{ActiveSet1D, ActiveSet2D};
use crate::error::{Error, Result};
use crate::field::{PressureField1D, PressureField2D};
use crate::grid::{Grid1D, Grid2D};

/// How the diffusivity `f1 = f2` is formed from the film data.
///
/// The default uses `rho * h^2 / eta`.  The classical lubrication form
/// `rho * h^3 / (12 eta)` is [`DiffusivityLaw::classical`]; both are special
/// cases of `rho * h.powf(h_exponent) / (divisor * eta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusivityLaw {
    pub h_exponent: f64,
    pub divisor: f64,
}

impl Default for DiffusivityLaw {
    fn default() -> Self {
        Self { h_exponent: 2.0, divisor: 1.0 }
    }
}

impl DiffusivityLaw {
    pub fn classical() -> Self {
        Self { h_exponent: 3.0, divisor: 12.0 }
    }

    fn validate(&self) -> Result<()> {
        if !self.h_exponent.is_finite() || !(self.divisor.is_finite() && self.divisor > 0.0) {
            return Err(Error::Domain(format!(
                "diffusivity law needs finite exponent and positive divisor, got {self:?}"
            )));
        }
        Ok(())
    }
}

fn check_positive(name: &str, values: &[f64]) -> Result<()> {
    for (i, &v) in values.iter().enumerate() {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::Domain(format!("{name}[{i}] must be finite and > 0, got {v}")));
        }
    }
    Ok(())
}

fn check_finite(name: &str, values: &[f64]) -> Result<()> {
    for (i, &v) in values.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::Domain(format!("{name}[{i}] must be finite, got {v}")));
        }
    }
    Ok(())
}

/// Per-node film data for a 1D problem.
#[derive(Debug, Clone)]
pub struct PhysicalFields1D {
    grid: Grid1D,
    h: Vec<f64>,
    rho: Vec<f64>,
    eta: Vec<f64>,
    vx: f64,
    d_rho_h_dt: Vec<f64>,
}

impl PhysicalFields1D {
    /// `h`, `rho`, `eta` are per-node and must be positive; `d_rho_h_dt`
    /// defaults to zero (stationary film).
    pub fn new(
        grid: Grid1D,
        h: Vec<f64>,
        rho: Vec<f64>,
        eta: Vec<f64>,
        vx: f64,
        d_rho_h_dt: Option<Vec<f64>>,
    ) -> Result<Self> {
        let n = grid.n_nodes();
        let d_rho_h_dt = d_rho_h_dt.unwrap_or_else(|| vec![0.0; n]);
        for (name, v) in [("h", &h), ("rho", &rho), ("eta", &eta), ("d_rho_h_dt", &d_rho_h_dt)] {
            if v.len() != n {
                return Err(Error::Domain(format!(
                    "{name} has {} entries for a grid with {n} nodes",
                    v.len()
                )));
            }
        }
        check_positive("h", &h)?;
        check_positive("rho", &rho)?;
        check_positive("eta", &eta)?;
        check_finite("d_rho_h_dt", &d_rho_h_dt)?;
        if !vx.is_finite() {
            return Err(Error::Domain(format!("vx must be finite, got {vx}")));
        }
        Ok(Self { grid, h, rho, eta, vx, d_rho_h_dt })
    }

    pub fn grid(&self) -> Grid1D {
        self.grid
    }
}

/// Per-node film data for a 2D problem (flat `j * nx + i` layout).
#[derive(Debug, Clone)]
pub struct PhysicalFields2D {
    grid: Grid2D,
    h: Vec<f64>,
    rho: Vec<f64>,
    eta: Vec<f64>,
    vx: f64,
    vy: f64,
    d_rho_h_dt: Vec<f64>,
}

impl PhysicalFields2D {
    pub fn new(
        grid: Grid2D,
        h: Vec<f64>,
        rho: Vec<f64>,
        eta: Vec<f64>,
        vx: f64,
        vy: f64,
        d_rho_h_dt: Option<Vec<f64>>,
    ) -> Result<Self> {
        let n = grid.node_count();
        let d_rho_h_dt = d_rho_h_dt.unwrap_or_else(|| vec![0.0; n]);
        for (name, v) in [("h", &h), ("rho", &rho), ("eta", &eta), ("d_rho_h_dt", &d_rho_h_dt)] {
            if v.len() != n {
                return Err(Error::Domain(format!(
                    "{name} has {} entries for a grid with {n} nodes",
                    v.len()
                )));
            }
        }
        check_positive("h", &h)?;
        check_positive("rho", &rho)?;
        check_positive("eta", &eta)?;
        check_finite("d_rho_h_dt", &d_rho_h_dt)?;
        if !vx.is_finite() || !vy.is_finite() {
            return Err(Error::Domain(format!("velocities must be finite, got ({vx}, {vy})")));
        }
        Ok(Self { grid, h, rho, eta, vx, vy, d_rho_h_dt })
    }

    pub fn grid(&self) -> Grid2D {
        self.grid
    }
}

/// Continuous coefficients sampled for a 1D grid: diffusivity at the `n-1`
/// midpoints, source at the `n` nodes.
#[derive(Debug, Clone)]
pub struct CoefficientFields1D {
    grid: Grid1D,
    f1: Vec<f64>,
    f3: Vec<f64>,
}

impl CoefficientFields1D {
    pub fn from_values(grid: Grid1D, f1: Vec<f64>, f3: Vec<f64>) -> Result<Self> {
        if f1.len() != grid.n_nodes() - 1 || f3.len() != grid.n_nodes() {
            return Err(Error::Domain(format!(
                "expected {} midpoint and {} node values, got {} and {}",
                grid.n_nodes() - 1,
                grid.n_nodes(),
                f1.len(),
                f3.len()
            )));
        }
        check_finite("f1", &f1)?;
        check_finite("f3", &f3)?;
        if f1.iter().any(|&v| v < 0.0) {
            return Err(Error::Domain("diffusivity f1 must be nonnegative".into()));
        }
        Ok(Self { grid, f1, f3 })
    }

    /// Constant coefficients, a common test configuration.
    pub fn constant(grid: Grid1D, f1: f64, f3: f64) -> Result<Self> {
        Self::from_values(grid, vec![f1; grid.n_nodes() - 1], vec![f3; grid.n_nodes()])
    }

    pub fn grid(&self) -> Grid1D {
        self.grid
    }

    /// Diffusivity at the midpoint between nodes `i` and `i+1`.
    pub fn f1_mid(&self, i: usize) -> f64 {
        self.f1[i]
    }

    pub fn f3(&self, i: usize) -> f64 {
        self.f3[i]
    }
}

/// Continuous coefficients sampled for a 2D grid.
///
/// `f1` lives on x-midpoints (`(nx-1) * ny` values, index `j*(nx-1)+i`),
/// `f2` on y-midpoints (`nx * (ny-1)` values, index `j*nx+i`), `f3` on the
/// nodes.
#[derive(Debug, Clone)]
pub struct CoefficientFields2D {
    grid: Grid2D,
    f1: Vec<f64>,
    f2: Vec<f64>,
    f3: Vec<f64>,
}

impl CoefficientFields2D {
    pub fn from_values(grid: Grid2D, f1: Vec<f64>, f2: Vec<f64>, f3: Vec<f64>) -> Result<Self> {
        let (nx, ny) = (grid.nx(), grid.ny());
        if f1.len() != (nx - 1) * ny || f2.len() != nx * (ny - 1) || f3.len() != nx * ny {
            return Err(Error::Domain(format!(
                "expected {} x-midpoint, {} y-midpoint and {} node values, got {}, {}, {}",
                (nx - 1) * ny,
                nx * (ny - 1),
                nx * ny,
                f1.len(),
                f2.len(),
                f3.len()
            )));
        }
        check_finite("f1", &f1)?;
        check_finite("f2", &f2)?;
        check_finite("f3", &f3)?;
        if f1.iter().any(|&v| v < 0.0) || f2.iter().any(|&v| v < 0.0) {
            return Err(Error::Domain("diffusivities f1, f2 must be nonnegative".into()));
        }
        Ok(Self { grid, f1, f2, f3 })
    }

    pub fn constant(grid: Grid2D, f1: f64, f2: f64, f3: f64) -> Result<Self> {
        let (nx, ny) = (grid.nx(), grid.ny());
        Self::from_values(
            grid,
            vec![f1; (nx - 1) * ny],
            vec![f2; nx * (ny - 1)],
            vec![f3; nx * ny],
        )
    }

    pub fn grid(&self) -> Grid2D {
        self.grid
    }

    /// Diffusivity at the midpoint between `(i, j)` and `(i+1, j)`.
    pub fn f1_mid(&self, i: usize, j: usize) -> f64 {
        self.f1[j * (self.grid.nx() - 1) + i]
    }

    /// Diffusivity at the midpoint between `(i, j)` and `(i, j+1)`.
    pub fn f2_mid(&self, i: usize, j: usize) -> f64 {
        self.f2[j * self.grid.nx() + i]
    }

    pub fn f3(&self, i: usize, j: usize) -> f64 {
        self.f3[self.grid.idx(i, j)]
    }
}

/// Sample the Reynolds coefficients from 1D film data.
///
/// Midpoint diffusivities are arithmetic means of the adjacent node values
/// of `rho * h^e / (divisor * eta)`; the source term uses central
/// differences of `rho * h` at interior nodes and one-sided differences at
/// the two outermost nodes.
pub fn build_reynolds_coefficients_1d(
    phys: &PhysicalFields1D,
    law: DiffusivityLaw,
) -> Result<CoefficientFields1D> {
    law.validate()?;
    let n = phys.grid.n_nodes();
    let dx = phys.grid.dx();

    let g: Vec<f64> = (0..n)
        .map(|i| phys.rho[i] * phys.h[i].powf(law.h_exponent) / (law.divisor * phys.eta[i]))
        .collect();
    check_finite("diffusivity", &g)?;
    let f1: Vec<f64> = (0..n - 1).map(|i| 0.5 * (g[i] + g[i + 1])).collect();

    let rho_h: Vec<f64> = (0..n).map(|i| phys.rho[i] * phys.h[i]).collect();
    let mut f3 = vec![0.0; n];
    for i in 0..n {
        let ddx = if i == 0 {
            (rho_h[1] - rho_h[0]) / dx
        } else if i == n - 1 {
            (rho_h[n - 1] - rho_h[n - 2]) / dx
        } else {
            (rho_h[i + 1] - rho_h[i - 1]) / (2.0 * dx)
        };
        f3[i] = 6.0 * (phys.vx * ddx + 2.0 * phys.d_rho_h_dt[i]);
    }
    CoefficientFields1D::from_values(phys.grid, f1, f3)
}

/// Sample the Reynolds coefficients from 2D film data; see the 1D variant.
pub fn build_reynolds_coefficients(
    phys: &PhysicalFields2D,
    law: DiffusivityLaw,
) -> Result<CoefficientFields2D> {
    law.validate()?;
    let grid = phys.grid;
    let (nx, ny) = (grid.nx(), grid.ny());
    let (dx, dy) = (grid.dx(), grid.dy());

    let g: Vec<f64> = (0..nx * ny)
        .map(|k| phys.rho[k] * phys.h[k].powf(law.h_exponent) / (law.divisor * phys.eta[k]))
        .collect();
    check_finite("diffusivity", &g)?;

    let mut f1 = vec![0.0; (nx - 1) * ny];
    for j in 0..ny {
        for i in 0..nx - 1 {
            f1[j * (nx - 1) + i] = 0.5 * (g[grid.idx(i, j)] + g[grid.idx(i + 1, j)]);
        }
    }
    let mut f2 = vec![0.0; nx * (ny - 1)];
    for j in 0..ny - 1 {
        for i in 0..nx {
            f2[j * nx + i] = 0.5 * (g[grid.idx(i, j)] + g[grid.idx(i, j + 1)]);
        }
    }

    let rho_h: Vec<f64> = (0..nx * ny).map(|k| phys.rho[k] * phys.h[k]).collect();
    let mut f3 = vec![0.0; nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            let ddx = if i == 0 {
                (rho_h[grid.idx(1, j)] - rho_h[grid.idx(0, j)]) / dx
            } else if i == nx - 1 {
                (rho_h[grid.idx(nx - 1, j)] - rho_h[grid.idx(nx - 2, j)]) / dx
            } else {
                (rho_h[grid.idx(i + 1, j)] - rho_h[grid.idx(i - 1, j)]) / (2.0 * dx)
            };
            let ddy = if j == 0 {
                (rho_h[grid.idx(i, 1)] - rho_h[grid.idx(i, 0)]) / dy
            } else if j == ny - 1 {
                (rho_h[grid.idx(i, ny - 1)] - rho_h[grid.idx(i, ny - 2)]) / dy
            } else {
                (rho_h[grid.idx(i, j + 1)] - rho_h[grid.idx(i, j - 1)]) / (2.0 * dy)
            };
            f3[grid.idx(i, j)] =
                6.0 * (phys.vx * ddx + phys.vy * ddy + 2.0 * phys.d_rho_h_dt[grid.idx(i, j)]);
        }
    }

    CoefficientFields2D::from_values(grid, f1, f2, f3)
}

/// Five-point stencil coefficients per node.  Boundary rows are present in
/// the arrays but never read: boundary pressure is pinned to zero.
#[derive(Debug, Clone)]
pub struct CoefficientGrid2D {
    grid: Grid2D,
    k1: Vec<f64>, // east  (i+1, j)
    k2: Vec<f64>, // west  (i-1, j)
    k3: Vec<f64>, // north (i, j+1)
    k4: Vec<f64>, // south (i, j-1)
    d: Vec<f64>,
}

impl CoefficientGrid2D {
    /// Assemble from raw per-node arrays (flat `j * nx + i` layout).
    ///
    /// Interior nodes need nonnegative couplings with a positive sum; the
    /// boundary entries are ignored.
    // `!(sum > 0)` instead of `sum <= 0`: a NaN sum must fail too.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn from_parts(
        grid: Grid2D,
        k1: Vec<f64>,
        k2: Vec<f64>,
        k3: Vec<f64>,
        k4: Vec<f64>,
        d: Vec<f64>,
    ) -> Result<Self> {
        let n = grid.node_count();
        for (name, v) in [("k1", &k1), ("k2", &k2), ("k3", &k3), ("k4", &k4), ("d", &d)] {
            if v.len() != n {
                return Err(Error::Domain(format!(
                    "{name} has {} entries for a grid with {n} nodes",
                    v.len()
                )));
            }
        }
        let s = Self { grid, k1, k2, k3, k4, d };
        for (i, j) in grid.interior_nodes() {
            let idx = grid.idx(i, j);
            let ks = [s.k1[idx], s.k2[idx], s.k3[idx], s.k4[idx]];
            if ks.iter().any(|k| !k.is_finite() || *k < 0.0) || !s.d[idx].is_finite() {
                return Err(Error::Domain(format!(
                    "stencil at ({i}, {j}) must have finite nonnegative couplings, got {ks:?}"
                )));
            }
            if !(ks.iter().sum::<f64>() > 0.0) {
                return Err(Error::SingularStencil(format!(
                    "node ({i}, {j}) has zero total coupling"
                )));
            }
        }
        Ok(s)
    }

    pub fn grid(&self) -> Grid2D {
        self.grid
    }

    #[inline]
    pub fn k1(&self, i: usize, j: usize) -> f64 {
        self.k1[self.grid.idx(i, j)]
    }

    #[inline]
    pub fn k2(&self, i: usize, j: usize) -> f64 {
        self.k2[self.grid.idx(i, j)]
    }

    #[inline]
    pub fn k3(&self, i: usize, j: usize) -> f64 {
        self.k3[self.grid.idx(i, j)]
    }

    #[inline]
    pub fn k4(&self, i: usize, j: usize) -> f64 {
        self.k4[self.grid.idx(i, j)]
    }

    /// Diagonal weight `K = k1 + k2 + k3 + k4`.
    #[inline]
    pub fn diag(&self, i: usize, j: usize) -> f64 {
        let idx = self.grid.idx(i, j);
        self.k1[idx] + self.k2[idx] + self.k3[idx] + self.k4[idx]
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.d[self.grid.idx(i, j)]
    }

    #[inline]
    pub(crate) fn parts_at(&self, idx: usize) -> (f64, f64, f64, f64, f64) {
        (self.k1[idx], self.k2[idx], self.k3[idx], self.k4[idx], self.d[idx])
    }
}

/// Build the five-point stencil from sampled coefficient fields.
// `!(sum > 0)` instead of `sum <= 0`: a NaN sum must fail too.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn build_stencil_2d(coef: &CoefficientFields2D) -> Result<CoefficientGrid2D> {
    let grid = coef.grid;
    let (nx, ny) = (grid.nx(), grid.ny());
    let inv_dx2 = 1.0 / (grid.dx() * grid.dx());
    let inv_dy2 = 1.0 / (grid.dy() * grid.dy());

    let n = grid.node_count();
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut d = vec![0.0; n];

    for j in 1..ny - 1 {
        for i in 1..nx - 1 {
            let idx = grid.idx(i, j);
            k1[idx] = coef.f1_mid(i, j) * inv_dx2;
            k2[idx] = coef.f1_mid(i - 1, j) * inv_dx2;
            k3[idx] = coef.f2_mid(i, j) * inv_dy2;
            k4[idx] = coef.f2_mid(i, j - 1) * inv_dy2;
            d[idx] = coef.f3(i, j);
            if !(k1[idx] + k2[idx] + k3[idx] + k4[idx] > 0.0) {
                return Err(Error::SingularStencil(format!(
                    "diffusivity vanishes around node ({i}, {j})"
                )));
            }
        }
    }
    CoefficientGrid2D::from_parts(grid, k1, k2, k3, k4, d)
}

/// Tridiagonal 1D stencil: `a[i] p(i-1) + b[i] p(i+1) - (a[i]+b[i]) p(i) = c[i]`
/// at every interior node.  Entries at the two boundary nodes are unused.
#[derive(Debug, Clone)]
pub struct Tridiag1D {
    grid: Grid1D,
    a: Vec<f64>,
    b: Vec<f64>,
    c: Vec<f64>,
}

impl Tridiag1D {
    /// Assemble from raw arrays; interior couplings must be strictly
    /// positive (the superposition recurrence divides by `b`).
    pub fn from_parts(grid: Grid1D, a: Vec<f64>, b: Vec<f64>, c: Vec<f64>) -> Result<Self> {
        let n = grid.n_nodes();
        for (name, v) in [("a", &a), ("b", &b), ("c", &c)] {
            if v.len() != n {
                return Err(Error::Domain(format!(
                    "{name} has {} entries for a grid with {n} nodes",
                    v.len()
                )));
            }
        }
        check_finite("c", &c)?;
        for i in grid.interior() {
            if !(a[i].is_finite() && a[i] > 0.0 && b[i].is_finite() && b[i] > 0.0) {
                return Err(Error::SingularStencil(format!(
                    "couplings at node {i} must be positive, got a={}, b={}",
                    a[i], b[i]
                )));
            }
        }
        Ok(Self { grid, a, b, c })
    }

    pub fn grid(&self) -> Grid1D {
        self.grid
    }

    /// Coupling to the left neighbor.
    #[inline]
    pub fn a(&self, i: usize) -> f64 {
        self.a[i]
    }

    /// Coupling to the right neighbor.
    #[inline]
    pub fn b(&self, i: usize) -> f64 {
        self.b[i]
    }

    /// Source value.
    #[inline]
    pub fn c(&self, i: usize) -> f64 {
        self.c[i]
    }

    /// The same physical problem with the node order flipped; used to run
    /// right-to-left segment passes through the left-to-right machinery.
    pub(crate) fn reversed(&self) -> Self {
        let n = self.grid.n_nodes();
        let mut a = vec![0.0; n];
        let mut b = vec![0.0; n];
        let mut c = vec![0.0; n];
        for i in 0..n {
            let r = n - 1 - i;
            a[i] = self.b[r];
            b[i] = self.a[r];
            c[i] = self.c[r];
        }
        Self { grid: self.grid, a, b, c }
    }

    /// Embed the 1D problem into a three-row 2D grid (the middle row holds
    /// the problem, the outer rows are boundary).  This lets the 2D solvers
    /// and the enumeration oracle run 1D problems unchanged.
    pub fn to_strip(&self) -> Result<CoefficientGrid2D> {
        let n = self.grid.n_nodes();
        let dx = self.grid.dx();
        let grid2 = Grid2D::new(n, 3, self.grid.x0(), -dx, dx, dx)?;
        let count = grid2.node_count();
        let mut k1 = vec![0.0; count];
        let mut k2 = vec![0.0; count];
        let k3 = vec![0.0; count];
        let k4 = vec![0.0; count];
        let mut d = vec![0.0; count];
        for i in self.grid.interior() {
            let idx = grid2.idx(i, 1);
            k1[idx] = self.b[i];
            k2[idx] = self.a[i];
            d[idx] = self.c[i];
        }
        CoefficientGrid2D::from_parts(grid2, k1, k2, k3, k4, d)
    }
}

/// Build the tridiagonal stencil from sampled 1D coefficient fields.
pub fn build_tridiagonal_1d(coef: &CoefficientFields1D) -> Result<Tridiag1D> {
    let grid = coef.grid;
    let n = grid.n_nodes();
    let inv_dx2 = 1.0 / (grid.dx() * grid.dx());

    let mut a = vec![0.0; n];
    let mut b = vec![0.0; n];
    let mut c = vec![0.0; n];
    for i in grid.interior() {
        a[i] = coef.f1_mid(i - 1) * inv_dx2;
        b[i] = coef.f1_mid(i) * inv_dx2;
        c[i] = coef.f3(i);
    }
    Tridiag1D::from_parts(grid, a, b, c)
}

/// Pull the middle row of a strip-embedded 2D field back onto the 1D grid.
pub fn strip_pressure_to_1d(grid: Grid1D, p: &PressureField2D) -> Result<PressureField1D> {
    let g2 = p.grid();
    if g2.nx() != grid.n_nodes() || g2.ny() != 3 {
        return Err(Error::GridMismatch(format!(
            "expected a {} x 3 strip, got {} x {}",
            grid.n_nodes(),
            g2.nx(),
            g2.ny()
        )));
    }
    let values = (0..grid.n_nodes()).map(|i| p.at(i, 1)).collect();
    PressureField1D::from_values(grid, values)
}

/// Pull the middle row of a strip-embedded active set back onto the 1D grid.
pub fn strip_active_to_1d(grid: Grid1D, set: &ActiveSet2D) -> Result<ActiveSet1D> {
    let g2 = set.grid();
    if g2.nx() != grid.n_nodes() || g2.ny() != 3 {
        return Err(Error::GridMismatch(format!(
            "expected a {} x 3 strip, got {} x {}",
            grid.n_nodes(),
            g2.nx(),
            g2.ny()
        )));
    }
    let mask = (0..grid.n_nodes()).map(|i| set.is_active(i, 1)).collect();
    ActiveSet1D::from_mask(grid, mask)
}

/// Lift a 1D active set onto the middle row of a strip grid.
pub fn active_1d_to_strip(set: &ActiveSet1D, grid2: Grid2D) -> Result<ActiveSet2D> {
    let g1 = set.grid();
    if grid2.nx() != g1.n_nodes() || grid2.ny() != 3 {
        return Err(Error::GridMismatch(format!(
            "expected a {} x 3 strip, got {} x {}",
            g1.n_nodes(),
            grid2.nx(),
            grid2.ny()
        )));
    }
    let mut mask = vec![false; grid2.node_count()];
    for i in g1.interior() {
        if set.is_active(i) {
            mask[grid2.idx(i, 1)] = true;
        }
    }
    ActiveSet2D::from_mask(grid2, mask)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_law_on_constant_film() {
        // h = 2, rho = eta = 1: g = h^2 = 4 at every node and midpoint.
        let grid = Grid1D::new(5, 0.0, 0.5).unwrap();
        let phys = PhysicalFields1D::new(
            grid,
            vec![2.0; 5],
            vec![1.0; 5],
            vec![1.0; 5],
            0.0,
            None,
        )
        .unwrap();
        let coef = build_reynolds_coefficients_1d(&phys, DiffusivityLaw::default()).unwrap();
        for i in 0..4 {
            assert_eq!(coef.f1_mid(i), 4.0);
        }
        for i in 0..5 {
            assert_eq!(coef.f3(i), 0.0);
        }

        let classical =
            build_reynolds_coefficients_1d(&phys, DiffusivityLaw::classical()).unwrap();
        for i in 0..4 {
            assert!((classical.f1_mid(i) - 8.0 / 12.0).abs() < 1e-15);
        }
    }

    #[test]
    fn linear_film_gives_constant_source() {
        // h = 1 - x/2 on [0, 1], rho = eta = 1, vx = 1:
        // d(rho h)/dx = -1/2 everywhere, so f3 = 6 * (-1/2) = -3, including
        // the one-sided ends (exact for linear data).
        let grid = Grid1D::new(3, 0.0, 0.5).unwrap();
        let h: Vec<f64> = (0..3).map(|i| 1.0 - grid.x(i) / 2.0).collect();
        let phys =
            PhysicalFields1D::new(grid, h, vec![1.0; 3], vec![1.0; 3], 1.0, None).unwrap();
        let coef = build_reynolds_coefficients_1d(&phys, DiffusivityLaw::default()).unwrap();
        for i in 0..3 {
            assert!((coef.f3(i) + 3.0).abs() < 1e-14, "f3[{i}] = {}", coef.f3(i));
        }
    }

    #[test]
    fn quadratic_film_source_differences() {
        // h = x^2 + 1 on nodes x = 0, 0.5, 1 with vx = 1:
        // central at node 1: (2 - 1) / 1 = 1 -> f3 = 6;
        // one-sided ends: (1.25 - 1)/0.5 = 0.5 -> 3; (2 - 1.25)/0.5 = 1.5 -> 9.
        let grid = Grid1D::new(3, 0.0, 0.5).unwrap();
        let h: Vec<f64> = (0..3).map(|i| grid.x(i) * grid.x(i) + 1.0).collect();
        let phys =
            PhysicalFields1D::new(grid, h, vec![1.0; 3], vec![1.0; 3], 1.0, None).unwrap();
        let coef = build_reynolds_coefficients_1d(&phys, DiffusivityLaw::default()).unwrap();
        assert!((coef.f3(0) - 3.0).abs() < 1e-13);
        assert!((coef.f3(1) - 6.0).abs() < 1e-13);
        assert!((coef.f3(2) - 9.0).abs() < 1e-13);
    }

    #[test]
    fn squeeze_term_feeds_source() {
        // Stationary film with d(rho h)/dt = 0.25: f3 = 6 * 2 * 0.25 = 3.
        let grid = Grid1D::new(3, 0.0, 1.0).unwrap();
        let phys = PhysicalFields1D::new(
            grid,
            vec![1.0; 3],
            vec![1.0; 3],
            vec![1.0; 3],
            0.0,
            Some(vec![0.25; 3]),
        )
        .unwrap();
        let coef = build_reynolds_coefficients_1d(&phys, DiffusivityLaw::default()).unwrap();
        for i in 0..3 {
            assert!((coef.f3(i) - 3.0).abs() < 1e-14);
        }
    }

    #[test]
    fn physical_fields_reject_bad_film() {
        let grid = Grid1D::new(3, 0.0, 1.0).unwrap();
        let bad = PhysicalFields1D::new(
            grid,
            vec![1.0, 0.0, 1.0],
            vec![1.0; 3],
            vec![1.0; 3],
            0.0,
            None,
        );
        assert!(bad.is_err(), "zero thickness must be rejected");
    }

    #[test]
    fn stencil_from_constant_coefficients() {
        // f1 = f2 = 1, dx = dy = 0.5: every coupling is 1 / 0.25 = 4.
        let grid = Grid2D::new(4, 4, 0.0, 0.0, 0.5, 0.5).unwrap();
        let coef = CoefficientFields2D::constant(grid, 1.0, 1.0, -2.0).unwrap();
        let st = build_stencil_2d(&coef).unwrap();
        for (i, j) in grid.interior_nodes() {
            assert_eq!(st.k1(i, j), 4.0);
            assert_eq!(st.k2(i, j), 4.0);
            assert_eq!(st.k3(i, j), 4.0);
            assert_eq!(st.k4(i, j), 4.0);
            assert_eq!(st.diag(i, j), 16.0);
            assert_eq!(st.d(i, j), -2.0);
        }
    }

    #[test]
    fn tridiagonal_from_varying_diffusivity() {
        // f1(x) = 1 + x on [0, 1] with dx = 0.5; node values 1, 1.5, 2 give
        // midpoints 1.25 and 1.75, so A = 1.25/0.25 = 5 and B = 1.75/0.25 = 7
        // at the single interior node.
        let grid = Grid1D::new(3, 0.0, 0.5).unwrap();
        let f1 = vec![1.25, 1.75];
        let coef = CoefficientFields1D::from_values(grid, f1, vec![-1.0; 3]).unwrap();
        let tri = build_tridiagonal_1d(&coef).unwrap();
        assert_eq!(tri.a(1), 5.0);
        assert_eq!(tri.b(1), 7.0);
        assert_eq!(tri.c(1), -1.0);
    }

    #[test]
    fn zero_midpoint_diffusivity_is_singular() {
        let grid = Grid1D::new(4, 0.0, 1.0).unwrap();
        let coef =
            CoefficientFields1D::from_values(grid, vec![1.0, 0.0, 1.0], vec![0.0; 4]).unwrap();
        assert!(matches!(build_tridiagonal_1d(&coef), Err(Error::SingularStencil(_))));
    }

    #[test]
    fn reversed_swaps_couplings() {
        let grid = Grid1D::new(5, 0.0, 1.0).unwrap();
        let coef = CoefficientFields1D::from_values(
            grid,
            vec![1.0, 2.0, 3.0, 4.0],
            vec![0.0, 10.0, 20.0, 30.0, 0.0],
        )
        .unwrap();
        let tri = build_tridiagonal_1d(&coef).unwrap();
        let rev = tri.reversed();
        for i in grid.interior() {
            let r = grid.n_nodes() - 1 - i;
            assert_eq!(rev.a(i), tri.b(r));
            assert_eq!(rev.b(i), tri.a(r));
            assert_eq!(rev.c(i), tri.c(r));
        }
        // Reversing twice is the identity.
        let back = rev.reversed();
        for i in grid.interior() {
            assert_eq!(back.a(i), tri.a(i));
            assert_eq!(back.b(i), tri.b(i));
            assert_eq!(back.c(i), tri.c(i));
        }
    }

    #[test]
    fn strip_embedding_keeps_couplings_and_source() {
        let grid = Grid1D::new(4, 0.0, 1.0).unwrap();
        let coef = CoefficientFields1D::from_values(
            grid,
            vec![1.0, 2.0, 4.0],
            vec![0.0, -1.0, 3.0, 0.0],
        )
        .unwrap();
        let tri = build_tridiagonal_1d(&coef).unwrap();
        let strip = tri.to_strip().unwrap();
        assert_eq!(strip.grid().nx(), 4);
        assert_eq!(strip.grid().ny(), 3);
        for i in 1..=2 {
            assert_eq!(strip.k2(i, 1), tri.a(i));
            assert_eq!(strip.k1(i, 1), tri.b(i));
            assert_eq!(strip.k3(i, 1), 0.0);
            assert_eq!(strip.k4(i, 1), 0.0);
            assert_eq!(strip.d(i, 1), tri.c(i));
            assert_eq!(strip.diag(i, 1), tri.a(i) + tri.b(i));
        }
    }

    #[test]
    fn strip_round_trip_for_sets_and_fields() {
        let grid = Grid1D::new(5, 0.0, 1.0).unwrap();
        let coef = CoefficientFields1D::constant(grid, 1.0, -2.0).unwrap();
        let tri = build_tridiagonal_1d(&coef).unwrap();
        let strip = tri.to_strip().unwrap();

        let set1 = ActiveSet1D::from_indices(grid, &[1, 3]).unwrap();
        let lifted = active_1d_to_strip(&set1, strip.grid()).unwrap();
        assert!(lifted.is_active(1, 1));
        assert!(!lifted.is_active(2, 1));
        assert!(lifted.is_active(3, 1));
        assert_eq!(lifted.count(), 2);
        let lowered = strip_active_to_1d(grid, &lifted).unwrap();
        assert_eq!(lowered, set1);

        let mut p2 = PressureField2D::zeros(strip.grid());
        p2.values_mut()[strip.grid().idx(2, 1)] = 7.5;
        let p1 = strip_pressure_to_1d(grid, &p2).unwrap();
        assert_eq!(p1.at(2), 7.5);
        assert_eq!(p1.at(1), 0.0);
    }
}
