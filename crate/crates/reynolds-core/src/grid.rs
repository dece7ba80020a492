//! Uniform node-centered grids.
//!
//! Nodes sit at `x0 + i*dx` (and `y0 + j*dy` in 2D).  The outermost layer of
//! nodes is the Dirichlet boundary where the pressure is pinned to zero; the
//! complementarity problem lives on the interior nodes only.

use std::ops::Range;

use crate::error::{Error, Result};

/// Uniform 1D grid with at least one interior node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    n_nodes: usize,
    x0: f64,
    dx: f64,
}

impl Grid1D {
    /// A grid of `n_nodes` nodes starting at `x0` with spacing `dx`.
    ///
    /// Requires `n_nodes >= 3` (two boundary nodes plus at least one
    /// interior node) and a positive finite spacing.
    pub fn new(n_nodes: usize, x0: f64, dx: f64) -> Result<Self> {
        if n_nodes < 3 {
            return Err(Error::Domain(format!(
                "grid needs at least 3 nodes, got {n_nodes}"
            )));
        }
        if !(dx.is_finite() && dx > 0.0) || !x0.is_finite() {
            return Err(Error::Domain(format!(
                "grid origin/spacing must be finite with dx > 0, got x0={x0}, dx={dx}"
            )));
        }
        Ok(Self { n_nodes, x0, dx })
    }

    /// A grid spanning `[x_min, x_max]` with `n_nodes` equally spaced nodes.
    pub fn from_extent(x_min: f64, x_max: f64, n_nodes: usize) -> Result<Self> {
        if n_nodes < 3 {
            return Err(Error::Domain(format!(
                "grid needs at least 3 nodes, got {n_nodes}"
            )));
        }
        if !(x_max.is_finite() && x_min.is_finite() && x_max > x_min) {
            return Err(Error::Domain(format!(
                "grid extent must satisfy x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        Self::new(n_nodes, x_min, (x_max - x_min) / (n_nodes - 1) as f64)
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Coordinate of node `i`.
    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    /// Indices of the interior nodes.
    pub fn interior(&self) -> Range<usize> {
        1..self.n_nodes - 1
    }

    pub fn interior_count(&self) -> usize {
        self.n_nodes - 2
    }

    pub fn is_interior(&self, i: usize) -> bool {
        i >= 1 && i + 1 < self.n_nodes
    }
}

/// Uniform 2D grid; the node `(i, j)` maps to flat index `j * nx + i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    nx: usize,
    ny: usize,
    x0: f64,
    y0: f64,
    dx: f64,
    dy: f64,
}

impl Grid2D {
    pub fn new(nx: usize, ny: usize, x0: f64, y0: f64, dx: f64, dy: f64) -> Result<Self> {
        if nx < 3 || ny < 3 {
            return Err(Error::Domain(format!(
                "grid needs at least 3 nodes per axis, got {nx} x {ny}"
            )));
        }
        let finite = x0.is_finite() && y0.is_finite();
        if !(dx.is_finite() && dx > 0.0 && dy.is_finite() && dy > 0.0) || !finite {
            return Err(Error::Domain(format!(
                "grid origin/spacing must be finite with dx, dy > 0, got dx={dx}, dy={dy}"
            )));
        }
        Ok(Self { nx, ny, x0, y0, dx, dy })
    }

    /// A grid spanning `[x_min, x_max] x [y_min, y_max]`.
    // `!(max > min)` instead of `max <= min`: NaN extents must fail too.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn from_extent(
        x_min: f64,
        x_max: f64,
        nx: usize,
        y_min: f64,
        y_max: f64,
        ny: usize,
    ) -> Result<Self> {
        if nx < 3 || ny < 3 {
            return Err(Error::Domain(format!(
                "grid needs at least 3 nodes per axis, got {nx} x {ny}"
            )));
        }
        if !(x_max > x_min) || !(y_max > y_min) {
            return Err(Error::Domain(format!(
                "grid extent must be increasing, got x [{x_min}, {x_max}], y [{y_min}, {y_max}]"
            )));
        }
        Self::new(
            nx,
            ny,
            x_min,
            y_min,
            (x_max - x_min) / (nx - 1) as f64,
            (y_max - y_min) / (ny - 1) as f64,
        )
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn y0(&self) -> f64 {
        self.y0
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn dy(&self) -> f64 {
        self.dy
    }

    pub fn node_count(&self) -> usize {
        self.nx * self.ny
    }

    pub fn interior_count(&self) -> usize {
        (self.nx - 2) * (self.ny - 2)
    }

    /// Flat index of node `(i, j)`; row-major, `i` fastest.
    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.nx && j < self.ny);
        j * self.nx + i
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y0 + j as f64 * self.dy
    }

    pub fn is_interior(&self, i: usize, j: usize) -> bool {
        i >= 1 && i + 1 < self.nx && j >= 1 && j + 1 < self.ny
    }

    /// Interior nodes in sweep order: `j` outer, `i` inner, both ascending,
    /// so the flat index is strictly increasing.
    pub fn interior_nodes(&self) -> impl Iterator<Item = (usize, usize)> {
        let nx = self.nx;
        let ny = self.ny;
        (1..ny - 1).flat_map(move |j| (1..nx - 1).map(move |i| (i, j)))
    }
}
