//! Active sets: which interior nodes carry positive pressure.
//!
//! Active sets are ordered by inclusion.  The union of two sets is their
//! least upper bound, and the solution of the complementarity problem is the
//! greatest element among all sets whose constrained solve stays nonnegative.
//! Boundary nodes are never active; the constructors enforce that.

use crate::error::{Error, Result};
use crate::grid::{Grid1D, Grid2D};

#[derive(Debug, Clone, PartialEq)]
pub struct ActiveSet1D {
    grid: Grid1D,
    mask: Vec<bool>,
}

impl ActiveSet1D {
    pub fn empty(grid: Grid1D) -> Self {
        Self { grid, mask: vec![false; grid.n_nodes()] }
    }

    /// Build from a per-node mask; boundary nodes must be `false`.
    pub fn from_mask(grid: Grid1D, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != grid.n_nodes() {
            return Err(Error::Domain(format!(
                "mask length {} does not match grid with {} nodes",
                mask.len(),
                grid.n_nodes()
            )));
        }
        if mask[0] || mask[grid.n_nodes() - 1] {
            return Err(Error::Domain("boundary nodes cannot be active".into()));
        }
        Ok(Self { grid, mask })
    }

    /// Build from the list of active interior node indices.
    pub fn from_indices(grid: Grid1D, indices: &[usize]) -> Result<Self> {
        let mut mask = vec![false; grid.n_nodes()];
        for &i in indices {
            if !grid.is_interior(i) {
                return Err(Error::Domain(format!("node {i} is not interior")));
            }
            mask[i] = true;
        }
        Ok(Self { grid, mask })
    }

    pub fn grid(&self) -> Grid1D {
        self.grid
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn is_active(&self, i: usize) -> bool {
        self.mask[i]
    }

    pub fn count(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch("union of sets on different grids".into()));
        }
        let mask = self.mask.iter().zip(&other.mask).map(|(a, b)| a | b).collect();
        Ok(Self { grid: self.grid, mask })
    }

    pub fn is_subset(&self, other: &Self) -> Result<bool> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch("comparing sets on different grids".into()));
        }
        Ok(self.mask.iter().zip(&other.mask).all(|(a, b)| !a | b))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ActiveSet2D {
    grid: Grid2D,
    mask: Vec<bool>,
}

impl ActiveSet2D {
    pub fn empty(grid: Grid2D) -> Self {
        Self { grid, mask: vec![false; grid.node_count()] }
    }

    /// Build from a flat per-node mask (`j * nx + i` layout); every node on
    /// the boundary ring must be `false`.
    pub fn from_mask(grid: Grid2D, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != grid.node_count() {
            return Err(Error::Domain(format!(
                "mask length {} does not match grid with {} nodes",
                mask.len(),
                grid.node_count()
            )));
        }
        for j in 0..grid.ny() {
            for i in 0..grid.nx() {
                if mask[grid.idx(i, j)] && !grid.is_interior(i, j) {
                    return Err(Error::Domain(format!(
                        "boundary node ({i}, {j}) cannot be active"
                    )));
                }
            }
        }
        Ok(Self { grid, mask })
    }

    pub fn from_indices(grid: Grid2D, indices: &[(usize, usize)]) -> Result<Self> {
        let mut mask = vec![false; grid.node_count()];
        for &(i, j) in indices {
            if !grid.is_interior(i, j) {
                return Err(Error::Domain(format!("node ({i}, {j}) is not interior")));
            }
            mask[grid.idx(i, j)] = true;
        }
        Ok(Self { grid, mask })
    }

    pub fn grid(&self) -> Grid2D {
        self.grid
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn is_active(&self, i: usize, j: usize) -> bool {
        self.mask[self.grid.idx(i, j)]
    }

    pub fn count(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch("union of sets on different grids".into()));
        }
        let mask = self.mask.iter().zip(&other.mask).map(|(a, b)| a | b).collect();
        Ok(Self { grid: self.grid, mask })
    }

    pub fn is_subset(&self, other: &Self) -> Result<bool> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch("comparing sets on different grids".into()));
        }
        Ok(self.mask.iter().zip(&other.mask).all(|(a, b)| !a | b))
    }
}
