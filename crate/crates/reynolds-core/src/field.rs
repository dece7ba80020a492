//! Pressure fields: one value per grid node.
//!
//! The solvers in this crate return fields that are nonnegative with zero
//! boundary values.  The type itself does not force that — the constrained
//! solves used by the enumeration oracle deliberately produce fields with
//! negative entries so the caller can inspect them.

use crate::active_set::{ActiveSet1D, ActiveSet2D};
use crate::error::{Error, Result};
use crate::grid::{Grid1D, Grid2D};

#[derive(Debug, Clone, PartialEq)]
pub struct PressureField1D {
    grid: Grid1D,
    values: Vec<f64>,
}

impl PressureField1D {
    pub fn zeros(grid: Grid1D) -> Self {
        Self { grid, values: vec![0.0; grid.n_nodes()] }
    }

    pub fn from_values(grid: Grid1D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_nodes() {
            return Err(Error::Domain(format!(
                "field length {} does not match grid with {} nodes",
                values.len(),
                grid.n_nodes()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> Grid1D {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn at(&self, i: usize) -> f64 {
        self.values[i]
    }

    /// The set of nodes with strictly positive pressure.
    pub fn positive_set(&self) -> ActiveSet1D {
        let mask = self.values.iter().map(|&v| v > 0.0).collect();
        // Boundary nodes of a solver output are exactly zero, so the mask
        // never marks them; constructed fields could, hence the expect.
        ActiveSet1D::from_mask(self.grid, mask)
            .expect("positive values on the boundary cannot form an active set")
    }

    /// Largest pointwise difference against another field on the same grid.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch("comparing fields on different grids".into()));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PressureField2D {
    grid: Grid2D,
    values: Vec<f64>,
}

impl PressureField2D {
    pub fn zeros(grid: Grid2D) -> Self {
        Self { grid, values: vec![0.0; grid.node_count()] }
    }

    pub fn from_values(grid: Grid2D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.node_count() {
            return Err(Error::Domain(format!(
                "field length {} does not match grid with {} nodes",
                values.len(),
                grid.node_count()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> Grid2D {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.idx(i, j)]
    }

    /// The set of nodes with strictly positive pressure.
    pub fn positive_set(&self) -> ActiveSet2D {
        let mask = self.values.iter().map(|&v| v > 0.0).collect();
        ActiveSet2D::from_mask(self.grid, mask)
            .expect("positive values on the boundary cannot form an active set")
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch("comparing fields on different grids".into()));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_values_checks_length() {
        let g = Grid1D::new(5, 0.0, 1.0).unwrap();
        assert!(PressureField1D::from_values(g, vec![0.0; 4]).is_err());
        let f = PressureField1D::from_values(g, vec![0.0, 1.0, 2.0, 1.0, 0.0]).unwrap();
        assert_eq!(f.at(2), 2.0);
    }

    #[test]
    fn positive_set_uses_strict_positivity() {
        let g = Grid1D::new(6, 0.0, 1.0).unwrap();
        let f = PressureField1D::from_values(g, vec![0.0, 0.5, 0.0, 1e-300, 2.0, 0.0]).unwrap();
        let s = f.positive_set();
        assert!(!s.is_active(0));
        assert!(s.is_active(1));
        assert!(!s.is_active(2));
        assert!(s.is_active(3), "tiny positive values still count");
        assert!(s.is_active(4));
    }

    #[test]
    fn max_abs_diff_2d() {
        let g = Grid2D::new(3, 3, 0.0, 0.0, 1.0, 1.0).unwrap();
        let mut a = PressureField2D::zeros(g);
        let b = PressureField2D::zeros(g);
        a.values_mut()[4] = 0.75;
        assert_eq!(a.max_abs_diff(&b).unwrap(), 0.75);

        let other = Grid2D::new(3, 4, 0.0, 0.0, 1.0, 1.0).unwrap();
        let c = PressureField2D::zeros(other);
        assert!(a.max_abs_diff(&c).is_err());
    }
}
