//! Solvers for the stationary thin-film Reynolds equation
//!
//! ```text
//!     d/dx ( f1 dp/dx ) + d/dy ( f2 dp/dy ) = f3
//! ```
//!
//! under the natural (cavitation) boundary condition: the pressure is positive
//! on an unknown active region, zero outside it, and meets the boundary of
//! that region with zero normal derivative.  Discretised on a uniform grid
//! this becomes a linear complementarity problem: at every interior node
//! either the five-point equation holds and `p > 0`, or `p = 0` and the
//! equation's residual has the sign that keeps the node pinned.
//!
//! The crate provides three independent routes to that solution:
//!
//! * [`solver2d`] — projected Gauss–Seidel/SOR with zero clamping, the
//!   workhorse for 2D problems of any shape;
//! * [`solver1d`] — an O(N) direct method for 1D problems that represents
//!   the pressure by a three-coefficient superposition basis and grows the
//!   positive segments until the complementarity conditions hold exactly;
//! * [`oracle`] — brute-force enumeration of every candidate active set on
//!   desk-size grids, used by the test suite to certify the other two.
//!
//! [`discretize`] builds the node-centered stencils either from physical
//! film data (thickness, density, viscosity, surface velocities) or directly
//! from coefficient fields.

pub mod active_set;
pub mod discretize;
pub mod error;
pub mod field;
pub mod grid;
mod linalg;
pub mod oracle;
pub mod solver1d;
pub mod solver2d;

pub use active_set::{ActiveSet1D, ActiveSet2D};
pub use error::{Error, Result};
pub use field::{PressureField1D, PressureField2D};
pub use grid::{Grid1D, Grid2D};
