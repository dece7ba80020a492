//! Error type shared by every module in the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Two values that must live on the same grid do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// Input data violates a documented precondition (nonpositive film
    /// thickness, wrong array length, out-of-range relaxation factor, ...).
    #[error("invalid input: {0}")]
    Domain(String),

    /// A stencil row lost its diagonal because the diffusivity vanished.
    #[error("singular stencil: {0}")]
    SingularStencil(String),

    /// The linear system restricted to an active set has no unique solution.
    #[error("singular active-set system: {0}")]
    SingularSystem(String),

    /// Superposition coefficients grew past the representable range; the
    /// caller should fall back to segment-local evaluation.
    #[error("superposition basis overflow at node {node}")]
    BasisOverflow { node: usize },

    /// The 2x2 anchor system of the segment evaluator cannot be solved.
    #[error("degenerate anchor pair ({left}, {right})")]
    DegenerateAnchor { left: usize, right: usize },

    /// Problem too large for exhaustive active-set enumeration.
    #[error("{interior} interior nodes exceed the enumeration limit of {limit}")]
    EnumerationLimit { interior: usize, limit: usize },

    /// A loop guard tripped; this indicates a bug, not bad input.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
