use thiserror::Error;

use crate::quadgraph::Color;

/// Every failure the library reports.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    // graph structure
    #[error("quad {quad} does not alternate black and white vertices")]
    NonBipartite { quad: usize },
    #[error("quad {quad} traverses an edge in the same direction as quad {other}")]
    OrientationInconsistent { quad: usize, other: usize },
    #[error("quad {0} is degenerate (vanishing diagonal or zero area)")]
    DegenerateQuad(usize),
    #[error("strong regularity violated: {0}")]
    StrongRegularityViolated(String),
    #[error("the {0:?} vertices do not induce a connected graph")]
    DisconnectedColorClass(Color),
    #[error("vertex {0} lies on the boundary and has no medial face")]
    BoundaryVertexFace(usize),
    #[error("quad {quad} is not a parallelogram")]
    NotParallelogramGraph { quad: usize },
    #[error("vertex {to} is not reachable from vertex {from}")]
    Unreachable { from: usize, to: usize },
    #[error("no path from {from} to {to} has edge arguments inside a half-plane")]
    NoConePath { from: usize, to: usize },

    // forms
    #[error("medial edge {0} does not exist")]
    EdgeNotInGraph(usize),
    #[error("missing value for {what} {index}")]
    MissingValues { what: &'static str, index: usize },
    #[error("one-form is not of type diamond at quad {quad} (defect {defect:e})")]
    NotTypeDiamond { quad: usize, defect: f64 },
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("kind mismatch: {0}")]
    KindMismatch(String),
    #[error("input is not compactly supported: it is nonzero at boundary vertex {0}")]
    NotCompactlySupported(usize),

    // operators and elliptic problems
    #[error("function is not discrete holomorphic (relative defect {defect:e})")]
    NotHolomorphic { defect: f64 },
    #[error("domain is not simply connected")]
    NotSimplyConnected,
    #[error("vertex {0} is a boundary vertex")]
    BoundaryVertex(usize),
    #[error("function is not discrete harmonic (max |Laplacian| {defect:e})")]
    NotHarmonic { defect: f64 },
    #[error("not a discrete contour: {0}")]
    NotContour(String),
    #[error("domain has no interior vertices")]
    EmptyInterior,
    #[error("linear solver stalled at relative residual {residual:e} after {iterations} iterations")]
    SolverDivergence { residual: f64, iterations: usize },
    #[error("vertex {0} is on the boundary; an interior vertex is required")]
    BoundaryVertexRequested(usize),
    #[error("boundary vertex {0} has no boundary data")]
    MissingBoundaryData(usize),
    #[error("domain is not homeomorphic to a disk")]
    NotDiskLike,
    #[error("target could not be reproduced (residual {0:e})")]
    InconsistentTarget(f64),

    // kernels
    #[error("spectral parameter {0} coincides with an edge value")]
    PoleHit(num_complex::Complex64),
    #[error("pole arguments at vertex {site} do not fit into an open half-plane")]
    BranchConflict { site: usize },
    #[error("the contour does not enclose the base point")]
    BasePointNotEnclosed,
    #[error("the contour runs through the base quad")]
    ContourTouchesBase,
    #[error("graph is not the integer lattice of a skew coordinate system: {0}")]
    NotSkewLattice(String),
    #[error("contour does not clear discrete distance {0} around the base point")]
    ContourTooTight(f64),
    #[error("quadrature failed to converge (error estimate {0:e})")]
    QuadratureFailed(f64),

    // generators
    #[error("degenerate lattice specification: {0}")]
    DegenerateSpec(String),
    #[error("generated graph lost regularity: {0}")]
    RegularityLost(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
