use thiserror::Error;

/// Everything that can go wrong across the library.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("root finding did not converge after {iterations} iterations")]
    RootFindingFailure { iterations: usize },
    #[error("path passes within {radius:e} of a critical point near {near}")]
    PathThroughSingularity { near: String, radius: f64 },
    #[error("quadrature error estimate {estimate:e} above target {target:e}")]
    QuadratureFailure { estimate: f64, target: f64 },
    #[error("adaptive step control failed at z = {at}")]
    StepFailure { at: String },
    #[error("angle {angle} is within {margin:e} of a sector boundary")]
    AmbiguousDirection { angle: f64, margin: f64 },
    #[error("trajectory structure is ambiguous: {0}")]
    StructureAmbiguous(String),
    #[error("invalid critical point id {0}")]
    InvalidCriticalPoint(usize),
    #[error("point is not in general position: {0}")]
    GeneralPositionViolated(String),
    #[error("inconsistent chord diagram: {0}")]
    InconsistentDiagram(String),
    #[error("enumeration budget exceeded for n = {0}")]
    BudgetExceeded(usize),
    #[error("invalid diagonal ({0}, {1})")]
    InvalidDiagonal(usize, usize),
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    #[error("structure is not representable as an admissible graph: {0}")]
    NotRepresentable(String),
    #[error("segment arrangement is degenerate: {0}")]
    ArrangementDegeneracy(String),
    #[error("no sign change of any period component along the edge")]
    NoSignChange,
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
