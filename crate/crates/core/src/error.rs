use thiserror::Error;

/// Failures raised by the geometric operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("quadruple is not admissible: some point occurs three or more times")]
    NonAdmissible,
    #[error("a finite point carries non-finite coordinates")]
    MixedInfinity,
    #[error("quadruple has coincident points")]
    DegenerateQuadruple,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("coordinate dimension {got} does not match model dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("direction is not horizontal (vertical component {vertical:e})")]
    NonHorizontalDirection { vertical: f64 },
    #[error("limit did not settle: last successive difference {last_diff:e} after {steps} steps")]
    NonConvergence { steps: usize, last_diff: f64 },
    #[error("restriction is not affine: fit residual {residual:e} exceeds {bound:e}")]
    NonAffine { residual: f64, bound: f64 },
    #[error("no connecting line: the point already lies on the fiber")]
    NoSolution,
    #[error("distance parameterization failed: {0}")]
    ParameterizationFailure(String),
    #[error("zigzag approximations not Cauchy at depth {depth}: difference {diff:e} > bound {bound:e}")]
    NonCauchy { depth: u32, diff: f64, bound: f64 },
    #[error("fixed-point iteration failed: {0}")]
    IterationDivergence(String),
    #[error("line does not reach height {height:e} (maximal height {max_height:e})")]
    HorosphereMiss { height: f64, max_height: f64 },
    #[error("points are not ordered along the line: {0}")]
    OrderingViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
