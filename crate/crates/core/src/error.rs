use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("at least two ray angles are required, got {0}")]
    TooFewAngles(usize),
    #[error("ray angle {0} is outside (0, 2π)")]
    OutOfRange(f64),
    #[error("rays are not equally spaced: expected gap {expected}, found {found}")]
    NonUniformSpacing { expected: f64, found: f64 },
    #[error("invalid truncation radii r_min = {r_min}, r_max = {r_max}")]
    InvalidRadii { r_min: f64, r_max: f64 },
    #[error("incompatible grid: {0}")]
    IncompatibleGrid(String),
    #[error("node ({i}, {j}) outside grid with n_r = {n_r}, n_phi = {n_phi}")]
    IndexOutOfBounds { i: usize, j: usize, n_r: usize, n_phi: usize },
    #[error("expected {expected} nodal values, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("invalid difference operator: {0}")]
    InvalidOperator(String),
    #[error("matrix is singular (|det| = {det:e})")]
    SingularMatrix { det: f64 },
    #[error("unsupported regime: |alpha + beta| = {sum_abs} but the closed-form results need |alpha + beta| < 2")]
    UnsupportedRegime { sum_abs: f64 },
    #[error("contour passes through a zero of the characteristic function near {re} + {im}i")]
    ContourThroughZero { re: f64, im: f64 },
    #[error("Newton iteration did not converge from {re} + {im}i")]
    NoConvergence { re: f64, im: f64 },
    #[error("linear system is singular (pivot {pivot:e} at row {row})")]
    SingularSystem { row: usize, pivot: f64 },
    #[error("solver failure: {0}")]
    SolverFailure(String),
    #[error("problem too large: {0} unknowns")]
    TooLarge(usize),
    #[error("test function support violates the quadrature window: {0}")]
    SupportViolation(String),
    #[error("smoothness order l = {0} is not supported (need l <= 2, or 1 <= l <= 2 for traces)")]
    UnsupportedOrder(u32),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
