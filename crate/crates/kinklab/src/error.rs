use thiserror::Error;

/// Errors produced by solvers and constructors across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("curvature at u = {at} is {value:e}; a double well needs V'' > 0 at both minima")]
    NonPositiveCurvature { at: f64, value: f64 },

    #[error("quadrature did not reach tolerance {tol:e} (error estimate {err:e}) within {intervals} intervals")]
    QuadratureFailure { tol: f64, err: f64, intervals: usize },

    #[error("no sign change found for {what} after {attempts} bracket expansions")]
    BracketFailure { what: &'static str, attempts: usize },

    #[error("Newton did not converge: residual {residual:e} after {iterations} iterations")]
    NewtonDivergence { iterations: usize, residual: f64 },

    #[error("singular Jacobian pivot at node {node}")]
    SingularJacobian { node: usize },

    #[error("second-gradient coefficients not convex: k1*k3 - k2^2 = {defect:e} < 0")]
    ConvexityViolation { defect: f64 },

    #[error("no phase (local minimum of the first-gradient energy) found at p = {p}")]
    NoPhaseFound { p: f64 },

    #[error("coefficients not degenerate: k1*k3 - k2^2 = {defect:e} (relative {relative:e})")]
    NotDegenerate { defect: f64, relative: f64 },

    #[error("constraint-curve branch lost near xi = {xi}; the phases may lie on different maximal components")]
    BranchJump { xi: f64 },

    #[error("continuation diverged at k = {k}: {source}")]
    ContinuationDivergence { k: f64, source: Box<Error> },
}

pub type Result<T> = std::result::Result<T, Error>;
