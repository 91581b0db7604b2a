use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("quadrature did not converge: estimated error {estimate:e} exceeds tolerance {tol:e}")]
    Quadrature { estimate: f64, tol: f64 },

    #[error("division by zero: k = 0 with non-vanishing absorption")]
    ZeroFrequency,

    #[error("k = {k} lies inside the excluded disk |k| < {k_min}")]
    BelowKMin { k: Complex64, k_min: f64 },

    #[error("invalid ODE settings: {0}")]
    InvalidSettings(String),

    #[error("ODE step budget of {max_steps} exhausted at r = {r}")]
    StepBudget { max_steps: usize, r: f64 },

    #[error("non-finite state in ODE at r = {r}")]
    NonFinite { r: f64 },

    #[error("k = {k} is numerically an eigenvalue (scale-free |D| = {residual:e})")]
    NearEigenvalue { k: Complex64, residual: f64 },

    #[error("suspected zero on the contour after {attempts} perturbations")]
    BoundaryZero { attempts: usize },

    #[error("phase tracking did not converge: {0}")]
    PhaseTracking(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate regression: {0}")]
    DegenerateFit(String),

    #[error("broken trajectories: {0:?}")]
    BrokenTrajectories(Vec<usize>),
}

pub type Result<T> = std::result::Result<T, Error>;
