use thiserror::Error;

/// Errors raised by the linear algebra kernels, the update formulas, the line
/// search and the solver driver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("objective returned a non-finite {what}")]
    NonFiniteEvaluation { what: &'static str },

    #[error("invalid starting point: {0}")]
    InvalidStart(String),

    #[error("curvature condition violated: y's = {ys:e}")]
    CurvatureViolation { ys: f64 },

    #[error("inverse Hessian lost positive definiteness: y'Hy = {y_hy:e}")]
    LostPositiveDefiniteness { y_hy: f64 },

    #[error("singular Broyden update: phi denominator = {denominator:e}")]
    SingularUpdate { denominator: f64 },

    #[error("degenerate self-scaling factor tau = {tau:e}")]
    ScalingDegeneracy { tau: f64 },

    #[error("not a descent direction: d'g = {slope:e}")]
    NotDescent { slope: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("line search found no point satisfying sufficient decrease")]
    LineSearchFailure,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
