use thiserror::Error;

/// Errors produced by the numerical operations in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on the input data was violated.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Input data is internally inconsistent (wrong signs, degenerate winding, ...).
    #[error("degenerate data: {0}")]
    Degenerate(String),

    /// An iterative solver failed to converge.
    #[error("{what}: no convergence after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence {
        what: String,
        iterations: usize,
        residual: f64,
    },

    /// The adaptive integrator drove the step size below the floor.
    #[error("step size underflow at t = {t:.6e} (h = {h:.3e})")]
    StepSizeUnderflow { t: f64, h: f64 },

    /// Adaptive quadrature could not reach the requested tolerance.
    #[error("quadrature did not converge: requested {requested:.3e}, achieved {achieved:.3e}")]
    QuadratureNoConvergence { requested: f64, achieved: f64 },

    /// An enumeration exceeded its work budget.
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),

    /// A deformation parameter is too large for the construction to stay valid.
    #[error("delta out of range: {0}")]
    DeltaOutOfRange(String),
}

pub type Result<T> = std::result::Result<T, Error>;
