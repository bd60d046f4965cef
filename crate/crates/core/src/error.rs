use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The connection has `1/rho` terms; the axis itself is excluded.
    #[error("axis singularity: rho = {rho} (connection undefined on the axis)")]
    AxisSingularity { rho: f64 },

    #[error("domain error: f evaluated at {t}, below the floor -{epsilon}")]
    DomainError { t: f64, epsilon: f64 },

    #[error("degenerate state: {0}")]
    DegenerateState(&'static str),

    #[error("newton divergence after {iterations} iterations (|residual| = {residual:e})")]
    NewtonDivergence { iterations: usize, residual: f64 },

    #[error("ellipticity lost inside the closure: 1 - 2*beta*f'(beta^2) = {value}")]
    EllipticityLost { value: f64 },

    #[error("step size underflow at s = {at}: h = {step:e}")]
    StepUnderflow { at: f64, step: f64 },

    #[error("generating curve reached the axis at s = {at} (rho = {rho})")]
    AxisContact { at: f64, rho: f64 },

    #[error("insufficient tail: {available} samples, need at least {required}")]
    InsufficientTail { available: usize, required: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// Short stable name used in reports and CLI messages.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::AxisSingularity { .. } => "AxisSingularity",
            Error::DomainError { .. } => "DomainError",
            Error::DegenerateState(_) => "DegenerateState",
            Error::NewtonDivergence { .. } => "NewtonDivergence",
            Error::EllipticityLost { .. } => "EllipticityLost",
            Error::StepUnderflow { .. } => "StepUnderflow",
            Error::AxisContact { .. } => "AxisContact",
            Error::InsufficientTail { .. } => "InsufficientTail",
            Error::InvalidParameter(_) => "InvalidParameter",
        }
    }
}
