use crate::solutions::Point3;

/// Errors surfaced by the library.
///
/// Each variant belongs to one of three categories that the CLI maps to
/// exit codes: validation (bad inputs), domain (an evaluation point left
/// the holomorphy domain), and verification (a residual gate failed).
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("jet order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("non-finite coefficient")]
    NonFinite,

    #[error("need {needed} derivatives, only {got} supplied")]
    InsufficientDerivatives { needed: usize, got: usize },

    #[error("point outside the holomorphy domain: {0}")]
    OutOfDomain(String),

    #[error("evaluation point ({x}, {y}, {z}) lies outside the validity slab")]
    PointOutOfDomain { x: f64, y: f64, z: f64 },

    #[error("power series did not converge within {0} terms")]
    ConvergenceCap(usize),

    #[error("isotropic base direction: k_0^2 + m_0^2 = 0 makes g_0 = 0 and the linear solves singular")]
    IsotropicBaseDirection,

    #[error("resolvent index {0} exceeds the supported cap {1}")]
    IndexOverCap(usize, usize),

    #[error("integer coefficient overflow in resolvent expansion")]
    CoefficientOverflow,

    #[error("invalid solution spec: {0}")]
    InvalidSpec(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("finite-difference step {0} below the cancellation guard {1}")]
    StepTooSmall(f64, f64),

    #[error("symbolic route requires a polynomial function, got {0}")]
    UnsupportedFunction(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

impl Error {
    /// Stable exit-code contract: 2 validation, 3 domain, 4 verification.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::OutOfDomain(_) | Error::PointOutOfDomain { .. } | Error::ConvergenceCap(_) => 3,
            Error::VerificationFailed(_) => 4,
            _ => 2,
        }
    }
}

impl Error {
    pub(crate) fn point_out_of_domain(p: Point3) -> Self {
        Error::PointOutOfDomain {
            x: p.x,
            y: p.y,
            z: p.z,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
