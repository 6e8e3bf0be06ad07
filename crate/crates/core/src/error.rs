use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad classification used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad input: parameters, shapes or states that violate a precondition.
    Validation,
    /// The numerics failed on valid input.
    Numerical,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("numkit: matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("numkit: matrix has non-finite entries")]
    NonFinite,

    #[error("numkit: matrix is not Hermitian (max |A - A^H| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("numkit: dimension {dim} exceeds the cap of {cap}; check the Fock cutoff")]
    DimensionCap { dim: usize, cap: usize },

    #[error("numkit: eigensolver did not converge (dim {dim}, max |H_ij| = {max_abs:e})")]
    EigenFailed { dim: usize, max_abs: f64 },

    #[error("{module}: invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        module: &'static str,
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("dynamics: dimension mismatch (expected {expected}, got {got})")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("dynamics: invalid state: {0}")]
    InvalidState(String),

    #[error("model: cutoff did not converge to tol {tol:e} below n_max = {cap}")]
    CutoffNotConverged { tol: f64, cap: usize },

    #[error("model: cutoff n_max = {n_max} is not converged (|dE| = {energy_change:e}, |dp_e| = {pe_change:e}, tol {tol:e})")]
    CutoffCheckFailed {
        n_max: usize,
        energy_change: f64,
        pe_change: f64,
        tol: f64,
    },

    #[error("measurement: certain click (no-click probability {probability:e})")]
    CertainClick { probability: f64 },

    #[error("protocol: jittered event {index} could not be ordered after {attempts} draws")]
    JitterOrdering { index: usize, attempts: usize },

    #[error("analysis: {0}")]
    Fit(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::EigenFailed { .. }
            | Error::CutoffNotConverged { .. }
            | Error::CutoffCheckFailed { .. }
            | Error::CertainClick { .. }
            | Error::JitterOrdering { .. }
            | Error::Fit(_) => ErrorKind::Numerical,
            _ => ErrorKind::Validation,
        }
    }

    pub(crate) fn param(
        module: &'static str,
        name: &'static str,
        value: f64,
        reason: &'static str,
    ) -> Self {
        Error::InvalidParameter {
            module,
            name,
            value,
            reason,
        }
    }
}
