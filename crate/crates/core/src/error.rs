use thiserror::Error;

/// Errors raised by the simulation and classification layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("unsupported matrix dimension {0} (only 2 and 4 are supported)")]
    UnsupportedDimension(usize),

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("weak-coupling guard violated: {0}")]
    WeakCoupling(String),

    #[error("integration step too large: dt={dt} exceeds stability limit {max_dt:.6} (shrink dt)")]
    Stability { dt: f64, max_dt: f64 },

    #[error("population inversion (p_e={p_e} > p_g={p_g}) cannot arise from thermal baths")]
    PopulationInversion { p_g: f64, p_e: f64 },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors raised by a numerical guard (step size, coupling
    /// regime, unphysical populations) rather than by malformed input.
    pub fn is_numerical_guard(&self) -> bool {
        matches!(
            self,
            Error::Stability { .. } | Error::WeakCoupling(_) | Error::PopulationInversion { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
