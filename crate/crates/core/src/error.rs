use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// `|R| = |√(X²+Y²+Z²)|` is within tolerance of zero, so the spherical
    /// chart is undefined.
    #[error("degenerate Hamiltonian: |R| = {r_abs:.3e} is within tolerance")]
    DegenerateHamiltonian { r_abs: f64 },

    #[error("state pair not normalized: <u~|u> = {re:.6e}{im:+.6e}i")]
    NotNormalized { re: f64, im: f64 },

    /// The adaptive integrator could not meet its tolerance, or the solution
    /// grew past the overflow guard.
    #[error("step size underflow at t = {t:.6e} ({reason})")]
    StepSizeUnderflow { t: f64, reason: &'static str },

    /// The target state coincides with the initial state (`sin(α/2) = 0`).
    #[error("degenerate target: |sin(alpha/2)| = {sin_half_alpha:.3e}")]
    DegenerateTarget { sin_half_alpha: f64 },

    #[error("singular geometry: {0}")]
    SingularGeometry(&'static str),

    #[error("passage time diverges (Z = +/-Omega)")]
    Diverged,

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("no crossing found in (0, {window:.6e}]")]
    NoCrossing { window: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
