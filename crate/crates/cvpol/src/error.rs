use thiserror::Error;

/// Errors produced by state construction, basis search, and file I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// A constructor precondition was violated; the message names the invariant.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A matrix handed to [`crate::PolarizationTransform::new`] was not unitary.
    #[error("transform is not unitary: max |U\u{2020}U - I| entry = {max_dev:.3e} (tolerance {tol:.0e})")]
    NonUnitary { max_dev: f64, tol: f64 },

    /// Mode index outside {0, 1}.
    #[error("mode index {0} out of range for a two-mode state")]
    BadModeIndex(usize),

    /// The decoupled-basis search exhausted all seeds without reaching tolerance.
    #[error("decoupled-basis search did not converge: best residual |<dAu dAv>| = {best_residual:.3e} over {seeds} seeds")]
    NonConvergence { best_residual: f64, seeds: usize },

    /// The covariance matrix does not have the symmetric standard-form pattern.
    #[error("standard form not applicable: {0}")]
    StandardForm(String),

    /// Argument outside the mathematical domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// The strong-field amplitude is too small for the Stokes linearization.
    #[error("linearization regime violated: alpha_b = {alpha_b} < {required:.6} (factor {factor} x max quadrature std {max_std:.6})")]
    Regime {
        alpha_b: f64,
        required: f64,
        factor: f64,
        max_std: f64,
    },

    /// Malformed homodyne trace file; `line` is 1-based.
    #[error("{source_name}:{line}: {msg}")]
    TraceFormat {
        source_name: String,
        line: usize,
        msg: String,
    },

    /// State/report JSON was syntactically valid but a field violates an invariant.
    #[error("field \"{field}\": {msg}")]
    JsonField { field: String, msg: String },

    #[error("JSON parse error: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
