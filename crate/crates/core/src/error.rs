//! Error type shared by every module of the crate.

/// Errors surfaced by geometry, reflector, alignment, channel and bound
/// computations.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument violates a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A direction cannot be derived from a zero-length vector.
    #[error("degenerate direction: {0}")]
    DegenerateDirection(String),

    /// Coincident or zero-range points make the propagation geometry singular.
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    /// The azimuth coordinate is undefined at the pole (sin(phi) = 0).
    #[error("pole singularity: {0}")]
    PoleSingularity(String),

    /// A reflection beam is wider than the scanned hemisphere, so no
    /// half-power crossing exists.
    #[error("coverage saturated: {0}")]
    CoverageSaturated(String),

    /// A numerical procedure failed its accuracy or convergence check.
    #[error("numerical accuracy: {0}")]
    Accuracy(String),

    /// The information matrix is too ill-conditioned to invert.
    #[error("parameters unidentifiable: condition number {cond:.3e} exceeds {limit:.1e}")]
    Unidentifiable { cond: f64, limit: f64 },

    /// The prior covariance is singular; the perfect-configuration bound
    /// should be used instead.
    #[error("singular prior covariance: {0}; use the perfect-configuration bound")]
    SingularPrior(String),

    /// Input/output failure, annotated with the offending path.
    #[error("i/o failure on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// A structured text record could not be parsed.
    #[error("parse failure: {0}")]
    Parse(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
