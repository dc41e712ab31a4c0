//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Shape parameters that do not describe a valid closed curve
    /// (non-positive radius, self-intersecting polar curve, ...).
    #[error("invalid shape: {0}")]
    InvalidShape(String),

    /// Node count that the sampler cannot honor (odd, or too small).
    #[error("invalid resolution: {0}")]
    InvalidResolution(String),

    /// Coincident or nearly coincident nodes across boundary components.
    #[error("singular geometry: {0}")]
    SingularGeometry(String),

    /// An operation that is only defined for a different component topology.
    #[error("unsupported geometry: {0}")]
    UnsupportedGeometry(String),

    /// Right-hand side outside the mean-zero subspace the solver works on.
    #[error("invalid right-hand side: {0}")]
    InvalidRhs(String),

    /// A parameter outside its admissible range (spectral parameter, order caps).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Requested expansion order too high for the node count.
    #[error("insufficient resolution: {0}")]
    ResolutionInsufficient(String),

    /// Linear algebra breakdown (singular factorization, failed eigensolve,
    /// indefinite metric).
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// First tensor entry incompatible with a simply connected domain:
    /// either the geometry is multiply connected or the discretization is
    /// too coarse.
    #[error("not simply connected or under-resolved: {0}")]
    NotSimplyConnected(String),

    /// Field evaluation requested too close to the boundary for the
    /// multipole series to converge.
    #[error("evaluation point outside admissible region: {0}")]
    EvaluationRegion(String),

    /// Leading map coefficient could not be normalized positive.
    #[error("normalization error: {0}")]
    Normalization(String),

    /// Map evaluated inside the unit disc.
    #[error("domain error: {0}")]
    MapDomain(String),

    /// Spectral parameter collides with a computed eigenvalue.
    #[error("resonance: {0}")]
    Resonance(String),

    /// Configuration file or flag errors.
    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code contract: 0 success, 1 computation error,
    /// 2 config error, 3 validation failure (the latter is produced by the
    /// CLI, not by this type).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidShape(_) | Error::InvalidResolution(_) => 2,
            _ => 1,
        }
    }
}
