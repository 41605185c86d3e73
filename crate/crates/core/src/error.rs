use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes shared by every module of the crate.
///
/// Variant names double as the machine-readable error names printed by the
/// command-line front end, so they are part of the external interface.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("n = {n} is congruent to 2 mod 4; Q(zeta_{n}) = Q(zeta_{half}), use n = {half}")]
    NotNormalized { n: u64, half: u64 },

    #[error("n = {0} is too small; cyclotomic conductor must be at least 3")]
    TooSmall(u64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("pole at s = 1")]
    PoleAtOne,

    #[error("pole at s = 0")]
    PoleAtZero,

    #[error("pole at s = d = {0}")]
    PoleAtD(usize),

    #[error("gamma function pole at non-positive integer {0}")]
    PoleAtNonPositiveInteger(i64),

    #[error("|Im s| = {0} exceeds the accuracy envelope of 200")]
    OutOfAccuracyEnvelope(f64),

    #[error("Re s = {re} is not in the region of absolute convergence Re s > {dim}")]
    DivergentRegion { re: f64, dim: f64 },

    #[error("lattice covolume {0} differs from 1")]
    NotUnitCovolume(f64),

    #[error("matrix is not symmetric positive definite")]
    NotPositiveDefinite,

    #[error("n = {0} is not in the supported field allowlist")]
    UnsupportedField(u64),

    #[error("r2 = {0} < 4: the truncated Mellin integrand does not decay fast enough to shift the contour")]
    InsufficientDecay(usize),

    #[error("sigma = {0} is outside [1/2, 1)")]
    BadSigma(f64),

    #[error("no positive volume satisfies the certificate with margin {0}")]
    NoPositiveBound(f64),

    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// The variant name, used on stderr by the CLI.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NotNormalized { .. } => "NotNormalized",
            Error::TooSmall(_) => "TooSmall",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::PoleAtOne => "PoleAtOne",
            Error::PoleAtZero => "PoleAtZero",
            Error::PoleAtD(_) => "PoleAtD",
            Error::PoleAtNonPositiveInteger(_) => "PoleAtNonPositiveInteger",
            Error::OutOfAccuracyEnvelope(_) => "OutOfAccuracyEnvelope",
            Error::DivergentRegion { .. } => "DivergentRegion",
            Error::NotUnitCovolume(_) => "NotUnitCovolume",
            Error::NotPositiveDefinite => "NotPositiveDefinite",
            Error::UnsupportedField(_) => "UnsupportedField",
            Error::InsufficientDecay(_) => "InsufficientDecay",
            Error::BadSigma(_) => "BadSigma",
            Error::NoPositiveBound(_) => "NoPositiveBound",
            Error::Overflow(_) => "Overflow",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Io(_) => "Io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
