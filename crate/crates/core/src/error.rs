use thiserror::Error;

/// Errors raised across the crate.
///
/// Invalid portraits are reported through [`crate::portrait::ValidationReport`],
/// not through this type; only operations that *require* a valid portrait
/// fail with [`Error::InvalidPortrait`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid angle: {0}")]
    InvalidAngle(String),
    #[error("invalid arc: {0}")]
    InvalidArc(String),
    #[error("invalid angle set: {0}")]
    InvalidAngleSet(String),
    #[error("degree must be at least 2, got {0}")]
    InvalidDegree(u64),
    #[error("arc is not covered a uniform number of times")]
    NonConstantCover,

    #[error("portrait is invalid at time {time}: {reason}")]
    InvalidPortrait { time: usize, reason: String },
    #[error("angle sets share the angle {0}")]
    SharedAngle(String),

    #[error("not a critical arc: {0}")]
    NotCriticalArc(String),
    #[error("endpoint lists differ in size ({alphas} vs {betas})")]
    SizeMismatch { alphas: usize, betas: usize },
    #[error("chords {0} and {1} cross")]
    CrossingChords(String, String),
    #[error("inconsistent lamination: {0}")]
    InconsistentLamination(String),

    #[error("polynomial violates declared bounds at time {time}: {reason}")]
    BoundsViolation { time: usize, reason: String },
    #[error("value left the floating range")]
    Overflow,
    #[error("the Böttcher normalization needs a monic sequence")]
    MonicRequired,
    #[error("Böttcher branch cannot be tracked from infinity at this point")]
    BranchLoss,

    #[error("Newton continuation diverged at potential {h:e}")]
    NewtonDiverged { h: f64 },
    #[error("ray passes too close to a precritical point at potential {h:e}")]
    PrecriticalHit { h: f64 },
    #[error("continuation step refinement exhausted at potential {h:e}")]
    StepTooLarge { h: f64 },
    #[error("ray did not settle: spread {spread:e} at potential {h:e}")]
    NonConvergent { h: f64, spread: f64 },
    #[error("landing points at distance {distance:e} sit in the ambiguous band of the clustering threshold")]
    AmbiguousClustering { distance: f64 },
    #[error("point lies within tolerance of a separating ray")]
    OnBoundary,
    #[error("portrait is not realized: {0}")]
    RealizationFailure(String),

    #[error("polynomial root solve did not converge")]
    RootSolveFailure,
    #[error("critical orbit escapes (time {time})")]
    EscapingCritical { time: usize },
    #[error("bisection failed: {0}")]
    BisectionFailure(String),
    #[error("angle search failed: {0}")]
    AngleSearchFailure(String),

    #[error("unknown catalog id: {0}")]
    UnknownId(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
