use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("the set is empty")]
    EmptySet,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("zero direction vector")]
    ZeroDirection,

    #[error("point is {distance:e} away from the set, not on its boundary")]
    NotOnBoundary { distance: f64 },

    #[error("point lies deep inside the interior of the set")]
    DeepInterior,

    #[error("boundary sampling found {found} of {budget} requested points")]
    BoundarySamplingFailed { found: usize, budget: usize },

    #[error("closure-of-interior oracle is not available for this set")]
    MissingClosure,

    #[error("set is not regular closed")]
    NotRegularClosed,

    #[error("point lies in the set, not in its complement")]
    PointInSet,

    #[error("extended-condition-violated at {at:?}")]
    ExtendedConditionViolated { at: Vec<f64> },

    #[error("normal-search-failed at {at:?}: no proximal normal could be located")]
    NormalSearchFailed { at: Vec<f64> },

    #[error("interior-probe-exhausted near {at:?}")]
    InteriorProbeExhausted { at: Vec<f64> },

    #[error("verification-failed: ball center is {deficit:e} too close to the set")]
    VerificationFailed { deficit: f64 },

    #[error("outside the admissible regime: {0}")]
    OutOfRegime(String),

    #[error("point lies outside the union of balls")]
    PointOutsideUnion,

    #[error("unknown gallery id `{0}`")]
    UnknownGalleryId(String),

    #[error("scene error: {0}")]
    Scene(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable code used in failure lists and witness reasons.
    pub fn reason(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::EmptySet => "empty-set",
            Error::InvalidArgument(_) => "invalid-argument",
            Error::ZeroDirection => "zero-direction",
            Error::NotOnBoundary { .. } => "not-on-boundary",
            Error::DeepInterior => "deep-interior",
            Error::BoundarySamplingFailed { .. } => "boundary-sampling-failed",
            Error::MissingClosure => "missing-closure",
            Error::NotRegularClosed => "not-regular-closed",
            Error::PointInSet => "point-in-set",
            Error::ExtendedConditionViolated { .. } => "extended-condition-violated",
            Error::NormalSearchFailed { .. } => "normal-search-failed",
            Error::InteriorProbeExhausted { .. } => "interior-probe-exhausted",
            Error::VerificationFailed { .. } => "verification-failed",
            Error::OutOfRegime(_) => "out-of-regime",
            Error::PointOutsideUnion => "point-outside-union",
            Error::UnknownGalleryId(_) => "unknown-gallery-id",
            Error::Scene(_) => "scene",
            Error::Json(_) => "json",
            Error::Io(_) => "io",
        }
    }
}
