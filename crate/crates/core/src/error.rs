use thiserror::Error;

/// Everything that can go wrong in the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum PqError {
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("point has {found} coordinates, space expects {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),
    #[error("point is off the unit sphere by {0:e}")]
    OffSphere(f64),
    #[error("objects belong to different spaces")]
    SpaceMismatch,
    #[error("points are (nearly) antipodal")]
    AntipodalPoints,
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("invalid homotopy: {0}")]
    InvalidHomotopy(String),
    #[error("end of first path does not match start of second")]
    EndpointMismatch,
    #[error("smashing parameter must lie in (0, 1/2), got {0}")]
    BadEpsilon(f64),
    #[error("paths do not share their end points")]
    EndsMismatch,
    #[error("pointwise interpolation meets antipodal points; supply an explicit homotopy")]
    AntipodalInterpolation,
    #[error("row {0}: end of first homotopy does not match start of second")]
    RowEndpointMismatch(usize),
    #[error("homotopies have {0} and {1} rows")]
    RowCountMismatch(usize, usize),
    #[error("grid too small: {0}")]
    DegenerateGrid(String),
    #[error("need at least {needed} resolutions, got {found}")]
    InsufficientPoints { needed: usize, found: usize },
    #[error("phases live in different period groups")]
    GroupMismatch,
    #[error("invalid period group: {0}")]
    InvalidGroup(String),
    #[error("path is not a loop")]
    NotALoop,
    #[error("no default contraction available: {0}")]
    ContractionUnavailable(String),
    #[error("space has no chosen primitive 1-form")]
    NoPrimitive,
    #[error("morphisms are not composable")]
    ComposeMismatch,
    #[error("invalid diffeomorphism: {0}")]
    InvalidDiffeo(String),
    #[error("invalid generator: {0}")]
    InvalidGenerator(String),
    #[error("target phase {0} outside the canonical range")]
    TargetOutOfRange(f64),
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("unknown suite \"{0}\"")]
    UnknownSuite(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, PqError>;
