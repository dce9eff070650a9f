use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is singular (condition estimate {condition:e})")]
    SingularMatrix { condition: f64 },
    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch { left: (usize, usize), right: (usize, usize) },
    #[error("invalid tolerance: rel and abs must be positive")]
    InvalidTolerance,
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("components refer to different bases ({left} vs {right})")]
    BasisMismatch { left: u32, right: u32 },
    #[error("invalid metric: {0}")]
    InvalidMetric(&'static str),
    #[error("matrix is not antisymmetric (max |b + b^T| = {0:e})")]
    NotAntisymmetric(f64),
    #[error("bivector #{index} is not simple")]
    NotSimple { index: usize },
    #[error("bivectors span only {dim} dimensions; at least 4 are required")]
    DimensionTooSmall { dim: usize },
    #[error("not a maximal space of simple bivectors (common-direction null space has dimension {null_dim})")]
    NotMaximalSpace { null_dim: usize },
    #[error("zero vector")]
    ZeroVector,
    #[error("bivector is not in the maximal space of the basis (residual {residual:e})")]
    NotInMaximalSpace { residual: f64 },
    #[error("basis change is not standard (max |L^a_5| = {0:e})")]
    NotStandard(f64),
    #[error("the 4x4 block of the basis change is singular")]
    SingularBlock,
    #[error("four-basis is not orthonormal (max |g - eta| = {0:e})")]
    NotOrthonormalInput(f64),
    #[error("bivectors share no common directional vector")]
    NoCommonDirection,
    #[error("induced four-metric is not of Lorentz signature")]
    DegenerateInducedMetric,
    #[error("constituent set violates the anticommutation relations (residual {0:e})")]
    InvalidGammaSet(f64),
    #[error("matrix is not in O(3,2) (residual {0:e})")]
    NotO32(f64),
    #[error("matrix is not a Lorentz transformation (residual {0:e})")]
    NotLorentz(f64),
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),
    #[error("fields are sampled on different grids")]
    GridMismatch,
    #[error("vector is not a positive-norm directional vector of the basis")]
    NotDirectional,
    #[error("kappa must be nonzero for this operation")]
    KappaZero,
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("object kind mismatch: expected {expected}, found {found}")]
    KindMismatch { expected: String, found: String },
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
