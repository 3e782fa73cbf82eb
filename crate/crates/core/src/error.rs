use thiserror::Error;

/// Errors raised by geometry, measure, solver and experiment routines.
///
/// Numeric payloads are stored as `f64` regardless of the scalar type of the
/// computation that raised them.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported dimension {0} (expected 2 or 3)")]
    UnsupportedDimension(usize),

    #[error("resolution {resolution} too small (minimum {minimum})")]
    ResolutionTooSmall { resolution: usize, minimum: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("vector {index} is not unit length (norm {norm})")]
    NotUnit { index: usize, norm: f64 },

    #[error("directions lie in a closed hemisphere (witness {witness:?})")]
    Hemisphere { witness: Vec<f64> },

    #[error("support value {value} at index {index} is not positive")]
    NonPositiveSupport { index: usize, value: f64 },

    #[error("body has empty interior")]
    EmptyInterior,

    #[error("values are not the support function of a convex body (max round-trip gap {gap})")]
    NotSupportFunction { gap: f64 },

    #[error("negative curvature h'' + h = {value} at node {index}")]
    NegativeCurvature { index: usize, value: f64 },

    #[error("combined support function not positive at direction {index} (value {value})")]
    NonPositiveCombination { index: usize, value: f64 },

    #[error("origin too close to the boundary (min support {min_support})")]
    OriginTooClose { min_support: f64 },

    #[error("gaussian volume {0} is not positive")]
    NonPositiveVolume(f64),

    #[error("operation requires a {expected} input")]
    Unsupported { expected: &'static str },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("no convergence after {iterations} iterations (residual {residual})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("converged to a body with gaussian volume {gauss_volume} < 1/2")]
    BranchViolation { gauss_volume: f64 },

    #[error("facet {index} vanished from the solution")]
    FacetVanished { index: usize },

    #[error("total mass {total_mass} exceeds the radial profile maximum {profile_max}")]
    NoRoot { total_mass: f64, profile_max: f64 },

    #[error("roots {roots:?} exist but none has gaussian volume >= 1/2")]
    NoValidBranch { roots: Vec<f64> },

    #[error("experiment step {index}: {source}")]
    Experiment {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for failures that come from the mathematics of the input rather
    /// than from reading or writing files.
    pub fn is_domain(&self) -> bool {
        match self {
            Error::Io(_) | Error::Json(_) | Error::Csv(_) => false,
            Error::Experiment { source, .. } => source.is_domain(),
            _ => true,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
