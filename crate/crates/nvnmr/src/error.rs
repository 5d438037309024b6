use thiserror::Error;

/// Errors produced by the analysis pipeline.
///
/// Variants are grouped by how the CLI maps them to exit codes: input and
/// validation problems exit with 1, numerical failures with 2.
#[derive(Debug, Error)]
pub enum Error {
    // ---- input / validation ----
    #[error("species `{0}` is already registered")]
    DuplicateSpecies(String),
    #[error("species `{0}` is not registered")]
    UnknownSpecies(String),
    #[error("gyromagnetic ratio must be positive, got {0} rad s^-1 T^-1")]
    NonPositiveGamma(f64),
    #[error("invalid {name}: {value} ({reason})")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("spin position coincides with the sensor (zero radius)")]
    ZeroRadiusPosition,
    #[error("geometry is a {found} bath but the operation needs a {needed} bath")]
    WrongBathModel {
        needed: &'static str,
        found: &'static str,
    },
    #[error("lateral extent {extent_nm:.1} nm is below 20x depth ({min_nm:.1} nm); truncation error would exceed 1%")]
    ExtentTooSmall { extent_nm: f64, min_nm: f64 },
    #[error("pulse count {n} is not a multiple of the {cycle} block length {block}")]
    PulseCountMismatch {
        n: u32,
        cycle: &'static str,
        block: u32,
    },
    #[error("reference counts degenerate at point {index}: bright ({bright}) <= dark ({dark})")]
    DegenerateReference { index: usize, bright: f64, dark: f64 },
    #[error("trace has {0} points; at least {1} required")]
    NotEnoughPoints(usize, usize),
    #[error("trace spans a factor {span:.2} in total evolution time; at least {required:.0} required")]
    InsufficientDynamicRange { span: f64, required: f64 },
    #[error("malformed CSV at line {line}: {reason}")]
    MalformedCsv { line: usize, reason: String },
    #[error("metadata sidecar not found at expected path `{0}`")]
    MissingMetadata(String),
    #[error("inconsistent metadata: {0}")]
    InconsistentMetadata(String),
    #[error("B_rms = 0 corresponds to infinite depth")]
    InfiniteDepth,
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    // ---- numerical ----
    #[error("bisection bracket expansion failed: B_rms {brms_nt:.3e} nT has no depth below {limit_nm:.0} nm")]
    BracketExpansionFailed { brms_nt: f64, limit_nm: f64 },
    #[error("adaptive quadrature did not converge: error {error:.3e} after {intervals} intervals (target {target:.3e})")]
    QuadratureNonConvergence {
        error: f64,
        target: f64,
        intervals: usize,
    },
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// True for failures of a numerical method (CLI exit code 2), false for
    /// input/validation problems (exit code 1).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::BracketExpansionFailed { .. }
                | Error::QuadratureNonConvergence { .. }
                | Error::Numerical(_)
        )
    }
}
