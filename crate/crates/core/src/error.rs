use crate::lattice::ModeIndex;
use crate::linop::Violation;

/// Errors raised by the lattice, operator and bifurcation routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid lattice configuration: {0}")]
    InvalidConfig(String),

    #[error("inconsistent configuration: {0}")]
    InconsistentConfig(String),

    #[error("unresolved near-resonance at {index}: denominator {denominator:e} below {tolerance:e}")]
    NearResonance {
        index: ModeIndex,
        denominator: f64,
        tolerance: f64,
    },

    #[error("resonance set is empty; the linearized operator has no oscillatory kernel")]
    EmptyKernel,

    #[error("forcing violates the compatibility condition at {} resonant mode(s)", .0.len())]
    Incompatible(Vec<Violation>),

    #[error("branch-point hypothesis violated: extra {extra:?}, missing {missing:?}")]
    HypothesisViolation {
        extra: Vec<ModeIndex>,
        missing: Vec<ModeIndex>,
    },

    #[error("degenerate denominator in {what}: {value:e}")]
    Degenerate { what: &'static str, value: f64 },

    #[error("closed form and pipeline disagree on {what}: {closed} vs {pipeline}")]
    PipelineMismatch {
        what: &'static str,
        closed: f64,
        pipeline: f64,
    },

    #[error("no branch: {which} = {value:e} < 0 for this sign of mu + C*beta0")]
    BranchNonexistent { which: &'static str, value: f64 },

    #[error("invalid sample set: {0}")]
    InvalidSamples(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Short machine-readable tag, stable across releases.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidConfig(_) => "invalid_config",
            Error::InconsistentConfig(_) => "inconsistent_config",
            Error::NearResonance { .. } => "near_resonance",
            Error::EmptyKernel => "empty_kernel",
            Error::Incompatible(_) => "incompatible_forcing",
            Error::HypothesisViolation { .. } => "hypothesis_violation",
            Error::Degenerate { .. } => "degenerate",
            Error::PipelineMismatch { .. } => "pipeline_mismatch",
            Error::BranchNonexistent { .. } => "branch_nonexistent",
            Error::InvalidSamples(_) => "invalid_samples",
        }
    }
}
