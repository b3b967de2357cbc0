use alloc::string::String;

/// Errors raised by the numerical pipeline.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("quaternion is zero and has no inverse")]
    ZeroQuaternion,
    #[error("spectral parameter μ must be nonzero")]
    MuZero,
    #[error("μ = 1: the transform degenerates to the point at infinity")]
    MuOne,
    #[error("invalid Delaunay neck parameter {0}")]
    InvalidNeck(f64),
    #[error("profile integration failed: {0}")]
    IntegrationFailure(String),
    #[error("patch schema violation: {0}")]
    SchemaViolation(String),
    #[error("adaptive step size underflow at t = {t} (tolerance unreachable)")]
    StepUnderflow { t: f64 },
    #[error("holonomy has a Jordan block (non-diagonalizable)")]
    NonDiagonalizable,
    #[error("inverted quantity {0:e} is numerically singular")]
    NearSingularT(f64),
    #[error("transform is not closed: period mismatch {0:e}")]
    NotClosed(f64),
    #[error("μ is not a resonance point; mixed sections have no common multiplier")]
    NotResonant,
    #[error("patch is not periodic in y")]
    NotPeriodic,
    #[error("degenerate first fundamental form at vertex ({i}, {j})")]
    DegenerateMetric { i: usize, j: usize },
    #[error("surface is not immersed at vertex ({i}, {j})")]
    NotImmersed { i: usize, j: usize },
    #[error("conformality residual {0:e} exceeds threshold after reparametrization")]
    ConformalityLoss(f64),
    #[error("parameter outside the regime of the closed form: {0}")]
    OutOfRegime(String),
    #[error("invalid Riccati parameter r = {0}")]
    InvalidR(f64),
    #[error("Riccati solution left the chart (|T| = {0:e})")]
    BlowUp(f64),
    #[error("logarithm unwrapping failed between samples {0} and {1}")]
    BranchJump(usize, usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = core::result::Result<T, Error>;
