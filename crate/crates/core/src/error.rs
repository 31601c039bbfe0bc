use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Failures of the wavefront pipeline.
///
/// Parameter-domain problems and numerical-invariant breaches are kept apart
/// so callers (the CLI in particular) can map them onto distinct exit codes.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("delay h = {h} outside the domain ({lo}, {hi}] of the critical curve")]
    OutsideCurveDomain { h: f64, lo: f64, hi: f64 },
    #[error("characteristic function has no negative roots for these parameters")]
    NoNegativeRoots,
    #[error("no monotone front exists for h = {h}, c = {c}")]
    NotExists { h: f64, c: f64 },
    #[error("profile precondition failed: {0}")]
    InvalidProfile(String),
    #[error("delay {h} is not an integer multiple of the grid step {step}")]
    NonalignedGrid { h: f64, step: f64 },
    #[error("tail fit failed: {0}")]
    TailFitFailed(String),
    #[error("upper solution inequality fails for r = {r} (worst residual {worst:e})")]
    RejectedR { r: f64, worst: f64 },
    #[error("no admissible decay rate r found after {halvings} halvings")]
    NoValidR { halvings: u32 },
    #[error("could not order lower below upper with shifts up to {max_shift}")]
    OrderingFailed { max_shift: f64 },
    #[error("start is not a lower solution: K(lower) - lower reaches {worst:e}")]
    NotLowerSolution { worst: f64 },
    #[error("monotone iteration broken at iteration {iteration}: decrease of {worst:e}")]
    MonotonicityBroken { iteration: usize, worst: f64 },
    #[error("iterate exceeded the upper solution at iteration {iteration} by {excess:e}")]
    UpperBoundBroken { iteration: usize, excess: f64 },
    #[error("iteration did not converge in {iterations} steps (last increment {last_increment:e})")]
    NotConverged { iterations: usize, last_increment: f64 },
    #[error("profile does not cross 0.5")]
    NoHalfCrossing,
    #[error("fit window too short: {0}")]
    WindowTooShort(String),
    #[error("fit rejected: rms log residual {rms} above threshold {threshold}")]
    FitRejected { rms: f64, threshold: f64 },
    #[error("root finder failed: {0}")]
    RootFinding(&'static str),
}
