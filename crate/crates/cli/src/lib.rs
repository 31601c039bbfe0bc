//! File formats, batch sweeps and the command implementations behind the
//! `wavefront` binary.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success (`region`: a front exists) |
//! | 1 | `validate` ran but missed a threshold |
//! | 2 | bad input |
//! | 3 | no front exists for `(h, c)` |
//! | 4 | iteration cap reached before convergence |
//! | 5 | numerical invariant broken (monotonicity, ordering, …) or IO failure |

pub mod commands;
pub mod format;
pub mod profile_io;
pub mod sweep;

use wavefront_core::Error as CoreError;

pub const EXIT_OK: u8 = 0;
pub const EXIT_THRESHOLDS: u8 = 1;
pub const EXIT_BAD_INPUT: u8 = 2;
pub const EXIT_NOT_EXISTS: u8 = 3;
pub const EXIT_NOT_CONVERGED: u8 = 4;
pub const EXIT_INTERNAL: u8 = 5;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed input file: {0}")]
    Format(String),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_BAD_INPUT,
            CliError::Core(e) => core_exit_code(e),
            CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) | CliError::Format(_) => EXIT_INTERNAL,
        }
    }
}

/// Exit code of a library failure.
pub fn core_exit_code(e: &CoreError) -> u8 {
    match e {
        CoreError::InvalidParameter { .. } | CoreError::OutsideCurveDomain { .. } => EXIT_BAD_INPUT,
        CoreError::NotExists { .. } => EXIT_NOT_EXISTS,
        CoreError::NotConverged { .. } => EXIT_NOT_CONVERGED,
        _ => EXIT_INTERNAL,
    }
}
