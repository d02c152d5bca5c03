//! JSON IO, the verification suite and the `effectus-lab` command line
//! for `effectus-core`.

pub mod cli;
pub mod json;
pub mod output;
pub mod suite;

/// Input problems map to exit code 2; failed verifications are reported,
/// not raised.
#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] effectus_core::Error),
    #[error("writing report: {0}")]
    Io(#[from] std::io::Error),
}
