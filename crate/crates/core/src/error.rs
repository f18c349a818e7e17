use thiserror::Error;

/// Error kinds shared by every subsystem.
#[derive(Debug, Error)]
pub enum Error {
    /// Sequence too short / too long for the requested operation.
    #[error("length error: {0}")]
    Length(String),
    /// Invalid parameter value (bin counts, window sizes, batch sizes, ...).
    #[error("parameter error: {0}")]
    Parameter(String),
    /// Malformed or inconsistent data (NaNs, never-observed joints, ...).
    #[error("data error: {0}")]
    Data(String),
    /// Unrecognized or unsupported file/stream format.
    #[error("format error: {0}")]
    Format(String),
    /// Missing prerequisite (checkpoints, corpora) or mismatched artifacts.
    #[error("state error: {0}")]
    State(String),
    /// A latent of the wrong modality was passed to a decoder.
    #[error("modality error: {0}")]
    Modality(String),
    /// Operation deliberately out of scope (e.g. motion upsampling).
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
