use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid overlap coefficient: {0}")]
    InvalidK(usize),
    #[error("invalid waveform: {0}")]
    InvalidWaveform(String),
    #[error("empty input")]
    EmptyInput,
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("noise variance must be positive and finite, got {0}")]
    InvalidVariance(f64),
    #[error("matrix is rank deficient (rank {rank}, need {needed})")]
    RankDeficient { rank: usize, needed: usize },
    #[error("matrix is not in systematic form")]
    NotSystematic,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("unsupported QAM order {0}")]
    UnsupportedQam(usize),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
