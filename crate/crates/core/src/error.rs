use thiserror::Error;

#[derive(Debug, Error)]
pub enum AltesError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("chirp rate lambda = 1 is singular")]
    SingularChirpRate,
    #[error("frequency {0} is outside the positive half-axis")]
    Domain(f64),
    #[error("invalid length: {0}")]
    InvalidLength(String),
    #[error("localization failed: {0}")]
    Localization(String),
    #[error("scale {scale} places the wavelet support below the first positive frequency bin")]
    DegenerateScale { scale: f64 },
    #[error("empty input: {0}")]
    Empty(String),
    #[error("delay spread does not fit in the largest permitted transform ({max_n_fft} samples)")]
    TransformTooLarge { max_n_fft: usize },
    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, AltesError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(AltesError::InvalidParameter(msg.into()))
}
