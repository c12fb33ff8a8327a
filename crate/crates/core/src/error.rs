use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("insufficient length: need at least {needed} samples, got {got}")]
    InsufficientLength { needed: usize, got: usize },

    #[error("insufficient length for levels: {levels} levels need at least {needed} samples, got {got}")]
    InsufficientLengthForLevels { levels: usize, needed: usize, got: usize },

    #[error("sample too small: n = {0}, need at least 4")]
    SampleTooSmall(usize),

    #[error("degenerate sample: zero variance")]
    DegenerateSample,

    #[error("over-parameterized: {modes} modes for {len} samples")]
    OverParameterized { modes: usize, len: usize },

    #[error("cutoff above Nyquist: {cutoff} Hz at fs {fs} Hz")]
    CutoffAboveNyquist { cutoff: f64, fs: f64 },

    #[error("degenerate perfect estimate: denoised signal equals clean signal")]
    PerfectEstimate,

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("sampling rate mismatch: {0} Hz vs {1} Hz")]
    RateMismatch(f64, f64),

    #[error("non-finite sample at index {0}")]
    NonFinite(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("zero-energy signal: {0}")]
    ZeroEnergy(&'static str),

    #[error("unsupported format {0}")]
    UnsupportedFormat(u16),

    #[error("malformed header {path}: {reason}")]
    Header { path: PathBuf, reason: String },

    #[error("truncated signal file {path} at byte offset {offset}")]
    Truncated { path: PathBuf, offset: usize },

    #[error("{path}:{line}: {reason}")]
    Parse { path: PathBuf, line: usize, reason: String },

    #[error("config: {0}")]
    Config(String),

    #[error("stage {stage}: {source}")]
    Stage {
        stage: u8,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("fetch {url}: {reason}")]
    Fetch { url: String, reason: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn in_stage(self, stage: u8) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}
