use thiserror::Error;

/// Errors raised by the entropy pipeline and its simulators.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("insufficient coverage: need points up to {needed}, table covers only up to {covered}")]
    Coverage { needed: f64, covered: f64 },

    #[error("No distances available")]
    EmptyInput,

    #[error("degenerate log range: all distances equal {0}")]
    DegenerateRange(f64),

    #[error("Degenerate log-bin centers")]
    DegenerateCenters,

    #[error("degenerate spectrum: all magnitudes are zero")]
    DegenerateSpectrum,

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error("malformed input on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable short name, used by the CLI when reporting failures.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Coverage { .. } => "CoverageError",
            Error::EmptyInput => "EmptyInput",
            Error::DegenerateRange(_) => "DegenerateRange",
            Error::DegenerateCenters => "DegenerateCenters",
            Error::DegenerateSpectrum => "DegenerateSpectrum",
            Error::Configuration(_) => "ConfigurationError",
            Error::Overflow(_) => "Overflow",
            Error::Parse { .. } => "ParseError",
            Error::Io(_) => "IoError",
        }
    }

    /// True for failures caused by a realization that is too small to bin
    /// (empty multiset or a single distinct distance).
    pub fn is_degenerate_realization(&self) -> bool {
        matches!(
            self,
            Error::EmptyInput | Error::DegenerateRange(_) | Error::DegenerateCenters
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
