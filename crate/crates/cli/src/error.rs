use fastkde::KdeError;
use thiserror::Error;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Clap(#[from] clap::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// 0 only for help and version requests routed through clap.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Clap(e) => e.exit_code(),
            CliError::Data(_) => EXIT_DATA,
            CliError::Usage(_) | CliError::Io { .. } | CliError::Csv(_) => EXIT_USAGE,
        }
    }

    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io { context: context.into(), source }
    }
}

impl From<KdeError> for CliError {
    fn from(e: KdeError) -> Self {
        match e {
            KdeError::EmptySample
            | KdeError::NonFinite { .. }
            | KdeError::DegenerateSample
            | KdeError::TooFewPoints { .. }
            | KdeError::PrecisionLoss { .. } => CliError::Data(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
