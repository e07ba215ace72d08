use thiserror::Error;

/// Every failure maps to one stable exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0} propert{s} failed", s = if *.0 == 1 { "y" } else { "ies" })]
    PropertyFailure(usize),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("{0}")]
    NotAntisymmetric(String),
    #[error("bad selection: {0}")]
    Selection(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::PropertyFailure(_) => 1,
            CliError::Parse(_) | CliError::Io(_) => 2,
            CliError::NotAntisymmetric(_) => 3,
            CliError::Selection(_) => 4,
        }
    }
}

impl From<concom_core::SignalError> for CliError {
    fn from(e: concom_core::SignalError) -> Self {
        use concom_core::SignalError::*;
        match e {
            UnknownComponent(_) | EmptySelection => CliError::Selection(e.to_string()),
            Io(io) => CliError::Io(io),
            other => CliError::Parse(other.to_string()),
        }
    }
}
