use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("estimator failure: {0}")]
    Estimator(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Estimator(_) => 3,
        }
    }
}

/// Bad parameters and configurations are the caller's fault; everything
/// else the core reports is about the data.
impl From<nlsubspace::Error> for CliError {
    fn from(e: nlsubspace::Error) -> Self {
        use nlsubspace::Error as E;
        match e {
            E::InvalidParameter(_) | E::InvalidConfig(_) => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}
