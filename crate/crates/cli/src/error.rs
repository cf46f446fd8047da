use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Degenerate(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Degenerate(_) => 3,
        }
    }
}

impl From<pivotboot::Error> for CliError {
    fn from(e: pivotboot::Error) -> Self {
        use pivotboot::Error as E;
        match e {
            E::DegenerateWeights | E::ZeroBootstrapVariance | E::DegenerateScale => {
                CliError::Degenerate(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}
