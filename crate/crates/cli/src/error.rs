use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("{0}")]
    Core(gabic::Error),

    #[error("light cone: {0}")]
    LightCone(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    /// 0 success, 1 config or validation, 2 numerical failure, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        use gabic::Error as E;
        match self {
            CliError::Config(_) | CliError::LightCone(_) => 1,
            CliError::Core(E::NoConvergence(_) | E::NotNormalized(_) | E::InvalidDensityMatrix(_)) => 2,
            CliError::Core(_) => 1,
            CliError::Io(_) => 3,
        }
    }
}

impl From<gabic::Error> for CliError {
    fn from(e: gabic::Error) -> Self {
        CliError::Core(e)
    }
}
