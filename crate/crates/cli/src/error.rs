use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Cli(#[from] clap::Error),

    #[error(transparent)]
    Model(#[from] aloha_interference::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("cannot encode output: {0}")]
    Encode(String),
}

impl HarnessError {
    /// 2 for bad invocations, 3 for failures while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Usage(_) => 2,
            HarnessError::Cli(e) if !e.use_stderr() => 0,
            HarnessError::Cli(_) => 2,
            HarnessError::Model(_) | HarnessError::Io(_) | HarnessError::Encode(_) => 3,
        }
    }
}
