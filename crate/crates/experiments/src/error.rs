use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Simulation(#[from] cleandirty::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("degenerate fit: {0}")]
    FitDegenerate(String),

    #[error("bad input: {0}")]
    Input(String),

    #[error("worker pool: {0}")]
    Pool(String),
}

impl ExperimentError {
    /// Process exit code for the command-line front end: 2 for anything the
    /// user can fix in the config or arguments, 3 for runtime failures.
    pub fn exit_code(&self) -> i32 {
        use cleandirty::Error as E;
        match self {
            ExperimentError::Config(_) | ExperimentError::Input(_) => 2,
            ExperimentError::Simulation(E::Numerical(_) | E::UnsupportedGate(_)) => 3,
            ExperimentError::Simulation(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, ExperimentError>;
