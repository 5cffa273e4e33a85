use serde_json::json;
use timeobs_core::Error as CoreError;

/// Failure of a run, with the process exit code it maps to.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Compute(#[from] CoreError),
    #[error("{failed} of {total} validation cases failed")]
    ValidationFailed { failed: usize, total: usize },
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Compute(e) => match e {
                CoreError::InvalidInterval { .. }
                | CoreError::InvalidParameter { .. }
                | CoreError::UnboundedInterval
                | CoreError::DegenerateRegion
                | CoreError::DomainError { .. }
                | CoreError::ZeroCondition { .. } => 3,
                CoreError::NotInLeftIdeal { .. } | CoreError::SingularWeight => 4,
                CoreError::NonConvergence(_) | CoreError::TimeWindowTooLong { .. } => 5,
                CoreError::NonFiniteSample { .. }
                | CoreError::NegativeValue { .. }
                | CoreError::HermiticityViolation { .. } => 6,
            },
            CliError::ValidationFailed { .. } => 7,
            CliError::Io(_) => 8,
        }
    }

    pub fn kind(&self) -> String {
        match self {
            CliError::Config(_) => "config".into(),
            CliError::Compute(e) => {
                let dbg = format!("{e:?}");
                let name: String = dbg.chars().take_while(|c| c.is_alphanumeric()).collect();
                name
            }
            CliError::ValidationFailed { .. } => "validation_failed".into(),
            CliError::Io(_) => "io".into(),
        }
    }

    /// One-line JSON record written to stderr.
    pub fn record(&self) -> serde_json::Value {
        json!({
            "schema": 1,
            "error": {
                "kind": self.kind(),
                "message": self.to_string(),
                "exit_code": self.exit_code(),
            }
        })
    }
}
