use thiserror::Error;

use crate::session::Stage;

pub type WorkbenchResult<T> = Result<T, WorkbenchError>;

#[derive(Debug, Error)]
pub enum WorkbenchError {
    #[error(transparent)]
    Core(#[from] bothunt_core::Error),

    #[error("stage `{stage}` needs `{missing}` to run first")]
    Dependency { stage: Stage, missing: Stage },

    #[error("unknown stage `{0}`")]
    UnknownStage(String),

    #[error("no oracle challenge is attached to this session")]
    NoOracle,

    #[error("the simulated analyst is disabled")]
    NoAnalyst,

    #[error("a pipeline stage is running; try again shortly")]
    Busy,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("bad request: {0}")]
    BadRequest(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl WorkbenchError {
    /// Short machine-readable code for API payloads.
    pub fn code(&self) -> &'static str {
        use bothunt_core::Error as C;
        match self {
            WorkbenchError::Core(C::UnknownUser(_)) => "unknown_user",
            WorkbenchError::Core(C::RepeatGuess(_)) => "repeat_guess",
            WorkbenchError::Core(C::ChallengeOver(_)) => "challenge_over",
            WorkbenchError::Core(_) => "core",
            WorkbenchError::Dependency { .. } => "dependency",
            WorkbenchError::UnknownStage(_) => "unknown_stage",
            WorkbenchError::NoOracle => "no_oracle",
            WorkbenchError::NoAnalyst => "no_analyst",
            WorkbenchError::Busy => "busy",
            WorkbenchError::Config(_) => "config",
            WorkbenchError::BadRequest(_) => "bad_request",
            WorkbenchError::Io(_) => "io",
            WorkbenchError::Json(_) => "json",
        }
    }
}
