use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("missing input file {0}")]
    MissingFile(PathBuf),

    #[error("{file}:{line}: {message}")]
    Parse {
        file: String,
        line: usize,
        message: String,
    },

    #[error("duplicate user_id {0}")]
    DuplicateUser(u64),

    #[error("invalid generator config: {0}")]
    InvalidConfig(String),

    #[error("day {day} is outside the challenge window 0..={duration}")]
    DayOutOfRange { day: u32, duration: u32 },

    #[error("rank {rank} out of range 1..={max}")]
    RankOutOfRange { rank: usize, max: usize },

    #[error("factorization produced a negative entry; input was not shifted")]
    NegativeInput,

    #[error("need more than {k} points, got {n}")]
    TooFewPoints { n: usize, k: usize },

    #[error("training set contains a single class")]
    SingleClass,

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("arm set is empty")]
    NoArms,

    #[error("arm score {0} is outside [0, 1]")]
    ScoreOutOfRange(f64),

    #[error("candidate set is empty")]
    NoCandidates,

    #[error("ground truth has no bots")]
    EmptyGroundTruth,

    #[error("challenge duration must be at least one day")]
    ZeroDuration,

    #[error("user {0} was already guessed")]
    RepeatGuess(u64),

    #[error("challenge is over (day {0})")]
    ChallengeOver(u32),

    #[error("unknown user {0}")]
    UnknownUser(u64),

    #[error("graph is empty")]
    EmptyGraph,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
