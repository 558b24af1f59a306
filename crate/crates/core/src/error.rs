use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("not a valid value: {0:?}")]
    BadValue(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("need at least two critical values")]
    TooFewCriticalValues,

    #[error("interval ({lo}, {hi}) contains critical value {crit}")]
    CriticalInInterval { lo: String, hi: String, crit: String },

    #[error("point is not on the graph: {0}")]
    BadPoint(String),

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("invalid parameters: {0}")]
    BadParams(String),

    #[error("edge monotonicity broken at step {step} of {steps}")]
    NotMonotone { step: usize, steps: usize },

    #[error("invalid correspondence: {0}")]
    InvalidCorrespondence(String),

    #[error("path has no steps")]
    EmptyPath,

    #[error("unknown experiment {0:?}")]
    UnknownExperiment(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
