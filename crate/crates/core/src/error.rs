use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Which acceptance test rejected the last trial step of a backtracking search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailedCondition {
    Feasibility,
    SufficientDecrease,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("objective evaluation is not finite ({0})")]
    EvaluationDomain(String),

    #[error("projection onto `{set}` failed: {reason}")]
    ProjectionFailure { set: String, reason: String },

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Contract(String),

    #[error(
        "{stage} exceeded {backtracks} backtracks (last trial {last_trial:e}, failed {failed:?})"
    )]
    SearchFailure {
        stage: &'static str,
        backtracks: usize,
        last_trial: f64,
        failed: FailedCondition,
    },

    #[error("unknown problem `{0}`")]
    UnknownProblem(String),

    #[error("unknown feasible set `{0}`")]
    UnknownSet(String),

    #[error("invalid benchmark plan: {0}")]
    Plan(String),

    #[error("no instance has a successful run; profile is empty")]
    EmptyProfile,

    #[error("i/o error: {0}")]
    Io(String),

    #[error("malformed {what}: {reason}")]
    Format { what: &'static str, reason: String },
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
