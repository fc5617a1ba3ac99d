use thiserror::Error;

/// Which of the three standard-representation conditions a representation breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardClause {
    /// Some target is not a ground element.
    TargetsInGround,
    /// Some target has an outgoing arc.
    TargetsAreSinks,
    /// Some non-target ground element has an incoming arc.
    NonTargetsAreSources,
}

impl std::fmt::Display for StandardClause {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StandardClause::TargetsInGround => write!(f, "targets must be a subset of the ground set"),
            StandardClause::TargetsAreSinks => write!(f, "every target must be a sink"),
            StandardClause::NonTargetsAreSources => {
                write!(f, "every non-target ground element must be a source")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {0} out of range for a digraph on {1} vertices")]
    VertexOutOfRange(usize, usize),
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("({0}, {1}) is not an arc")]
    NotAnArc(usize, usize),
    #[error("cannot swap a loop ({0}, {0})")]
    SwapLoop(usize),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("invalid routing: {0}")]
    InvalidRouting(String),
    #[error("set is not a subset of the {0}")]
    NotSubset(&'static str),
    #[error("not a standard representation: {0} (offending vertex `{1}`)")]
    NotStandard(StandardClause, String),
    #[error("not a base of the represented matroid: {0}")]
    NotABase(String),
    #[error("ground set of size {size} exceeds the enumeration limit {limit}")]
    EnumerationLimit { size: usize, limit: usize },
    #[error("invalid matroid: {0}")]
    InvalidMatroid(String),
    #[error("ground sets overlap on label `{0}`")]
    OverlappingLabels(String),
    #[error("rank {0} exceeds ground size {1}")]
    RankTooLarge(usize, usize),
    #[error("invalid function: {0}")]
    InvalidFunction(String),
    #[error("search budget exhausted ({reason}); arc-complexity is at least {lower_bound}")]
    BudgetExhausted { reason: String, lower_bound: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
