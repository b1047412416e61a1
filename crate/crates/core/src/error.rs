use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed number {text:?}: {reason}")]
    InvalidNumber { text: String, reason: &'static str },

    #[error("line {line}: negative weight {weight} for party {id:?}")]
    NegativeWeight { id: String, weight: String, line: usize },

    #[error("line {line}: duplicate party id {id:?}")]
    DuplicateId { id: String, line: usize },

    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },

    #[error("distribution has no parties")]
    EmptyDistribution,

    #[error("total weight is zero")]
    ZeroTotalWeight,

    #[error("invalid problem parameters: {0}")]
    InvalidProblem(String),

    #[error("ticket assignment has {found} entries but the distribution has {expected} parties")]
    LengthMismatch { expected: usize, found: usize },

    #[error("ticket assignment is not a member of the ticket family")]
    NotInFamily,

    #[error("an assignment with zero tickets has no predecessor")]
    NoPredecessor,

    #[error("ticket bound {0} does not fit in 64 bits")]
    BoundOverflow(String),

    #[error("ticket total overflows 64 bits")]
    TicketOverflow,

    #[error("oracle budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("no valid assignment with at most {cap} tickets")]
    NoSolutionWithinCap { cap: u64 },

    #[error("a committee needs at least one ticket")]
    EmptyCommittee,

    #[error("secret sharing: {0}")]
    Sharing(String),

    #[error("{0}")]
    Config(String),
}
