use thiserror::Error;

use crate::kernel::ElementId;

/// Errors raised by the kernel, the transition machinery, the checkers and
/// the text format.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vocabulary mismatch: {0}")]
    VocabularyMismatch(String),

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("symbol `{symbol}` has arity {expected}, got {found} argument(s)")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },

    #[error("symbol `{0}` is already declared")]
    DuplicateSymbol(String),

    #[error("symbol `{0}` is a reserved logical symbol")]
    ReservedSymbol(String),

    #[error("arity {arity} of `{symbol}` exceeds the configured limit {limit}")]
    ArityLimit {
        symbol: String,
        arity: usize,
        limit: usize,
    },

    #[error("assignment to logical symbol `{0}`")]
    AssignToLogical(String),

    #[error("element {0} is not in the base set")]
    NotInBaseSet(ElementId),

    #[error("element {element} lies outside a universe of size {size}")]
    OutsideUniverse { element: ElementId, size: usize },

    #[error("invalid renaming: {0}")]
    InvalidRenaming(String),

    #[error("element {0} is outside the domain of the renaming")]
    OutsideDomain(ElementId),

    #[error("clashing updates at {location}: {first} vs {second}")]
    Clash {
        location: String,
        first: ElementId,
        second: ElementId,
    },

    #[error("guard `{guard}` evaluates to non-Boolean element {value}")]
    GuardNotBoolean { guard: String, value: ElementId },

    #[error("state is not in the algorithm's state family")]
    UnknownState,

    #[error("states are not T-similar")]
    NotSimilar,

    #[error("element {0} is not T-accessible")]
    Inaccessible(ElementId),

    #[error("witness set is not closed under subterms")]
    NotSubtermClosed,

    #[error("witness set is not a subset of the larger witness set")]
    NotSubset,

    #[error("universe of size {size} is too small; need at least {needed}")]
    UniverseTooSmall { size: usize, needed: usize },

    #[error("inconclusive: universe of size {size} lacks headroom for disjoint copies; need at least {needed}")]
    InsufficientHeadroom { size: usize, needed: usize },

    #[error("case hypothesis violated: {0}")]
    CaseHypothesis(String),

    #[error("generator configuration invalid: {0}")]
    InvalidConfig(String),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
