//! Error type shared by every module of the crate.

use thiserror::Error;

/// Convenient result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes surfaced by the library.
///
/// Every variant corresponds to a documented domain error; the CLI prints the
/// variant name (see [`Error::name`]) together with the message.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A structure violates its own invariants (bad ids, isolated red node, ...).
    #[error("invalid structure: {0}")]
    InvalidStructure(String),
    /// An id referenced by an operation does not exist.
    #[error("unknown id: {0}")]
    UnknownId(String),
    /// A label index is not in the relevant label domain.
    #[error("unknown index: {0}")]
    UnknownIndex(String),
    /// A node tuple contains nodes of the wrong colour class.
    #[error("sort mismatch: {0}")]
    SortMismatch(String),
    /// A configured size cap was exceeded.
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    /// The pump-count search did not find a distinguishing count inside its window.
    #[error("search cap exceeded: {0}")]
    SearchCapExceeded(String),
    /// A precondition of an operation was not met.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A tree decomposition failed validation where a valid one was required.
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    /// A guard function is not a transition for the current guard.
    #[error("not a transition: index {index} ({reason})")]
    NotATransition {
        /// The red index witnessing the violation.
        index: usize,
        /// Human readable explanation.
        reason: String,
    },
    /// A certificate violates one of the five derivation rules.
    #[error("certificate rule {rule} violated: {message}")]
    CertRule {
        /// Rule number (1 = base, 2 = red reclaim, 3 = blue reclaim, 4 = switch, 5 = glue).
        rule: u8,
        /// Human readable explanation.
        message: String,
    },
    /// A formula is not in the required fragment.
    #[error("not in fragment: {0}")]
    NotInFragment(String),
    /// Evaluation met a free variable with no assignment.
    #[error("unassigned free variable: {0}")]
    UnassignedFreeVariable(String),
    /// The formula text could not be parsed.
    #[error("syntax error at position {pos}: {message}")]
    Syntax {
        /// Byte offset into the input.
        pos: usize,
        /// Description of the problem.
        message: String,
    },
    /// Indicator sets overlap.
    #[error("overlapping sets: {0}")]
    OverlappingSets(String),
    /// Quantum graph components are not compatible.
    #[error("incompatible components: {0}")]
    Incompatible(String),
    /// An internal consistency assertion failed; signals a bug.
    #[error("internal assertion failed: {0}")]
    Assertion(String),
    /// Input/output or serialization failure.
    #[error("io: {0}")]
    Io(String),
}

impl Error {
    /// Stable variant name, used by the CLI when reporting domain errors.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidStructure(_) => "InvalidStructure",
            Error::UnknownId(_) => "UnknownId",
            Error::UnknownIndex(_) => "UnknownIndex",
            Error::SortMismatch(_) => "SortMismatch",
            Error::CapExceeded(_) => "CapExceeded",
            Error::SearchCapExceeded(_) => "SearchCapExceeded",
            Error::Precondition(_) => "Precondition",
            Error::InvalidDecomposition(_) => "InvalidDecomposition",
            Error::NotATransition { .. } => "NotATransition",
            Error::CertRule { .. } => "CertRule",
            Error::NotInFragment(_) => "NotInFragment",
            Error::UnassignedFreeVariable(_) => "UnassignedFreeVariable",
            Error::Syntax { .. } => "SyntaxError",
            Error::OverlappingSets(_) => "OverlappingSets",
            Error::Incompatible(_) => "Incompatible",
            Error::Assertion(_) => "Assertion",
            Error::Io(_) => "Io",
        }
    }
}

/// Returns an [`Error::Assertion`] when `cond` is false.
pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Assertion(msg()))
    }
}
