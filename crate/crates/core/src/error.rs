use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodingError {
    #[error("fact kind {kind} expects {expected} arguments, found {found}")]
    ArityMismatch {
        kind: u64,
        expected: usize,
        found: usize,
    },
    #[error("code does not fit in 64 bits")]
    Overflow,
    #[error("sequence coding needs at least two elements, universe has {0}")]
    UniverseTooSmall(usize),
    #[error("index 0 with a nonempty tuple {0:?} has no unique code (c·ā collides with longer runs)")]
    AmbiguousZeroRun(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Coding(#[from] CodingError),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },

    #[error("line {line}, column {col}: `{token}` is not allowed in a positive formula")]
    Positivity {
        line: usize,
        col: usize,
        token: String,
    },

    #[error("unknown relation `{0}`")]
    UnknownRelation(String),

    #[error("relation `{name}` has arity {expected}, used with {found} arguments")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
    },

    #[error("expected {expected} {what}, got {found}")]
    Length {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("element {element} is outside the universe of size {size}")]
    OutOfUniverse { element: usize, size: usize },

    #[error("tuple {0:?} repeats an element")]
    NotInjective(Vec<usize>),

    #[error("enumeration prefix of length {len} misses element {missed}")]
    NotSurjective { len: usize, missed: usize },

    #[error("relation `{relation}` is not closed under the congruence at {tuple:?}")]
    NotCongruence { relation: String, tuple: Vec<usize> },

    #[error("map {0:?} is not an isomorphism")]
    NotIsomorphism(Vec<usize>),

    #[error("cannot apply an operator to an infinite enumeration without a stage bound")]
    Unbounded,

    #[error("interpretation invariant violated: {0}")]
    Interpretation(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid signature: {0}")]
    Signature(String),
}
