use thiserror::Error;

/// Errors produced by parsing, validation, and rule operations.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("name clash: `{label}` is used both as a variable and as a term in one pattern")]
    NameClash { label: String },

    #[error("empty pattern cannot be evaluated")]
    EmptyPattern,

    #[error("invalid rule `{name}`: {}", violations.join("; "))]
    InvalidRule { name: String, violations: Vec<String> },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("patterns share no variables: empty join")]
    EmptyJoin,

    #[error("consequent contains free variables; use predict_patterns instead of extension")]
    UngroundConsequent,

    #[error("variable `?{var}` occurs in predicate position; this is not allowed in SWRL")]
    PredicatePositionVariable { var: String },

    #[error("materialization would need {required} transactions, above the cap of {cap}")]
    CapExceeded { required: String, cap: u64 },

    #[error("empty graph bag")]
    EmptyBag,
}

pub type Result<T> = std::result::Result<T, Error>;
