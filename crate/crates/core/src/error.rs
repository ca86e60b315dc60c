use crate::portrait::MAX_LEVEL;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("level {0} exceeds the supported maximum {MAX_LEVEL}")]
    LevelTooLarge(u64),
    #[error("operation requires level >= 1")]
    LevelZero,
    #[error("level mismatch: {0} vs {1}")]
    LevelMismatch(u32, u32),
    #[error("cannot truncate to level {target}: element has level {have}")]
    TruncateBeyond { target: u32, have: u32 },
    #[error("leaf word has length {got}, expected {want}")]
    LeafLength { got: usize, want: usize },
    #[error("sign level {m} out of range 1..={level}")]
    SignLevel { m: u32, level: u32 },
    #[error("malformed portrait encoding: {0}")]
    Encoding(String),
    #[error("2-adic operand must be odd")]
    EvenOperand,
    #[error("2-adic precision {have} insufficient, need at least {need}")]
    Precision { have: u32, need: u32 },
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("constant of level {have} cannot be evaluated at level {want}")]
    ConstLevel { have: u32, want: u32 },
    #[error("malformed recursion system: {0}")]
    SystemSyntax(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("group table is truncated; result would be incomplete")]
    Truncated,
    #[error("group table does not track words")]
    NoWords,
    #[error("element is not a member of the enumerated group")]
    NotMember,
    #[error("{0} is not a subgroup of {1}")]
    NotSubgroup(String, String),
    #[error("exhaustive scan of level {0} is too large (max level {1})")]
    ScanTooLarge(u32, u32),
    #[error("exponent must be odd")]
    EvenExponent,
    #[error("element does not act transitively on its full level")]
    NotTransitive,
    #[error("generator tuple does not satisfy the required conjugacy shape")]
    ShapeMismatch,
    #[error("witness verification failed (internal error)")]
    WitnessCheck,
    #[error("orbit is unresolved; classification required")]
    Unresolved,
    #[error("field element cannot be parsed: {0}")]
    FieldParse(String),
    #[error("{0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
