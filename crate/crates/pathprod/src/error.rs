use thiserror::Error;

/// Errors surfaced by the engine.
///
/// Everything here is a *definite* failure: operations never degrade to a
/// silent zero when data is missing or a degree falls outside the reliable
/// window.
#[derive(Debug, Error)]
pub enum EngineError {
    /// Degree query on an element with terms in more than one degree.
    #[error("element is not homogeneous: {0}")]
    NonHomogeneous(String),

    /// A result (or request) lands beyond the degree window a truncated
    /// model is reliable for.
    #[error("degree {degree} exceeds the reliable window {window} of {context}")]
    TruncationExceeded {
        degree: i64,
        window: i64,
        context: String,
    },

    /// Two elements from different ambient graded spaces were combined.
    #[error("graded space mismatch: expected '{expected}', got '{got}'")]
    SpaceMismatch { expected: String, got: String },

    /// Scalars from different coefficient fields were combined.
    #[error("coefficient field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),

    /// Lookup of a basis symbol that does not exist in the space.
    #[error("unknown basis symbol '{symbol}' in '{space}'")]
    UnknownSymbol { symbol: String, space: String },

    /// Division by zero / inversion of a singular matrix.
    #[error("division by zero: {0}")]
    DivisionByZero(String),

    /// A pairing that must be perfect is degenerate (bad model data).
    #[error("degenerate pairing: {0}")]
    DegeneratePairing(String),

    /// A partial structure table was asked for a row it does not carry.
    #[error("insufficient scenario data: {0}")]
    InsufficientData(String),

    /// Model data failed a load-time axiom check.
    #[error("validation failed: {0}")]
    Validation(String),

    /// Malformed catalog input (syntax, dangling references, bad scalars).
    #[error("catalog error: {0}")]
    Catalog(String),

    /// Arguments outside an operation's declared domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, EngineError>;
