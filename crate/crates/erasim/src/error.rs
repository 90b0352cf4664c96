//! Error types shared across the simulator.

use thiserror::Error;

/// Errors raised by state construction, optical evolution, measurement and
/// the audit operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    /// A mode identifier does not match `[A-Za-z_][A-Za-z0-9_]*`.
    #[error("invalid mode name `{0}`")]
    InvalidModeName(String),

    /// A basis configuration or operation does not fit the ambient mode set.
    #[error("configuration mismatch: {0}")]
    ConfigurationMismatch(String),

    /// Tensor factors or relabel targets share a mode label.
    #[error("mode label collision: {0}")]
    LabelCollision(String),

    /// An amplitude was NaN or infinite.
    #[error("non-finite amplitude")]
    NonFiniteAmplitude,

    /// A beam splitter hit a term with both input rails occupied.
    #[error("beam splitter {a}/{b} applied to a doubly occupied term; multi-photon states are unsupported")]
    MultiPhotonUnsupported { a: String, b: String },

    /// An operation that needs a normalizable state got the zero vector.
    #[error("operation on a zero-norm state")]
    UndefinedState,

    /// A pointer ancilla was already excited in some term.
    #[error("pointer mode `{0}` is not a fresh ancilla")]
    AncillaNotFresh(String),

    /// Post-selection discarded every branch.
    #[error("post-selection removed every branch")]
    EmptyPostselection,

    /// Conditioning on an event of probability zero.
    #[error("conditioning on an event of probability zero")]
    ConditioningOnNull,

    /// A conditional step referenced a record that does not exist yet.
    #[error("causality violation: {0}")]
    CausalityViolation(String),

    /// An audit was invoked on protocols that do not satisfy its precondition.
    #[error("audit precondition failed: {0}")]
    AuditPrecondition(String),

    /// A builtin scenario name was not recognized.
    #[error("unknown builtin scenario `{name}`; available: {available}")]
    UnknownBuiltin { name: String, available: String },
}

pub type Result<T> = std::result::Result<T, SimError>;
