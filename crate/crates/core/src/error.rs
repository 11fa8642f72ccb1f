use thiserror::Error;

/// Errors raised by the library. Verdicts such as "not injective" are not
/// errors; these cover malformed input and violated preconditions.
#[derive(Debug, Error)]
pub enum Error {
    #[error("element {element} does not belong to group {group}")]
    ForeignElement { element: String, group: String },
    #[error("cannot parse group element {input:?}: {reason}")]
    ParseElement { input: String, reason: String },
    #[error("invalid group descriptor: {0}")]
    GroupDescriptor(String),
    #[error("invalid alphabet: {0}")]
    Alphabet(String),
    #[error("rule table has {actual} entries, expected {expected}")]
    TableLength { expected: usize, actual: usize },
    #[error("rule table value {value} is outside the alphabet of size {size}")]
    TableValue { value: u32, size: u32 },
    #[error("table of {entries} entries exceeds the enumeration cap of {cap}")]
    TooLarge { entries: u128, cap: u128 },
    #[error("memory mismatch: {0}")]
    MemoryMismatch(String),
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("unsupported combination: {0}")]
    Unsupported(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("pattern domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invalid labeled graph: {0}")]
    Graph(String),
    #[error("ring arithmetic: {0}")]
    Ring(String),
    #[error("rule is not linear: {0}")]
    NotLinear(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    /// Malformed input, located by a path into the document.
    #[error("{context} at {path}: {message}")]
    Input { context: String, path: String, message: String },
    #[error("{context}: {source}")]
    Json {
        context: String,
        #[source]
        source: serde_json::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
