use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("illegal move: vertex {vertex} holds {held} pebble(s), a move needs 2")]
    IllegalMove { vertex: usize, held: u32 },

    #[error("not an edge: {0} - {1}")]
    NotAnEdge(usize, usize),

    #[error("vertex {vertex} out of range for a graph on {vertex_count} vertices")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },

    #[error("configuration space of {count} configurations exceeds the enumeration cap {cap}")]
    EnumerationCap { count: String, cap: u64 },

    #[error("search budget of {0} states exhausted")]
    BudgetExhausted(usize),

    #[error("estimate never crosses 1/2 on [{lo}, {hi}]")]
    NoCrossing { lo: u64, hi: u64 },

    #[error("unknown {kind} '{name}' (known: {known})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        known: String,
    },

    #[error("malformed input: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
