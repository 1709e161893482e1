use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("vertex {vertex} outside 1..{n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("antibandwidth undefined for edgeless graph")]
    Edgeless,

    #[error("graph is not connected; unreached vertices: {unreached:?}")]
    Disconnected { unreached: Vec<usize> },

    #[error("degree and size bounds require a connected graph")]
    BoundNeedsConnectivity,

    #[error("labeling is not a bijection onto 1..{n}: {reason}")]
    NotBijection { n: usize, reason: String },

    #[error("label set must be nonempty")]
    EmptyLabelSet,

    #[error("target {value} outside the admissible range {lo}..={hi}")]
    OutOfRange { value: usize, lo: usize, hi: usize },

    #[error("instance too large for exhaustive enumeration: n = {n} > {max}")]
    TooLarge { n: usize, max: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }
}
