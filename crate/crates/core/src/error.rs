use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    OutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("graph is disconnected ({reached} of {n} vertices reachable from 0)")]
    Disconnected { reached: usize, n: usize },
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("simulation exceeded its budget of {0} steps")]
    RuntimeCap(u64),
    #[error("enumeration exceeded cap of {0} items")]
    CapExceeded(u64),
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
    #[error("pair (alpha={alpha}, beta={beta}) is not attainable")]
    InfeasiblePair { alpha: f64, beta: f64 },
    #[error("a family of at least {0} sizes is required")]
    RequiresFamily(usize),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
