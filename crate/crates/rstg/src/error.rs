use thiserror::Error;

/// Crate-wide error type. `Domain` covers out-of-range parameters for the
/// closed-form quantities; everything else is a structural validation failure.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {id} out of range for a graph on {n} vertices")]
    VertexOutOfRange { id: u32, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(u32),

    #[error("duplicate edge {{{u}, {v}}}")]
    DuplicateEdge { u: u32, v: u32 },

    #[error("duplicate time label {0}")]
    DuplicateLabel(f64),

    #[error("time label {0} outside [0, 1] or not finite")]
    BadLabel(f64),

    #[error("edge lines not in ascending label order")]
    Unsorted,

    #[error("time window bounds out of order: [{a}, {b}]")]
    BadWindow { a: f64, b: f64 },

    #[error("empty source set")]
    EmptySources,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by out-of-domain arguments rather than broken
    /// input data; the CLI maps these to a dedicated exit code.
    pub fn is_domain(&self) -> bool {
        matches!(self, Error::Domain(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
