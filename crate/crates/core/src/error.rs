use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("argument {arg} lies within {threshold} of a pole")]
    PoleProximity { arg: String, threshold: String },

    #[error("argument {0} is an integer (pole)")]
    IntegerArgument(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("poles are not multiplicity free")]
    NotMultiplicityFree,

    #[error("moduli are not (pairwise) coprime: {0}")]
    NotCoprime(String),

    #[error("parity condition of case {case} fails for (p, q) = ({p}, {q})")]
    ParityMismatch { case: u8, p: u32, q: u32 },

    #[error("kind pair ({0}, {1}) is not admissible; the cotangent factor must come first")]
    InadmissibleTriple(String, String),

    #[error("law does not apply: {0}")]
    Inapplicable(String),

    #[error("contour extraction did not converge after {nodes} nodes")]
    NoConvergence { nodes: usize },

    #[error("cannot parse {what}: {input}")]
    Parse { what: &'static str, input: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
