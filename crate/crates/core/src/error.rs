use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("ambiguous geodesic: {} candidates ({})", candidates.len(), candidates.join("; "))]
    Ambiguous { candidates: Vec<String> },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("{what} = {value} outside [{min}, {max}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },
    #[error("no model triangle with sides ({0}, {1}, {2})")]
    ModelTriangle(f64, f64, f64),
    #[error("perimeter {perimeter} not below {limit}")]
    Perimeter { perimeter: f64, limit: f64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported for this domain: {0}")]
    Unsupported(String),
    #[error("growth fit failed: {0}")]
    Fit(String),
    #[error("evader policy violated step bound at step {step}: {detail}")]
    PolicyViolation { step: usize, detail: String },
    #[error("theorem hypothesis not met: {0}")]
    Hypothesis(String),
    #[error("incomplete trace: {0}")]
    IncompleteTrace(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("configuration error at `{path}`: {message}")]
    Config { path: String, message: String },
    #[error("engine error at step {step}: {source}")]
    AtStep {
        step: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn at_step(self, step: usize) -> Self {
        match self {
            Error::AtStep { .. } | Error::PolicyViolation { .. } => self,
            other => Error::AtStep {
                step,
                source: Box::new(other),
            },
        }
    }

    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
