use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Caller supplied parameters that violate an operation's precondition.
    #[error("invalid input: {0}")]
    Input(String),
    /// The request is well-formed but beyond what this backing or size supports.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// The consistent-input sampler ran out of its inner-loop budget.
    #[error("consistent-input sampler exhausted its budget of {budget} steps")]
    SamplerExhausted { budget: u64 },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{phase}: {source}")]
    Phase {
        phase: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }

    pub fn in_phase(self, phase: &str) -> Self {
        match self {
            e @ Error::Phase { .. } => e,
            e => Error::Phase { phase: phase.to_string(), source: Box::new(e) },
        }
    }

    /// Phase tag, if the error was raised inside a pipeline stage.
    pub fn phase(&self) -> Option<&str> {
        match self {
            Error::Phase { phase, .. } => Some(phase),
            _ => None,
        }
    }

    /// The underlying error with any phase tag stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::Phase { source, .. } => source.root(),
            e => e,
        }
    }

    /// True for failures that are an expected (bounded-probability) outcome of a
    /// randomized stage rather than a configuration problem.
    pub fn is_probabilistic(&self) -> bool {
        matches!(self.root(), Error::SamplerExhausted { .. })
    }
}

pub(crate) trait PhaseExt<T> {
    fn phase(self, phase: &str) -> Result<T>;
}

impl<T> PhaseExt<T> for Result<T> {
    fn phase(self, phase: &str) -> Result<T> {
        self.map_err(|e| e.in_phase(phase))
    }
}
