use std::path::PathBuf;

/// Errors produced anywhere in the ingest → indices → clustering pipeline.
#[derive(Debug, thiserror::Error)]
#[non_exhaustive]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid value: {0}")]
    Value(String),

    #[error("duplicate entry for language {language:?}, category {label:?}")]
    Duplicate { language: String, label: String },

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("need at least 2 categories, got {0}")]
    DegenerateCategories(usize),

    #[error("degenerate distribution: {0}")]
    DegenerateDistribution(String),

    #[error("cannot form {k} clusters from {n} points")]
    TooFewPoints { k: usize, n: usize },

    #[error("{n} points exceed the exhaustive-search limit of {max}")]
    TooLarge { n: usize, max: usize },

    #[error("pmf summation did not reach mass 1 - {tail_tol:e} within {terms} terms")]
    Truncation { tail_tol: f64, terms: usize },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Wraps `self` with a human-readable location (file, language).
    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// The innermost error, skipping any context wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Context { source, .. } => source.root(),
            other => other,
        }
    }

    /// Process exit code for the CLI: 2 for data problems, 3 for numeric ones.
    pub fn exit_code(&self) -> i32 {
        match self.root() {
            Error::DegenerateCategories(_)
            | Error::DegenerateDistribution(_)
            | Error::Truncation { .. }
            | Error::TooFewPoints { .. }
            | Error::TooLarge { .. } => 3,
            _ => 2,
        }
    }
}

pub(crate) trait ResultExt<T> {
    fn context_with<F: FnOnce() -> String>(self, f: F) -> Result<T>;
}

impl<T> ResultExt<T> for Result<T> {
    fn context_with<F: FnOnce() -> String>(self, f: F) -> Result<T> {
        self.map_err(|e| e.context(f()))
    }
}
