use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: NonMonotonicTime: {t} follows {previous}")]
    NonMonotonicTime { line: usize, t: f64, previous: f64 },
    #[error("line {line}: BadProbability: {value} is outside [0, 1]")]
    BadProbability { line: usize, value: f64 },
    #[error("{path}: {source}")]
    File { path: PathBuf, source: Box<Error> },
    #[error("{0}")]
    Core(#[from] infranotes_core::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn syntax(line: usize, message: impl Into<String>) -> Self {
        Error::Syntax { line, message: message.into() }
    }

    pub fn in_file(self, path: impl Into<PathBuf>) -> Self {
        Error::File { path: path.into(), source: Box::new(self) }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
