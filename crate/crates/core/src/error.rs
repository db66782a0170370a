use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{op}: domain error: {msg}")]
    Domain { op: &'static str, msg: String },
    #[error("{op}: singular input: {msg}")]
    Singular { op: &'static str, msg: String },
    #[error("{op}: no sign change on [{lo}, {hi}]")]
    NoSignChange { op: &'static str, lo: f64, hi: f64 },
    #[error("{op}: no convergence: {msg}")]
    NoConvergence { op: &'static str, msg: String },
    #[error("{op}: overflow at x = {x}")]
    Overflow { op: &'static str, x: f64 },
    #[error("{op}: matrix numerically singular (condition estimate {cond:e})")]
    IllConditioned { op: &'static str, cond: f64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain { op, msg: msg.into() }
    }

    pub(crate) fn singular(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Singular { op, msg: msg.into() }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
