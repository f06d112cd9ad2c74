use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report.
///
/// Variant names double as the stable machine codes returned by the REST
/// facade (see [`Error::code`]).
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown product: {0}")]
    UnknownProduct(String),
    #[error("unknown task: {0}")]
    UnknownTask(String),
    #[error("unknown session: {0}")]
    UnknownSession(String),
    #[error("unknown type: {0}")]
    UnknownType(String),
    #[error("unknown developer: {0}")]
    UnknownDeveloper(String),
    #[error("session {0} is closed")]
    SessionClosed(String),
    #[error("session {0} is already closed")]
    AlreadyClosed(String),
    #[error("session {0} is still open")]
    SessionOpen(String),
    #[error("invalid line number {0}, lines are 1-based")]
    InvalidLine(i64),
    #[error("stack snapshot has no frames")]
    EmptySnapshot,
    #[error("timestamp {got} precedes the session's last recorded time {last}")]
    OutOfOrderTimestamp { last: i64, got: i64 },
    #[error("event kind {0} is not accepted here")]
    InvalidEventKind(String),
    #[error("invalid value: {0}")]
    Invalid(String),
    #[error("duplicate {0}")]
    Duplicate(String),
    #[error("search query is empty")]
    EmptyQuery,
    #[error("no source line for {type_name}:{line}")]
    MissingSource { type_name: String, line: u32 },
    #[error("invocation relation of session {0} contains a cycle")]
    CyclicInvocation(String),
    #[error("no session has a first-breakpoint ratio defined")]
    NoDefinedMfb,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("coordinates must be strictly positive")]
    NonPositive,
    #[error("group {0} is empty")]
    EmptyGroup(String),
    #[error("unreadable stream: {0}")]
    UnreadableStream(String),
    #[error("store file {path} is corrupt: {reason}")]
    CorruptStore { path: PathBuf, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::UnknownProduct(_) => "UnknownProduct",
            Error::UnknownTask(_) => "UnknownTask",
            Error::UnknownSession(_) => "UnknownSession",
            Error::UnknownType(_) => "UnknownType",
            Error::UnknownDeveloper(_) => "UnknownDeveloper",
            Error::SessionClosed(_) => "SessionClosed",
            Error::AlreadyClosed(_) => "AlreadyClosed",
            Error::SessionOpen(_) => "SessionOpen",
            Error::InvalidLine(_) => "InvalidLine",
            Error::EmptySnapshot => "EmptySnapshot",
            Error::OutOfOrderTimestamp { .. } => "OutOfOrderTimestamp",
            Error::InvalidEventKind(_) => "InvalidEventKind",
            Error::Invalid(_) => "Invalid",
            Error::Duplicate(_) => "Duplicate",
            Error::EmptyQuery => "EmptyQuery",
            Error::MissingSource { .. } => "MissingSource",
            Error::CyclicInvocation(_) => "CyclicInvocation",
            Error::NoDefinedMfb => "NoDefinedMFB",
            Error::DegenerateInput(_) => "DegenerateInput",
            Error::NonPositive => "NonPositive",
            Error::EmptyGroup(_) => "EmptyGroup",
            Error::UnreadableStream(_) => "UnreadableStream",
            Error::CorruptStore { .. } => "CorruptStore",
            Error::Io(_) => "Io",
            Error::Json(_) => "Json",
            Error::Csv(_) => "Csv",
        }
    }
}
