use chrono::NaiveDate;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function it was passed to.
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(
        "generation interval truncated at s_max = {s_max} leaves tail mass {mass:.4} (limit {limit})"
    )]
    Truncation { s_max: usize, mass: f64, limit: f64 },

    #[error("line {line}: {msg}")]
    Parse { line: u64, msg: String },

    #[error("line {line}: duplicate date {date}")]
    DuplicateDate { line: u64, date: NaiveDate },

    #[error("input contains no data rows")]
    Empty,

    #[error("no day satisfies the validity conditions for estimation")]
    NoValidDays,

    #[error("non-finite observation {0}")]
    NonFinite(f64),

    #[error("iteration failed to converge in {0}")]
    NoConvergence(&'static str),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            func,
            detail: detail.into(),
        }
    }
}
