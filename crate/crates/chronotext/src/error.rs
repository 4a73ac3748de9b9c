//! Crate-wide error type.

use thiserror::Error;

/// Any failure produced by this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Underlying I/O failure.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// CSV reading/writing failure.
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    /// A record in an input file could not be parsed. `line` is 1-based.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Two documents share the same id.
    #[error("duplicate document id `{0}`")]
    DuplicateId(String),

    /// A document's year falls outside the permitted range.
    #[error("document `{id}`: year {year} outside permitted range {min}..={max}")]
    YearOutOfRange {
        id: String,
        year: i32,
        min: i32,
        max: i32,
    },

    /// A document has an empty body.
    #[error("document `{0}`: empty body")]
    EmptyBody(String),

    /// No word survived the vocabulary frequency thresholds.
    #[error("vocabulary is empty after frequency filtering")]
    EmptyVocabulary,

    /// A lexical table would have no rows or no columns.
    #[error("lexical table is empty: {0}")]
    EmptyTable(String),

    /// A margin that must be positive is zero.
    #[error("zero margin: {0}")]
    ZeroMargin(String),

    /// A partition does not match the table it is applied to.
    #[error("partition `{name}`: {message}")]
    Partition { name: String, message: String },

    /// A document has no year available for a chronological analysis.
    #[error("missing year for document `{0}`")]
    MissingYear(String),

    /// All analyzed documents share one publication year.
    #[error(
        "publication years are constant; chronological analysis needs at least two distinct values"
    )]
    ConstantYear,

    /// A caller-supplied parameter is out of range or inconsistent.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A hypergeometric test query violates its count constraints.
    #[error("invalid test query: {0}")]
    InvalidQuery(String),

    /// A numerical routine failed to converge or produced no result.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A plot was requested with nothing to draw.
    #[error("plot `{0}` has no points")]
    EmptyPlot(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
