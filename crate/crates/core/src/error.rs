use thiserror::Error;

use crate::trace::Row;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("row must have at least one position")]
    EmptyRow,
    #[error("invalid bit character {0:?}")]
    InvalidBit(char),
    #[error("row width {found} does not match matrix width {expected}")]
    WidthMismatch { expected: usize, found: usize },
    #[error("matrix must contain at least one row")]
    EmptyMatrix,
    #[error("duplicate row {0}")]
    DuplicateRow(String),
    #[error("column selection must be nonempty")]
    EmptySelection,
    #[error("column index {index} out of range for width {width}")]
    ColumnOutOfRange { index: usize, width: usize },
    #[error("column selection must be strictly increasing")]
    UnorderedSelection,
    #[error("width {width} exceeds exhaustive bound {bound}")]
    ExhaustiveBound { width: usize, bound: usize },
    #[error("row {row} has switch rank {rank} and is inexpressible in scheme with n = {n}")]
    Inexpressible { row: String, rank: usize, n: usize },
    #[error("row {row} has {exceptions} exceptional positions, budget is {budget}")]
    TooManyExceptions { row: String, exceptions: usize, budget: usize },
    #[error("malformed positions: {0}")]
    MalformedPositions(String),
    #[error("malformed scheme table: {0}")]
    MalformedTable(String),
    #[error("scheme capacity 2^{0} does not fit in 128 bits")]
    CapacityOverflow(u32),
    #[error("witness pattern: {0}")]
    InvalidPattern(String),
    #[error("width {width} is smaller than n + 1 = {needed}")]
    WidthTooSmall { width: usize, needed: usize },
    #[error("witness pattern does not yield distinct rows: {distinct} < {expected}")]
    NonInjectivePattern { distinct: u128, expected: u128 },
    #[error("family {family}: {reason}")]
    InvalidFamily { family: String, reason: String },
    #[error("family {family} at width {width}: enumeration refused, {rows} rows exceeds cap {cap}")]
    EnumerationCap { family: String, width: usize, rows: u128, cap: u128 },
    #[error("count for {family} at width {width} overflows 128 bits")]
    CountOverflow { family: String, width: usize },
    #[error("fit grid: {0}")]
    Grid(String),
    #[error("vctm parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn inexpressible(row: &Row, rank: usize, n: usize) -> Self {
        Error::Inexpressible { row: row.to_string(), rank, n }
    }
}
