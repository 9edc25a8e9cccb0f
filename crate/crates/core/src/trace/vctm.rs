//! The `vctm v1` text format.
//!
//! ```text
//! vctm 1
//! <width> <rows>
//! <row 0>
//! ...
//! ```
//!
//! Every row line holds exactly `width` characters from `{0,1}`.

use std::fmt::Write;

use super::{Row, TraceMatrix};
use crate::error::{Error, Result};

pub const MAGIC: &str = "vctm 1";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Duplicates {
    #[default]
    Reject,
    Merge,
}

pub fn write(m: &TraceMatrix) -> String {
    let mut out = String::with_capacity((m.width() + 1) * (m.distinct_count() + 2));
    writeln!(out, "{MAGIC}").unwrap();
    writeln!(out, "{} {}", m.width(), m.distinct_count()).unwrap();
    for r in m.rows() {
        writeln!(out, "{r}").unwrap();
    }
    out
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

pub fn parse(text: &str, duplicates: Duplicates) -> Result<TraceMatrix> {
    let body = text.strip_suffix('\n').unwrap_or(text);
    let mut lines = body.split('\n');

    match lines.next() {
        Some(MAGIC) => {}
        Some(other) => return Err(err(1, format!("expected {MAGIC:?}, found {other:?}"))),
        None => return Err(err(1, "empty input")),
    }
    let header = lines.next().ok_or_else(|| err(2, "missing size line"))?;
    let fields: Vec<&str> = header.split(' ').collect();
    let [w, c] = fields.as_slice() else {
        return Err(err(2, format!("expected \"<width> <rows>\", found {header:?}")));
    };
    let width: usize = w.parse().map_err(|_| err(2, format!("bad width {w:?}")))?;
    let count: usize = c.parse().map_err(|_| err(2, format!("bad row count {c:?}")))?;
    if width == 0 {
        return Err(err(2, "width must be at least 1"));
    }
    if count == 0 {
        return Err(err(2, "row count must be at least 1"));
    }

    let mut builder = TraceMatrix::builder(width)?;
    let mut seen = 0;
    for (k, line) in lines.enumerate() {
        let lineno = k + 3;
        if seen == count {
            return Err(err(lineno, format!("more than the declared {count} rows")));
        }
        if line.len() != width {
            return Err(err(lineno, format!("row has {} characters, expected {width}", line.len())));
        }
        let row: Row = line.parse().map_err(|e: Error| err(lineno, e.to_string()))?;
        if !builder.insert(row)? && duplicates == Duplicates::Reject {
            return Err(err(lineno, format!("duplicate row {line}")));
        }
        seen += 1;
    }
    if seen != count {
        return Err(err(seen + 3, format!("declared {count} rows, found {seen}")));
    }
    builder.finish()
}
