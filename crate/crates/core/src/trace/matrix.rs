use indexmap::IndexSet;

use super::row::check_selection;
use super::Row;
use crate::error::{Error, Result};

/// A deduplicated family of equal-width rows.
///
/// Rows keep their first-insertion order; equality is set equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceMatrix {
    width: usize,
    rows: IndexSet<Row>,
}

impl TraceMatrix {
    /// Collects `rows`, silently dropping duplicates.
    pub fn new(width: usize, rows: impl IntoIterator<Item = Row>) -> Result<TraceMatrix> {
        let mut m = TraceMatrix::builder(width)?;
        for r in rows {
            m.insert(r)?;
        }
        m.finish()
    }

    /// Like [`TraceMatrix::new`] but a repeated row is an error.
    pub fn new_strict(width: usize, rows: impl IntoIterator<Item = Row>) -> Result<TraceMatrix> {
        let mut m = TraceMatrix::builder(width)?;
        for r in rows {
            if !m.insert(r.clone())? {
                return Err(Error::DuplicateRow(r.to_string()));
            }
        }
        m.finish()
    }

    pub fn builder(width: usize) -> Result<MatrixBuilder> {
        if width == 0 {
            return Err(Error::EmptyRow);
        }
        Ok(MatrixBuilder { width, rows: IndexSet::new() })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Number of distinct rows.
    pub fn distinct_count(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &Row> + '_ {
        self.rows.iter()
    }

    pub fn row(&self, i: usize) -> Option<&Row> {
        self.rows.get_index(i)
    }

    pub fn contains(&self, row: &Row) -> bool {
        self.rows.contains(row)
    }

    /// Rows in lexicographic order.
    pub fn sorted_rows(&self) -> Vec<&Row> {
        let mut v: Vec<&Row> = self.rows.iter().collect();
        v.sort();
        v
    }

    pub fn max_alternation(&self) -> usize {
        self.rows.iter().map(Row::alternation_number).max().unwrap_or(0)
    }

    /// Restricts every row to the strictly increasing column list `cols`.
    pub fn restrict_columns(&self, cols: &[usize]) -> Result<TraceMatrix> {
        check_selection(cols, self.width)?;
        TraceMatrix::new(cols.len(), self.rows.iter().map(|r| r.restrict(cols).expect("checked selection")))
    }
}

pub struct MatrixBuilder {
    width: usize,
    rows: IndexSet<Row>,
}

impl MatrixBuilder {
    /// Returns whether the row was new.
    pub fn insert(&mut self, row: Row) -> Result<bool> {
        if row.len() != self.width {
            return Err(Error::WidthMismatch { expected: self.width, found: row.len() });
        }
        Ok(self.rows.insert(row))
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn finish(self) -> Result<TraceMatrix> {
        if self.rows.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        Ok(TraceMatrix { width: self.width, rows: self.rows })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&str]) -> TraceMatrix {
        let rows: Vec<Row> = rows.iter().map(|s| s.parse().unwrap()).collect();
        TraceMatrix::new(rows[0].len(), rows).unwrap()
    }

    #[test]
    fn distinct_count_examples() {
        assert_eq!(m(&["000", "000", "111"]).distinct_count(), 2);
        let cube: Vec<Row> = (0..8).map(|v| Row::from_u64(3, v).unwrap()).collect();
        assert_eq!(TraceMatrix::new(3, cube).unwrap().distinct_count(), 8);
        assert_eq!(m(&["0000", "0001", "0011", "0111", "1111"]).distinct_count(), 5);
    }

    #[test]
    fn restrict_examples() {
        assert_eq!(m(&["0011", "1100"]).restrict_columns(&[0, 3]).unwrap(), m(&["01", "10"]));
        let x = m(&["0101", "0011", "1110"]);
        assert_eq!(x.restrict_columns(&[0, 1, 2, 3]).unwrap(), x);
        assert_eq!(m(&["0101", "0011"]).restrict_columns(&[1, 3]).unwrap(), m(&["11", "01"]));
        assert_eq!(x.restrict_columns(&[]), Err(Error::EmptySelection));
        assert!(matches!(x.restrict_columns(&[0, 9]), Err(Error::ColumnOutOfRange { .. })));
    }

    #[test]
    fn restriction_dedups() {
        assert_eq!(m(&["0011", "0111"]).restrict_columns(&[2, 3]).unwrap().distinct_count(), 1);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(TraceMatrix::new(3, Vec::new()), Err(Error::EmptyMatrix));
        let r: Row = "01".parse().unwrap();
        assert_eq!(TraceMatrix::new(3, [r.clone()]), Err(Error::WidthMismatch { expected: 3, found: 2 }));
        assert_eq!(TraceMatrix::new_strict(2, [r.clone(), r]), Err(Error::DuplicateRow("01".into())));
    }

    #[test]
    fn equality_ignores_order() {
        assert_eq!(m(&["01", "10"]), m(&["10", "01"]));
    }
}
