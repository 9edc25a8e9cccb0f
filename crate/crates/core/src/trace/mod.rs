//! Rows, cut sets and trace matrices over a finite ordered index set.

mod cuts;
mod matrix;
mod row;
pub mod vctm;

pub use cuts::CutSet;
pub use matrix::{MatrixBuilder, TraceMatrix};
pub use row::Row;
