use std::collections::BTreeSet;
use std::fmt;
use std::ops::Range;

use serde::{Serialize, Serializer};

use super::Row;
use crate::error::{Error, Result};

/// A set of cuts between adjacent indices of `{0, …, width − 1}`.
///
/// Gap `g` is the cut at half-integer position `g + 0.5`. Cuts outside the
/// `width − 1` inner gaps are vacuous on a finite index set and are not
/// representable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CutSet {
    width: usize,
    gaps: BTreeSet<usize>,
}

impl CutSet {
    pub fn new(width: usize, gaps: impl IntoIterator<Item = usize>) -> Result<CutSet> {
        if width == 0 {
            return Err(Error::EmptyRow);
        }
        let gaps: BTreeSet<usize> = gaps.into_iter().collect();
        if let Some(&g) = gaps.iter().find(|&&g| g + 1 >= width) {
            return Err(Error::ColumnOutOfRange { index: g, width: width - 1 });
        }
        Ok(CutSet { width, gaps })
    }

    pub fn empty(width: usize) -> CutSet {
        CutSet { width, gaps: BTreeSet::new() }
    }

    pub(crate) fn from_sorted_gaps_unchecked(width: usize, gaps: Vec<usize>) -> CutSet {
        CutSet { width, gaps: gaps.into_iter().collect() }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.gaps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gaps.is_empty()
    }

    pub fn gaps(&self) -> impl Iterator<Item = usize> + '_ {
        self.gaps.iter().copied()
    }

    pub fn contains_gap(&self, gap: usize) -> bool {
        self.gaps.contains(&gap)
    }

    /// Cut positions as half-integers, increasing.
    pub fn positions(&self) -> Vec<f64> {
        self.gaps.iter().map(|&g| g as f64 + 0.5).collect()
    }

    /// The `len() + 1` convex classes, as index ranges in order.
    pub fn classes(&self) -> Vec<Range<usize>> {
        let mut out = Vec::with_capacity(self.gaps.len() + 1);
        let mut start = 0;
        for &g in &self.gaps {
            out.push(start..g + 1);
            start = g + 1;
        }
        out.push(start..self.width);
        out
    }

    /// True iff `i` and `j` lie in the same class.
    pub fn equivalent(&self, i: usize, j: usize) -> bool {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        self.gaps.range(lo..hi).next().is_none()
    }

    pub fn is_constant_on(&self, row: &Row) -> bool {
        row.len() == self.width
            && self.classes().iter().all(|c| c.clone().all(|i| row.get(i) == row.get(c.start)))
    }

    pub fn union(&self, other: &CutSet) -> Result<CutSet> {
        if self.width != other.width {
            return Err(Error::WidthMismatch { expected: self.width, found: other.width });
        }
        Ok(CutSet { width: self.width, gaps: self.gaps.union(&other.gaps).copied().collect() })
    }
}

impl fmt::Display for CutSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, g) in self.gaps.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}.5")?;
        }
        f.write_str("}")
    }
}

impl Serialize for CutSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.positions().serialize(serializer)
    }
}
