//! Switch decompositions: `n` windows of `window + 1` positions outside of
//! which a row is constant on each gap, and the ranks they induce.

use std::ops::Range;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::trace::{CutSet, Row, TraceMatrix};

/// Default width limit for [`brute_min_switch_rank`].
pub const DEFAULT_EXHAUSTIVE_BOUND: usize = 16;

/// Positions `i_1 < … < i_n`, the bits under each window, and one value per
/// gap.
///
/// Window `k` covers `positions[k] ..= positions[k] + window`, clipped at the
/// last column. Gap `k` is the open interval between window `k − 1` and
/// window `k` (gap 0 starts at column 0, gap `n` ends at the last column).
/// An empty gap keeps a value bit, which is then meaningless.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SwitchDecomposition {
    pub width: usize,
    pub window: usize,
    pub positions: Vec<usize>,
    pub window_bits: Vec<Vec<bool>>,
    pub gap_values: Vec<bool>,
}

/// Gap `k` of a decomposition with the given positions.
pub(crate) fn gap_range(positions: &[usize], window: usize, width: usize, k: usize) -> Range<usize> {
    let start = if k == 0 { 0 } else { positions[k - 1] + window + 1 };
    let end = if k == positions.len() { width } else { positions[k] };
    start.min(end)..end
}

/// Window `k`, clipped at `width`.
pub(crate) fn window_range(positions: &[usize], window: usize, width: usize, k: usize) -> Range<usize> {
    positions[k]..(positions[k] + window + 1).min(width)
}

impl SwitchDecomposition {
    pub fn n(&self) -> usize {
        self.positions.len()
    }

    pub fn gaps(&self) -> Vec<Range<usize>> {
        (0..=self.n()).map(|k| gap_range(&self.positions, self.window, self.width, k)).collect()
    }

    /// Rebuilds the row, checking structural consistency first.
    pub fn reproduce(&self) -> Result<Row> {
        let n = self.n();
        if self.positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::MalformedPositions("positions must be strictly increasing".into()));
        }
        if self.positions.iter().any(|&p| p >= self.width) {
            return Err(Error::MalformedPositions(format!("position out of range for width {}", self.width)));
        }
        if self.gap_values.len() != n + 1 || self.window_bits.len() != n {
            return Err(Error::MalformedTable("wrong number of gap or window entries".into()));
        }
        let mut bits = vec![false; self.width];
        for (k, gap) in self.gaps().into_iter().enumerate() {
            bits[gap].fill(self.gap_values[k]);
        }
        for k in 0..n {
            let win = window_range(&self.positions, self.window, self.width, k);
            if self.window_bits[k].len() != win.len() {
                return Err(Error::MalformedTable(format!("window {k} must hold {} bits", win.len())));
            }
            bits[win].copy_from_slice(&self.window_bits[k]);
        }
        Row::from_bits(&bits)
    }
}

/// Least number of windows of extent `window` needed for `row`.
///
/// A window starting at `s` absorbs the changes at gaps `s − 1 ..= s + window`.
/// Scanning changes left to right and opening a window just after the first
/// uncovered change is optimal: any window covering that change starts no
/// later, so it reaches no further right.
pub fn min_switch_rank(row: &Row, window: usize) -> usize {
    let mut count = 0;
    let mut reach: Option<usize> = None;
    for g in row.change_gaps() {
        if reach.is_none_or(|e| g > e) {
            count += 1;
            reach = Some(g + 1 + window);
        }
    }
    count
}

/// A decomposition attaining [`min_switch_rank`].
///
/// Each gap is extended as far as the row stays constant; the next window
/// starts at the first position that breaks it. Among minimal decompositions
/// this yields the one whose windows start as late as possible.
pub fn decompose(row: &Row, window: usize) -> SwitchDecomposition {
    let width = row.len();
    let mut positions = Vec::new();
    let mut window_bits = Vec::new();
    let mut gap_values = Vec::new();
    let mut start = 0;
    loop {
        if start >= width {
            gap_values.push(false);
            break;
        }
        let value = row.get(start);
        let mut end = start;
        while end + 1 < width && row.get(end + 1) == value {
            end += 1;
        }
        gap_values.push(value);
        if end + 1 >= width {
            break;
        }
        let p = end + 1;
        positions.push(p);
        window_bits.push((p..(p + window + 1).min(width)).map(|i| row.get(i)).collect());
        start = p + window + 1;
    }
    SwitchDecomposition { width, window, positions, window_bits, gap_values }
}

/// Does the literal gap-constancy condition hold for these switch positions?
fn positions_valid(bits: &[bool], positions: &[usize], window: usize) -> bool {
    let width = bits.len();
    (0..=positions.len()).all(|k| {
        let lo = if k == 0 { 0 } else { positions[k - 1] + window + 1 };
        let hi = if k == positions.len() { width } else { positions[k] };
        lo >= hi || bits[lo..hi].iter().all(|&b| b == bits[lo])
    })
}

/// Exact minimum by trying `n = 0, 1, 2, …` with every increasing position
/// tuple. Independent of the scanning argument behind [`min_switch_rank`].
pub fn brute_min_switch_rank(row: &Row, window: usize) -> Result<usize> {
    brute_min_switch_rank_bounded(row, window, DEFAULT_EXHAUSTIVE_BOUND)
}

pub fn brute_min_switch_rank_bounded(row: &Row, window: usize, bound: usize) -> Result<usize> {
    let width = row.len();
    if width > bound {
        return Err(Error::ExhaustiveBound { width, bound });
    }
    let bits = row.to_bits();
    for n in 0..=width {
        let mut tuple: Vec<usize> = (0..n).collect();
        loop {
            if positions_valid(&bits, &tuple, window) {
                return Ok(n);
            }
            // next n-combination of 0..width in lexicographic order
            let Some(k) = (0..n).rev().find(|&k| tuple[k] < width - n + k) else { break };
            tuple[k] += 1;
            for j in k + 1..n {
                tuple[j] = tuple[j - 1] + 1;
            }
        }
    }
    unreachable!("n = width always admits a decomposition")
}

/// Maximum of [`min_switch_rank`] over the rows of `m`.
pub fn family_rank(m: &TraceMatrix, window: usize) -> usize {
    let rows: Vec<&Row> = m.rows().collect();
    rows.par_iter().map(|r| min_switch_rank(r, window)).max().unwrap_or(0)
}

/// The least cut set on whose classes every row of `m` is constant: the
/// union of the rows' change points.
pub fn joint_cuts(m: &TraceMatrix) -> CutSet {
    m.rows()
        .map(Row::change_points)
        .reduce(|a, b| a.union(&b).expect("equal widths"))
        .unwrap_or_else(|| CutSet::empty(m.width()))
}
