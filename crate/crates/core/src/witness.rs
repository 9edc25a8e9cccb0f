//! Lower-bound families: an alternation pattern with `n + 2` blocks yields
//! at least `C(N, n + 1)` distinct rows at width `N`.

use serde::Serialize;

use crate::combinatorics::{binomial, subsets_colex};
use crate::error::{Error, Result};
use crate::trace::{Row, TraceMatrix};

/// Block values `v_0 … v_{n+1}` and separator values `w_0 … w_n`.
///
/// For each consecutive pair, a separator differs from both blocks when they
/// agree (`w_k = ¬v_k`), and otherwise opens the next block (`w_k = v_{k+1}`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessPattern {
    n: usize,
    block_values: Vec<bool>,
    separator_values: Vec<bool>,
}

impl WitnessPattern {
    /// Separators are forced by the blocks.
    pub fn from_blocks(block_values: Vec<bool>) -> Result<WitnessPattern> {
        if block_values.len() < 2 {
            return Err(Error::InvalidPattern("need at least two blocks".into()));
        }
        let separator_values = block_values
            .windows(2)
            .map(|w| if w[0] == w[1] { !w[0] } else { w[1] })
            .collect();
        Ok(WitnessPattern { n: block_values.len() - 2, block_values, separator_values })
    }

    pub fn new(block_values: Vec<bool>, separator_values: Vec<bool>) -> Result<WitnessPattern> {
        let p = WitnessPattern::from_blocks(block_values)?;
        if p.separator_values != separator_values {
            return Err(Error::InvalidPattern(format!(
                "separators must be {} for these blocks",
                bits(&p.separator_values)
            )));
        }
        Ok(p)
    }

    /// Constant-0 blocks with 1-separators: rows are `(n + 1)`-subset
    /// indicators.
    pub fn canonical(n: usize) -> WitnessPattern {
        WitnessPattern::from_blocks(vec![false; n + 2]).expect("n + 2 >= 2 blocks")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn block_values(&self) -> &[bool] {
        &self.block_values
    }

    pub fn separator_values(&self) -> &[bool] {
        &self.separator_values
    }

    /// Row for separator positions `subset` (`n + 1` increasing indices).
    pub fn row(&self, subset: &[usize], width: usize) -> Result<Row> {
        debug_assert_eq!(subset.len(), self.n + 1);
        let mut bits = Vec::with_capacity(width);
        let mut block = 0;
        for i in 0..width {
            if block <= self.n && i == subset[block] {
                bits.push(self.separator_values[block]);
                block += 1;
            } else {
                bits.push(self.block_values[block]);
            }
        }
        Row::from_bits(&bits)
    }
}

fn bits(v: &[bool]) -> String {
    v.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// One row per `(n + 1)`-subset of the columns, enumerated in colex order.
///
/// Fails if the pattern produces fewer than `C(N, n + 1)` distinct rows.
pub fn build_witness_family(p: &WitnessPattern, width: usize) -> Result<TraceMatrix> {
    let k = p.n + 1;
    if width < k {
        return Err(Error::WidthTooSmall { width, needed: k });
    }
    let mut builder = TraceMatrix::builder(width)?;
    for subset in subsets_colex(width, k) {
        builder.insert(p.row(&subset, width)?)?;
    }
    let m = builder.finish()?;
    let expected = binomial(width as u64, k as u64).expect("enumerated, so it fits");
    if (m.distinct_count() as u128) < expected {
        log::warn!(
            "witness pattern {} / {} rejected at width {width}",
            bits(&p.block_values),
            bits(&p.separator_values)
        );
        return Err(Error::NonInjectivePattern { distinct: m.distinct_count() as u128, expected });
    }
    Ok(m)
}

/// `distinct_count(m) ≥ C(width, n + 1)`.
pub fn verify_lower_bound(m: &TraceMatrix, n: usize, width: usize) -> bool {
    match binomial(width as u64, n as u64 + 1) {
        Some(bound) => m.distinct_count() as u128 >= bound,
        None => false,
    }
}
