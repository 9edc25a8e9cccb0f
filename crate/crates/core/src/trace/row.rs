use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::CutSet;
use crate::boolop::BoolOp;
use crate::error::{Error, Result};

const WORD: usize = 64;

/// A finite binary trace over an ordered index set.
///
/// Bits are packed little-endian into `u64` words; bits past `len` are kept
/// zero so that derived equality and hashing see only the trace.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Row {
    len: usize,
    words: Box<[u64]>,
}

fn word_count(len: usize) -> usize {
    len.div_ceil(WORD)
}

fn tail_mask(len: usize) -> u64 {
    match len % WORD {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

impl Row {
    pub fn from_fn(len: usize, mut f: impl FnMut(usize) -> bool) -> Result<Row> {
        if len == 0 {
            return Err(Error::EmptyRow);
        }
        let mut words = vec![0u64; word_count(len)];
        for i in 0..len {
            if f(i) {
                words[i / WORD] |= 1 << (i % WORD);
            }
        }
        Ok(Row { len, words: words.into_boxed_slice() })
    }

    pub fn from_bits(bits: &[bool]) -> Result<Row> {
        Row::from_fn(bits.len(), |i| bits[i])
    }

    pub fn constant(len: usize, value: bool) -> Result<Row> {
        Row::from_fn(len, |_| value)
    }

    /// Builds a row with ones exactly at `ones`.
    pub fn indicator(len: usize, ones: &[usize]) -> Result<Row> {
        let mut row = Row::constant(len, false)?;
        for &i in ones {
            if i >= len {
                return Err(Error::ColumnOutOfRange { index: i, width: len });
            }
            row.words[i / WORD] |= 1 << (i % WORD);
        }
        Ok(row)
    }

    /// Builds a row from the low `len` bits of `value` (bit `i` is position `i`).
    pub fn from_u64(len: usize, value: u64) -> Result<Row> {
        assert!(len <= WORD, "from_u64 supports widths up to 64");
        Row::from_fn(len, |i| (value >> i) & 1 == 1)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    /// Always false; rows have at least one position.
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "index {i} out of range for width {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn to_bits(&self) -> Vec<bool> {
        self.iter().collect()
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_constant(&self) -> bool {
        self.alternation_number() == 0
    }

    /// Bit `i` of the result is set iff positions `i` and `i + 1` differ.
    fn change_words(&self) -> Vec<u64> {
        let n = self.words.len();
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let next = if k + 1 < n { self.words[k + 1] << (WORD - 1) } else { 0 };
            out.push(self.words[k] ^ ((self.words[k] >> 1) | next));
        }
        // only the len - 1 adjacent pairs count
        let pairs = self.len - 1;
        for (k, w) in out.iter_mut().enumerate() {
            let lo = k * WORD;
            if lo >= pairs {
                *w = 0;
            } else if pairs - lo < WORD {
                *w &= (1u64 << (pairs - lo)) - 1;
            }
        }
        out
    }

    /// Number of adjacent positions carrying different values. This is the
    /// least number of cuts on whose classes the row is constant.
    pub fn alternation_number(&self) -> usize {
        self.change_words().iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Gap indices `g` with `self[g] != self[g + 1]`, in increasing order.
    pub fn change_gaps(&self) -> Vec<usize> {
        let mut gaps = Vec::new();
        for (k, mut w) in self.change_words().into_iter().enumerate() {
            while w != 0 {
                gaps.push(k * WORD + w.trailing_zeros() as usize);
                w &= w - 1;
            }
        }
        gaps
    }

    /// The canonical minimal cut set realizing [`Row::alternation_number`].
    pub fn change_points(&self) -> CutSet {
        CutSet::from_sorted_gaps_unchecked(self.len, self.change_gaps())
    }

    /// Restriction to the strictly increasing column list `cols`.
    pub fn restrict(&self, cols: &[usize]) -> Result<Row> {
        check_selection(cols, self.len)?;
        Row::from_fn(cols.len(), |i| self.get(cols[i]))
    }

    /// Pointwise `op(self, other)`.
    pub fn combine(&self, other: &Row, op: BoolOp) -> Result<Row> {
        if self.len != other.len {
            return Err(Error::WidthMismatch { expected: self.len, found: other.len });
        }
        let mut words: Box<[u64]> = self
            .words
            .iter()
            .zip(other.words.iter())
            .map(|(&a, &b)| op.eval_word(a, b))
            .collect();
        let last = words.len() - 1;
        words[last] &= tail_mask(self.len);
        Ok(Row { len: self.len, words })
    }

    pub fn complement(&self) -> Row {
        let mut words: Box<[u64]> = self.words.iter().map(|w| !w).collect();
        let last = words.len() - 1;
        words[last] &= tail_mask(self.len);
        Row { len: self.len, words }
    }
}

pub(crate) fn check_selection(cols: &[usize], width: usize) -> Result<()> {
    if cols.is_empty() {
        return Err(Error::EmptySelection);
    }
    if let Some(&bad) = cols.iter().find(|&&c| c >= width) {
        return Err(Error::ColumnOutOfRange { index: bad, width });
    }
    if cols.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::UnorderedSelection);
    }
    Ok(())
}

/// Lexicographic order on the bit strings, shorter rows first.
impl Ord for Row {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| {
            for (a, b) in self.words.iter().zip(other.words.iter()) {
                let diff = a ^ b;
                if diff != 0 {
                    let low = diff.trailing_zeros();
                    return if (a >> low) & 1 == 0 { Ordering::Less } else { Ordering::Greater };
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Row {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.iter().map(|b| if b { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Row({self})")
    }
}

impl FromStr for Row {
    type Err = Error;

    fn from_str(s: &str) -> Result<Row> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidBit(other)),
            })
            .collect::<Result<Vec<_>>>()?;
        Row::from_bits(&bits)
    }
}

impl Serialize for Row {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Row {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
