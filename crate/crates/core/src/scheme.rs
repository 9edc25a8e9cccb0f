//! Defining schemes: a row is named by `n` switch positions plus a finite
//! table `f` on `X = ({0} × {0..n}) ∪ ({1..n} × {0..ℓ})`. Gap `k` reads
//! `f(0, k)`, offset `j` of window `k` reads `f(k, j)`.

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rank::{decompose, gap_range, min_switch_rank, window_range};
use crate::trace::{Row, TraceMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SchemeParams {
    n: usize,
    window: usize,
    capacity: u128,
}

impl SchemeParams {
    pub fn new(n: usize, window: usize) -> Result<SchemeParams> {
        let bits = n
            .checked_mul(window + 1)
            .and_then(|b| b.checked_add(n + 1))
            .filter(|&b| b < 128)
            .ok_or(Error::CapacityOverflow(u32::try_from(n.saturating_mul(window + 2) + 1).unwrap_or(u32::MAX)))?;
        Ok(SchemeParams { n, window, capacity: 1u128 << bits })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn window(&self) -> usize {
        self.window
    }

    /// Number of distinct tables, `2^(n(ℓ+1) + n + 1)`.
    pub fn capacity(&self) -> u128 {
        self.capacity
    }

    /// `|X|`.
    pub fn table_size(&self) -> usize {
        (self.n + 1) + self.n * (self.window + 1)
    }

    /// `capacity · width^n`, saturating.
    pub fn row_bound(&self, width: usize) -> u128 {
        (0..self.n).fold(self.capacity, |acc, _| acc.saturating_mul(width as u128))
    }
}

/// One table `f : X → {0, 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SchemeEntry {
    #[serde(serialize_with = "bits01")]
    pub gaps: Vec<bool>,
    #[serde(serialize_with = "bit_rows01")]
    pub windows: Vec<Vec<bool>>,
}

impl SchemeEntry {
    pub fn zeros(p: &SchemeParams) -> SchemeEntry {
        SchemeEntry { gaps: vec![false; p.n + 1], windows: vec![vec![false; p.window + 1]; p.n] }
    }

    /// `f(i, j)`; `None` off `X`.
    pub fn value(&self, i: usize, j: usize) -> Option<bool> {
        match i {
            0 => self.gaps.get(j).copied(),
            _ => self.windows.get(i - 1).and_then(|w| w.get(j)).copied(),
        }
    }

    /// The table read as a number below `capacity`: gap values first, then
    /// windows in order, least significant bit first.
    pub fn index(&self) -> u128 {
        self.gaps
            .iter()
            .chain(self.windows.iter().flatten())
            .enumerate()
            .fold(0u128, |acc, (k, &b)| acc | ((b as u128) << k))
    }

    fn check_shape(&self, p: &SchemeParams) -> Result<()> {
        if self.gaps.len() != p.n + 1
            || self.windows.len() != p.n
            || self.windows.iter().any(|w| w.len() != p.window + 1)
        {
            return Err(Error::MalformedTable(format!(
                "expected {} gap values and {} windows of {} bits",
                p.n + 1,
                p.n,
                p.window + 1
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Encoding {
    pub positions: Vec<usize>,
    pub table: SchemeEntry,
}

/// Encodes `row` with exactly `p.n()` positions. Rows that need fewer
/// switches repeat their last position (or use position 0 when constant).
pub fn encode(row: &Row, p: &SchemeParams) -> Result<Encoding> {
    let d = decompose(row, p.window);
    if d.n() > p.n {
        return Err(Error::inexpressible(row, d.n(), p.n));
    }
    let mut table = SchemeEntry::zeros(p);
    let mut positions = d.positions.clone();
    if positions.is_empty() {
        let value = d.gap_values[0];
        table.gaps.fill(value);
        table.windows.iter_mut().for_each(|w| w.fill(value));
        positions = vec![0; p.n];
        return Ok(Encoding { positions, table });
    }
    let real = d.n();
    table.gaps[..=real].copy_from_slice(&d.gap_values);
    let last_gap = d.gap_values[real];
    table.gaps[real..].fill(last_gap);
    for k in 0..p.n {
        let src = &d.window_bits[k.min(real - 1)];
        table.windows[k][..src.len()].copy_from_slice(src);
    }
    positions.resize(p.n, d.positions[real - 1]);
    Ok(Encoding { positions, table })
}

/// Rebuilds the row named by `(table, positions)` at `width`.
///
/// Positions must be nondecreasing. Windows are clipped at the last column;
/// where windows overlap the later one wins.
pub fn decode(table: &SchemeEntry, positions: &[usize], width: usize, p: &SchemeParams) -> Result<Row> {
    table.check_shape(p)?;
    if positions.len() != p.n {
        return Err(Error::MalformedPositions(format!("expected {} positions, found {}", p.n, positions.len())));
    }
    if positions.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::MalformedPositions("positions must be nondecreasing".into()));
    }
    if let Some(&bad) = positions.iter().find(|&&q| q >= width) {
        return Err(Error::MalformedPositions(format!("position {bad} out of range for width {width}")));
    }
    if width == 0 {
        return Err(Error::EmptyRow);
    }
    let mut bits = vec![false; width];
    for k in 0..=p.n {
        bits[gap_range(positions, p.window, width, k)].fill(table.gaps[k]);
    }
    for k in 0..p.n {
        let win = window_range(positions, p.window, width, k);
        let len = win.len();
        bits[win].copy_from_slice(&table.windows[k][..len]);
    }
    Row::from_bits(&bits)
}

impl Encoding {
    pub fn decode(&self, width: usize, p: &SchemeParams) -> Result<Row> {
        decode(&self.table, &self.positions, width, p)
    }
}

/// A table on `{0, …, m}`: slot 0 is the default value, slot `i > 0` the value
/// at the `i`-th exceptional position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SetSchemeEntry {
    pub budget: usize,
    #[serde(serialize_with = "bits01")]
    pub table: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SetEncoding {
    pub entry: SetSchemeEntry,
    pub positions: Vec<usize>,
}

/// Encodes `row` as its majority value plus at most `budget` exceptions.
/// Ties go to 0. Unused slots repeat the last exception (or position 0 with
/// the default value).
pub fn encode_set(row: &Row, budget: usize) -> Result<SetEncoding> {
    let default = 2 * row.count_ones() > row.len();
    let exceptions: Vec<usize> = (0..row.len()).filter(|&i| row.get(i) != default).collect();
    if exceptions.len() > budget {
        return Err(Error::TooManyExceptions { row: row.to_string(), exceptions: exceptions.len(), budget });
    }
    let mut positions = exceptions;
    let (pad_pos, pad_bit) = positions.last().map_or((0, default), |&q| (q, !default));
    // slot 0 is the default; every exceptional or padded slot holds pad_bit
    let mut table = vec![pad_bit; budget + 1];
    table[0] = default;
    positions.resize(budget, pad_pos);
    Ok(SetEncoding { entry: SetSchemeEntry { budget, table }, positions })
}

pub fn decode_set(entry: &SetSchemeEntry, positions: &[usize], width: usize) -> Result<Row> {
    if entry.table.len() != entry.budget + 1 {
        return Err(Error::MalformedTable(format!("set table must have {} entries", entry.budget + 1)));
    }
    if positions.len() != entry.budget {
        return Err(Error::MalformedPositions(format!(
            "expected {} positions, found {}",
            entry.budget,
            positions.len()
        )));
    }
    if let Some(&bad) = positions.iter().find(|&&q| q >= width) {
        return Err(Error::MalformedPositions(format!("position {bad} out of range for width {width}")));
    }
    let mut bits = vec![entry.table[0]; width];
    for (i, &q) in positions.iter().enumerate() {
        bits[q] = entry.table[i + 1];
    }
    Row::from_bits(&bits)
}

/// Upper bound on rows expressible by set tables: `2^(m+1) · width^m`.
pub fn set_capacity(budget: usize, width: usize) -> Option<u128> {
    let base = 1u128.checked_shl(u32::try_from(budget + 1).ok()?)?;
    (0..budget).try_fold(base, |acc, _| acc.checked_mul(width as u128))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertifiedRow {
    pub row: Row,
    pub positions: Vec<usize>,
    pub table: SchemeEntry,
}

/// Every row of a matrix encoded with the same parameters, sorted by row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundCertificate {
    pub params: SchemeParams,
    pub width: usize,
    pub rows: Vec<CertifiedRow>,
}

impl BoundCertificate {
    pub fn distinct_count(&self) -> usize {
        self.rows.len()
    }

    pub fn bound(&self) -> u128 {
        self.params.row_bound(self.width)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }
}

impl Serialize for BoundCertificate {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("BoundCertificate", 5)?;
        s.serialize_field("n", &self.params.n)?;
        s.serialize_field("l", &self.params.window)?;
        s.serialize_field("R", &self.params.capacity)?;
        s.serialize_field("width", &self.width)?;
        s.serialize_field("rows", &self.rows)?;
        s.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertifyFailure {
    pub row: Row,
    pub rank: usize,
    pub n: usize,
    pub l: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certification {
    Certified(BoundCertificate),
    Failed(CertifyFailure),
}

impl Certification {
    pub fn is_certified(&self) -> bool {
        matches!(self, Certification::Certified(_))
    }
}

/// Encodes every row of `m` under `p`. Fails on the lexicographically first
/// row whose switch rank exceeds `p.n()`.
pub fn certify(m: &TraceMatrix, p: &SchemeParams) -> Certification {
    let mut rows: Vec<&Row> = m.rows().collect();
    rows.sort();
    let encoded: Vec<Result<Encoding, (Row, usize)>> = rows
        .par_iter()
        .map(|r| encode(r, p).map_err(|_| ((*r).clone(), min_switch_rank(r, p.window))))
        .collect();
    let mut out = Vec::with_capacity(encoded.len());
    for (row, enc) in rows.into_iter().zip(encoded) {
        match enc {
            Ok(enc) => {
                debug_assert_eq!(enc.decode(m.width(), p).as_ref(), Ok(row));
                out.push(CertifiedRow { row: row.clone(), positions: enc.positions, table: enc.table });
            }
            Err((row, rank)) => {
                return Certification::Failed(CertifyFailure { row, rank, n: p.n, l: p.window });
            }
        }
    }
    let cert = BoundCertificate { params: *p, width: m.width(), rows: out };
    assert!(cert.distinct_count() as u128 <= cert.bound(), "encodings exceed the counting bound");
    Certification::Certified(cert)
}

fn bits01<S: Serializer>(bits: &[bool], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(bits.iter().map(|&b| b as u8))
}

fn bit_rows01<S: Serializer>(rows: &[Vec<bool>], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(rows.iter().map(|r| r.iter().map(|&b| b as u8).collect::<Vec<u8>>()))
}
