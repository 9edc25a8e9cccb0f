//! Instance families with known counts and ranks.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::boolop::BoolOp;
use crate::combinatorics::{binomial, binomial_prefix_sum, subsets_colex};
use crate::error::{Error, Result};
use crate::trace::{Row, TraceMatrix};
use crate::witness::{build_witness_family, WitnessPattern};

/// Widest `full` family that will be enumerated.
pub const FULL_WIDTH_CAP: usize = 16;
/// Most rows any single enumeration may produce.
pub const ENUMERATION_CAP: u128 = 4_000_000;
/// Most row pairs a product may combine.
pub const PRODUCT_PAIR_CAP: u128 = 40_000_000;
pub const MAX_PRODUCT_DEPTH: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FamilySpec {
    /// `0^k 1^(N−k)` for `k = 0..=N`.
    Threshold,
    /// Every row with at most `n` alternations.
    AltFamily(usize),
    /// Indicators of subsets of size at most `n`.
    Spikes(usize),
    /// The canonical witness family for `n`: `(n + 1)`-subset indicators.
    SubsetWitness(usize),
    /// All `2^N` rows.
    Full,
    /// Rows within Hamming distance `m` of a constant row.
    SetExceptional(usize),
    Product(Box<FamilySpec>, Box<FamilySpec>, BoolOp),
}

/// Ground-truth local rank of a family for large widths.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum RankTruth {
    Exact(usize),
    AtMost(usize),
    Superpolynomial,
    Unknown,
}

impl RankTruth {
    /// The exact rank or the upper bound, when finite.
    pub fn bound(self) -> Option<usize> {
        match self {
            RankTruth::Exact(n) | RankTruth::AtMost(n) => Some(n),
            _ => None,
        }
    }
}

impl FamilySpec {
    pub fn product(left: FamilySpec, right: FamilySpec, op: BoolOp) -> Result<FamilySpec> {
        let spec = FamilySpec::Product(Box::new(left), Box::new(right), op);
        spec.validate()?;
        Ok(spec)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            FamilySpec::Threshold => "threshold",
            FamilySpec::AltFamily(_) => "alt_family",
            FamilySpec::Spikes(_) => "spikes",
            FamilySpec::SubsetWitness(_) => "subset_witness",
            FamilySpec::Full => "full",
            FamilySpec::SetExceptional(_) => "set_exceptional",
            FamilySpec::Product(..) => "product",
        }
    }

    /// Builds a non-product family from a kind name and its parameter.
    pub fn from_kind(kind: &str, n: Option<usize>) -> Result<FamilySpec> {
        let need = |n: Option<usize>| {
            n.ok_or_else(|| Error::InvalidFamily { family: kind.into(), reason: "requires a rank parameter".into() })
        };
        let spec = match kind {
            "threshold" => FamilySpec::Threshold,
            "alt_family" => FamilySpec::AltFamily(need(n)?),
            "spikes" => FamilySpec::Spikes(need(n)?),
            "subset_witness" => FamilySpec::SubsetWitness(need(n)?),
            "full" => FamilySpec::Full,
            "set_exceptional" => FamilySpec::SetExceptional(need(n)?),
            other => {
                return Err(Error::InvalidFamily { family: other.into(), reason: "unknown family kind".into() })
            }
        };
        Ok(spec)
    }

    pub fn depth(&self) -> usize {
        match self {
            FamilySpec::Product(a, b, _) => 1 + a.depth().max(b.depth()),
            _ => 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.depth() > MAX_PRODUCT_DEPTH {
            return Err(Error::InvalidFamily {
                family: self.to_string(),
                reason: format!("product nesting deeper than {MAX_PRODUCT_DEPTH}"),
            });
        }
        Ok(())
    }

    /// Closed-form row count at `width`; `Ok(None)` for products.
    pub fn expected_count(&self, width: usize) -> Result<Option<u128>> {
        let n64 = width as u64;
        let overflow = || Error::CountOverflow { family: self.to_string(), width };
        let count = match self {
            FamilySpec::Threshold => Some(width as u128 + 1),
            FamilySpec::AltFamily(n) => {
                let s = binomial_prefix_sum(n64.saturating_sub(1), *n as u64).ok_or_else(overflow)?;
                Some(s.checked_mul(2).ok_or_else(overflow)?)
            }
            FamilySpec::Spikes(n) => Some(binomial_prefix_sum(n64, *n as u64).ok_or_else(overflow)?),
            FamilySpec::SubsetWitness(n) => Some(binomial(n64, *n as u64 + 1).ok_or_else(overflow)?),
            FamilySpec::Full if width < 128 => Some(1u128 << width),
            FamilySpec::Full => return Err(overflow()),
            FamilySpec::SetExceptional(m) => {
                // weights w with w ≤ m or w ≥ N − m, each counted once
                let mut total = 0u128;
                for w in 0..=n64 {
                    if w <= *m as u64 || w + *m as u64 >= n64 {
                        total = total.checked_add(binomial(n64, w).ok_or_else(overflow)?).ok_or_else(overflow)?;
                    }
                }
                Some(total)
            }
            FamilySpec::Product(..) => None,
        };
        Ok(count)
    }

    /// Independent of the window once widths are large; the argument is kept
    /// for callers that pair it with [`crate::family_rank`].
    pub fn expected_rank(&self, _window: usize) -> RankTruth {
        match self {
            FamilySpec::Threshold => RankTruth::Exact(1),
            FamilySpec::AltFamily(n) | FamilySpec::Spikes(n) | FamilySpec::SetExceptional(n) => RankTruth::Exact(*n),
            FamilySpec::SubsetWitness(n) => RankTruth::Exact(n + 1),
            FamilySpec::Full => RankTruth::Superpolynomial,
            FamilySpec::Product(a, b, _) => match (a.expected_rank(_window).bound(), b.expected_rank(_window).bound()) {
                (Some(x), Some(y)) => RankTruth::AtMost(x + y),
                _ => RankTruth::Unknown,
            },
        }
    }

    pub fn generate(&self, width: usize) -> Result<TraceMatrix> {
        self.validate()?;
        if width == 0 {
            return Err(Error::EmptyRow);
        }
        if let Some(count) = self.expected_count(width).ok().flatten() {
            if count > ENUMERATION_CAP {
                return Err(self.cap_error(width, count));
            }
        }
        match self {
            FamilySpec::Threshold => TraceMatrix::new(width, (0..=width).map(|k| Row::from_fn(width, |i| i >= k).unwrap())),
            FamilySpec::AltFamily(n) => {
                let mut b = TraceMatrix::builder(width)?;
                for start in [false, true] {
                    for t in 0..=(*n).min(width - 1) {
                        for cuts in subsets_colex(width - 1, t) {
                            b.insert(Row::from_fn(width, |i| start ^ (cuts.partition_point(|&g| g < i) % 2 == 1))?)?;
                        }
                    }
                }
                b.finish()
            }
            FamilySpec::Spikes(n) => {
                let mut b = TraceMatrix::builder(width)?;
                for t in 0..=(*n).min(width) {
                    for s in subsets_colex(width, t) {
                        b.insert(Row::indicator(width, &s)?)?;
                    }
                }
                b.finish()
            }
            FamilySpec::SubsetWitness(n) => build_witness_family(&WitnessPattern::canonical(*n), width),
            FamilySpec::Full => {
                if width > FULL_WIDTH_CAP {
                    return Err(Error::InvalidFamily {
                        family: self.to_string(),
                        reason: format!("width {width} exceeds cap {FULL_WIDTH_CAP}"),
                    });
                }
                TraceMatrix::new(width, (0..1u64 << width).map(|v| Row::from_u64(width, v).unwrap()))
            }
            FamilySpec::SetExceptional(m) => {
                let mut b = TraceMatrix::builder(width)?;
                for t in 0..=(*m).min(width) {
                    for s in subsets_colex(width, t) {
                        let r = Row::indicator(width, &s)?;
                        b.insert(r.complement())?;
                        b.insert(r)?;
                    }
                }
                b.finish()
            }
            FamilySpec::Product(left, right, op) => {
                let a = left.generate(width)?;
                let c = right.generate(width)?;
                let pairs = a.distinct_count() as u128 * c.distinct_count() as u128;
                if pairs > PRODUCT_PAIR_CAP {
                    return Err(self.cap_error(width, pairs));
                }
                let mut b = TraceMatrix::builder(width)?;
                for x in a.rows() {
                    for y in c.rows() {
                        b.insert(x.combine(y, *op)?)?;
                    }
                }
                b.finish()
            }
        }
    }

    fn cap_error(&self, width: usize, rows: u128) -> Error {
        Error::EnumerationCap { family: self.to_string(), width, rows, cap: ENUMERATION_CAP }
    }
}

/// A seeded subsample of `k` distinct rows (all rows when `k` is at least the
/// row count), in the matrix's own order.
pub fn sample_rows(m: &TraceMatrix, k: usize, seed: u64) -> TraceMatrix {
    if k >= m.distinct_count() {
        return m.clone();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = rand::seq::index::sample(&mut rng, m.distinct_count(), k.max(1)).into_vec();
    picked.sort_unstable();
    TraceMatrix::new(m.width(), picked.into_iter().map(|i| m.row(i).unwrap().clone())).expect("nonempty sample")
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Threshold | FamilySpec::Full => f.write_str(self.kind()),
            FamilySpec::AltFamily(n)
            | FamilySpec::Spikes(n)
            | FamilySpec::SubsetWitness(n)
            | FamilySpec::SetExceptional(n) => write!(f, "{}:{n}", self.kind()),
            FamilySpec::Product(a, b, op) => write!(f, "product({a},{b},{op})"),
        }
    }
}

impl Serialize for FamilySpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Parses `threshold`, `spikes:2`, `product(spikes:1,alt_family:2,and)`, …
impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<FamilySpec> {
        let s = s.trim();
        let bad = |reason: &str| Error::InvalidFamily { family: s.into(), reason: reason.into() };
        if let Some(inner) = s.strip_prefix("product(").and_then(|r| r.strip_suffix(')')) {
            let parts = split_top_level(inner);
            let [a, b, op] = parts.as_slice() else {
                return Err(bad("product takes (left,right,op)"));
            };
            let op: BoolOp = op.parse().map_err(|e: String| bad(&e))?;
            return FamilySpec::product(a.parse()?, b.parse()?, op);
        }
        let (kind, n) = match s.split_once(':') {
            Some((k, n)) => (k, Some(n.parse::<usize>().map_err(|_| bad("rank parameter must be a natural number"))?)),
            None => (s, None),
        };
        let spec = FamilySpec::from_kind(kind, n)?;
        if n.is_some() && matches!(spec, FamilySpec::Threshold | FamilySpec::Full) {
            return Err(bad("this kind takes no parameter"));
        }
        Ok(spec)
    }
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                parts.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(s[start..].trim());
    parts
}
