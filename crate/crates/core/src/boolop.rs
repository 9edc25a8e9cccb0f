//! Pointwise binary boolean operations, stored as 4-entry truth tables.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// A binary boolean operation `f(a, b)`.
///
/// Bit `(a << 1) | b` of the table holds `f(a, b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoolOp(u8);

impl BoolOp {
    pub const FALSE: BoolOp = BoolOp(0b0000);
    pub const AND: BoolOp = BoolOp(0b1000);
    pub const AND_NOT: BoolOp = BoolOp(0b0100);
    pub const LEFT: BoolOp = BoolOp(0b1100);
    pub const NOT_AND: BoolOp = BoolOp(0b0010);
    pub const RIGHT: BoolOp = BoolOp(0b1010);
    pub const XOR: BoolOp = BoolOp(0b0110);
    pub const OR: BoolOp = BoolOp(0b1110);
    pub const NOR: BoolOp = BoolOp(0b0001);
    pub const XNOR: BoolOp = BoolOp(0b1001);
    pub const NOT_RIGHT: BoolOp = BoolOp(0b0101);
    pub const IMPLIED_BY: BoolOp = BoolOp(0b1101);
    pub const NOT_LEFT: BoolOp = BoolOp(0b0011);
    pub const IMPLIES: BoolOp = BoolOp(0b1011);
    pub const NAND: BoolOp = BoolOp(0b0111);
    pub const TRUE: BoolOp = BoolOp(0b1111);

    const NAMES: [(&'static str, BoolOp); 16] = [
        ("false", BoolOp::FALSE),
        ("and", BoolOp::AND),
        ("and_not", BoolOp::AND_NOT),
        ("left", BoolOp::LEFT),
        ("not_and", BoolOp::NOT_AND),
        ("right", BoolOp::RIGHT),
        ("xor", BoolOp::XOR),
        ("or", BoolOp::OR),
        ("nor", BoolOp::NOR),
        ("xnor", BoolOp::XNOR),
        ("not_right", BoolOp::NOT_RIGHT),
        ("implied_by", BoolOp::IMPLIED_BY),
        ("not_left", BoolOp::NOT_LEFT),
        ("implies", BoolOp::IMPLIES),
        ("nand", BoolOp::NAND),
        ("true", BoolOp::TRUE),
    ];

    pub fn from_table(table: u8) -> Option<BoolOp> {
        (table < 16).then_some(BoolOp(table))
    }

    pub fn table(self) -> u8 {
        self.0
    }

    pub fn eval(self, a: bool, b: bool) -> bool {
        (self.0 >> ((a as u8) << 1 | b as u8)) & 1 == 1
    }

    /// Applies the operation to 64 bit pairs at once.
    pub fn eval_word(self, a: u64, b: u64) -> u64 {
        let sel = |bit: u8| if (self.0 >> bit) & 1 == 1 { u64::MAX } else { 0 };
        (sel(0) & !a & !b) | (sel(1) & !a & b) | (sel(2) & a & !b) | (sel(3) & a & b)
    }

    /// True when the result depends on both operands.
    pub fn is_binary(self) -> bool {
        let depends_on_a = (0..2).any(|b| self.eval(false, b == 1) != self.eval(true, b == 1));
        let depends_on_b = (0..2).any(|a| self.eval(a == 1, false) != self.eval(a == 1, true));
        depends_on_a && depends_on_b
    }

    pub fn all() -> impl Iterator<Item = BoolOp> {
        (0..16).map(BoolOp)
    }

    /// The ten operations that depend on both operands.
    pub fn binary() -> impl Iterator<Item = BoolOp> {
        BoolOp::all().filter(|op| op.is_binary())
    }

    pub fn name(self) -> &'static str {
        BoolOp::NAMES.iter().find(|(_, op)| *op == self).map(|(n, _)| *n).unwrap()
    }
}

impl fmt::Display for BoolOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoolOp {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase();
        BoolOp::NAMES
            .iter()
            .find(|(n, _)| *n == key)
            .map(|(_, op)| *op)
            .ok_or_else(|| format!("unknown boolean op {s:?}"))
    }
}

impl Serialize for BoolOp {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for BoolOp {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
