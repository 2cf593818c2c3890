//! Extended natural numbers `N ∪ {∞}` and vectors over them.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Index, Mul};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::label::Label;

/// A nonnegative integer or `∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExtNat {
    Fin(u64),
    Inf,
}

pub use ExtNat::{Fin, Inf};

impl ExtNat {
    pub const ZERO: ExtNat = Fin(0);
    pub const ONE: ExtNat = Fin(1);

    pub fn is_finite(self) -> bool {
        matches!(self, Fin(_))
    }

    pub fn is_zero(self) -> bool {
        self == Fin(0)
    }

    /// `a ≪ b` in `N̄`: `a` is finite and `a ≤ b`.
    pub fn way_below(self, other: ExtNat) -> bool {
        self.is_finite() && self <= other
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Fin(v) => Some(v),
            Inf => None,
        }
    }
}

impl Default for ExtNat {
    fn default() -> Self {
        Fin(0)
    }
}

impl From<u64> for ExtNat {
    fn from(v: u64) -> Self {
        Fin(v)
    }
}

impl PartialOrd for ExtNat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtNat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Fin(a), Fin(b)) => a.cmp(b),
            (Fin(_), Inf) => Ordering::Less,
            (Inf, Fin(_)) => Ordering::Greater,
            (Inf, Inf) => Ordering::Equal,
        }
    }
}

impl Add for ExtNat {
    type Output = ExtNat;

    fn add(self, rhs: ExtNat) -> ExtNat {
        match (self, rhs) {
            (Fin(a), Fin(b)) => Fin(a.checked_add(b).expect("extended natural overflow")),
            _ => Inf,
        }
    }
}

/// Product with the convention `0 · ∞ = 0`.
impl Mul for ExtNat {
    type Output = ExtNat;

    fn mul(self, rhs: ExtNat) -> ExtNat {
        match (self, rhs) {
            (Fin(0), _) | (_, Fin(0)) => Fin(0),
            (Fin(a), Fin(b)) => Fin(a.checked_mul(b).expect("extended natural overflow")),
            _ => Inf,
        }
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fin(v) => write!(f, "{v}"),
            Inf => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtNat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "inf" || s == "∞" {
            return Ok(Inf);
        }
        s.parse::<u64>()
            .map(Fin)
            .map_err(|_| format!("expected a natural number or `inf`, found `{s}`"))
    }
}

/// A vector in `N̄ⁿ` with componentwise order and addition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct CuVector(pub SmallVec<[ExtNat; 4]>);

impl CuVector {
    pub fn zero(rank: usize) -> Self {
        CuVector(SmallVec::from_elem(Fin(0), rank))
    }

    /// `∞` on the coordinates of `label`, `0` elsewhere.
    pub fn top_of(rank: usize, label: Label) -> Self {
        Self::constant_on(rank, label, Inf)
    }

    pub fn constant_on(rank: usize, label: Label, value: ExtNat) -> Self {
        CuVector(
            (0..rank)
                .map(|i| if label.contains(i) { value } else { Fin(0) })
                .collect(),
        )
    }

    pub fn from_slice(coords: &[ExtNat]) -> Self {
        CuVector(SmallVec::from_slice(coords))
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[ExtNat] {
        &self.0
    }

    /// `supp(x) = { i : x_i ≠ 0 }`.
    pub fn support(&self) -> Label {
        Label::from_indices(
            self.0
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, _)| i),
        )
    }

    pub fn leq(&self, other: &CuVector) -> bool {
        debug_assert_eq!(self.rank(), other.rank());
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn scale(&self, j: ExtNat) -> CuVector {
        CuVector(self.0.iter().map(|c| j * *c).collect())
    }

    /// Coordinates indexed by `label`, in increasing order.
    pub fn restrict(&self, label: Label) -> CuVector {
        CuVector(label.iter().map(|i| self.0[i]).collect())
    }

    pub fn max_finite(&self) -> u64 {
        self.0.iter().filter_map(|c| c.finite()).max().unwrap_or(0)
    }
}

impl Add for &CuVector {
    type Output = CuVector;

    fn add(self, rhs: &CuVector) -> CuVector {
        debug_assert_eq!(self.rank(), rhs.rank());
        CuVector(self.0.iter().zip(rhs.0.iter()).map(|(a, b)| *a + *b).collect())
    }
}

impl Index<usize> for CuVector {
    type Output = ExtNat;

    fn index(&self, i: usize) -> &ExtNat {
        &self.0[i]
    }
}

impl fmt::Display for CuVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}
