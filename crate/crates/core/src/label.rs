//! Coordinate subsets of `{1..n}`, used both as supports of vectors and as
//! the index set of the ideal lattice of the positive cone `N̄ⁿ`.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Largest rank supported by the bitmask representation.
pub const MAX_RANK: usize = 12;

/// A subset of the coordinates `{0..n}` stored as a bitmask.
///
/// Coordinates are 0-based internally and printed 1-based, e.g. `{1,3}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Label(pub u32);

impl Label {
    pub const EMPTY: Label = Label(0);

    pub fn full(rank: usize) -> Label {
        assert!(rank <= MAX_RANK, "rank {rank} exceeds {MAX_RANK}");
        Label(((1u64 << rank) - 1) as u32)
    }

    pub fn singleton(i: usize) -> Label {
        Label(1 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Label {
        Label(indices.into_iter().fold(0, |acc, i| acc | (1 << i)))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: Label) -> Label {
        Label(self.0 | other.0)
    }

    pub fn intersection(self, other: Label) -> Label {
        Label(self.0 & other.0)
    }

    pub fn difference(self, other: Label) -> Label {
        Label(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Label) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |i| self.contains(*i))
    }

    /// All subsets of `self`, in increasing bitmask order.
    pub fn subsets(self) -> impl Iterator<Item = Label> {
        let mask = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == mask { None } else { Some((cur.wrapping_sub(mask)) & mask) };
            Some(Label(cur))
        })
    }

    /// All labels `U` with `self ⊆ U ⊆ within`, ordered by size then bitmask.
    pub fn supersets_within(self, within: Label) -> Vec<Label> {
        debug_assert!(self.is_subset(within));
        let mut out: Vec<Label> = within.difference(self).subsets().map(|s| s.union(self)).collect();
        out.sort_by_key(|l| (l.len(), l.0));
        out
    }

    /// Every label of a rank-`n` system.
    pub fn all(rank: usize) -> impl Iterator<Item = Label> {
        (0..(1u32 << rank)).map(Label)
    }

    /// Re-indexes `self` onto the positions of `within`: the k-th coordinate of
    /// `within` becomes coordinate k.
    pub fn compress(self, within: Label) -> Label {
        Label::from_indices(
            within
                .iter()
                .enumerate()
                .filter(|(_, i)| self.contains(*i))
                .map(|(k, _)| k),
        )
    }

    /// Inverse of [`Label::compress`].
    pub fn expand(self, within: Label) -> Label {
        Label::from_indices(within.iter().enumerate().filter(|(k, _)| self.contains(*k)).map(|(_, i)| i))
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (n, i) in self.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        f.write_str("}")
    }
}
