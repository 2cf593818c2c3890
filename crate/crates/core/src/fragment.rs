//! Finite fragments of a fibered semigroup used by the exhaustive checks.
//!
//! The fragment at bound `B` consists of the elements whose coordinates lie
//! in `{0..B, ∞}` and whose fiber values have free coordinates in `[-F, F]`
//! (torsion coordinates range over all residues). `F` defaults to `B`.

use std::collections::HashMap;

use crate::extnat::{CuVector, ExtNat, Fin, Inf};
use crate::semigroup::{Element, FiberedSemigroup, MonotoneChain};

#[derive(Clone, Debug)]
pub struct Fragment {
    pub bound: u64,
    pub fiber_bound: i64,
    elements: Vec<Element>,
    index: HashMap<Element, usize>,
}

/// Every vector with entries in `{0..bound, ∞}`, in lexicographic order.
pub fn vectors(rank: usize, bound: u64) -> Vec<CuVector> {
    let values: Vec<ExtNat> = (0..=bound).map(Fin).chain(std::iter::once(Inf)).collect();
    let mut out = vec![CuVector::zero(0)];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|p| {
                values.iter().map(move |v| {
                    let mut q = p.clone();
                    q.0.push(*v);
                    q
                })
            })
            .collect();
    }
    out
}

impl Fragment {
    pub fn new(s: &FiberedSemigroup, bound: u64) -> Self {
        Fragment::with_fiber_bound(s, bound, bound as i64)
    }

    pub fn with_fiber_bound(s: &FiberedSemigroup, bound: u64, fiber_bound: i64) -> Self {
        let members: Vec<_> = s.system().fibers().iter().map(|f| f.box_members(fiber_bound)).collect();
        let mut elements = vec![];
        for x in vectors(s.rank(), bound) {
            for k in &members[x.support().0 as usize] {
                elements.push(Element { x: x.clone(), k: k.clone() });
            }
        }
        elements.sort();
        let index = elements.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        Fragment { bound, fiber_bound, elements, index }
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, a: &Element) -> Option<usize> {
        self.index.get(a).copied()
    }

    pub fn contains(&self, a: &Element) -> bool {
        self.index.contains_key(a)
    }

    pub fn positives<'a>(&'a self, s: &'a FiberedSemigroup) -> impl Iterator<Item = &'a Element> + 'a {
        self.elements.iter().filter(move |a| s.is_positive(a))
    }

    /// Chains with base in the fragment and direction entries in `{0, 1, ∞}`.
    pub fn chains(&self, rank: usize) -> Vec<MonotoneChain> {
        let dirs = vectors(rank, 1);
        let mut out = vec![];
        for base in &self.elements {
            for d in &dirs {
                out.push(MonotoneChain { base: base.clone(), direction: d.clone() });
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    #[test]
    fn vector_count() {
        assert_eq!(vectors(3, 3).len(), 125);
        assert_eq!(vectors(0, 3).len(), 1);
    }

    #[test]
    fn counterexample_fragment_respects_fibers() {
        let s = samples::counterexample();
        let f = Fragment::new(&s, 1);
        assert!(f.elements().iter().all(|a| s.is_element(a)));
        // {2} has a half-line fiber, {1} the full fiber Z cut to [-1, 1]
        let count_by_support = |l: u32| f.elements().iter().filter(|a| a.label().0 == l).count();
        assert_eq!(count_by_support(0), 1);
        assert_eq!(count_by_support(2), 4);
        assert_eq!(count_by_support(1), 2 * 3);
        assert!(f.contains(&s.zero()));
    }
}
