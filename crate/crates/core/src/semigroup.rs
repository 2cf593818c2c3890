//! Fibered semigroups: pairs `(x, k)` with `x ∈ N̄ⁿ` and `k` in the fiber
//! monoid over `supp(x)`, ordered and added through the δ-system.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::abelian::{FGAbelianGroup, GroupElem, HomSolver};
use crate::error::{CuError, Result};
use crate::extnat::{CuVector, ExtNat, Fin, Inf};
use crate::fiber::{FiberMonoid, FiberSystem};
use crate::label::Label;

/// An element `(x, k)`. The derived ordering is lexicographic and only used
/// for deterministic enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Element {
    pub x: CuVector,
    pub k: GroupElem,
}

impl Element {
    pub fn new(x: CuVector, k: &[i64]) -> Self {
        Element { x, k: GroupElem::from_slice(k) }
    }

    pub fn label(&self) -> Label {
        self.x.support()
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k: Vec<String> = self.k.iter().map(|c| c.to_string()).collect();
        write!(f, "({}, [{}])", self.x, k.join(","))
    }
}

/// The increasing sequence `s_j = (base.x + j·direction, δ-push of base.k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonotoneChain {
    pub base: Element,
    pub direction: CuVector,
}

impl MonotoneChain {
    pub fn constant(base: Element) -> Self {
        let rank = base.x.rank();
        MonotoneChain { base, direction: CuVector::zero(rank) }
    }
}

/// `S_max = {(∞ⁿ, k) : k ∈ M_full}`.
#[derive(Clone, Debug)]
pub struct MaximalElements {
    pub top: CuVector,
    pub fiber: FiberMonoid,
    pub is_group: bool,
}

/// Outcome of the exact positive-directedness test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PdStatus {
    Holds,
    /// Fails at `label`; `witness` is an element of that label admitting no
    /// positivizing partner, when a small one was found.
    Fails { label: Label, witness: Option<Element> },
}

impl PdStatus {
    pub fn holds(&self) -> bool {
        matches!(self, PdStatus::Holds)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberedSemigroup {
    system: FiberSystem,
}

impl FiberedSemigroup {
    pub fn new(system: FiberSystem) -> Self {
        FiberedSemigroup { system }
    }

    /// The trivial semigroup `0`.
    pub fn trivial() -> Self {
        FiberedSemigroup::positive_cone(0)
    }

    /// `N̄ⁿ` with trivial fibers.
    pub fn positive_cone(rank: usize) -> Self {
        FiberedSemigroup::new(FiberSystem::trivial(rank))
    }

    /// An abelian group with the discrete order, as a rank-0 object.
    pub fn group_object(group: FGAbelianGroup) -> Self {
        let sys = FiberSystem::from_fn(0, vec![FiberMonoid::full(group.clone())], |_, _| {
            crate::intmat::IntMatrix::identity(group.dim())
        })
        .expect("single fiber system is valid");
        FiberedSemigroup::new(sys)
    }

    pub fn rank(&self) -> usize {
        self.system.rank()
    }

    pub fn full_label(&self) -> Label {
        Label::full(self.rank())
    }

    pub fn system(&self) -> &FiberSystem {
        &self.system
    }

    pub fn fiber(&self, t: Label) -> &FiberMonoid {
        self.system.fiber(t)
    }

    pub fn group(&self, t: Label) -> &FGAbelianGroup {
        &self.system.fiber(t).group
    }

    pub fn push(&self, k: &[i64], t: Label, u: Label) -> GroupElem {
        self.system.push(k, t, u)
    }

    /// Whether every fiber is trivial.
    pub fn has_trivial_fibers(&self) -> bool {
        self.system.fibers().iter().all(FiberMonoid::is_trivial)
    }

    /// Whether the fiber over the empty label is `{0}`.
    pub fn base_fiber_is_zero(&self) -> bool {
        let f = self.fiber(Label::EMPTY);
        f.box_members(1).len() == 1 && f.span_generators().iter().all(|g| f.group.is_zero(g))
    }

    pub fn zero(&self) -> Element {
        Element { x: CuVector::zero(self.rank()), k: self.group(Label::EMPTY).zero() }
    }

    /// `(∞ on label, 0)`.
    pub fn top_positive(&self, label: Label) -> Element {
        Element { x: CuVector::top_of(self.rank(), label), k: self.group(label).zero() }
    }

    /// `e_max = (∞ⁿ, 0)`.
    pub fn e_max(&self) -> Element {
        self.top_positive(self.full_label())
    }

    /// Validates and canonicalizes an element.
    pub fn element(&self, x: CuVector, k: &[i64]) -> Result<Element> {
        if x.rank() != self.rank() {
            return Err(CuError::RankMismatch { expected: self.rank(), found: x.rank() });
        }
        let t = x.support();
        let fiber = self.fiber(t);
        if k.len() != fiber.group.dim() {
            return Err(CuError::Invalid(format!(
                "fiber value has {} coordinates but the group at {t} is {}",
                k.len(),
                fiber.group
            )));
        }
        let k = fiber.group.reduced(k);
        if !fiber.contains(&k) {
            return Err(CuError::Invalid(format!("{k:?} is not in the fiber monoid at {t} ({fiber})")));
        }
        Ok(Element { x, k })
    }

    pub fn is_element(&self, a: &Element) -> bool {
        a.x.rank() == self.rank() && self.fiber(a.label()).contains(&a.k)
    }

    pub fn leq(&self, a: &Element, b: &Element) -> bool {
        a.x.leq(&b.x) && self.push(&a.k, a.label(), b.label()) == b.k
    }

    pub fn add(&self, a: &Element, b: &Element) -> Element {
        let x = &a.x + &b.x;
        let u = x.support();
        let k = self.group(u).add(&self.push(&a.k, a.label(), u), &self.push(&b.k, b.label(), u));
        Element { x, k }
    }

    /// `a ≪ b` in closed form: `a.x` finite and `a ≤ b`.
    pub fn way_below(&self, a: &Element, b: &Element) -> bool {
        a.x.is_finite() && self.leq(a, b)
    }

    pub fn is_positive(&self, a: &Element) -> bool {
        a.k.iter().all(|c| *c == 0)
    }

    /// Whether `a` is maximal, i.e. `a.x = ∞ⁿ`.
    pub fn is_maximal(&self, a: &Element) -> bool {
        a.x.coords().iter().all(|c| *c == Inf)
    }

    pub fn chain_term(&self, c: &MonotoneChain, j: u64) -> Element {
        let x = &c.base.x + &c.direction.scale(Fin(j));
        let k = self.push(&c.base.k, c.base.label(), x.support());
        Element { x, k }
    }

    pub fn sup_chain(&self, c: &MonotoneChain) -> Element {
        let x = CuVector(
            c.base
                .x
                .coords()
                .iter()
                .zip(c.direction.coords())
                .map(|(b, d)| if d.is_zero() { *b } else { Inf })
                .collect(),
        );
        let k = self.push(&c.base.k, c.base.label(), x.support());
        Element { x, k }
    }

    /// Chain validity: base in `S`, direction entries any `ExtNat`.
    pub fn is_chain(&self, c: &MonotoneChain) -> bool {
        self.is_element(&c.base) && c.direction.rank() == self.rank()
    }

    /// Index of the first term of `c` above `a`, scanning up to the step
    /// where every diverging coordinate exceeds `a`, or `None`.
    pub fn first_term_above(&self, c: &MonotoneChain, a: &Element) -> Option<u64> {
        let horizon = a.x.max_finite() + 1;
        (0..=horizon).find(|j| self.leq(a, &self.chain_term(c, *j)))
    }

    pub fn maximal_elements(&self) -> MaximalElements {
        let fiber = self.fiber(self.full_label()).clone();
        let is_group = fiber.is_group();
        MaximalElements { top: CuVector::top_of(self.rank(), self.full_label()), fiber, is_group }
    }

    /// Exact test of positive directedness: every `δ_{T,full}(M_T)` lies in
    /// the units of the top fiber.
    pub fn pd_status(&self) -> PdStatus {
        let full = self.full_label();
        let top = self.fiber(full);
        let units = HomSolver::for_subgroup(&top.group, &top.unit_generators());
        for t in Label::all(self.rank()) {
            let delta = self.system.delta(t, full);
            let ok = self
                .fiber(t)
                .span_generators()
                .iter()
                .all(|g| units.solve(&delta.apply(g)).is_some());
            if !ok {
                let witness = (1..=8).find_map(|b| {
                    self.fiber(t)
                        .box_members(b)
                        .into_iter()
                        .find(|k| !top.contains(&top.group.neg(&delta.apply(k))))
                        .map(|k| Element { x: CuVector::constant_on(self.rank(), t, ExtNat::ONE), k })
                });
                return PdStatus::Fails { label: t, witness };
            }
        }
        PdStatus::Holds
    }

    /// Some `p` with `a + p ≥ 0`, or `None` if there is none.
    pub fn pd_witness(&self, a: &Element) -> Option<Element> {
        if self.is_positive(a) {
            return Some(self.zero());
        }
        let ta = a.label();
        for t2 in ta.supersets_within(self.full_label()) {
            let target = self.group(t2).neg(&self.push(&a.k, ta, t2));
            let new = t2.difference(ta);
            if !new.is_empty() {
                // partner supported only on the new coordinates
                if let Some(k) = self.system.delta_solver(new, t2).solve(&target) {
                    if self.fiber(new).contains(&k) {
                        return Some(Element { x: CuVector::constant_on(self.rank(), new, ExtNat::ONE), k });
                    }
                }
            }
            if self.fiber(t2).contains(&target) {
                return Some(Element { x: CuVector::constant_on(self.rank(), t2, ExtNat::ONE), k: target });
            }
        }
        None
    }

    /// The largest `p` with `a + p ≥ 0`: `(∞ⁿ, −δ_{supp a, full}(a.k))`,
    /// when it exists.
    pub fn maximal_pd_witness(&self, a: &Element) -> Option<Element> {
        let full = self.full_label();
        let k = self.group(full).neg(&self.push(&a.k, a.label(), full));
        self.fiber(full)
            .contains(&k)
            .then(|| Element { x: CuVector::top_of(self.rank(), full), k })
    }
}

impl fmt::Display for FiberedSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "rank {}", self.rank())?;
        for t in Label::all(self.rank()) {
            writeln!(f, "  fiber {t} = {}", self.fiber(t))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    fn v(c: &[u64]) -> CuVector {
        CuVector(c.iter().map(|x| if *x == u64::MAX { Inf } else { Fin(*x) }).collect())
    }

    #[test]
    fn counterexample_order_and_addition() {
        let s = samples::counterexample();
        let a = s.element(v(&[0, 2, 0]), &[1]).unwrap();
        assert!(s.leq(&a, &a));
        assert!(!s.leq(&s.zero(), &a));
        let p = s.element(v(&[1, 0, 0]), &[-1]).unwrap();
        let q = s.element(v(&[0, 1, 0]), &[1]).unwrap();
        let sum = s.add(&p, &q);
        assert_eq!(sum, s.element(v(&[1, 1, 0]), &[0]).unwrap());
        assert!(s.leq(&s.zero(), &sum));
        assert!(s.element(v(&[0, 1, 0]), &[-1]).is_err());
        assert!(s.element(v(&[0, 0, 0]), &[1]).is_err());
    }

    #[test]
    fn fibers_add_along_a_common_label() {
        let s = samples::counterexample();
        let a = s.element(v(&[0, 2, 0]), &[3]).unwrap();
        let b = s.element(v(&[0, 5, 0]), &[4]).unwrap();
        assert_eq!(s.add(&a, &b), s.element(v(&[0, 7, 0]), &[7]).unwrap());
        assert_eq!(s.add(&a, &s.zero()), a);
    }

    #[test]
    fn way_below_needs_finite_coordinates() {
        let s = FiberedSemigroup::positive_cone(2);
        let top = s.element(v(&[u64::MAX, 0]), &[]).unwrap();
        assert!(!s.way_below(&top, &top));
        assert!(s.way_below(&s.zero(), &s.zero()));
    }

    #[test]
    fn sup_of_diverging_chain() {
        let s = FiberedSemigroup::positive_cone(2);
        let c = MonotoneChain { base: s.element(v(&[1, 0]), &[]).unwrap(), direction: v(&[1, 0]) };
        assert_eq!(s.sup_chain(&c).x, v(&[u64::MAX, 0]));
        let k = MonotoneChain::constant(c.base.clone());
        assert_eq!(s.sup_chain(&k), c.base);
    }

    #[test]
    fn pd_witness_in_counterexample() {
        let s = samples::counterexample();
        let a = s.element(v(&[0, 3, 0]), &[1]).unwrap();
        let p = s.pd_witness(&a).unwrap();
        assert_eq!(p, s.element(v(&[1, 0, 0]), &[-1]).unwrap());
        assert!(s.is_positive(&s.add(&a, &p)));
        assert!(s.pd_status().holds());
        let m = s.maximal_elements();
        assert!(m.is_group);
        assert!(s.is_positive(&s.e_max()));
    }

    #[test]
    fn positive_line_is_not_positively_directed() {
        let s = samples::positive_line();
        let a = s.element(v(&[1]), &[1]).unwrap();
        assert!(s.pd_witness(&a).is_none());
        match s.pd_status() {
            PdStatus::Fails { label, witness } => {
                assert_eq!(label, Label::full(1));
                assert_eq!(witness, Some(a));
            }
            PdStatus::Holds => panic!("expected failure"),
        }
    }
}
