//! Brute-force oracles shared by the integration suites. Each one decides a
//! relation by enumeration over a finite fragment, independently of the
//! closed forms used by the library.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use cutilde_core::fragment::Fragment;
use cutilde_core::ideals::IdealObject;
use cutilde_core::morphism::Morphism;
use cutilde_core::{CuVector, Element, FiberedSemigroup, Label};

/// Order, sum and stability tables of a fragment, reused by every closure.
pub struct ClosureTables<'a> {
    pub frag: &'a Fragment,
    below: Vec<Vec<usize>>,
    sums: Vec<Vec<Option<usize>>>,
    /// `stabilizes[y]`: every `x` having some `p` with `x + p ≥ 0` and `x + p = y`.
    stabilizes: Vec<Vec<usize>>,
    /// Base, step `(d, 0)` and supremum of every fragment chain.
    chains: Vec<(usize, usize, usize)>,
}

impl<'a> ClosureTables<'a> {
    pub fn new(s: &FiberedSemigroup, frag: &'a Fragment) -> Self {
        let els = frag.elements();
        let n = els.len();
        let below = (0..n).map(|i| (0..n).filter(|&j| s.leq(&els[j], &els[i])).collect()).collect();
        let sums: Vec<Vec<Option<usize>>> =
            (0..n).map(|i| (0..n).map(|j| frag.index_of(&s.add(&els[i], &els[j]))).collect()).collect();
        let mut stabilizes = vec![HashSet::new(); n];
        for (x, row) in sums.iter().enumerate() {
            for y in row.iter().flatten() {
                if s.is_positive(&els[*y]) {
                    stabilizes[*y].insert(x);
                }
            }
        }
        let chains = frag
            .chains(s.rank())
            .into_iter()
            .filter(|c| c.direction.is_finite())
            .filter_map(|c| {
                let base = frag.index_of(&c.base)?;
                let step = Element { k: s.group(c.direction.support()).zero(), x: c.direction.clone() };
                let step = frag.index_of(&step)?;
                let sup = frag.index_of(&s.sup_chain(&c))?;
                Some((base, step, sup))
            })
            .collect();
        ClosureTables {
            frag,
            below,
            sums,
            stabilizes: stabilizes.into_iter().map(|h| h.into_iter().collect()).collect(),
            chains,
        }
    }

    /// The smallest fragment subset containing `g` that is a lower set,
    /// closed under sums and chain suprema, and positively stable. A chain
    /// counts as lying in the subset when its base and its step `(d, 0)` do,
    /// since every term is then a sum of members; this stays decidable when
    /// the terms leave the fragment.
    pub fn smallest_ideal(&self, g: &Element) -> Vec<bool> {
        let n = self.frag.len();
        let mut member = vec![false; n];
        let mut queue = vec![self.frag.index_of(g).expect("generator in fragment")];
        let mut members = vec![];
        loop {
            while let Some(y) = queue.pop() {
                if member[y] {
                    continue;
                }
                member[y] = true;
                members.push(y);
                queue.extend(self.below[y].iter().filter(|j| !member[**j]));
                queue.extend(self.stabilizes[y].iter().filter(|j| !member[**j]));
                for z in &members {
                    for s in [self.sums[y][*z], self.sums[*z][y]].into_iter().flatten() {
                        if !member[s] {
                            queue.push(s);
                        }
                    }
                }
            }
            queue.extend(
                self.chains
                    .iter()
                    .filter(|(base, step, sup)| !member[*sup] && member[*base] && member[*step])
                    .map(|(_, _, sup)| *sup),
            );
            if queue.is_empty() {
                return member;
            }
        }
    }
}

/// `a ≤_I b` by searching all `z ∈ I` of a fragment, indexed per `b` by
/// the support and fiber value of `z + b`.
pub struct LeqModSearch<'a> {
    s: &'a FiberedSemigroup,
    zs: Vec<Element>,
}

impl<'a> LeqModSearch<'a> {
    pub fn new(s: &'a FiberedSemigroup, ideal: &IdealObject, z_frag: &Fragment) -> Self {
        let zs = z_frag.elements().iter().filter(|z| ideal.contains(z)).cloned().collect();
        LeqModSearch { s, zs }
    }

    /// Every reachable `z + b`, as the maximal vectors per (support, fiber).
    pub fn targets(&self, b: &Element) -> HashMap<(Label, Vec<i64>), Vec<CuVector>> {
        let mut out: HashMap<(Label, Vec<i64>), Vec<CuVector>> = HashMap::new();
        for z in &self.zs {
            let w = self.s.add(z, b);
            let slot = out.entry((w.label(), w.k.to_vec())).or_default();
            if slot.iter().any(|x| w.x.leq(x)) {
                continue;
            }
            slot.retain(|x| !x.leq(&w.x));
            slot.push(w.x);
        }
        out
    }

    pub fn decide(&self, targets: &HashMap<(Label, Vec<i64>), Vec<CuVector>>, a: &Element) -> bool {
        Label::all(self.s.rank()).any(|l| {
            a.label().is_subset(l)
                && targets
                    .get(&(l, self.s.push(&a.k, a.label(), l).to_vec()))
                    .is_some_and(|xs| xs.iter().any(|x| a.x.leq(x)))
        })
    }
}

/// `a ≪ b` from the definition, over the given chains: every chain whose
/// supremum dominates `b` has a term above `a`, scanning `horizon` terms.
pub fn way_below_by_chains(s: &FiberedSemigroup, chains: &[cutilde_core::MonotoneChain], a: &Element, b: &Element, horizon: u64) -> bool {
    chains
        .iter()
        .filter(|c| s.leq(b, &s.sup_chain(c)))
        .all(|c| (0..=horizon).any(|j| s.leq(a, &s.chain_term(c, j))))
}

/// `(t1, t2) ∈ im f` by searching the distinct images of a domain fragment.
pub struct ImageSearch<'a> {
    f: &'a Morphism,
    images: Vec<(Element, Element)>,
}

impl<'a> ImageSearch<'a> {
    pub fn new(f: &'a Morphism, domain: &Fragment) -> Self {
        let mut seen = HashSet::new();
        let images = domain
            .elements()
            .iter()
            .filter_map(|s| {
                let fs = f.apply(s);
                seen.insert(fs.clone()).then(|| (fs, s.clone()))
            })
            .collect();
        ImageSearch { f, images }
    }

    pub fn witness(&self, t1: &Element, t2: &Element) -> Option<&Element> {
        let t = &self.f.codomain;
        self.images.iter().find(|(fs, _)| t.leq(t1, &t.add(fs, t2))).map(|(_, s)| s)
    }
}
