//! Quotients `S/I` by an ideal: the preorder `≤_I`, a fibered presentation
//! of the quotient on the coordinates outside the ideal, the quotient map,
//! and factorization of morphisms that kill the ideal.

use std::collections::HashMap;
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rayon::prelude::*;

use crate::abelian::{quotient_group, HomSolver, Quotient};
use crate::axioms::check_axioms_on;
use crate::error::{CuError, Result};
use crate::extnat::{CuVector, Fin};
use crate::fiber::{FiberMonoid, FiberSystem, Shape};
use crate::fragment::Fragment;
use crate::ideals::IdealObject;
use crate::intmat::IntMatrix;
use crate::label::Label;
use crate::morphism::{ExtMatrix, Morphism};
use crate::report::{Report, Verdict};
use crate::semigroup::{Element, FiberedSemigroup, MonotoneChain};

/// `S/I` presented as a fibered semigroup over the coordinates outside `I`.
#[derive(Clone, Debug)]
pub struct QuotientSemigroup {
    pub ambient: Arc<FiberedSemigroup>,
    pub ideal: IdealObject,
    pub presentation: Arc<FiberedSemigroup>,
    /// The quotient map `π : S → S/I`.
    pub map: Morphism,
    /// Cones whose functionals did not descend and were replaced by the full group.
    pub warnings: Vec<String>,
    /// Per ambient label `U ⊇ T`: `G_U / δ_{T,U}(units M_T)`.
    quotients: HashMap<Label, Quotient>,
    /// Per ambient label `U ⊇ T`: membership in `δ_{T,U}(units M_T)`.
    bridges: HashMap<Label, Arc<HomSolver>>,
}

fn bridge_generators(s: &FiberedSemigroup, t: Label, u: Label) -> Vec<Vec<i64>> {
    let delta = s.system().delta(t, u);
    s.fiber(t).unit_generators().iter().map(|g| delta.apply(g).to_vec()).collect()
}

impl QuotientSemigroup {
    pub fn new(ideal: &IdealObject) -> Self {
        let s = ideal.ambient().clone();
        let t = ideal.label();
        let outside = s.full_label().difference(t);
        let rank = outside.len();
        let mut quotients = HashMap::new();
        let mut bridges = HashMap::new();
        for u in t.supersets_within(s.full_label()) {
            let gens = bridge_generators(&s, t, u);
            bridges.insert(u, Arc::new(HomSolver::for_subgroup(s.group(u), &gens)));
            quotients.insert(u, quotient_group(s.group(u), &gens));
        }
        let full_of = |local: Label| local.expand(outside).union(t);

        let mut warnings = vec![];
        let fibers: Vec<FiberMonoid> = Label::all(rank)
            .map(|local| {
                let u = full_of(local);
                let q = &quotients[&u];
                let shape = match &s.fiber(u).shape {
                    Shape::Zero => Shape::Zero,
                    Shape::Full => Shape::Full,
                    Shape::Cone(f) => {
                        let r = f.cols();
                        let free_rows = |m: &IntMatrix, cols: usize| {
                            IntMatrix::from_rows(&(0..r).map(|i| m.row(i)[..cols].to_vec()).collect::<Vec<_>>(), cols)
                        };
                        let gens = bridge_generators(&s, t, u);
                        let descends = gens.iter().all(|g| f.apply(&g[..r]).iter().all(|v| *v == 0));
                        if descends {
                            Shape::Cone(f.mul(&free_rows(&q.section, q.group.free_rank())))
                        } else {
                            warnings.push(format!("fiber over {u} replaced by its full group"));
                            Shape::Full
                        }
                    }
                };
                FiberMonoid { group: q.group.clone(), shape }
            })
            .collect();
        let system = FiberSystem::from_fn(rank, fibers, |a, b| {
            let (ua, ub) = (full_of(a), full_of(b));
            let (qa, qb) = (&quotients[&ua], &quotients[&ub]);
            qb.projection.matrix.mul(&s.system().delta(ua, ub).matrix).mul(&qa.section)
        })
        .expect("quotient fiber system is valid");
        let presentation = Arc::new(FiberedSemigroup::new(system));

        let coords: Vec<usize> = outside.iter().collect();
        let mut rows = vec![vec![Fin(0); s.rank()]; rank];
        for (i, c) in coords.iter().enumerate() {
            rows[i][*c] = Fin(1);
        }
        let matrix = ExtMatrix::from_rows(&rows, s.rank()).expect("projection matrix");
        let map = Morphism::new(s.clone(), presentation.clone(), matrix, Label::EMPTY, |t2| {
            let u = t2.union(t);
            quotients[&u].projection.matrix.mul(&s.system().delta(t2, u).matrix)
        })
        .expect("quotient map is well formed");
        QuotientSemigroup {
            ambient: s,
            ideal: ideal.clone(),
            presentation,
            map,
            warnings,
            quotients,
            bridges,
        }
    }

    pub fn label(&self) -> Label {
        self.ideal.label()
    }

    /// `a ≤_I b`: some `z ∈ I` has `a ≤ z + b`, decided with the witness
    /// normalized to `z = (∞ on I, m)`, `m` a unit of the top fiber of `I`.
    pub fn leq_mod(&self, a: &Element, b: &Element) -> bool {
        let s = &self.ambient;
        let t = self.label();
        let off_t = (0..s.rank()).filter(|i| !t.contains(*i)).all(|i| a.x[i] <= b.x[i]);
        if !off_t {
            return false;
        }
        let u = b.label().union(t);
        let diff = s.group(u).sub(&s.push(&a.k, a.label(), u), &s.push(&b.k, b.label(), u));
        self.bridges[&u].solve(&diff).is_some()
    }

    /// The normalized witness `z` for `a ≤_I b`, if any.
    pub fn leq_mod_witness(&self, a: &Element, b: &Element) -> Option<Element> {
        if !self.leq_mod(a, b) {
            return None;
        }
        let s = &self.ambient;
        let t = self.label();
        let u = b.label().union(t);
        let diff = s.group(u).sub(&s.push(&a.k, a.label(), u), &s.push(&b.k, b.label(), u));
        let m_coeffs = self.bridges[&u].solve(&diff).expect("checked");
        let top = s.group(t);
        let m = s.fiber(t).unit_generators().iter().zip(m_coeffs.iter()).fold(top.zero(), |acc, (g, c)| {
            top.add(&acc, &g.iter().map(|x| x * c).collect::<Vec<_>>())
        });
        Some(Element { x: CuVector::top_of(s.rank(), t), k: m })
    }

    pub fn equivalent(&self, a: &Element, b: &Element) -> bool {
        self.leq_mod(a, b) && self.leq_mod(b, a)
    }

    /// The class of `a` as an element of the presentation.
    pub fn normalize(&self, a: &Element) -> Element {
        self.map.apply(a)
    }

    /// A representative of a class: `(x̄ ⊕ ∞_I, lift of k̄)`.
    pub fn lift(&self, q: &Element) -> Element {
        let s = &self.ambient;
        let t = self.label();
        let outside = s.full_label().difference(t);
        let mut x = CuVector::top_of(s.rank(), t);
        for (k, i) in outside.iter().enumerate() {
            x.0[i] = q.x[k];
        }
        let u = x.support();
        let k = s.group(u).reduced(&self.quotients[&u].lift(&q.k));
        Element { x, k }
    }
}

pub fn quotient_present(ideal: &IdealObject) -> QuotientSemigroup {
    QuotientSemigroup::new(ideal)
}

pub fn leq_mod(ideal: &IdealObject, a: &Element, b: &Element) -> bool {
    QuotientSemigroup::new(ideal).leq_mod(a, b)
}

/// Axioms of the presentation plus the properties of the quotient map:
/// additive, monotone, surjective, compatible with sups, and
/// representative-independent addition.
pub fn check_quotient_axioms(q: &QuotientSemigroup, name: &str, bound: u64) -> Report {
    let s = &q.ambient;
    let p = &q.presentation;
    let mut r = check_axioms_on(p, name, &Fragment::new(p, bound));
    let frag = Fragment::new(s, bound);
    let el = frag.elements();

    let additive = el.par_iter().find_map_any(|a| {
        el.iter()
            .find(|b| q.normalize(&s.add(a, b)) != p.add(&q.normalize(a), &q.normalize(b)))
            .map(|b| format!("{a}, {b}"))
    });
    r.push(Verdict::new("quotient map additive", name, additive.is_none()).at_bound(bound).with_witness(additive));

    let monotone = el.par_iter().find_map_any(|a| {
        el.iter()
            .find(|b| s.leq(a, b) && !p.leq(&q.normalize(a), &q.normalize(b)))
            .map(|b| format!("{a} <= {b}"))
    });
    r.push(Verdict::new("quotient map monotone", name, monotone.is_none()).at_bound(bound).with_witness(monotone));

    let qfrag = Fragment::new(p, bound);
    let surjective = qfrag.elements().par_iter().find_map_any(|c| {
        let rep = q.lift(c);
        (!s.is_element(&rep) || q.normalize(&rep) != *c).then(|| c.to_string())
    });
    r.push(Verdict::new("quotient map surjective", name, surjective.is_none()).at_bound(bound).with_witness(surjective));

    let sups = frag.chains(s.rank()).par_iter().find_map_any(|c: &MonotoneChain| {
        let image = MonotoneChain { base: q.normalize(&c.base), direction: q.map.matrix.apply(&c.direction) };
        (q.normalize(&s.sup_chain(c)) != p.sup_chain(&image))
            .then(|| format!("chain base {} direction {}", c.base, c.direction))
    });
    r.push(Verdict::new("quotient map preserves sups", name, sups.is_none()).at_bound(bound).with_witness(sups));

    let mut classes: HashMap<Element, Vec<usize>> = HashMap::new();
    for (i, a) in el.iter().enumerate() {
        classes.entry(q.normalize(a)).or_default().push(i);
    }
    let mut keys: Vec<&Element> = classes.keys().collect();
    keys.sort();
    let multi: Vec<&Vec<usize>> = keys.iter().map(|k| &classes[*k]).filter(|c| c.len() > 1).collect();
    let mut g = StdRng::seed_from_u64(0x9e37_79b9);
    let rep_indep = (0..500).find_map(|_| {
        let class = multi.choose(&mut g)?;
        let (a, b) = (&el[*class.choose(&mut g)?], &el[*class.choose(&mut g)?]);
        let c = el.choose(&mut g)?;
        let ok = q.equivalent(a, b) && q.equivalent(&s.add(a, c), &s.add(b, c));
        (!ok).then(|| format!("{a} ~ {b} with {c}"))
    });
    r.push(
        Verdict::new("representative independent", name, rep_indep.is_none())
            .at_bound(bound)
            .with_witness(rep_indep)
            .with_note("500 sampled pairs of equivalent representatives"),
    );
    r
}

/// The unique `ᾱ : S/I → V` with `ᾱ ∘ π = α`, when `α` kills `I`.
pub fn factor_through(alpha: &Morphism, q: &QuotientSemigroup) -> Result<Morphism> {
    let s = &q.ambient;
    if *alpha.domain != **s {
        return Err(CuError::AmbientMismatch);
    }
    let t = q.label();
    let e = alpha.apply(&q.ideal.e_max());
    if e != alpha.codomain.zero() {
        return Err(CuError::PreimageCondition(format!("{} (to {e})", q.ideal.e_max())));
    }
    let units_killed = s.fiber(t).unit_generators().iter().all(|g| alpha.fiber_map(t).apply(g).iter().all(|c| *c == 0));
    if !units_killed {
        return Err(CuError::PreimageCondition(format!("a unit over {t}")));
    }
    let outside = s.full_label().difference(t);
    let rows: Vec<Vec<_>> =
        (0..alpha.matrix.rows()).map(|i| outside.iter().map(|c| alpha.matrix.get(i, c)).collect()).collect();
    let matrix = ExtMatrix::from_rows(&rows, outside.len())?;
    Morphism::new(q.presentation.clone(), alpha.codomain.clone(), matrix, alpha.offset, |local| {
        let u = local.expand(outside).union(t);
        alpha.fiber_map(u).matrix.mul(&q.quotients[&u].section)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extnat::Inf;
    use crate::samples;

    fn v(c: &[u64]) -> CuVector {
        CuVector(c.iter().map(|x| if *x == u64::MAX { Inf } else { Fin(*x) }).collect())
    }

    #[test]
    fn counterexample_modulo_first_ideal() {
        let s = Arc::new(samples::counterexample());
        let i1 = IdealObject::from_label(&s, Label::from_indices([0, 1]));
        let q = QuotientSemigroup::new(&i1);
        let e = |x: &[u64], k: i64| s.element(v(x), &[k]).unwrap();
        assert!(q.leq_mod(&e(&[0, 0, 5], 1), &e(&[0, 0, 7], 1)));
        assert!(q.leq_mod(&e(&[3, 0, 5], 1), &e(&[0, 0, 5], 1)));
        assert_eq!(q.leq_mod_witness(&e(&[3, 0, 5], 1), &e(&[0, 0, 5], 1)).unwrap(), i1.e_max());
        // the units over {1,2} bridge every pair of fibers: the quotient has trivial fibers
        assert!(q.leq_mod(&e(&[0, 0, 5], 1), &e(&[0, 0, 5], 2)));
        assert_eq!(q.presentation.rank(), 1);
        assert!(q.presentation.has_trivial_fibers());
    }

    #[test]
    fn unbridged_fibers_stay_apart() {
        let s = Arc::new(samples::counterexample());
        let meet = IdealObject::from_label(&s, Label::singleton(1));
        let q = QuotientSemigroup::new(&meet);
        let e = |x: &[u64], k: i64| s.element(v(x), &[k]).unwrap();
        assert!(!q.leq_mod(&e(&[0, 0, 5], 1), &e(&[0, 0, 5], 2)));
        assert!(q.leq_mod(&e(&[0, 7, 5], 1), &e(&[0, 0, 5], 1)));
        assert_eq!(q.presentation.rank(), 2);
        assert_eq!(q.presentation.fiber(Label::EMPTY).to_string(), "cone Z^1 [(1) >= 0]");
        assert!(q.warnings.is_empty());
    }

    #[test]
    fn double_cover_quotient_has_torsion() {
        let s = Arc::new(samples::double_cover());
        let i = IdealObject::from_label(&s, Label::singleton(0));
        let q = QuotientSemigroup::new(&i);
        // over {1,2} the units of the fiber at {1} land on 2Z
        assert!(q.presentation.fiber(Label::EMPTY).is_trivial());
        assert_eq!(q.presentation.fiber(Label::singleton(0)).group.torsion(), &[2]);
        assert!(q.map.structural_failures().is_empty());
    }

    #[test]
    fn quotient_axioms_and_factorization() {
        let s = Arc::new(samples::counterexample());
        let i1 = IdealObject::from_label(&s, Label::from_indices([0, 1]));
        let q = QuotientSemigroup::new(&i1);
        let r = check_quotient_axioms(&q, "S/I1", 2);
        assert!(r.all_pass(), "{r}");
        let fac = factor_through(&q.map, &q).unwrap();
        assert!(fac.is_isomorphism());
        let id = Morphism::identity(&s);
        assert!(matches!(factor_through(&id, &q), Err(CuError::PreimageCondition(_))));
    }
}
