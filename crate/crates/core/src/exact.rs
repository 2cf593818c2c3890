//! Kernel and image relations of morphisms, exactness of sequences, the
//! positive-cone and maximal-group extractions, the canonical split sequence
//! `0 → S₊ → S → S_max → 0` and the commuting diagrams built from it.

use std::sync::Arc;

use rayon::prelude::*;

use crate::abelian::{FGAbelianGroup, GroupElem, GroupHom, HomSolver};
use crate::error::{CuError, Result};
use crate::extnat::CuVector;
use crate::fiber::{FiberMonoid, FiberSystem};
use crate::fragment::Fragment;
use crate::ideals::{idl, lattice, restrict_morphism, IdealObject, IdealSemigroup};
use crate::intmat::IntMatrix;
use crate::label::Label;
use crate::morphism::{agree_on, ExtMatrix, Morphism};
use crate::quotients::QuotientSemigroup;
use crate::report::{Report, Verdict};
use crate::semigroup::{Element, FiberedSemigroup};

/// `(s1, s2) ∈ ker f`, i.e. `f(s1) ≤ f(s2)`.
pub fn in_kernel(f: &Morphism, s1: &Element, s2: &Element) -> bool {
    f.codomain.leq(&f.apply(s1), &f.apply(s2))
}

enum Search {
    /// Maximal elements form a group: solve for the fiber value of a
    /// maximal witness, per codomain label.
    Solve { gens: Vec<GroupElem>, solvers: Vec<Option<HomSolver>> },
    /// Enumerate candidate witnesses with their images.
    Enumerate { candidates: Vec<(Element, Element)> },
}

/// Decides `(t1, t2) ∈ im f`, i.e. `t1 ≤ f(s) + t2` for some `s`.
///
/// If `s` is a witness then so is `s + e_max`, so it suffices to look at the
/// maximal elements `(∞ⁿ, k)`. When those form a group the search reduces to
/// a linear system and the answer is exact; otherwise candidates are drawn
/// from the fragment, `0`, `e_max` and bounded maximal elements.
pub struct ImageOracle<'a> {
    f: &'a Morphism,
    top: Element,
    search: Search,
}

impl<'a> ImageOracle<'a> {
    pub fn new(f: &'a Morphism, bound: u64) -> Self {
        let d = &f.domain;
        let c = &f.codomain;
        let full = d.full_label();
        let top_fiber = d.fiber(full);
        let top = f.apply(&d.e_max());
        let search = if top_fiber.is_group() {
            let gens: Vec<GroupElem> =
                top_fiber.unit_generators().iter().map(|g| top_fiber.group.reduced(g)).collect();
            let l = top.label();
            let images: Vec<GroupElem> = gens.iter().map(|g| f.fiber_map(full).apply(g)).collect();
            let solvers = Label::all(c.rank())
                .map(|u| {
                    l.is_subset(u).then(|| {
                        let cols: Vec<Vec<i64>> = images.iter().map(|k| c.push(k, l, u).to_vec()).collect();
                        let m = IntMatrix::from_columns(&cols, c.group(u).dim());
                        HomSolver::new(&m, &FGAbelianGroup::free(gens.len()), c.group(u))
                    })
                })
                .collect();
            Search::Solve { gens, solvers }
        } else {
            let frag = Fragment::new(d, bound);
            let mut pool = vec![d.zero(), d.e_max()];
            pool.extend(
                top_fiber
                    .box_members(frag.fiber_bound)
                    .into_iter()
                    .map(|k| Element { x: CuVector::top_of(d.rank(), full), k }),
            );
            pool.extend(frag.elements().iter().cloned());
            Search::Enumerate { candidates: pool.into_iter().map(|s| (f.apply(&s), s)).collect() }
        };
        ImageOracle { f, top, search }
    }

    /// Whether a negative answer is a proof rather than a bounded search.
    pub fn is_exact(&self) -> bool {
        matches!(self.search, Search::Solve { .. })
    }

    /// A witness `s` with `t1 ≤ f(s) + t2`, if one is found.
    pub fn witness(&self, t1: &Element, t2: &Element) -> Option<Element> {
        let c = &self.f.codomain;
        match &self.search {
            Search::Solve { gens, solvers } => {
                let y = &self.top.x + &t2.x;
                if !t1.x.leq(&y) {
                    return None;
                }
                let u = y.support();
                let g = c.group(u);
                let d = g.sub(&c.push(&t1.k, t1.label(), u), &c.push(&t2.k, t2.label(), u));
                let coeffs = solvers[u.0 as usize].as_ref().expect("solver for labels above the top").solve(&d)?;
                let d_group = &self.f.domain.group(self.f.domain.full_label());
                let mut k = d_group.zero();
                for (ci, gen) in coeffs.iter().zip(gens) {
                    for (kj, gj) in k.iter_mut().zip(gen) {
                        *kj += ci * gj;
                    }
                }
                d_group.reduce(&mut k);
                Some(Element { x: CuVector::top_of(self.f.domain.rank(), self.f.domain.full_label()), k })
            }
            Search::Enumerate { candidates } => candidates
                .iter()
                .find(|(fs, _)| c.leq(t1, &c.add(fs, t2)))
                .map(|(_, s)| s.clone()),
        }
    }
}

/// `(t1, t2) ∈ im f`; see [`ImageOracle`] for when a negative answer is
/// only relative to the fragment at `bound`.
pub fn in_image(f: &Morphism, t1: &Element, t2: &Element, bound: u64) -> bool {
    ImageOracle::new(f, bound).witness(t1, t2).is_some()
}

/// Checks `ker g = im f` on all pairs of the fragment of the middle object.
pub fn exact_at(f: &Morphism, g: &Morphism, name: &str, bound: u64) -> Result<Report> {
    let frag = Fragment::new(&f.codomain, bound);
    exact_at_on(f, g, name, &frag)
}

pub fn exact_at_on(f: &Morphism, g: &Morphism, name: &str, frag: &Fragment) -> Result<Report> {
    if *f.codomain != *g.domain {
        return Err(CuError::Precondition("exactness needs composable morphisms".into()));
    }
    let oracle = ImageOracle::new(f, frag.bound);
    let el = frag.elements();
    let images: Vec<Element> = el.par_iter().map(|a| g.apply(a)).collect();
    let v = &g.codomain;
    type Pair = Option<(usize, usize)>;
    let first = |a: Pair, b: Pair| match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    };
    let (im_not_ker, ker_not_im) = (0..el.len())
        .into_par_iter()
        .map(|i| {
            let mut out: (Pair, Pair) = (None, None);
            for j in 0..el.len() {
                let ker = v.leq(&images[i], &images[j]);
                let im = oracle.witness(&el[i], &el[j]).is_some();
                if im && !ker && out.0.is_none() {
                    out.0 = Some((i, j));
                }
                if ker && !im && out.1.is_none() {
                    out.1 = Some((i, j));
                }
                if out.0.is_some() && out.1.is_some() {
                    break;
                }
            }
            out
        })
        .reduce(|| (None, None), |a, b| (first(a.0, b.0), first(a.1, b.1)));

    let pair = |p: (usize, usize)| format!("({}, {})", el[p.0], el[p.1]);
    let mut r = Report::new();
    r.push(
        Verdict::new("im f in ker g", name, im_not_ker.is_none())
            .at_bound(frag.bound)
            .with_witness(im_not_ker.map(|p| {
                let s = oracle.witness(&el[p.0], &el[p.1]).expect("image pair");
                format!("{} with s = {s}", pair(p))
            })),
    );
    let mut v = Verdict::new("ker g in im f", name, ker_not_im.is_none())
        .at_bound(frag.bound)
        .with_witness(ker_not_im.map(pair));
    if !oracle.is_exact() {
        v = v.with_note(if ker_not_im.is_some() {
            format!("no witness at bound {}", frag.bound)
        } else {
            "image witnesses found by bounded search".to_string()
        });
    }
    r.push(v);
    Ok(r)
}

/// A sequence of composable morphisms with a display name per object.
#[derive(Clone, Debug)]
pub struct Sequence {
    pub objects: Vec<Arc<FiberedSemigroup>>,
    pub names: Vec<String>,
    pub arrows: Vec<Morphism>,
}

impl Sequence {
    pub fn new(arrows: Vec<Morphism>, names: Vec<String>) -> Result<Self> {
        let first = arrows.first().ok_or_else(|| CuError::Invalid("a sequence needs an arrow".into()))?;
        let mut objects = vec![first.domain.clone()];
        for (a, b) in arrows.iter().zip(arrows.iter().skip(1)) {
            if *a.codomain != *b.domain {
                return Err(CuError::Invalid("consecutive arrows do not compose".into()));
            }
        }
        objects.extend(arrows.iter().map(|a| a.codomain.clone()));
        if names.len() != objects.len() {
            return Err(CuError::Invalid(format!("{} names for {} objects", names.len(), objects.len())));
        }
        Ok(Sequence { objects, names, arrows })
    }

    /// `0 → A →f B →g C → 0`.
    pub fn short(f: Morphism, g: Morphism, names: [&str; 3]) -> Result<Self> {
        let arrows = vec![Morphism::from_trivial(&f.domain), f, g.clone(), Morphism::to_trivial(&g.codomain)];
        let names = ["0", names[0], names[1], names[2], "0"].iter().map(|s| s.to_string()).collect();
        Sequence::new(arrows, names)
    }

    pub fn is_short(&self) -> bool {
        self.objects.len() == 5 && self.objects[0].rank() == 0 && self.objects[4].rank() == 0
            && [0, 4].iter().all(|i| self.objects[*i].has_trivial_fibers())
    }
}

/// Exactness at each interior object of a sequence.
pub fn is_exact(seq: &Sequence, bound: u64) -> Result<Report> {
    let mut r = Report::new();
    for i in 1..seq.objects.len() - 1 {
        r.extend(exact_at(&seq.arrows[i - 1], &seq.arrows[i], &seq.names[i], bound)?);
    }
    Ok(r)
}

/// Exactness at the three interior objects of `0 → A → B → C → 0`.
pub fn is_short_exact(seq: &Sequence, bound: u64) -> Result<Report> {
    if !seq.is_short() {
        return Err(CuError::Invalid("a short exact sequence has five objects with 0 at both ends".into()));
    }
    is_exact(seq, bound)
}

/// `g ∘ q = id` on the fragment of `q`'s domain.
pub fn is_split(g: &Morphism, q: &Morphism, name: &str, bound: u64) -> Result<Verdict> {
    if *q.codomain != *g.domain || *g.codomain != *q.domain {
        return Err(CuError::Precondition("a splitting map goes back along the surjection".into()));
    }
    let frag = Fragment::new(&q.domain, bound);
    let bad = frag.elements().par_iter().find_map_any(|v| (g.apply(&q.apply(v)) != *v).then(|| v.clone()));
    Ok(Verdict::new("split", name, bad.is_none())
        .at_bound(bound)
        .with_witness(bad.map(|v| format!("{v} maps to {}", g.apply(&q.apply(&v))))))
}

/// The positive cone `S₊`: same rank, trivial fibers.
pub fn nu_plus(s: &FiberedSemigroup) -> Arc<FiberedSemigroup> {
    Arc::new(FiberedSemigroup::positive_cone(s.rank()))
}

/// `α₊`: the matrix part of `α` between positive cones.
pub fn nu_plus_morphism(alpha: &Morphism) -> Morphism {
    Morphism::new(nu_plus(&alpha.domain), nu_plus(&alpha.codomain), alpha.matrix.clone(), alpha.offset, |_| {
        IntMatrix::zeros(0, 0)
    })
    .expect("matrix part is well formed")
}

/// The inclusion `i: S₊ ↪ S`.
pub fn positive_inclusion(s: &Arc<FiberedSemigroup>) -> Morphism {
    Morphism::new(nu_plus(s), s.clone(), ExtMatrix::identity(s.rank()), Label::EMPTY, |t| {
        IntMatrix::zeros(s.group(t).dim(), 0)
    })
    .expect("inclusion is well formed")
}

fn require_pd(s: &FiberedSemigroup) -> Result<()> {
    if s.maximal_elements().is_group {
        Ok(())
    } else {
        Err(CuError::PdRequired(format!("the maximal elements of {s} do not form a group")))
    }
}

/// `S_max` as a discretely ordered group: a rank-0 object whose only fiber
/// is the top fiber of `S`.
pub fn nu_max(s: &FiberedSemigroup) -> Result<Arc<FiberedSemigroup>> {
    require_pd(s)?;
    let top: FiberMonoid = s.fiber(s.full_label()).clone();
    let dim = top.group.dim();
    let sys = FiberSystem::from_fn(0, vec![top], |_, _| IntMatrix::identity(dim))?;
    Ok(Arc::new(FiberedSemigroup::new(sys)))
}

/// `α_max: S_max → T_max`, `k ↦` fiber of `α((∞ⁿ, k)) + e_max`.
pub fn nu_max_morphism(alpha: &Morphism) -> Result<GroupHom> {
    require_pd(&alpha.domain)?;
    require_pd(&alpha.codomain)?;
    let (d, c) = (&alpha.domain, &alpha.codomain);
    let full = d.full_label();
    let delta = c.system().delta(alpha.image_label(full), c.full_label());
    Ok(alpha.fiber_map(full).then(delta))
}

/// `α_max` as a morphism between the discrete objects of [`nu_max`].
pub fn nu_max_arrow(alpha: &Morphism) -> Result<Morphism> {
    let hom = nu_max_morphism(alpha)?;
    Morphism::new(nu_max(&alpha.domain)?, nu_max(&alpha.codomain)?, ExtMatrix::zeros(0, 0), Label::EMPTY, |_| {
        hom.matrix.clone()
    })
}

/// `0 → S₊ →i S →j S_max → 0` with the splitting `q: S_max → S`.
#[derive(Clone, Debug)]
pub struct SplitSequence {
    pub sequence: Sequence,
    pub i: Morphism,
    pub j: Morphism,
    pub q: Morphism,
}

/// The canonical split sequence: `i` the inclusion of the positive cone,
/// `j(s) = s + e_max`, and `q` sending `k` to the maximal element `(∞ⁿ, k)`.
pub fn canonical_split(s: &Arc<FiberedSemigroup>) -> Result<SplitSequence> {
    let max = nu_max(s)?;
    let full = s.full_label();
    let i = positive_inclusion(s);
    let j = Morphism::new(s.clone(), max.clone(), ExtMatrix::zeros(0, s.rank()), Label::EMPTY, |t| {
        s.system().delta(t, full).matrix.clone()
    })?;
    let q = Morphism::new(max, s.clone(), ExtMatrix::zeros(s.rank(), 0), full, |_| {
        IntMatrix::identity(s.group(full).dim())
    })?;
    let sequence = Sequence::short(i.clone(), j.clone(), ["S+", "S", "S_max"])?;
    Ok(SplitSequence { sequence, i, j, q })
}

/// Short exactness of the canonical sequence and the splitting `j ∘ q = id`.
pub fn check_split(s: &Arc<FiberedSemigroup>, name: &str, bound: u64) -> Result<Report> {
    let split = canonical_split(s)?;
    let mut r = Report::new();
    for v in is_short_exact(&split.sequence, bound)?.verdicts {
        r.push(Verdict { object: format!("{name}: {}", v.object), ..v });
    }
    r.push(is_split(&split.j, &split.q, name, bound)?);
    Ok(r)
}

/// `0 → I → S → S/I → 0` with the ideal inclusion and the quotient map.
pub fn ideal_sequence(ideal: &IdealObject) -> Result<(IdealSemigroup, QuotientSemigroup, Sequence)> {
    let sub = IdealSemigroup::new(ideal);
    let quotient = QuotientSemigroup::new(ideal);
    let seq = Sequence::short(sub.inclusion.clone(), quotient.map.clone(), ["I", "S", "S/I"])?;
    Ok((sub, quotient, seq))
}

/// `α(I) = J`: members of `I` map into `J` and, for an isomorphism, every
/// member of `J` has its preimage in `I`.
fn image_is_ideal(alpha: &Morphism, inverse: &Morphism, i: &IdealObject, bound: u64) -> Result<Verdict> {
    let j = idl(&alpha.codomain, &alpha.apply(&i.e_max()))?;
    let frag_s = Fragment::new(&alpha.domain, bound);
    let frag_t = Fragment::new(&alpha.codomain, bound);
    let forward = frag_s
        .elements()
        .par_iter()
        .find_map_any(|a| (i.contains(a) && !j.contains(&alpha.apply(a))).then(|| a.to_string()));
    let backward = frag_t
        .elements()
        .par_iter()
        .find_map_any(|b| (j.contains(b) && !i.contains(&inverse.apply(b))).then(|| b.to_string()));
    let ok = forward.is_none() && backward.is_none() && j.label() == alpha.image_label(i.label());
    Ok(Verdict::new("image is the ideal", format!("{i} -> {j}"), ok)
        .at_bound(bound)
        .with_witness(forward.or(backward)))
}

/// The diagram with exact rows
///
/// ```text
/// 0 → S₊ → S → S_max → 0
///     ↓α₊  ↓α   ↓α_max
/// 0 → T₊ → T → T_max → 0
/// ```
///
/// with both squares checked pointwise. For an isomorphism `α` also checks
/// that `α₊` and `α_max` are isomorphisms and `α(I) = J` over `Lat(S)`.
pub fn check_functor_diagram(alpha: &Morphism, name: &str, bound: u64) -> Result<Report> {
    let top = check_split(&alpha.domain, "domain row", bound)?;
    let bottom = check_split(&alpha.codomain, "codomain row", bound)?;
    let mut r = Report::new();
    r.extend(top);
    r.extend(bottom);

    let (src, dst) = (canonical_split(&alpha.domain)?, canonical_split(&alpha.codomain)?);
    let plus = nu_plus_morphism(alpha);
    let max = nu_max_arrow(alpha)?;

    let left = (src.i.then(alpha)?, plus.then(&dst.i)?);
    let bad = agree_on(&left.0, &left.1, &Fragment::new(&plus.domain, bound));
    r.push(Verdict::new("left square", name, bad.is_none()).at_bound(bound).with_witness(bad.map(|a| a.to_string())));

    let right = (alpha.then(&dst.j)?, src.j.then(&max)?);
    let bad = agree_on(&right.0, &right.1, &Fragment::new(&alpha.domain, bound));
    r.push(Verdict::new("right square", name, bad.is_none()).at_bound(bound).with_witness(bad.map(|a| a.to_string())));

    if let Some(inverse) = alpha.inverse() {
        r.push(Verdict::new("positive part isomorphism", name, plus.is_isomorphism()).with_note("exact"));
        r.push(Verdict::new("maximal group isomorphism", name, max.is_isomorphism()).with_note("exact"));
        for i in lattice(&alpha.domain) {
            r.push(image_is_ideal(alpha, &inverse, &i, bound)?);
        }
    }
    Ok(r)
}

/// The diagram of [`check_functor_diagram`] for the restriction
/// `α|I : I → J`, plus `α(I) = J` when `α` is an isomorphism.
pub fn check_ideal_diagram(alpha: &Morphism, ideal: &IdealObject, name: &str, bound: u64) -> Result<Report> {
    let rest = restrict_morphism(alpha, ideal)?;
    let mut r = check_functor_diagram(&rest.morphism, &format!("{name} on {ideal}"), bound)?;
    if let Some(inverse) = alpha.inverse() {
        r.push(image_is_ideal(alpha, &inverse, ideal, bound)?);
    }
    Ok(r)
}
