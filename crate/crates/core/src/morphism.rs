//! Morphisms between fibered semigroups: an `N̄`-matrix acting on vectors,
//! an optional set of coordinates sent to `∞`, and one group homomorphism per
//! domain label.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::abelian::GroupHom;
use crate::error::{CuError, Result};
use crate::extnat::{CuVector, ExtNat, Fin, Inf};
use crate::fragment::Fragment;
use crate::intmat::IntMatrix;
use crate::label::Label;
use crate::report::{Report, Verdict};
use crate::semigroup::{Element, FiberedSemigroup, MonotoneChain};

/// A dense matrix over `N̄`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtMatrix {
    rows: usize,
    cols: usize,
    data: Vec<ExtNat>,
}

impl ExtMatrix {
    pub fn from_rows(rows: &[Vec<ExtNat>], cols: usize) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(CuError::Invalid(format!("matrix row has {} entries, expected {cols}", r.len())));
        }
        Ok(ExtMatrix { rows: rows.len(), cols, data: rows.concat() })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExtMatrix { rows, cols, data: vec![Fin(0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ExtMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Fin(1);
        }
        m
    }

    /// The 0/1 matrix sending coordinate `j` to coordinate `map[j]`.
    pub fn from_coordinate_map(map: &[usize], rows: usize) -> Self {
        let mut m = ExtMatrix::zeros(rows, map.len());
        for (j, i) in map.iter().enumerate() {
            m.data[i * map.len() + j] = Fin(1);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> ExtNat {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[ExtNat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<ExtNat>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|c| c.is_finite())
    }

    pub fn apply(&self, x: &CuVector) -> CuVector {
        CuVector(
            (0..self.rows)
                .map(|i| self.row(i).iter().zip(x.coords()).fold(Fin(0), |acc, (m, c)| acc + *m * *c))
                .collect(),
        )
    }

    pub fn mul(&self, rhs: &ExtMatrix) -> ExtMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = ExtMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                out.data[i * rhs.cols + j] =
                    (0..self.cols).fold(Fin(0), |acc, k| acc + self.get(i, k) * rhs.get(k, j));
            }
        }
        out
    }

    /// Rows with a nonzero entry in some column of `cols`.
    pub fn row_support(&self, cols: Label) -> Label {
        Label::from_indices((0..self.rows).filter(|i| cols.iter().any(|j| !self.get(*i, j).is_zero())))
    }

    /// Whether the matrix is a permutation matrix.
    pub fn is_permutation(&self) -> bool {
        self.rows == self.cols
            && self.data.iter().all(|c| *c == Fin(0) || *c == Fin(1))
            && (0..self.rows).all(|i| self.row(i).iter().filter(|c| **c == Fin(1)).count() == 1)
            && (0..self.cols).all(|j| (0..self.rows).filter(|i| self.get(*i, j) == Fin(1)).count() == 1)
    }
}

impl fmt::Display for ExtMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|c| c.to_string()).collect();
            write!(f, "[{}]", row.join(","))?;
        }
        f.write_str("]")
    }
}

#[derive(Clone, Debug)]
pub struct Morphism {
    pub domain: Arc<FiberedSemigroup>,
    pub codomain: Arc<FiberedSemigroup>,
    pub matrix: ExtMatrix,
    /// Coordinates of the codomain set to `∞` in every image.
    pub offset: Label,
    fiber_maps: Vec<GroupHom>,
}

impl Morphism {
    /// Assembles a morphism, checking shapes and that each fiber matrix is a
    /// well-defined homomorphism between the right groups. Compatibility with
    /// the orders is checked by [`Morphism::structural_failures`].
    pub fn new(
        domain: Arc<FiberedSemigroup>,
        codomain: Arc<FiberedSemigroup>,
        matrix: ExtMatrix,
        offset: Label,
        mut fiber_matrix: impl FnMut(Label) -> IntMatrix,
    ) -> Result<Self> {
        if matrix.rows() != codomain.rank() || matrix.cols() != domain.rank() {
            return Err(CuError::Invalid(format!(
                "matrix is {}x{} but the morphism needs {}x{}",
                matrix.rows(),
                matrix.cols(),
                codomain.rank(),
                domain.rank()
            )));
        }
        if let Some(o) = offset.iter().find(|o| *o >= codomain.rank()) {
            return Err(CuError::Invalid(format!("offset coordinate {} is out of range", o + 1)));
        }
        let mut fiber_maps = vec![];
        for t in Label::all(domain.rank()) {
            let t_hat = offset.union(matrix.row_support(t));
            let hom = GroupHom::new(domain.group(t).clone(), codomain.group(t_hat).clone(), fiber_matrix(t))
                .map_err(|e| CuError::Invalid(format!("fiber map at {t}: {e}")))?;
            fiber_maps.push(hom);
        }
        Ok(Morphism { domain, codomain, matrix, offset, fiber_maps })
    }

    /// Like [`Morphism::new`] but also rejects maps failing the structural
    /// conditions (monoids into monoids, commuting squares).
    pub fn checked(
        domain: Arc<FiberedSemigroup>,
        codomain: Arc<FiberedSemigroup>,
        matrix: ExtMatrix,
        offset: Label,
        fiber_matrix: impl FnMut(Label) -> IntMatrix,
    ) -> Result<Self> {
        let f = Morphism::new(domain, codomain, matrix, offset, fiber_matrix)?;
        if let Some(e) = f.structural_failures().into_iter().next() {
            return Err(CuError::Invalid(e));
        }
        Ok(f)
    }

    pub fn identity(s: &Arc<FiberedSemigroup>) -> Self {
        Morphism::new(s.clone(), s.clone(), ExtMatrix::identity(s.rank()), Label::EMPTY, |t| {
            IntMatrix::identity(s.group(t).dim())
        })
        .expect("identity is well formed")
    }

    /// The unique morphism out of the trivial semigroup.
    pub fn from_trivial(target: &Arc<FiberedSemigroup>) -> Self {
        let zero = Arc::new(FiberedSemigroup::trivial());
        let g0 = target.group(Label::EMPTY).dim();
        Morphism::new(zero, target.clone(), ExtMatrix::zeros(target.rank(), 0), Label::EMPTY, |_| {
            IntMatrix::zeros(g0, 0)
        })
        .expect("zero map is well formed")
    }

    /// The unique morphism into the trivial semigroup.
    pub fn to_trivial(source: &Arc<FiberedSemigroup>) -> Self {
        let zero = Arc::new(FiberedSemigroup::trivial());
        Morphism::new(source.clone(), zero, ExtMatrix::zeros(0, source.rank()), Label::EMPTY, |t| {
            IntMatrix::zeros(0, source.group(t).dim())
        })
        .expect("zero map is well formed")
    }

    /// `T̂`: the support of the image of any element with support `t`.
    pub fn image_label(&self, t: Label) -> Label {
        self.offset.union(self.matrix.row_support(t))
    }

    pub fn fiber_map(&self, t: Label) -> &GroupHom {
        &self.fiber_maps[t.0 as usize]
    }

    pub fn apply(&self, a: &Element) -> Element {
        let mut x = self.matrix.apply(&a.x);
        for o in self.offset.iter() {
            x.0[o] = Inf;
        }
        let k = self.fiber_map(a.label()).apply(&a.k);
        Element { x, k }
    }

    /// `after ∘ self`.
    pub fn then(&self, after: &Morphism) -> Result<Morphism> {
        if *self.codomain != *after.domain {
            return Err(CuError::Precondition("composing morphisms with mismatched objects".into()));
        }
        let matrix = after.matrix.mul(&self.matrix);
        let offset = after.image_label(self.offset);
        Morphism::new(self.domain.clone(), after.codomain.clone(), matrix, offset, |t| {
            after.fiber_map(self.image_label(t)).matrix.mul(&self.fiber_map(t).matrix)
        })
    }

    /// Failures of the exact structural conditions: each `α_T` maps `M_T`
    /// into `M_{T̂}` and every square `α_{T′} δ_{T,T′} = δ_{T̂,T̂′} α_T`
    /// commutes.
    pub fn structural_failures(&self) -> Vec<String> {
        let d = &self.domain;
        let c = &self.codomain;
        let mut out = vec![];
        for t in Label::all(d.rank()) {
            let th = self.image_label(t);
            if !d.fiber(t).maps_into(self.fiber_map(t), c.fiber(th)) {
                out.push(format!("fiber map at {t} does not send the monoid at {t} into the one at {th}"));
            }
            for t2 in t.supersets_within(d.full_label()) {
                let left = d.system().delta(t, t2).then(self.fiber_map(t2));
                let right = self.fiber_map(t).then(c.system().delta(th, self.image_label(t2)));
                if !left.same_map(&right) {
                    out.push(format!("compatibility square for {t} -> {t2} does not commute"));
                }
            }
        }
        out
    }

    pub fn same_as(&self, other: &Morphism) -> bool {
        *self.domain == *other.domain
            && *self.codomain == *other.codomain
            && self.matrix == other.matrix
            && self.offset == other.offset
            && Label::all(self.domain.rank()).all(|t| self.fiber_map(t).same_map(other.fiber_map(t)))
    }

    /// Exact isomorphism test: a permutation matrix without offset whose
    /// fiber maps are group isomorphisms with monoid-preserving inverses.
    pub fn is_isomorphism(&self) -> bool {
        if !self.matrix.is_permutation() || !self.offset.is_empty() || !self.structural_failures().is_empty() {
            return false;
        }
        Label::all(self.domain.rank()).all(|t| {
            let th = self.image_label(t);
            match self.fiber_map(t).inverse() {
                Some(inv) => self.codomain.fiber(th).maps_into(&inv, self.domain.fiber(t)),
                None => false,
            }
        })
    }
}

impl Morphism {
    /// The inverse of an isomorphism.
    pub fn inverse(&self) -> Option<Morphism> {
        if !self.is_isomorphism() {
            return None;
        }
        let n = self.domain.rank();
        let perm: Vec<usize> = (0..n)
            .map(|i| (0..n).find(|j| self.matrix.get(i, *j) == Fin(1)).expect("permutation"))
            .collect();
        let matrix = ExtMatrix::from_coordinate_map(&perm, n);
        let inv = Morphism::new(self.codomain.clone(), self.domain.clone(), matrix, Label::EMPTY, |t| {
            let source = Label::from_indices(t.iter().map(|i| perm[i]));
            self.fiber_map(source).inverse().expect("fiber isomorphism").matrix
        })
        .ok()?;
        Some(inv)
    }
}

/// Pointwise equality of two maps on a fragment of their common domain.
pub fn agree_on(f: &Morphism, g: &Morphism, frag: &Fragment) -> Option<Element> {
    frag.elements().par_iter().find_map_any(|a| (f.apply(a) != g.apply(a)).then(|| a.clone()))
}

/// Checks the morphism axioms on a fragment plus the exact structural
/// conditions.
pub fn validate_morphism(f: &Morphism, name: &str, bound: u64) -> Report {
    let d = &f.domain;
    let c = &f.codomain;
    let frag = Fragment::new(d, bound);
    let el = frag.elements();
    let mut r = Report::new();

    let structural = f.structural_failures();
    r.push(
        Verdict::new("compatibility squares", name, structural.is_empty())
            .with_witness(structural.first().cloned())
            .with_note("exact"),
    );

    let image_valid = el.par_iter().find_map_any(|a| (!c.is_element(&f.apply(a))).then(|| a.to_string()));
    r.push(Verdict::new("well defined", name, image_valid.is_none()).at_bound(bound).with_witness(image_valid));

    let f0 = f.apply(&d.zero());
    let neutral = if f.offset.is_empty() {
        f0 == c.zero()
    } else {
        // the image of 0 is the idempotent (∞ on the offset, 0), neutral on the image
        f0 == c.top_positive(f.offset) && el.iter().all(|a| c.add(&f0, &f.apply(a)) == f.apply(a))
    };
    let mut v = Verdict::new("neutral", name, neutral).at_bound(bound).with_witness((!neutral).then(|| f0.to_string()));
    if !f.offset.is_empty() {
        v = v.with_note("0 maps to a neutral idempotent of the image");
    }
    r.push(v);

    let additive = el.par_iter().find_map_any(|a| {
        el.iter().find(|b| f.apply(&d.add(a, b)) != c.add(&f.apply(a), &f.apply(b))).map(|b| format!("{a}, {b}"))
    });
    r.push(Verdict::new("additive", name, additive.is_none()).at_bound(bound).with_witness(additive));

    let monotone = el.par_iter().find_map_any(|a| {
        el.iter()
            .find(|b| d.leq(a, b) && !c.leq(&f.apply(a), &f.apply(b)))
            .map(|b| format!("{a} <= {b}"))
    });
    r.push(Verdict::new("monotone", name, monotone.is_none()).at_bound(bound).with_witness(monotone));

    if f.matrix.is_finite() && f.offset.is_empty() {
        let wb = el.par_iter().find_map_any(|a| {
            el.iter()
                .find(|b| d.way_below(a, b) && !c.way_below(&f.apply(a), &f.apply(b)))
                .map(|b| format!("{a} << {b}"))
        });
        r.push(Verdict::new("way-below preserved", name, wb.is_none()).at_bound(bound).with_witness(wb));
    } else {
        r.push(
            Verdict::new("way-below preserved", name, true)
                .at_bound(bound)
                .with_note("skipped: infinite entries make this a monotone monoid map only"),
        );
    }

    let sups = frag.chains(d.rank()).par_iter().find_map_any(|ch: &MonotoneChain| {
        let image = MonotoneChain { base: f.apply(&ch.base), direction: f.matrix.apply(&ch.direction) };
        let ok = (0..3).all(|j| f.apply(&d.chain_term(ch, j)) == c.chain_term(&image, j))
            && f.apply(&d.sup_chain(ch)) == c.sup_chain(&image);
        (!ok).then(|| format!("chain base {} direction {}", ch.base, ch.direction))
    });
    r.push(Verdict::new("sups preserved", name, sups.is_none()).at_bound(bound).with_witness(sups));
    r
}
