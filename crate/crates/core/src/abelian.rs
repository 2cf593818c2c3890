//! Finitely generated abelian groups `Zʳ ⊕ Z/t₁ ⊕ … ⊕ Z/tₛ`, their
//! homomorphisms, and the subgroup/quotient/preimage constructions needed by
//! the fiber systems.
//!
//! Elements are integer vectors of length `r + s` ("lifted coordinates");
//! torsion coordinates are kept reduced into `[0, tᵢ)` so equality is
//! syntactic.

use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{CuError, Result};
use crate::intmat::{IntMatrix, Smith};

pub type GroupElem = SmallVec<[i64; 4]>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FGAbelianGroup {
    free_rank: usize,
    torsion: Vec<i64>,
}

impl FGAbelianGroup {
    pub fn new(free_rank: usize, torsion: Vec<i64>) -> Result<Self> {
        if let Some(t) = torsion.iter().find(|t| **t < 2) {
            return Err(CuError::Invalid(format!("torsion order {t} must be at least 2")));
        }
        Ok(FGAbelianGroup { free_rank, torsion })
    }

    pub fn trivial() -> Self {
        FGAbelianGroup { free_rank: 0, torsion: vec![] }
    }

    pub fn free(rank: usize) -> Self {
        FGAbelianGroup { free_rank: rank, torsion: vec![] }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[i64] {
        &self.torsion
    }

    pub fn dim(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.dim() == 0
    }

    pub fn zero(&self) -> GroupElem {
        SmallVec::from_elem(0, self.dim())
    }

    pub fn reduce(&self, v: &mut [i64]) {
        for (i, t) in self.torsion.iter().enumerate() {
            let c = &mut v[self.free_rank + i];
            *c = c.rem_euclid(*t);
        }
    }

    pub fn reduced(&self, v: &[i64]) -> GroupElem {
        let mut out = GroupElem::from_slice(v);
        self.reduce(&mut out);
        out
    }

    /// Whether `v` is a canonical element of this group.
    pub fn contains(&self, v: &[i64]) -> bool {
        v.len() == self.dim()
            && self
                .torsion
                .iter()
                .enumerate()
                .all(|(i, t)| (0..*t).contains(&v[self.free_rank + i]))
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> GroupElem {
        let mut out: GroupElem = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.reduce(&mut out);
        out
    }

    pub fn neg(&self, a: &[i64]) -> GroupElem {
        let mut out: GroupElem = a.iter().map(|x| -x).collect();
        self.reduce(&mut out);
        out
    }

    pub fn sub(&self, a: &[i64], b: &[i64]) -> GroupElem {
        let mut out: GroupElem = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.reduce(&mut out);
        out
    }

    pub fn is_zero(&self, a: &[i64]) -> bool {
        let mut v = GroupElem::from_slice(a);
        self.reduce(&mut v);
        v.iter().all(|x| *x == 0)
    }

    /// Standard generators `e₁ … e_{r+s}`.
    pub fn generators(&self) -> Vec<Vec<i64>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| i64::from(i == j)).collect())
            .collect()
    }

    /// The relation lattice `⊕ tᵢ·e_{r+i}` as matrix columns.
    pub fn relations(&self) -> IntMatrix {
        let cols: Vec<Vec<i64>> = self
            .torsion
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let mut c = vec![0; self.dim()];
                c[self.free_rank + i] = *t;
                c
            })
            .collect();
        IntMatrix::from_columns(&cols, self.dim())
    }

    /// Every element with free coordinates in `[-bound, bound]`.
    pub fn box_elements(&self, bound: i64) -> Vec<GroupElem> {
        let mut out = vec![GroupElem::new()];
        for _ in 0..self.free_rank {
            out = out
                .into_iter()
                .flat_map(|p| {
                    (-bound..=bound).map(move |v| {
                        let mut q = p.clone();
                        q.push(v);
                        q
                    })
                })
                .collect();
        }
        for t in &self.torsion {
            out = out
                .into_iter()
                .flat_map(|p| {
                    (0..*t).map(move |v| {
                        let mut q = p.clone();
                        q.push(v);
                        q
                    })
                })
                .collect();
        }
        out
    }
}

impl fmt::Display for FGAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z^{}", self.free_rank)?;
        for t in &self.torsion {
            write!(f, " x Z/{t}")?;
        }
        Ok(())
    }
}

/// A homomorphism given by an integer matrix on lifted coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupHom {
    pub source: FGAbelianGroup,
    pub target: FGAbelianGroup,
    pub matrix: IntMatrix,
}

impl GroupHom {
    pub fn new(source: FGAbelianGroup, target: FGAbelianGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(CuError::Invalid(format!(
                "matrix is {}x{} but a map {source} -> {target} needs {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.dim(),
                source.dim()
            )));
        }
        let hom = GroupHom { source, target, matrix };
        if let Some(j) = hom.ill_defined_torsion_column() {
            return Err(CuError::Invalid(format!(
                "matrix does not respect the torsion order of generator {} of {}",
                j + 1,
                hom.source
            )));
        }
        Ok(hom)
    }

    pub fn identity(g: &FGAbelianGroup) -> Self {
        GroupHom { source: g.clone(), target: g.clone(), matrix: IntMatrix::identity(g.dim()) }
    }

    pub fn zero(source: &FGAbelianGroup, target: &FGAbelianGroup) -> Self {
        GroupHom {
            source: source.clone(),
            target: target.clone(),
            matrix: IntMatrix::zeros(target.dim(), source.dim()),
        }
    }

    fn ill_defined_torsion_column(&self) -> Option<usize> {
        let r = self.source.free_rank();
        self.source.torsion().iter().enumerate().find_map(|(i, t)| {
            let col: Vec<i64> = self.matrix.column(r + i).iter().map(|x| x * t).collect();
            (!self.target.is_zero(&col)).then_some(r + i)
        })
    }

    pub fn apply(&self, v: &[i64]) -> GroupElem {
        let mut out: GroupElem = self.matrix.apply(v).into_iter().collect();
        self.target.reduce(&mut out);
        out
    }

    /// `after ∘ self`.
    pub fn then(&self, after: &GroupHom) -> GroupHom {
        assert_eq!(self.target, after.source, "composing incompatible homomorphisms");
        GroupHom {
            source: self.source.clone(),
            target: after.target.clone(),
            matrix: after.matrix.mul(&self.matrix),
        }
    }

    /// Equality as maps (matrices may differ by multiples of torsion orders).
    pub fn same_map(&self, other: &GroupHom) -> bool {
        self.source == other.source
            && self.target == other.target
            && self
                .source
                .generators()
                .iter()
                .all(|g| self.apply(g) == other.apply(g))
    }

    pub fn is_zero(&self) -> bool {
        self.source.generators().iter().all(|g| self.target.is_zero(&self.apply(g)))
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.same_map(&GroupHom::identity(&self.source))
    }

    pub fn solver(&self) -> HomSolver {
        HomSolver::new(&self.matrix, &self.source, &self.target)
    }

    pub fn is_surjective(&self) -> bool {
        let s = self.solver();
        self.target.generators().iter().all(|g| s.solve(g).is_some())
    }

    pub fn is_injective(&self) -> bool {
        kernel(self).group.is_trivial()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_surjective() && self.is_injective()
    }

    /// The inverse map of an isomorphism.
    pub fn inverse(&self) -> Option<GroupHom> {
        if !self.is_isomorphism() {
            return None;
        }
        let s = self.solver();
        let cols: Vec<Vec<i64>> = self
            .target
            .generators()
            .iter()
            .map(|g| s.solve(g).expect("surjective").to_vec())
            .collect();
        Some(GroupHom {
            source: self.target.clone(),
            target: self.source.clone(),
            matrix: IntMatrix::from_columns(&cols, self.source.dim()),
        })
    }
}

/// Solves `A k = d` in a target group for `k` in a source group.
#[derive(Clone, Debug)]
pub struct HomSolver {
    smith: Smith,
    source: FGAbelianGroup,
    target: FGAbelianGroup,
}

impl HomSolver {
    pub fn new(matrix: &IntMatrix, source: &FGAbelianGroup, target: &FGAbelianGroup) -> Self {
        let combined = matrix.hcat(&target.relations());
        HomSolver { smith: Smith::new(&combined), source: source.clone(), target: target.clone() }
    }

    /// Tests membership in the subgroup generated by `gens`.
    pub fn for_subgroup(group: &FGAbelianGroup, gens: &[Vec<i64>]) -> Self {
        let m = IntMatrix::from_columns(gens, group.dim());
        HomSolver::new(&m, &FGAbelianGroup::free(gens.len()), group)
    }

    pub fn solve(&self, d: &[i64]) -> Option<GroupElem> {
        let mut rhs = d.to_vec();
        self.target.reduce(&mut rhs);
        let z = self.smith.solve(&rhs)?;
        let mut k: GroupElem = z[..self.source.dim()].iter().copied().collect();
        self.source.reduce(&mut k);
        Some(k)
    }
}

/// A subgroup given abstractly, with its embedding into the ambient group.
#[derive(Clone, Debug)]
pub struct Presented {
    pub group: FGAbelianGroup,
    pub embed: GroupHom,
    coords: HomSolver,
}

impl Presented {
    /// Coordinates of an ambient element lying in the subgroup.
    pub fn coordinates(&self, v: &[i64]) -> Option<GroupElem> {
        self.coords.solve(v)
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.coordinates(v).is_some()
    }
}

/// Presents the subgroup of `ambient` generated by `gens`.
pub fn present_subgroup(ambient: &FGAbelianGroup, gens: &[Vec<i64>]) -> Presented {
    let n = ambient.dim();
    let lattice = IntMatrix::from_columns(gens, n).hcat(&ambient.relations());
    let basis_cols = Smith::new(&lattice).image_basis();
    let basis = IntMatrix::from_columns(&basis_cols, n);
    let r = basis_cols.len();

    // relations of the ambient group written in the basis
    let bs = Smith::new(&basis);
    let rel = ambient.relations();
    let rel_cols: Vec<Vec<i64>> = (0..rel.cols())
        .map(|j| bs.solve(&rel.column(j)).expect("relations lie in the generated lattice"))
        .collect();
    let rel_in_basis = IntMatrix::from_columns(&rel_cols, r);

    let rs = Smith::new(&rel_in_basis);
    let mut free_idx = vec![];
    let mut tors_idx = vec![];
    for i in 0..r {
        let d = if i < rs.rank { rs.diag[i] } else { 0 };
        match d {
            0 => free_idx.push(i),
            1 => {}
            _ => tors_idx.push((i, d)),
        }
    }
    let group = FGAbelianGroup {
        free_rank: free_idx.len(),
        torsion: tors_idx.iter().map(|(_, d)| *d).collect(),
    };
    let order: Vec<usize> = free_idx.iter().copied().chain(tors_idx.iter().map(|(i, _)| *i)).collect();
    let embed_matrix = basis.mul(&rs.u_inv.select_columns(&order));
    let embed = GroupHom { source: group.clone(), target: ambient.clone(), matrix: embed_matrix };
    let coords = embed.solver();
    Presented { group, embed, coords }
}

/// `G / ⟨gens⟩` with its projection and a set-theoretic section.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: FGAbelianGroup,
    pub projection: GroupHom,
    /// Columns lift each quotient generator back to the ambient group.
    pub section: IntMatrix,
}

impl Quotient {
    pub fn lift(&self, q: &[i64]) -> Vec<i64> {
        self.section.apply(q)
    }
}

pub fn quotient_group(ambient: &FGAbelianGroup, gens: &[Vec<i64>]) -> Quotient {
    let n = ambient.dim();
    let lattice = IntMatrix::from_columns(gens, n).hcat(&ambient.relations());
    let s = Smith::new(&lattice);
    let mut free_idx = vec![];
    let mut tors_idx = vec![];
    for i in 0..n {
        let d = if i < s.rank { s.diag[i] } else { 0 };
        match d {
            0 => free_idx.push(i),
            1 => {}
            _ => tors_idx.push((i, d)),
        }
    }
    let group = FGAbelianGroup {
        free_rank: free_idx.len(),
        torsion: tors_idx.iter().map(|(_, d)| *d).collect(),
    };
    let order: Vec<usize> = free_idx.iter().copied().chain(tors_idx.iter().map(|(i, _)| *i)).collect();
    let projection = GroupHom { source: ambient.clone(), target: group.clone(), matrix: s.u.select_rows(&order) };
    let section = s.u_inv.select_columns(&order);
    Quotient { group, projection, section }
}

/// Generators (lifted) of `{k ∈ G : A k ∈ ⟨targets⟩}`.
pub fn preimage(hom: &GroupHom, targets: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let h = &hom.target;
    let w = IntMatrix::from_columns(targets, h.dim());
    let combined = hom.matrix.hcat(&w.negated()).hcat(&h.relations().negated());
    let ker = Smith::new(&combined).kernel_basis();
    ker.into_iter().map(|v| v[..hom.source.dim()].to_vec()).collect()
}

pub fn kernel(hom: &GroupHom) -> Presented {
    present_subgroup(&hom.source, &preimage(hom, &[]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> FGAbelianGroup {
        FGAbelianGroup::free(1)
    }

    #[test]
    fn torsion_reduction_is_canonical() {
        let g = FGAbelianGroup::new(1, vec![3]).unwrap();
        assert_eq!(g.add(&[1, 2], &[4, 2]).to_vec(), vec![5, 1]);
        assert_eq!(g.neg(&[2, 1]).to_vec(), vec![-2, 2]);
        assert!(g.contains(&[-7, 2]));
        assert!(!g.contains(&[0, 3]));
        assert!(FGAbelianGroup::new(0, vec![1]).is_err());
    }

    #[test]
    fn ill_defined_map_from_torsion_is_rejected() {
        let z2 = FGAbelianGroup::new(0, vec![2]).unwrap();
        assert!(GroupHom::new(z2.clone(), z(), IntMatrix::from_rows(&[vec![1]], 1)).is_err());
        let z4 = FGAbelianGroup::new(0, vec![4]).unwrap();
        assert!(GroupHom::new(z2, z4, IntMatrix::from_rows(&[vec![2]], 1)).is_ok());
    }

    #[test]
    fn quotient_of_z_by_two_z() {
        let q = quotient_group(&z(), &[vec![2]]);
        assert_eq!(q.group, FGAbelianGroup::new(0, vec![2]).unwrap());
        assert_eq!(q.projection.apply(&[3]).to_vec(), vec![1]);
        assert_eq!(q.projection.apply(&q.lift(&[1])).to_vec(), vec![1]);
    }

    #[test]
    fn quotient_by_everything_is_trivial() {
        let g = FGAbelianGroup::new(2, vec![2]).unwrap();
        let q = quotient_group(&g, &g.generators());
        assert!(q.group.is_trivial());
    }

    #[test]
    fn subgroup_of_z2_by_torsion() {
        // <(2,0)> + relations inside Z ⊕ Z/4 generated by (1,2)
        let g = FGAbelianGroup::new(1, vec![4]).unwrap();
        let p = present_subgroup(&g, &[vec![1, 2]]);
        // (1,2) has infinite order, 2*(1,2) = (2,0)
        assert_eq!(p.group.free_rank(), 1);
        assert!(p.contains(&[2, 0]));
        assert!(!p.contains(&[1, 0]));
        let x = p.coordinates(&[3, 2]).unwrap();
        assert_eq!(p.embed.apply(&x).to_vec(), vec![3, 2]);
    }

    #[test]
    fn torsion_subgroup_presentation() {
        let g = FGAbelianGroup::new(1, vec![6]).unwrap();
        let p = present_subgroup(&g, &[vec![0, 2]]);
        assert_eq!(p.group, FGAbelianGroup::new(0, vec![3]).unwrap());
    }

    #[test]
    fn kernel_and_isomorphism() {
        let g = FGAbelianGroup::new(1, vec![2]).unwrap();
        // (a, t) -> (a, a + t)
        let auto = GroupHom::new(g.clone(), g.clone(), IntMatrix::from_rows(&[vec![1, 0], vec![1, 1]], 2)).unwrap();
        assert!(auto.is_isomorphism());
        let inv = auto.inverse().unwrap();
        assert!(auto.then(&inv).is_identity());
        let double = GroupHom::new(z(), z(), IntMatrix::from_rows(&[vec![2]], 1)).unwrap();
        assert!(double.is_injective());
        assert!(!double.is_surjective());
        let proj = GroupHom::new(g.clone(), z(), IntMatrix::from_rows(&[vec![1, 0]], 2)).unwrap();
        assert_eq!(kernel(&proj).group, FGAbelianGroup::new(0, vec![2]).unwrap());
    }

    #[test]
    fn preimage_of_subgroup() {
        let double = GroupHom::new(z(), z(), IntMatrix::from_rows(&[vec![2]], 1)).unwrap();
        let pre = preimage(&double, &[vec![4]]);
        let p = present_subgroup(&z(), &pre);
        assert!(p.contains(&[2]));
        assert!(!p.contains(&[1]));
    }
}
