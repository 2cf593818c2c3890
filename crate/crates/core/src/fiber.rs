//! Fiber monoids and the label-indexed δ-systems connecting them.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::abelian::{FGAbelianGroup, GroupElem, GroupHom, HomSolver};
use crate::error::{CuError, Result};
use crate::intmat::{IntMatrix, Smith};
use crate::label::{Label, MAX_RANK};
use crate::polyhedral;

/// Which part of the fiber group belongs to the monoid.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Shape {
    /// Only the neutral element.
    Zero,
    /// The whole group.
    Full,
    /// Free part `v` with `F v ≥ 0` (rows of `F` are functionals), torsion
    /// part unconstrained.
    Cone(IntMatrix),
}

/// A submonoid of a finitely generated abelian group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiberMonoid {
    pub group: FGAbelianGroup,
    pub shape: Shape,
}

impl FiberMonoid {
    pub fn zero(group: FGAbelianGroup) -> Self {
        FiberMonoid { group, shape: Shape::Zero }
    }

    pub fn full(group: FGAbelianGroup) -> Self {
        FiberMonoid { group, shape: Shape::Full }
    }

    pub fn cone(group: FGAbelianGroup, functionals: IntMatrix) -> Result<Self> {
        if functionals.cols() != group.free_rank() {
            return Err(CuError::Invalid(format!(
                "cone functionals have {} coefficients but the free rank is {}",
                functionals.cols(),
                group.free_rank()
            )));
        }
        Ok(FiberMonoid { group, shape: Shape::Cone(functionals) })
    }

    pub fn trivial() -> Self {
        FiberMonoid::zero(FGAbelianGroup::trivial())
    }

    pub fn is_trivial(&self) -> bool {
        self.group.is_trivial()
    }

    pub fn contains(&self, k: &[i64]) -> bool {
        if !self.group.contains(k) {
            return false;
        }
        match &self.shape {
            Shape::Zero => k.iter().all(|c| *c == 0),
            Shape::Full => true,
            Shape::Cone(f) => {
                let free = &k[..self.group.free_rank()];
                f.apply(free).iter().all(|v| *v >= 0)
            }
        }
    }

    /// Whether `M = −M`.
    pub fn is_group(&self) -> bool {
        match &self.shape {
            Shape::Zero | Shape::Full => true,
            Shape::Cone(f) => polyhedral::implicit_equalities(f).len() == f.rows(),
        }
    }

    fn torsion_generators(&self) -> Vec<Vec<i64>> {
        self.group.generators().split_off(self.group.free_rank())
    }

    fn pad_free(&self, v: Vec<i64>) -> Vec<i64> {
        let mut v = v;
        v.resize(self.group.dim(), 0);
        v
    }

    /// Generators of `units(M) = M ∩ (−M)`.
    pub fn unit_generators(&self) -> Vec<Vec<i64>> {
        match &self.shape {
            Shape::Zero => vec![],
            Shape::Full => self.group.generators(),
            Shape::Cone(f) => {
                let mut gens: Vec<Vec<i64>> =
                    Smith::new(f).kernel_basis().into_iter().map(|v| self.pad_free(v)).collect();
                gens.extend(self.torsion_generators());
                gens
            }
        }
    }

    /// Generators of the subgroup generated by `M`.
    pub fn span_generators(&self) -> Vec<Vec<i64>> {
        match &self.shape {
            Shape::Zero => vec![],
            Shape::Full => self.group.generators(),
            Shape::Cone(f) => {
                let eq = f.select_rows(&polyhedral::implicit_equalities(f));
                let mut gens: Vec<Vec<i64>> =
                    Smith::new(&eq).kernel_basis().into_iter().map(|v| self.pad_free(v)).collect();
                gens.extend(self.torsion_generators());
                gens
            }
        }
    }

    /// Members whose free coordinates lie in `[-bound, bound]`.
    pub fn box_members(&self, bound: i64) -> Vec<GroupElem> {
        match self.shape {
            Shape::Zero => vec![self.group.zero()],
            _ => self.group.box_elements(bound).into_iter().filter(|k| self.contains(k)).collect(),
        }
    }

    /// Whether `hom` maps this monoid into `target`.
    pub fn maps_into(&self, hom: &GroupHom, target: &FiberMonoid) -> bool {
        match (&self.shape, &target.shape) {
            (Shape::Zero, _) | (_, Shape::Full) => true,
            (_, Shape::Zero) => self.span_generators().iter().all(|g| hom.target.is_zero(&hom.apply(g))),
            (source, Shape::Cone(ft)) => {
                let r_src = self.group.free_rank();
                let r_tgt = target.group.free_rank();
                // functionals of the target pulled back to the free part of the source
                let free_block = IntMatrix::from_rows(
                    &(0..r_tgt).map(|i| hom.matrix.row(i)[..r_src].to_vec()).collect::<Vec<_>>(),
                    r_src,
                );
                let pulled = ft.mul(&free_block);
                match source {
                    Shape::Full => pulled.is_zero(),
                    Shape::Cone(fs) => {
                        (0..pulled.rows()).all(|i| polyhedral::nonnegative_on_cone(fs, pulled.row(i)))
                    }
                    Shape::Zero => true,
                }
            }
        }
    }
}

impl fmt::Display for FiberMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.shape {
            Shape::Zero if self.group.is_trivial() => f.write_str("zero"),
            Shape::Zero => write!(f, "zero in {}", self.group),
            Shape::Full => write!(f, "full {}", self.group),
            Shape::Cone(m) => {
                write!(f, "cone {} [", self.group)?;
                for i in 0..m.rows() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    let row: Vec<String> = m.row(i).iter().map(|c| c.to_string()).collect();
                    write!(f, "({}) >= 0", row.join(","))?;
                }
                f.write_str("]")
            }
        }
    }
}

/// Fibers indexed by the `2ⁿ` labels together with every connecting map
/// `δ_{T,T′}` for `T ⊆ T′`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberSystem {
    rank: usize,
    fibers: Vec<FiberMonoid>,
    deltas: HashMap<(Label, Label), GroupHom>,
}

/// How connecting maps missing from a specification are filled in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeltaDefault {
    Zero,
    /// Identity whenever source and target groups coincide, zero otherwise.
    IdentityWhereShapesAgree,
}

impl FiberSystem {
    /// Builds a system from fibers and a partial set of connecting maps.
    ///
    /// A missing `δ_{T,T′}` is obtained by composing through an intermediate
    /// label when both legs are known, and otherwise from `default`. The
    /// result is validated.
    pub fn build(
        rank: usize,
        fibers: Vec<FiberMonoid>,
        given: HashMap<(Label, Label), IntMatrix>,
        default: DeltaDefault,
    ) -> Result<Self> {
        if rank > MAX_RANK {
            return Err(CuError::Invalid(format!("rank {rank} exceeds the supported maximum {MAX_RANK}")));
        }
        if fibers.len() != 1 << rank {
            return Err(CuError::Invalid(format!("expected {} fibers, found {}", 1 << rank, fibers.len())));
        }
        let mut deltas = HashMap::new();
        for ((t, t2), m) in given {
            if !t.is_subset(t2) || !t2.is_subset(Label::full(rank)) {
                return Err(CuError::Invalid(format!("delta {t} -> {t2} is not between nested labels")));
            }
            let hom = GroupHom::new(fibers[t.0 as usize].group.clone(), fibers[t2.0 as usize].group.clone(), m)
                .map_err(|e| CuError::Invalid(format!("delta {t} -> {t2}: {e}")))?;
            deltas.insert((t, t2), hom);
        }
        for t in Label::all(rank) {
            let g = &fibers[t.0 as usize].group;
            match deltas.get(&(t, t)) {
                Some(d) if !d.is_identity() => {
                    return Err(CuError::Invalid(format!("delta {t} -> {t} must be the identity")));
                }
                Some(_) => {}
                None => {
                    deltas.insert((t, t), GroupHom::identity(g));
                }
            }
        }
        let mut pairs: Vec<(Label, Label)> = Label::all(rank)
            .flat_map(|t| t.supersets_within(Label::full(rank)).into_iter().map(move |u| (t, u)))
            .filter(|(t, u)| t != u)
            .collect();
        pairs.sort_by_key(|(t, u)| (u.len() - t.len(), t.0, u.0));
        for (t, u) in pairs {
            if deltas.contains_key(&(t, u)) {
                continue;
            }
            let via = t
                .supersets_within(u)
                .into_iter()
                .filter(|m| *m != t && *m != u)
                .find(|m| deltas.contains_key(&(t, *m)) && deltas.contains_key(&(*m, u)));
            let src = &fibers[t.0 as usize].group;
            let dst = &fibers[u.0 as usize].group;
            let hom = match via {
                Some(m) => deltas[&(t, m)].then(&deltas[&(m, u)]),
                None if default == DeltaDefault::IdentityWhereShapesAgree && src == dst => GroupHom::identity(src),
                None => GroupHom::zero(src, dst),
            };
            deltas.insert((t, u), hom);
        }
        let sys = FiberSystem { rank, fibers, deltas };
        sys.validate()?;
        Ok(sys)
    }

    /// Builds a system from a closure producing every connecting map.
    pub fn from_fn(
        rank: usize,
        fibers: Vec<FiberMonoid>,
        mut delta: impl FnMut(Label, Label) -> IntMatrix,
    ) -> Result<Self> {
        let mut given = HashMap::new();
        for t in Label::all(rank) {
            for u in t.supersets_within(Label::full(rank)) {
                given.insert((t, u), delta(t, u));
            }
        }
        FiberSystem::build(rank, fibers, given, DeltaDefault::Zero)
    }

    /// All fibers trivial.
    pub fn trivial(rank: usize) -> Self {
        let fibers = vec![FiberMonoid::trivial(); 1 << rank];
        FiberSystem::from_fn(rank, fibers, |_, _| IntMatrix::zeros(0, 0)).expect("trivial system is valid")
    }

    fn validate(&self) -> Result<()> {
        for ((t, u), d) in &self.deltas {
            if !self.fiber(*t).maps_into(d, self.fiber(*u)) {
                return Err(CuError::Invalid(format!(
                    "delta {t} -> {u} does not map the fiber monoid at {t} into the one at {u}"
                )));
            }
        }
        let full = Label::full(self.rank);
        for t in Label::all(self.rank) {
            for u in t.supersets_within(full) {
                for w in u.supersets_within(full) {
                    let composed = self.delta(t, u).then(self.delta(u, w));
                    if !composed.same_map(self.delta(t, w)) {
                        return Err(CuError::Invalid(format!(
                            "deltas are not functorial along {t} -> {u} -> {w}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn fiber(&self, t: Label) -> &FiberMonoid {
        &self.fibers[t.0 as usize]
    }

    pub fn fibers(&self) -> &[FiberMonoid] {
        &self.fibers
    }

    pub fn delta(&self, t: Label, u: Label) -> &GroupHom {
        self.deltas
            .get(&(t, u))
            .unwrap_or_else(|| panic!("no connecting map {t} -> {u}"))
    }

    pub fn push(&self, k: &[i64], t: Label, u: Label) -> GroupElem {
        if t == u {
            return GroupElem::from_slice(k);
        }
        self.delta(t, u).apply(k)
    }

    /// Solver for `δ_{t,u}(k) = d` with `k` ranging over the group at `t`.
    pub fn delta_solver(&self, t: Label, u: Label) -> HomSolver {
        self.delta(t, u).solver()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> FGAbelianGroup {
        FGAbelianGroup::free(1)
    }

    fn half_line() -> FiberMonoid {
        FiberMonoid::cone(z(), IntMatrix::from_rows(&[vec![1]], 1)).unwrap()
    }

    #[test]
    fn membership_by_shape() {
        assert!(half_line().contains(&[3]));
        assert!(!half_line().contains(&[-1]));
        assert!(FiberMonoid::full(z()).contains(&[-5]));
        assert!(!FiberMonoid::zero(z()).contains(&[1]));
        assert!(!half_line().is_group());
        let line = FiberMonoid::cone(z(), IntMatrix::from_rows(&[vec![1], vec![-1]], 1)).unwrap();
        assert!(line.is_group());
        assert!(line.unit_generators().is_empty());
    }

    #[test]
    fn units_and_span_of_half_plane() {
        let g = FGAbelianGroup::free(2);
        let m = FiberMonoid::cone(g, IntMatrix::from_rows(&[vec![1, 0]], 2)).unwrap();
        assert_eq!(m.unit_generators().len(), 1);
        assert_eq!(m.unit_generators()[0][0], 0);
        assert_eq!(m.span_generators().len(), 2);
    }

    #[test]
    fn maps_into_checks_cone_pullback() {
        let id = GroupHom::identity(&z());
        let neg = GroupHom::new(z(), z(), IntMatrix::from_rows(&[vec![-1]], 1)).unwrap();
        assert!(half_line().maps_into(&id, &half_line()));
        assert!(!half_line().maps_into(&neg, &half_line()));
        assert!(!FiberMonoid::full(z()).maps_into(&id, &half_line()));
        assert!(half_line().maps_into(&id, &FiberMonoid::full(z())));
    }

    #[test]
    fn missing_deltas_compose_through_intermediates() {
        let fibers = vec![
            FiberMonoid::trivial(),
            FiberMonoid::full(z()),
            FiberMonoid::full(z()),
            FiberMonoid::full(z()),
        ];
        let mut given = HashMap::new();
        given.insert((Label(1), Label(3)), IntMatrix::from_rows(&[vec![2]], 1));
        let sys = FiberSystem::build(2, fibers, given, DeltaDefault::IdentityWhereShapesAgree).unwrap();
        assert_eq!(sys.push(&[1], Label(1), Label(3)).to_vec(), vec![2]);
        assert_eq!(sys.push(&[1], Label(2), Label(3)).to_vec(), vec![1]);
    }

    #[test]
    fn non_functorial_system_is_rejected() {
        let fibers = vec![FiberMonoid::full(z()); 4];
        let mut given = HashMap::new();
        given.insert((Label(0), Label(1)), IntMatrix::from_rows(&[vec![1]], 1));
        given.insert((Label(1), Label(3)), IntMatrix::from_rows(&[vec![1]], 1));
        given.insert((Label(0), Label(3)), IntMatrix::from_rows(&[vec![2]], 1));
        let err = FiberSystem::build(2, fibers, given, DeltaDefault::Zero).unwrap_err();
        assert!(err.to_string().contains("functorial"), "{err}");
    }

    #[test]
    fn delta_must_respect_monoids() {
        let fibers = vec![FiberMonoid::trivial(), FiberMonoid::full(z()), half_line(), FiberMonoid::full(z())];
        let mut given = HashMap::new();
        given.insert((Label(1), Label(3)), IntMatrix::from_rows(&[vec![1]], 1));
        // a full fiber may map into a full top fiber but not into a half-line
        assert!(FiberSystem::build(2, fibers.clone(), given.clone(), DeltaDefault::Zero).is_ok());
        let mut bad = fibers;
        bad[3] = half_line();
        assert!(FiberSystem::build(2, bad, given, DeltaDefault::Zero).is_err());
    }
}
