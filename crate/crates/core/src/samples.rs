//! Ready-made fibered semigroups used by the gallery and the test suites.

use std::collections::HashMap;
use std::sync::Arc;

use crate::abelian::FGAbelianGroup;
use crate::fiber::{DeltaDefault, FiberMonoid, FiberSystem};
use crate::intmat::IntMatrix;
use crate::label::Label;
use crate::morphism::{ExtMatrix, Morphism};
use crate::semigroup::FiberedSemigroup;

fn z(r: usize) -> FGAbelianGroup {
    FGAbelianGroup::free(r)
}

fn matrix(rows: &[&[i64]]) -> IntMatrix {
    let cols = rows.first().map_or(0, |r| r.len());
    IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>(), cols)
}

fn labels(idx: &[usize]) -> Label {
    Label::from_indices(idx.iter().map(|i| i - 1))
}

fn build(rank: usize, fibers: Vec<FiberMonoid>, deltas: &[(&[usize], &[usize], IntMatrix)]) -> FiberedSemigroup {
    let given: HashMap<_, _> = deltas.iter().map(|(a, b, m)| ((labels(a), labels(b)), m.clone())).collect();
    let sys = FiberSystem::build(rank, fibers, given, DeltaDefault::IdentityWhereShapesAgree)
        .expect("sample systems are valid");
    FiberedSemigroup::new(sys)
}

/// `S ⊆ N̄³ × Z`: fiber `Z` everywhere except `k ≥ 0` over `{2}` and `k = 0`
/// over the empty label; all connecting maps are identities.
pub fn counterexample() -> FiberedSemigroup {
    let mut fibers = vec![FiberMonoid::full(z(1)); 8];
    fibers[0] = FiberMonoid::trivial();
    fibers[labels(&[2]).0 as usize] =
        FiberMonoid::cone(z(1), matrix(&[&[1]])).expect("half line");
    build(3, fibers, &[])
}

/// `N̄` with fiber `Z` over `{1}`.
pub fn circle() -> FiberedSemigroup {
    build(1, vec![FiberMonoid::trivial(), FiberMonoid::full(z(1))], &[])
}

/// `N̄` with fiber `N` over `{1}`; not positively directed.
pub fn positive_line() -> FiberedSemigroup {
    let cone = FiberMonoid::cone(z(1), matrix(&[&[1]])).expect("half line");
    build(1, vec![FiberMonoid::trivial(), cone], &[])
}

/// Rank 2 with `Z/2` over `{1}`, `Z` over `{2}` and `Z ⊕ Z/2` on top.
pub fn torsion_pair() -> FiberedSemigroup {
    let z2 = FGAbelianGroup::new(0, vec![2]).expect("valid");
    let top = FGAbelianGroup::new(1, vec![2]).expect("valid");
    let fibers = vec![
        FiberMonoid::trivial(),
        FiberMonoid::full(z2),
        FiberMonoid::full(z(1)),
        FiberMonoid::full(top),
    ];
    build(2, fibers, &[(&[1], &[1, 2], matrix(&[&[0], &[1]])), (&[2], &[1, 2], matrix(&[&[1], &[0]]))])
}

/// Rank 2 with `Z` over `{1}`, a half plane over `{2}` and `Z²` on top.
pub fn half_plane() -> FiberedSemigroup {
    let fibers = vec![
        FiberMonoid::trivial(),
        FiberMonoid::full(z(1)),
        FiberMonoid::cone(z(2), matrix(&[&[1, 0]])).expect("half plane"),
        FiberMonoid::full(z(2)),
    ];
    build(2, fibers, &[(&[1], &[1, 2], matrix(&[&[1], &[0]]))])
}

/// Rank 2 with fiber `Z` everywhere and `δ_{{1},{1,2}}` multiplication by 2.
pub fn double_cover() -> FiberedSemigroup {
    let mut fibers = vec![FiberMonoid::full(z(1)); 4];
    fibers[0] = FiberMonoid::trivial();
    build(2, fibers, &[(&[1], &[1, 2], matrix(&[&[2]]))])
}

/// The automorphism of [`counterexample`] swapping coordinates 1 and 3 with
/// identity fiber maps.
pub fn counterexample_swap(s: &Arc<FiberedSemigroup>) -> Morphism {
    Morphism::checked(s.clone(), s.clone(), ExtMatrix::from_coordinate_map(&[2, 1, 0], 3), Label::EMPTY, |t| {
        IntMatrix::identity(s.group(t).dim())
    })
    .expect("swap is a morphism")
}

/// The automorphism of [`circle`] negating the fiber.
pub fn circle_flip(s: &Arc<FiberedSemigroup>) -> Morphism {
    Morphism::checked(s.clone(), s.clone(), ExtMatrix::identity(1), Label::EMPTY, |t| {
        IntMatrix::from_rows(&vec![vec![-1]; t.len()], t.len())
    })
    .expect("negation is a morphism")
}
