//! Rational feasibility of small systems of linear inequalities by
//! Fourier–Motzkin elimination, and the cone queries built on it.
//!
//! A cone is `{v ∈ Zʳ : F v ≥ 0}` for an integer matrix `F` of functionals.
//! Because cones are homogeneous, a strict or shifted inequality is feasible
//! over the rationals iff it is feasible over the integers (scale the
//! solution), so rational elimination decides the integer questions asked
//! here.

use crate::intmat::IntMatrix;

/// `coeffs · v ≥ rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ineq {
    pub coeffs: Vec<i128>,
    pub rhs: i128,
}

impl Ineq {
    pub fn new(coeffs: &[i64], rhs: i64) -> Self {
        Ineq { coeffs: coeffs.iter().map(|c| *c as i128).collect(), rhs: rhs as i128 }
    }

    fn normalized(mut self) -> Self {
        let g = self.coeffs.iter().chain(std::iter::once(&self.rhs)).fold(0i128, |g, c| gcd(g, *c));
        if g > 1 {
            self.coeffs.iter_mut().for_each(|c| *c /= g);
            self.rhs /= g;
        }
        self
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Whether some rational `v` satisfies every inequality.
pub fn feasible(system: &[Ineq]) -> bool {
    let Some(dim) = system.first().map(|i| i.coeffs.len()) else { return true };
    let mut rows: Vec<Ineq> = system.iter().cloned().map(Ineq::normalized).collect();
    for var in 0..dim {
        let (mut pos, mut neg, mut rest) = (vec![], vec![], vec![]);
        for r in rows {
            match r.coeffs[var].signum() {
                1 => pos.push(r),
                -1 => neg.push(r),
                _ => rest.push(r),
            }
        }
        for p in &pos {
            for n in &neg {
                let (a, b) = (p.coeffs[var], -n.coeffs[var]);
                let coeffs = p.coeffs.iter().zip(&n.coeffs).map(|(x, y)| b * x + a * y).collect();
                rest.push(Ineq { coeffs, rhs: b * p.rhs + a * n.rhs }.normalized());
            }
        }
        rest.sort_by(|x, y| x.coeffs.cmp(&y.coeffs).then(y.rhs.cmp(&x.rhs)));
        // among rows with equal coefficients only the largest right-hand side matters
        rest.dedup_by(|later, earlier| later.coeffs == earlier.coeffs);
        rows = rest;
        if rows.iter().any(|r| r.coeffs.iter().all(|c| *c == 0) && r.rhs > 0) {
            return false;
        }
    }
    rows.iter().all(|r| r.rhs <= 0)
}

fn cone_rows(functionals: &IntMatrix) -> Vec<Ineq> {
    (0..functionals.rows()).map(|i| Ineq::new(functionals.row(i), 0)).collect()
}

/// Whether `g · v ≥ 0` on the cone `F v ≥ 0`.
pub fn nonnegative_on_cone(functionals: &IntMatrix, g: &[i64]) -> bool {
    let mut sys = cone_rows(functionals);
    let neg: Vec<i64> = g.iter().map(|c| -c).collect();
    sys.push(Ineq::new(&neg, 1));
    !feasible(&sys)
}

/// Whether `g · v = 0` on the whole cone.
pub fn vanishes_on_cone(functionals: &IntMatrix, g: &[i64]) -> bool {
    let mut sys = cone_rows(functionals);
    sys.push(Ineq::new(g, 1));
    if feasible(&sys) {
        return false;
    }
    nonnegative_on_cone(functionals, g)
}

/// Indices of the functionals that vanish identically on the cone.
pub fn implicit_equalities(functionals: &IntMatrix) -> Vec<usize> {
    (0..functionals.rows())
        .filter(|i| {
            let mut sys = cone_rows(functionals);
            sys.push(Ineq::new(functionals.row(*i), 1));
            !feasible(&sys)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn detects_contradiction() {
        // x ≥ 1 and -x ≥ 0
        assert!(!feasible(&[Ineq::new(&[1], 1), Ineq::new(&[-1], 0)]));
        assert!(feasible(&[Ineq::new(&[1, -1], 1), Ineq::new(&[0, 1], 3)]));
    }

    #[test]
    fn half_line_queries() {
        let f = IntMatrix::from_rows(&[vec![1]], 1);
        assert!(nonnegative_on_cone(&f, &[2]));
        assert!(!nonnegative_on_cone(&f, &[-1]));
        assert!(!vanishes_on_cone(&f, &[1]));
        assert!(implicit_equalities(&f).is_empty());
    }

    #[test]
    fn opposite_functionals_are_implicit_equalities() {
        let f = IntMatrix::from_rows(&[vec![1, 0], vec![-1, 0], vec![0, 1]], 2);
        assert_eq!(implicit_equalities(&f), vec![0, 1]);
        assert!(vanishes_on_cone(&f, &[3, 0]));
        assert!(!vanishes_on_cone(&f, &[0, 1]));
    }

    proptest! {
        // any grid point of (Z/4)² satisfying the system certifies feasibility
        #[test]
        fn agrees_with_grid_search(rows in prop::collection::vec((prop::array::uniform2(-3i64..=3), -3i64..=3), 1..5)) {
            let sys: Vec<Ineq> = rows.iter().map(|(c, r)| Ineq::new(c, *r)).collect();
            let grid = (-24..=24).any(|x: i64| (-24..=24).any(|y: i64| {
                rows.iter().all(|(c, r)| c[0] * x + c[1] * y >= 4 * r)
            }));
            if grid {
                prop_assert!(feasible(&sys));
            }
        }
    }
}
