//! Dense integer matrices, Smith normal form, and exact solving of integer
//! linear systems.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Builds a matrix from rows; every row must have `cols` entries.
    pub fn from_rows(rows: &[Vec<i64>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix row {i}");
            m.data[i * cols..(i + 1) * cols].copy_from_slice(r);
        }
        m
    }

    pub fn from_columns(columns: &[Vec<i64>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged matrix column {j}");
            for (i, v) in c.iter().enumerate() {
                m[(i, j)] = *v;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| *v == 0)
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.cols, "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hcat(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, rhs.rows);
        let mut out = IntMatrix::zeros(self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)];
            }
            for j in 0..rhs.cols {
                out[(i, self.cols + j)] = rhs[(i, j)];
            }
        }
        out
    }

    /// Rows `0..k` only.
    pub fn top_rows(&self, k: usize) -> IntMatrix {
        IntMatrix { rows: k, cols: self.cols, data: self.data[..k * self.cols].to_vec() }
    }

    pub fn select_columns(&self, idx: &[usize]) -> IntMatrix {
        let cols: Vec<Vec<i64>> = idx.iter().map(|j| self.column(*j)).collect();
        IntMatrix::from_columns(&cols, self.rows)
    }

    pub fn select_rows(&self, idx: &[usize]) -> IntMatrix {
        let rows: Vec<Vec<i64>> = idx.iter().map(|i| self.row(*i).to_vec()).collect();
        IntMatrix::from_rows(&rows, self.cols)
    }

    pub fn negated(&self) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| -v).collect() }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += c * row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: i64) {
        for j in 0..self.cols {
            let v = self[(src, j)];
            self[(dst, j)] += c * v;
        }
    }

    /// col[dst] += c * col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: i64) {
        for i in 0..self.rows {
            let v = self[(i, src)];
            self[(i, dst)] += c * v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self[(i, j)] = -self[(i, j)];
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            self[(i, j)] = -self[(i, j)];
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;

    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}{:?}", self.rows, self.cols, self.to_rows())
    }
}

/// `U · A · V = D` with `U`, `V` unimodular and `D` diagonal, `d₁ | d₂ | …`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub diag: Vec<i64>,
    pub rank: usize,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    rows: usize,
    cols: usize,
}

impl Smith {
    pub fn new(a: &IntMatrix) -> Smith {
        let (m, n) = (a.rows(), a.cols());
        let mut d = a.clone();
        let mut u = IntMatrix::identity(m);
        let mut u_inv = IntMatrix::identity(m);
        let mut v = IntMatrix::identity(n);

        let mut t = 0;
        while t < m.min(n) {
            // smallest nonzero entry of the trailing block
            let Some((pi, pj)) = min_nonzero(&d, t) else { break };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            u_inv.swap_cols(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            loop {
                let mut dirty = false;
                for i in t + 1..m {
                    let q = d[(i, t)].div_euclid(d[(t, t)]);
                    if q != 0 {
                        d.add_row(i, t, -q);
                        u.add_row(i, t, -q);
                        u_inv.add_col(t, i, q);
                    }
                    dirty |= d[(i, t)] != 0;
                }
                for j in t + 1..n {
                    let q = d[(t, j)].div_euclid(d[(t, t)]);
                    if q != 0 {
                        d.add_col(j, t, -q);
                        v.add_col(j, t, -q);
                    }
                    dirty |= d[(t, j)] != 0;
                }
                if !dirty {
                    // divisibility condition on the trailing block
                    let p = d[(t, t)];
                    let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| d[(i, j)] % p != 0));
                    match bad {
                        Some(i) => {
                            d.add_row(t, i, 1);
                            u.add_row(t, i, 1);
                            u_inv.add_col(i, t, -1);
                        }
                        None => break,
                    }
                }
                // move the smallest nonzero entry of row/column t to the pivot
                let mut best = (t, t);
                for i in t..m {
                    if d[(i, t)] != 0 && d[(i, t)].abs() < d[best].abs() {
                        best = (i, t);
                    }
                }
                for j in t..n {
                    if d[(t, j)] != 0 && d[(t, j)].abs() < d[best].abs() {
                        best = (t, j);
                    }
                }
                if d[(t, t)] == 0 || best != (t, t) {
                    let (bi, bj) = if d[(t, t)] == 0 { min_nonzero_cross(&d, t) } else { best };
                    d.swap_rows(t, bi);
                    u.swap_rows(t, bi);
                    u_inv.swap_cols(t, bi);
                    d.swap_cols(t, bj);
                    v.swap_cols(t, bj);
                }
            }
            if d[(t, t)] < 0 {
                d.negate_row(t);
                u.negate_row(t);
                u_inv.negate_col(t);
            }
            t += 1;
        }
        let diag: Vec<i64> = (0..m.min(n)).map(|i| d[(i, i)]).collect();
        let rank = diag.iter().take_while(|x| **x != 0).count();
        Smith { diag, rank, u, u_inv, v, rows: m, cols: n }
    }

    /// Some integer `z` with `A z = b`, or `None`.
    pub fn solve(&self, b: &[i64]) -> Option<Vec<i64>> {
        assert_eq!(b.len(), self.rows);
        let y = self.u.apply(b);
        let mut w = vec![0i64; self.cols];
        for (i, yi) in y.iter().enumerate() {
            if i < self.rank {
                let di = self.diag[i];
                if yi % di != 0 {
                    return None;
                }
                w[i] = yi / di;
            } else if *yi != 0 {
                return None;
            }
        }
        Some(self.v.apply(&w))
    }

    /// A Z-basis (as columns) of the integer kernel of `A`.
    pub fn kernel_basis(&self) -> Vec<Vec<i64>> {
        (self.rank..self.cols).map(|j| self.v.column(j)).collect()
    }

    /// A Z-basis (as columns) of the lattice spanned by the columns of `A`.
    pub fn image_basis(&self) -> Vec<Vec<i64>> {
        (0..self.rank)
            .map(|i| self.u_inv.column(i).iter().map(|x| x * self.diag[i]).collect())
            .collect()
    }
}

fn min_nonzero(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let x = d[(i, j)];
            if x != 0 && best.is_none_or(|b| x.abs() < d[b].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn min_nonzero_cross(d: &IntMatrix, t: usize) -> (usize, usize) {
    let mut best: Option<(usize, usize)> = None;
    let cands = (t..d.rows()).map(|i| (i, t)).chain((t..d.cols()).map(|j| (t, j)));
    for c in cands {
        let x = d[c];
        if x != 0 && best.is_none_or(|b| x.abs() < d[b].abs()) {
            best = Some(c);
        }
    }
    best.expect("pivot cross cannot be empty while dirty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check_decomposition(a: &IntMatrix) -> Smith {
        let s = Smith::new(a);
        let prod = s.u.mul(a).mul(&s.v);
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                let expected = if i == j { s.diag[i] } else { 0 };
                assert_eq!(prod[(i, j)], expected, "U A V not diagonal for {a:?}");
            }
        }
        assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(a.rows()));
        for w in s.diag[..s.rank].windows(2) {
            assert_eq!(w[1] % w[0], 0, "divisibility chain broken: {:?}", s.diag);
        }
        assert!(s.diag[..s.rank].iter().all(|d| *d > 0));
        s
    }

    #[test]
    fn textbook_example() {
        let a = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], 3);
        let s = check_decomposition(&a);
        assert_eq!(s.diag, vec![2, 6, 12]);
    }

    #[test]
    fn solves_and_rejects() {
        let a = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]], 2);
        let s = Smith::new(&a);
        assert_eq!(a.apply(&s.solve(&[4, 9]).unwrap()), vec![4, 9]);
        assert!(s.solve(&[1, 0]).is_none());
    }

    #[test]
    fn kernel_of_functional() {
        let a = IntMatrix::from_rows(&[vec![1, -1, 0]], 3);
        let s = Smith::new(&a);
        let ker = s.kernel_basis();
        assert_eq!(ker.len(), 2);
        for k in &ker {
            assert_eq!(a.apply(k), vec![0]);
        }
    }

    proptest! {
        #[test]
        fn random_matrices_decompose(rows in 1usize..4, cols in 1usize..4, seed in proptest::collection::vec(-6i64..7, 16)) {
            let data: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * 4 + j]).collect()).collect();
            let a = IntMatrix::from_rows(&data, cols);
            let s = check_decomposition(&a);
            // every image vector is solvable, kernel vectors vanish
            let z: Vec<i64> = (0..cols).map(|j| seed[(j + 5) % 16]).collect();
            let b = a.apply(&z);
            let sol = s.solve(&b).expect("image vector must be solvable");
            prop_assert_eq!(a.apply(&sol), b);
            for k in s.kernel_basis() {
                prop_assert!(a.apply(&k).iter().all(|x| *x == 0));
            }
        }
    }
}
