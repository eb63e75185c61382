//! Dense integer matrices with exact rational solving and Smith normal form.
//!
//! Everything here is small (rank ≤ 8 in practice), so the implementations
//! favour clarity over asymptotics.

// Row operations read one row while writing another; index loops are the
// clearest way to express that.
#![allow(clippy::needless_range_loop)]

use num_rational::Ratio;
use num_traits::{One, Zero};

pub type Rat = Ratio<i64>;

/// Row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMat {
    pub fn new(rows: usize, cols: usize, data: Vec<i64>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix shape mismatch");
        IntMat { rows, cols, data }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
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

    pub fn data(&self) -> &[i64] {
        &self.data
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.rows)
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = IntMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn apply_rat(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Rat::zero(), |acc, (a, b)| acc + Rat::from_integer(*a) * b)
            })
            .collect()
    }

    pub fn transpose(&self) -> IntMat {
        let mut out = IntMat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    /// Inverse of a unimodular (det ±1) square matrix. Returns `None` when the
    /// matrix is singular or the inverse is not integral.
    pub fn inverse_unimodular(&self) -> Option<IntMat> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut a: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                let mut r: Vec<Rat> = self.row(i).iter().map(|&x| Rat::from_integer(x)).collect();
                r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
                r
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, pivot);
            let p = a[col][col];
            for x in a[col].iter_mut() {
                *x /= p;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col];
                    for c in 0..2 * n {
                        let v = a[col][c];
                        a[r][c] -= f * v;
                    }
                }
            }
        }
        let mut data = Vec::with_capacity(n * n);
        for row in &a {
            for x in &row[n..] {
                if !x.denom().is_one() {
                    return None;
                }
                data.push(*x.numer());
            }
        }
        Some(IntMat::new(n, n, data))
    }
}

impl std::ops::Index<(usize, usize)> for IntMat {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Solve `A x = b` exactly over the rationals. Returns `None` when the system
/// is inconsistent. When the solution space is positive-dimensional the free
/// variables are set to zero, which is what the cone computations want: they
/// only call this with linearly independent columns.
pub fn solve_rational(a: &IntMat, b: &[Rat]) -> Option<Vec<Rat>> {
    assert_eq!(a.rows(), b.len());
    let (m, n) = (a.rows(), a.cols());
    let mut aug: Vec<Vec<Rat>> = (0..m)
        .map(|i| {
            let mut r: Vec<Rat> = a.row(i).iter().map(|&x| Rat::from_integer(x)).collect();
            r.push(b[i]);
            r
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..n {
        if let Some(p) = (row..m).find(|&r| !aug[r][col].is_zero()) {
            aug.swap(row, p);
            let pv = aug[row][col];
            for x in aug[row].iter_mut() {
                *x /= pv;
            }
            for r in 0..m {
                if r != row && !aug[r][col].is_zero() {
                    let f = aug[r][col];
                    for c in 0..=n {
                        let v = aug[row][c];
                        aug[r][c] -= f * v;
                    }
                }
            }
            pivot_cols.push(col);
            row += 1;
            if row == m {
                break;
            }
        }
    }
    // Inconsistent when a zero row has non-zero rhs.
    for r in row..m {
        if !aug[r][n].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rat::zero(); n];
    for (r, &col) in pivot_cols.iter().enumerate() {
        x[col] = aug[r][n];
    }
    Some(x)
}

/// A basis of the rational nullspace of `A` (column vectors x with A·x = 0).
pub fn nullspace_rational(a: &IntMat) -> Vec<Vec<Rat>> {
    let (m, n) = (a.rows(), a.cols());
    let mut red: Vec<Vec<Rat>> =
        (0..m).map(|i| a.row(i).iter().map(|&x| Rat::from_integer(x)).collect()).collect();
    let mut pivot_of_col = vec![None; n];
    let mut row = 0;
    for col in 0..n {
        if row == m {
            break;
        }
        if let Some(p) = (row..m).find(|&r| !red[r][col].is_zero()) {
            red.swap(row, p);
            let pv = red[row][col];
            for x in red[row].iter_mut() {
                *x /= pv;
            }
            for r in 0..m {
                if r != row && !red[r][col].is_zero() {
                    let f = red[r][col];
                    for c in 0..n {
                        let v = red[row][c];
                        red[r][c] -= f * v;
                    }
                }
            }
            pivot_of_col[col] = Some(row);
            row += 1;
        }
    }
    let mut basis = Vec::new();
    for free in 0..n {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut x = vec![Rat::zero(); n];
        x[free] = Rat::one();
        for col in 0..n {
            if let Some(r) = pivot_of_col[col] {
                x[col] = -red[r][free];
            }
        }
        basis.push(x);
    }
    basis
}

/// Smith normal form `U * A * V = D` with `U`, `V` unimodular and `D`
/// diagonal with each entry dividing the next.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub u: IntMat,
    pub v: IntMat,
    pub d: IntMat,
}

impl SmithForm {
    /// Diagonal entries of `D`, padded with zeros to `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)]).collect()
    }
}

pub fn smith_normal_form(a: &IntMat) -> SmithForm {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMat::identity(m);
    let mut v = IntMat::identity(n);

    fn swap_rows(d: &mut IntMat, u: &mut IntMat, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..d.cols() {
            let t = d[(i, c)];
            d[(i, c)] = d[(j, c)];
            d[(j, c)] = t;
        }
        for c in 0..u.cols() {
            let t = u[(i, c)];
            u[(i, c)] = u[(j, c)];
            u[(j, c)] = t;
        }
    }
    fn swap_cols(d: &mut IntMat, v: &mut IntMat, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..d.rows() {
            let t = d[(r, i)];
            d[(r, i)] = d[(r, j)];
            d[(r, j)] = t;
        }
        for r in 0..v.rows() {
            let t = v[(r, i)];
            v[(r, i)] = v[(r, j)];
            v[(r, j)] = t;
        }
    }
    // row_i -= q * row_j, mirrored in U.
    fn add_row(d: &mut IntMat, u: &mut IntMat, i: usize, j: usize, q: i64) {
        for c in 0..d.cols() {
            d[(i, c)] -= q * d[(j, c)];
        }
        for c in 0..u.cols() {
            u[(i, c)] -= q * u[(j, c)];
        }
    }
    fn add_col(d: &mut IntMat, v: &mut IntMat, i: usize, j: usize, q: i64) {
        for r in 0..d.rows() {
            d[(r, i)] -= q * d[(r, j)];
        }
        for r in 0..v.rows() {
            v[(r, i)] -= q * v[(r, j)];
        }
    }

    let mut k = 0;
    while k < m.min(n) {
        // Find a pivot of minimal absolute value in the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for i in k..m {
            for j in k..n {
                if d[(i, j)] != 0
                    && best.is_none_or(|(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        swap_rows(&mut d, &mut u, k, pi);
        swap_cols(&mut d, &mut v, k, pj);

        // Clear row and column k; repeat until clean since remainders reappear.
        loop {
            let mut dirty = false;
            for i in k + 1..m {
                if d[(i, k)] != 0 {
                    let q = d[(i, k)].div_euclid(d[(k, k)]);
                    add_row(&mut d, &mut u, i, k, q);
                    if d[(i, k)] != 0 {
                        swap_rows(&mut d, &mut u, k, i);
                        dirty = true;
                    }
                }
            }
            for j in k + 1..n {
                if d[(k, j)] != 0 {
                    let q = d[(k, j)].div_euclid(d[(k, k)]);
                    add_col(&mut d, &mut v, j, k, q);
                    if d[(k, j)] != 0 {
                        swap_cols(&mut d, &mut v, k, j);
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
        }

        // Divisibility: make d[k][k] divide every trailing entry.
        let mut fixed = false;
        'outer: for i in k + 1..m {
            for j in k + 1..n {
                if d[(i, j)] % d[(k, k)] != 0 {
                    add_row(&mut d, &mut u, k, i, -1);
                    fixed = true;
                    break 'outer;
                }
            }
        }
        if fixed {
            continue; // redo elimination at k
        }
        if d[(k, k)] < 0 {
            for c in 0..n {
                d[(k, c)] = -d[(k, c)];
            }
            for c in 0..m {
                u[(k, c)] = -u[(k, c)];
            }
        }
        k += 1;
    }
    SmithForm { u, v, d }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_permutation_like() {
        let m = IntMat::new(2, 2, vec![0, 1, 1, 0]);
        let inv = m.inverse_unimodular().unwrap();
        assert!(m.mul(&inv).is_identity());
    }

    #[test]
    fn inverse_rejects_singular() {
        let m = IntMat::new(2, 2, vec![1, 1, 1, 1]);
        assert!(m.inverse_unimodular().is_none());
    }

    #[test]
    fn solve_simple_system() {
        let a = IntMat::new(2, 2, vec![1, 1, 0, 1]);
        let b = vec![Rat::new(3, 2), Rat::new(1, 2)];
        let x = solve_rational(&a, &b).unwrap();
        assert_eq!(x, vec![Rat::new(1, 1), Rat::new(1, 2)]);
    }

    #[test]
    fn solve_detects_inconsistency() {
        let a = IntMat::new(2, 1, vec![1, 1]);
        let b = vec![Rat::from_integer(0), Rat::from_integer(1)];
        assert!(solve_rational(&a, &b).is_none());
    }

    #[test]
    fn smith_form_reconstructs() {
        let a = IntMat::new(3, 3, vec![2, 4, 4, -6, 6, 12, 10, 4, 16]);
        let s = smith_normal_form(&a);
        assert_eq!(s.u.mul(&a).mul(&s.v), s.d);
        assert!(s.u.inverse_unimodular().is_some());
        assert!(s.v.inverse_unimodular().is_some());
        let diag = s.diagonal();
        // Divisibility chain, non-negativity, and product = |det|.
        for w in diag.windows(2) {
            assert!(w[0] >= 0 && (w[0] == 0 || w[1] % w[0] == 0));
        }
        assert_eq!(diag.iter().product::<i64>().abs(), 624);
        // Off-diagonal entries are zero.
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_eq!(s.d[(i, j)], 0);
                }
            }
        }
    }

    #[test]
    fn smith_form_rectangular() {
        // Columns spanning the A2 coroot lattice inside Z^3.
        let a = IntMat::new(3, 2, vec![1, 0, -1, 1, 0, -1]);
        let s = smith_normal_form(&a);
        assert_eq!(s.u.mul(&a).mul(&s.v), s.d);
        assert_eq!(s.diagonal(), vec![1, 1]);
    }
}
