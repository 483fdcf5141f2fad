//! Small dense linear algebra over exact rationals.
//!
//! Only what the fiberwise identity checks need: rank, column-span bases,
//! span equality and intersections of subspaces of a 6-dimensional space.

use num_rational::Rational64;
use num_traits::{One, Zero};

pub type Q = Rational64;

pub fn q(n: i64) -> Q {
    Q::from_integer(n)
}

pub fn half() -> Q {
    Q::new(1, 2)
}

/// Row-major matrix of rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMat {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, vals: &[i64]) -> Self {
        assert_eq!(vals.len(), rows * cols);
        Self { rows, cols, data: vals.iter().map(|&v| q(v)).collect() }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(n: usize, cols: &[Vec<Q>]) -> Self {
        let mut m = Self::zeros(n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), n);
            for i in 0..n {
                m[(i, j)] = c[i];
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

    pub fn column(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Q>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn mul(&self, rhs: &QMat) -> QMat {
        assert_eq!(self.cols, rhs.rows);
        let mut out = QMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).fold(Q::zero(), |acc, j| acc + self[(i, j)] * v[j]))
            .collect()
    }

    pub fn add(&self, rhs: &QMat) -> QMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        QMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, s: Q) -> QMat {
        QMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn sub(&self, rhs: &QMat) -> QMat {
        self.add(&rhs.scale(-Q::one()))
    }

    pub fn transpose(&self) -> QMat {
        let mut out = QMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    /// Floating-point copy of a 6×6 matrix, row-major.
    pub fn to_f64_6x6(&self) -> [[f64; 6]; 6] {
        assert!(self.rows == 6 && self.cols == 6, "expected 6×6, got {}×{}", self.rows, self.cols);
        let mut out = [[0.0; 6]; 6];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                let q = self[(i, j)];
                *v = *q.numer() as f64 / *q.denom() as f64;
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.is_zero())
    }

    /// Reduced row echelon form; returns the pivot columns.
    fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self[(r, col)].is_zero()) else {
                continue;
            };
            for j in 0..self.cols {
                self.data.swap(row * self.cols + j, p * self.cols + j);
            }
            let inv = self[(row, col)].recip();
            for j in 0..self.cols {
                self[(row, j)] *= inv;
            }
            for r in 0..self.rows {
                if r != row && !self[(r, col)].is_zero() {
                    let f = self[(r, col)];
                    for j in 0..self.cols {
                        let v = self[(row, j)];
                        self[(r, j)] -= f * v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<QMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = QMat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, n + i)] = Q::one();
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = QMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = aug[(i, n + j)];
            }
        }
        Some(inv)
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// A basis of the column span, chosen among the original columns.
    pub fn column_basis(&self) -> Vec<Vec<Q>> {
        let pivots = self.clone().rref();
        pivots.into_iter().map(|j| self.column(j)).collect()
    }

    /// Basis of the null space `{x : A x = 0}`.
    pub fn null_space(&self) -> Vec<Vec<Q>> {
        let mut r = self.clone();
        let pivots = r.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![Q::zero(); self.cols];
                x[f] = Q::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    x[pc] = -r[(row, f)];
                }
                x
            })
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for QMat {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }
}

/// A linear subspace of `Q^n`, stored as a basis (possibly empty).
#[derive(Clone, Debug)]
pub struct Subspace {
    pub dim_ambient: usize,
    pub basis: Vec<Vec<Q>>,
}

impl Subspace {
    pub fn span(n: usize, vectors: &[Vec<Q>]) -> Self {
        if vectors.is_empty() {
            return Self { dim_ambient: n, basis: Vec::new() };
        }
        let m = QMat::from_columns(n, vectors);
        Self { dim_ambient: n, basis: m.column_basis() }
    }

    pub fn line(v: Vec<Q>) -> Self {
        let n = v.len();
        Self::span(n, &[v])
    }

    pub fn zero(n: usize) -> Self {
        Self { dim_ambient: n, basis: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        let mut all = self.basis.clone();
        all.push(v.to_vec());
        QMat::from_columns(self.dim_ambient, &all).rank() == self.dim()
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Subspace::span(self.dim_ambient, &all)
    }

    pub fn equals(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.sum(other).dim() == self.dim()
    }

    /// `self = a ⊕ b`: spans agree and the sum is direct.
    pub fn is_direct_sum_of(&self, a: &Subspace, b: &Subspace) -> bool {
        let s = a.sum(b);
        s.dim() == a.dim() + b.dim() && s.equals(self)
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // Solve A x = B y for the stacked unknown (x, y).
        let n = self.dim_ambient;
        let (ka, kb) = (self.dim(), other.dim());
        if ka == 0 || kb == 0 {
            return Subspace::zero(n);
        }
        let mut m = QMat::zeros(n, ka + kb);
        for (j, v) in self.basis.iter().enumerate() {
            for i in 0..n {
                m[(i, j)] = v[i];
            }
        }
        for (j, v) in other.basis.iter().enumerate() {
            for i in 0..n {
                m[(i, ka + j)] = -v[i];
            }
        }
        let vecs: Vec<Vec<Q>> = m
            .null_space()
            .into_iter()
            .map(|x| {
                let mut v = vec![Q::zero(); n];
                for (j, b) in self.basis.iter().enumerate() {
                    for i in 0..n {
                        v[i] += x[j] * b[i];
                    }
                }
                v
            })
            .collect();
        Subspace::span(n, &vecs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_null_space() {
        let m = QMat::from_i64(2, 3, &[1, 2, 3, 2, 4, 6]);
        assert_eq!(m.rank(), 1);
        let ns = m.null_space();
        assert_eq!(ns.len(), 2);
        for x in ns {
            assert!(m.apply(&x).iter().all(|v| v.is_zero()));
        }
    }

    #[test]
    fn intersection_of_planes() {
        let e = |i: usize| {
            let mut v = vec![q(0); 3];
            v[i] = q(1);
            v
        };
        let a = Subspace::span(3, &[e(0), e(1)]);
        let b = Subspace::span(3, &[e(1), e(2)]);
        let c = a.intersection(&b);
        assert_eq!(c.dim(), 1);
        assert!(c.contains(&e(1)));
        assert!(!c.contains(&e(0)));
    }
}
