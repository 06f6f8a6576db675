//! Dense real matrices, the cyclic Jacobi eigensolver and numerical null spaces.
//!
//! Everything here is small and dense: operator matrices on tensor fibres are at
//! most a few hundred rows, so plain row-major `Vec<f64>` storage is enough.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Off-diagonal Frobenius norm threshold (relative) at which Jacobi stops.
pub const JACOBI_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length does not match shape");
        Self { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<f64>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| s * x).collect() }
    }

    /// Largest |a_ij - a_ji|; `None` for non-square input.
    pub fn asymmetry(&self) -> Option<f64> {
        if !self.is_square() {
            return None;
        }
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        Some(worst)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// A square matrix that is symmetric to within `1e-12 * max(1, ||A||_F)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix(Matrix);

impl SymMatrix {
    pub const SYMMETRY_TOL: f64 = 1e-12;

    pub fn new(m: Matrix) -> Result<Self> {
        let asym = m
            .asymmetry()
            .ok_or_else(|| Error::Symmetry(format!("{}x{} matrix is not square", m.rows, m.cols)))?;
        let bound = Self::SYMMETRY_TOL * m.frobenius_norm().max(1.0);
        if asym > bound {
            return Err(Error::Symmetry(format!("asymmetry {asym:e} exceeds {bound:e}")));
        }
        Ok(Self(m))
    }

    /// Replaces `m` by `(m + m^T) / 2`. Panics on non-square input.
    pub fn symmetrized(m: &Matrix) -> Self {
        assert!(m.is_square());
        Self(Matrix::from_fn(m.rows, m.cols, |i, j| 0.5 * (m[(i, j)] + m[(j, i)])))
    }

    pub fn dim(&self) -> usize {
        self.0.rows
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    /// `B^T A B` for a matrix `B` with orthonormal columns.
    pub fn compress(&self, b: &Matrix) -> SymMatrix {
        let m = b.transpose().mul(&self.0).mul(b);
        SymMatrix::symmetrized(&m)
    }
}

/// Eigen-decomposition of a symmetric matrix: ascending eigenvalues and the
/// matching orthonormal eigenvectors stored as columns.
#[derive(Clone, Debug)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl SymEigen {
    pub fn vector(&self, k: usize) -> Vec<f64> {
        self.vectors.column(k)
    }

    pub fn min(&self) -> Option<f64> {
        self.values.first().copied()
    }

    pub fn max(&self) -> Option<f64> {
        self.values.last().copied()
    }
}

/// Cyclic Jacobi eigensolver.
///
/// Sweeps rotate every off-diagonal pair in row order until the off-diagonal
/// Frobenius norm falls below `JACOBI_TOL * ||A||_F`. Eigenvalues come back in
/// ascending order; each eigenvector has its first non-negligible component positive.
pub fn sym_eigen(m: &SymMatrix) -> SymEigen {
    let n = m.dim();
    let mut a = m.matrix().clone();
    let mut v = Matrix::identity(n);
    let scale = a.frobenius_norm();

    if scale > 0.0 {
        let target = JACOBI_TOL * scale;
        for _ in 0..JACOBI_MAX_SWEEPS {
            if off_diagonal_norm(&a) <= target {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a[(p, q)];
                    if apq == 0.0 {
                        continue;
                    }
                    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    rotate(&mut a, &mut v, p, q, c, s);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        let mut vec = v.column(src);
        fix_sign(&mut vec);
        for (i, x) in vec.into_iter().enumerate() {
            vectors[(i, col)] = x;
        }
    }
    SymEigen { values, vectors }
}

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

// A <- J^T A J with J the (p, q) rotation, V <- V J.
fn rotate(a: &mut Matrix, v: &mut Matrix, p: usize, q: usize, c: f64, s: f64) {
    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = c * akp - s * akq;
        a[(k, q)] = s * akp + c * akq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = c * apk - s * aqk;
        a[(q, k)] = s * apk + c * aqk;
    }
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

/// Flip `v` so that its first component above `1e-10 * max|v|` is positive.
pub fn fix_sign(v: &mut [f64]) {
    let big = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if big == 0.0 {
        return;
    }
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-10 * big) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// Orthonormal basis of the numerical null space of `m`.
///
/// Runs Householder QR with column pivoting on `m^T`; columns of `Q` past the
/// numerical rank (pivots above `tol * ||m||_F`) span the kernel.
pub fn kernel_basis(m: &Matrix, tol: f64) -> Vec<Vec<f64>> {
    let c = m.cols();
    let r = m.rows();
    let norm = m.frobenius_norm();
    if r == 0 || norm == 0.0 {
        return (0..c).map(|j| unit(c, j)).collect();
    }
    // work = m^T, c x r
    let mut work = m.transpose();
    let mut q = Matrix::identity(c);
    let threshold = tol * norm;
    let mut rank = 0;
    let steps = c.min(r);

    for j in 0..steps {
        // pivot: remaining column with the largest norm below row j
        let (pivot, pnorm) = (j..r)
            .map(|col| {
                let s: f64 = (j..c).map(|i| work[(i, col)] * work[(i, col)]).sum();
                (col, s.sqrt())
            })
            .fold((j, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pnorm <= threshold {
            break;
        }
        if pivot != j {
            for i in 0..c {
                let tmp = work[(i, j)];
                work[(i, j)] = work[(i, pivot)];
                work[(i, pivot)] = tmp;
            }
        }
        // Householder vector for work[j.., j]
        let alpha = if work[(j, j)] >= 0.0 { -pnorm } else { pnorm };
        let mut hv: Vec<f64> = (j..c).map(|i| work[(i, j)]).collect();
        hv[0] -= alpha;
        let hnorm2: f64 = hv.iter().map(|x| x * x).sum();
        if hnorm2 > 0.0 {
            for col in j..r {
                let d: f64 = (j..c).zip(&hv).map(|(i, h)| work[(i, col)] * h).sum();
                let f = 2.0 * d / hnorm2;
                for (i, h) in (j..c).zip(&hv) {
                    work[(i, col)] -= f * h;
                }
            }
            for row in 0..c {
                let d: f64 = (j..c).zip(&hv).map(|(i, h)| q[(row, i)] * h).sum();
                let f = 2.0 * d / hnorm2;
                for (i, h) in (j..c).zip(&hv) {
                    q[(row, i)] -= f * h;
                }
            }
        }
        rank += 1;
    }

    (rank..c)
        .map(|j| {
            let mut v = q.column(j);
            fix_sign(&mut v);
            v
        })
        .collect()
}

pub fn unit(n: usize, k: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[k] = 1.0;
    v
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Modified Gram-Schmidt (applied twice) on a list of vectors, in place.
/// Returns false if some vector became numerically dependent.
pub fn orthonormalize(vs: &mut [Vec<f64>]) -> bool {
    for i in 0..vs.len() {
        for _ in 0..2 {
            for j in 0..i {
                let (head, tail) = vs.split_at_mut(i);
                let d = dot(&tail[0], &head[j]);
                for (x, y) in tail[0].iter_mut().zip(&head[j]) {
                    *x -= d * y;
                }
            }
        }
        let nv = norm(&vs[i]);
        if nv < 1e-300 {
            return false;
        }
        vs[i].iter_mut().for_each(|x| *x /= nv);
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_eigenvalues() {
        let e = sym_eigen(&SymMatrix::new(Matrix::identity(5)).unwrap());
        assert!(e.values.iter().all(|v| (v - 1.0).abs() < 1e-15));
    }

    #[test]
    fn diagonal_is_sorted() {
        let m = SymMatrix::new(Matrix::diagonal(&[3.0, 1.0, 2.0])).unwrap();
        let e = sym_eigen(&m);
        assert_eq!(e.values, vec![1.0, 2.0, 3.0]);
        assert_eq!(e.vector(0), vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn asymmetric_rejected() {
        let m = Matrix::from_row_major(2, 2, vec![1.0, 2.0, 0.0, 1.0]);
        assert!(matches!(SymMatrix::new(m), Err(Error::Symmetry(_))));
        let rect = Matrix::zeros(2, 3);
        assert!(matches!(SymMatrix::new(rect), Err(Error::Symmetry(_))));
    }

    #[test]
    fn eigenvector_sign_convention() {
        let m = SymMatrix::new(Matrix::from_row_major(2, 2, vec![2.0, 1.0, 1.0, 2.0])).unwrap();
        let e = sym_eigen(&m);
        assert!((e.values[0] - 1.0).abs() < 1e-14);
        assert!((e.values[1] - 3.0).abs() < 1e-14);
        for k in 0..2 {
            let v = e.vector(k);
            assert!(v[0] > 0.0);
        }
    }

    #[test]
    fn kernel_of_zero_and_full_rank() {
        assert_eq!(kernel_basis(&Matrix::zeros(3, 3), 1e-12).len(), 3);
        let full = Matrix::from_row_major(3, 3, vec![2.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 4.0]);
        assert!(kernel_basis(&full, 1e-12).is_empty());
    }

    #[test]
    fn kernel_of_rank_one_projector() {
        let u = [1.0 / 3f64.sqrt(); 3];
        let p = Matrix::from_fn(3, 3, |i, j| u[i] * u[j]);
        let k = kernel_basis(&p, 1e-12);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(norm(&p.mul_vec(v)) < 1e-14);
            assert!((norm(v) - 1.0).abs() < 1e-14);
        }
        assert!(dot(&k[0], &k[1]).abs() < 1e-14);
    }

    #[test]
    fn kernel_of_wide_matrix() {
        // one equation in three unknowns
        let m = Matrix::from_row_major(1, 3, vec![1.0, -1.0, 2.0]);
        let k = kernel_basis(&m, 1e-12);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(norm(&m.mul_vec(v)) < 1e-14);
        }
    }
}
