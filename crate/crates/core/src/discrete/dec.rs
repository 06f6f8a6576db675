use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

use super::mesh::{cross, dot3, norm, sub, TriMesh};

pub const MIN_TRIANGLE_AREA: f64 = 1e-14;

/// Compressed sparse rows.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    rows: usize,
    cols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Sums duplicate entries; drops explicit zeros.
    pub fn from_triplets(rows: usize, cols: usize, triplets: impl IntoIterator<Item = (usize, usize, f64)>) -> Self {
        let mut per_row: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); rows];
        for (i, j, v) in triplets {
            assert!(i < rows && j < cols, "entry ({i},{j}) outside {rows}x{cols}");
            *per_row[i].entry(j).or_insert(0.0) += v;
        }
        let mut indptr = Vec::with_capacity(rows + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        indptr.push(0);
        for row in per_row {
            for (j, v) in row {
                if v != 0.0 {
                    indices.push(j);
                    values.push(v);
                }
            }
            indptr.push(indices.len());
        }
        Self { rows, cols, indptr, indices, values }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.indptr[i]..self.indptr[i + 1];
        self.indices[r.clone()].iter().copied().zip(self.values[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.row(i).find(|&(c, _)| c == j).map_or(0.0, |(_, v)| v)
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.rows).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows).map(|i| self.row(i).map(|(j, v)| v * x[j]).sum()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(self.cols, self.rows, self.triplets().map(|(i, j, v)| (j, i, v)))
    }

    pub fn mul(&self, other: &CsrMatrix) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut trip = Vec::new();
        for i in 0..self.rows {
            for (k, a) in self.row(i) {
                for (j, b) in other.row(k) {
                    trip.push((i, j, a * b));
                }
            }
        }
        Self::from_triplets(self.rows, other.cols, trip)
    }

    /// `diag(left) · self · diag(right)`.
    pub fn scale_rows_cols(&self, left: &[f64], right: &[f64]) -> Self {
        Self::from_triplets(self.rows, self.cols, self.triplets().map(|(i, j, v)| (i, j, left[i] * v * right[j])))
    }

    pub fn add(&self, other: &CsrMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_triplets(self.rows, self.cols, self.triplets().chain(other.triplets()))
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).collect()
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.rows, self.cols);
        for (i, j, v) in self.triplets() {
            m[(i, j)] = v;
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Incidence matrices and diagonal Hodge stars of a triangle mesh.
#[derive(Clone, Debug)]
pub struct DecOperators {
    /// Edge × vertex; edge `(a, b)` with `a < b` is oriented from `a` to `b`.
    pub d0: CsrMatrix,
    /// Triangle × edge, following each triangle's vertex order.
    pub d1: CsrMatrix,
    /// Circumcentric dual cell areas.
    pub star0: Vec<f64>,
    /// `(cot α + cot β) / 2` over the two angles opposite each edge.
    pub star1: Vec<f64>,
    /// Inverse triangle areas.
    pub star2: Vec<f64>,
}

impl DecOperators {
    pub fn new(mesh: &TriMesh) -> Result<Self> {
        let v = mesh.vertices();
        let ne = mesh.edges().len();
        let d0 = CsrMatrix::from_triplets(
            ne,
            v.len(),
            mesh.edges().iter().enumerate().flat_map(|(e, &[a, b])| [(e, a, -1.0), (e, b, 1.0)]),
        );
        let mut d1_trip = Vec::with_capacity(3 * mesh.triangles().len());
        let mut star0 = vec![0.0; v.len()];
        let mut star1 = vec![0.0; ne];
        let mut star2 = Vec::with_capacity(mesh.triangles().len());
        for (f, t) in mesh.triangles().iter().enumerate() {
            let area = 0.5 * norm(&cross(&sub(&v[t[1]], &v[t[0]]), &sub(&v[t[2]], &v[t[0]])));
            if !(area >= MIN_TRIANGLE_AREA) {
                return Err(Error::MeshQuality(format!("triangle {f} has area {area:e}")));
            }
            star2.push(1.0 / area);
            for k in 0..3 {
                let (a, b, c) = (t[k], t[(k + 1) % 3], t[(k + 2) % 3]);
                let e = mesh.edge(a, b).expect("edge of a triangle");
                d1_trip.push((f, e, if a < b { 1.0 } else { -1.0 }));
                // angle at c is opposite edge ab
                let (u, w) = (sub(&v[a], &v[c]), sub(&v[b], &v[c]));
                let cot = dot3(&u, &w) / norm(&cross(&u, &w));
                star1[e] += 0.5 * cot;
                let len_sq = dot3(&sub(&v[a], &v[b]), &sub(&v[a], &v[b]));
                star0[a] += len_sq * cot / 8.0;
                star0[b] += len_sq * cot / 8.0;
            }
        }
        if let Some((i, w)) = star0.iter().enumerate().find(|(_, w)| !(**w > 0.0)) {
            return Err(Error::MeshQuality(format!("vertex {i} has dual area {w:e}")));
        }
        if let Some((i, w)) = star1.iter().enumerate().find(|(_, w)| !(**w > 0.0)) {
            return Err(Error::MeshQuality(format!("edge {i} has cotan weight {w:e}")));
        }
        let d1 = CsrMatrix::from_triplets(mesh.triangles().len(), ne, d1_trip);
        Ok(Self { d0, d1, star0, star1, star2 })
    }

    pub fn total_dual_area(&self) -> f64 {
        self.star0.iter().sum()
    }

    /// `(A, M)` for the generalized problem `A x = λ M x` of the 1-form Hodge
    /// Laplacian: `A = ⋆1 d0 ⋆0⁻¹ d0ᵀ ⋆1 + d1ᵀ ⋆2 d1`, `M = ⋆1`.
    pub fn hodge1_pencil(&self) -> (CsrMatrix, Vec<f64>) {
        let inv0: Vec<f64> = self.star0.iter().map(|w| 1.0 / w).collect();
        let ones_e = vec![1.0; self.star1.len()];
        let b = self.d0.scale_rows_cols(&self.star1, &vec![1.0; self.star0.len()]);
        let exact = b.scale_rows_cols(&ones_e, &inv0).mul(&b.transpose());
        let coexact = self.d1.transpose().scale_rows_cols(&ones_e, &self.star2).mul(&self.d1);
        (exact.add(&coexact), self.star1.clone())
    }

    /// `M^{-1/2} A M^{-1/2}`, which shares the spectrum of the pencil.
    pub fn hodge1_symmetric(&self) -> CsrMatrix {
        let (a, m) = self.hodge1_pencil();
        let s: Vec<f64> = m.iter().map(|w| 1.0 / w.sqrt()).collect();
        a.scale_rows_cols(&s, &s)
    }
}
