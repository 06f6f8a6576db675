//! Ordered bases of symmetric and alternating tensors over an n-dimensional
//! inner-product space with an orthonormal frame.
//!
//! A tensor is stored by one coefficient per canonical index tuple
//! (nondecreasing for symmetric, strictly increasing for alternating). The
//! inner product is the full contraction over all `n^p` index tuples, so each
//! canonical coefficient is weighted by the number of distinct permutations of
//! its tuple. Operator matrices are reported in the *normalized* coordinates
//! `u_T = sqrt(w_T) * c_T`, where this inner product is Euclidean.

use std::collections::HashMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, Matrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Symmetry {
    Symmetric,
    Alternating,
}

#[derive(Clone, Debug)]
pub struct MultiIndexBasis {
    n: usize,
    degree: usize,
    symmetry: Symmetry,
    tuples: Vec<Vec<usize>>,
    weights: Vec<f64>,
    lookup: HashMap<Vec<usize>, usize>,
}

impl MultiIndexBasis {
    /// Enumerates canonical tuples in lexicographic order. Indices are 0-based.
    ///
    /// Degree 0 is accepted and yields the one-dimensional space of scalars
    /// (target of the trace map on 2-tensors).
    pub fn new(n: usize, degree: usize, symmetry: Symmetry) -> Result<Self> {
        if n < 2 {
            return Err(Error::Dimension(format!("dimension n = {n} must be at least 2")));
        }
        if symmetry == Symmetry::Alternating && degree > n {
            return Err(Error::Dimension(format!("alternating degree {degree} exceeds n = {n}")));
        }
        let tuples: Vec<Vec<usize>> = match symmetry {
            Symmetry::Symmetric => (0..n).combinations_with_replacement(degree).collect(),
            Symmetry::Alternating => (0..n).combinations(degree).collect(),
        };
        let weights = tuples
            .iter()
            .map(|t| match symmetry {
                Symmetry::Symmetric => permutation_count(t),
                Symmetry::Alternating => factorial(degree),
            })
            .collect();
        let lookup = tuples.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        Ok(Self { n, degree, symmetry, tuples, weights, lookup })
    }

    pub fn symmetric(n: usize, degree: usize) -> Result<Self> {
        Self::new(n, degree, Symmetry::Symmetric)
    }

    pub fn alternating(n: usize, degree: usize) -> Result<Self> {
        Self::new(n, degree, Symmetry::Alternating)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn dim(&self) -> usize {
        self.tuples.len()
    }

    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.tuples
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn position(&self, canonical: &[usize]) -> Option<usize> {
        self.lookup.get(canonical).copied()
    }

    /// Maps an arbitrary index tuple to `(basis position, sign)`.
    /// Alternating tuples with a repeated index return `None` (the component is zero).
    pub fn canonicalize(&self, tuple: &[usize]) -> Option<(usize, f64)> {
        debug_assert_eq!(tuple.len(), self.degree);
        let mut sorted = tuple.to_vec();
        let sign = match self.symmetry {
            Symmetry::Symmetric => {
                sorted.sort_unstable();
                1.0
            }
            Symmetry::Alternating => {
                // insertion sort, counting transpositions
                let mut swaps = 0usize;
                for i in 1..sorted.len() {
                    let mut j = i;
                    while j > 0 && sorted[j - 1] > sorted[j] {
                        sorted.swap(j - 1, j);
                        swaps += 1;
                        j -= 1;
                    }
                }
                if sorted.windows(2).any(|w| w[0] == w[1]) {
                    return None;
                }
                if swaps % 2 == 0 {
                    1.0
                } else {
                    -1.0
                }
            }
        };
        self.position(&sorted).map(|p| (p, sign))
    }

    /// Square roots of the weights: the change of coordinates `c -> u`.
    pub fn sqrt_weights(&self) -> Vec<f64> {
        self.weights.iter().map(|w| w.sqrt()).collect()
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|x| x as f64).product()
}

/// p! / prod(multiplicity!) for a sorted tuple.
fn permutation_count(sorted: &[usize]) -> f64 {
    let mut denom = 1.0;
    for (_, group) in &sorted.iter().chunk_by(|x| **x) {
        denom *= factorial(group.count());
    }
    factorial(sorted.len()) / denom
}

/// Coefficients of a tensor in a canonical basis.
#[derive(Clone, Debug)]
pub struct TensorCoeffs<'a> {
    basis: &'a MultiIndexBasis,
    values: Vec<f64>,
}

impl<'a> TensorCoeffs<'a> {
    pub fn new(basis: &'a MultiIndexBasis, values: Vec<f64>) -> Result<Self> {
        if values.len() != basis.dim() {
            return Err(Error::Dimension(format!(
                "{} coefficients for a basis of dimension {}",
                values.len(),
                basis.dim()
            )));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite coefficient {bad}")));
        }
        Ok(Self { basis, values })
    }

    pub fn zeros(basis: &'a MultiIndexBasis) -> Self {
        Self { basis, values: vec![0.0; basis.dim()] }
    }

    /// Builds coefficients from normalized coordinates `u`.
    pub fn from_normalized(basis: &'a MultiIndexBasis, u: &[f64]) -> Result<Self> {
        let values = u.iter().zip(basis.sqrt_weights()).map(|(x, s)| x / s).collect();
        Self::new(basis, values)
    }

    pub fn basis(&self) -> &'a MultiIndexBasis {
        self.basis
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn normalized(&self) -> Vec<f64> {
        self.values.iter().zip(self.basis.sqrt_weights()).map(|(c, s)| c * s).collect()
    }

    /// Value of the component at an arbitrary index tuple.
    pub fn component(&self, tuple: &[usize]) -> f64 {
        match self.basis.canonicalize(tuple) {
            Some((pos, sign)) => sign * self.values[pos],
            None => 0.0,
        }
    }

    /// Full-contraction norm squared.
    pub fn norm_sq(&self) -> f64 {
        self.values.iter().zip(self.basis.weights()).map(|(v, w)| w * v * v).sum()
    }

    pub fn inner(&self, other: &TensorCoeffs<'_>) -> f64 {
        assert_eq!(self.values.len(), other.values.len());
        self.values
            .iter()
            .zip(&other.values)
            .zip(self.basis.weights())
            .map(|((a, b), w)| w * a * b)
            .sum()
    }

    /// A symmetric 2-tensor as its n x n matrix.
    pub fn as_matrix(&self) -> Result<Matrix> {
        if self.basis.degree() != 2 {
            return Err(Error::Dimension(format!("degree {} is not 2", self.basis.degree())));
        }
        let n = self.basis.n();
        Ok(Matrix::from_fn(n, n, |i, j| self.component(&[i, j])))
    }
}

/// Contraction over slots `(a, b)` (0-based, `a < b`) as a matrix from
/// degree-p to degree-(p-2) canonical coefficients.
pub fn trace_map(basis: &MultiIndexBasis, slots: (usize, usize)) -> Result<Matrix> {
    if basis.symmetry() == Symmetry::Alternating {
        return Err(Error::Symmetry("trace of an alternating tensor vanishes identically".into()));
    }
    let p = basis.degree();
    let (a, b) = slots;
    if p < 2 || a >= b || b >= p {
        return Err(Error::Dimension(format!("invalid slot pair ({a}, {b}) for degree {p}")));
    }
    let target = MultiIndexBasis::symmetric(basis.n(), p - 2)?;
    let mut m = Matrix::zeros(target.dim(), basis.dim());
    let mut full = vec![0; p];
    for (row, rest) in target.tuples().iter().enumerate() {
        for k in 0..basis.n() {
            let mut it = rest.iter();
            for (slot, x) in full.iter_mut().enumerate() {
                *x = if slot == a || slot == b { k } else { *it.next().unwrap() };
            }
            let (col, _) = basis.canonicalize(&full).expect("symmetric tuples always canonicalize");
            m[(row, col)] += 1.0;
        }
    }
    Ok(m)
}

/// Trace map in normalized coordinates on both sides.
pub fn normalized_trace_map(basis: &MultiIndexBasis) -> Result<Matrix> {
    let t = trace_map(basis, (0, 1))?;
    let target = MultiIndexBasis::symmetric(basis.n(), basis.degree() - 2)?;
    let sw_src = basis.sqrt_weights();
    let sw_dst = target.sqrt_weights();
    Ok(Matrix::from_fn(t.rows(), t.cols(), |i, j| sw_dst[i] * t[(i, j)] / sw_src[j]))
}

/// Orthonormal basis of the totally traceless symmetric p-tensors.
#[derive(Clone, Debug)]
pub struct TracelessBasis {
    pub ambient: MultiIndexBasis,
    /// Columns in normalized coordinates of the ambient symmetric basis.
    pub vectors: Matrix,
}

impl TracelessBasis {
    pub fn dim(&self) -> usize {
        self.vectors.cols()
    }

    /// Canonical coefficients of the k-th basis tensor.
    pub fn coeffs(&self, k: usize) -> TensorCoeffs<'_> {
        TensorCoeffs::from_normalized(&self.ambient, &self.vectors.column(k))
            .expect("basis vectors are finite and correctly sized")
    }

    /// Tensor with normalized-coordinate combination `y` of the basis.
    pub fn combine(&self, y: &[f64]) -> TensorCoeffs<'_> {
        let u = self.vectors.mul_vec(y);
        TensorCoeffs::from_normalized(&self.ambient, &u).expect("finite combination")
    }
}

pub const KERNEL_TOL: f64 = 1e-12;

pub fn traceless_basis(n: usize, p: usize) -> Result<TracelessBasis> {
    if p < 2 {
        return Err(Error::Dimension(format!("traceless tensors need degree >= 2, got {p}")));
    }
    let ambient = MultiIndexBasis::symmetric(n, p)?;
    let t = normalized_trace_map(&ambient)?;
    let kernel = kernel_basis(&t, KERNEL_TOL);
    let vectors = Matrix::from_columns(ambient.dim(), &kernel);
    Ok(TracelessBasis { ambient, vectors })
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}
