use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{dot, norm, orthonormalize, sym_eigen, Matrix, SymMatrix};

use super::dec::CsrMatrix;

/// Problems up to this size are solved densely.
pub const DENSE_LIMIT: usize = 200;
pub const RESIDUAL_TOL: f64 = 1e-8;
pub const MAX_ITERATIONS: usize = 500;
/// `(S + SHIFT·I)` stays positive definite even with harmonic forms present.
const SHIFT: f64 = 0.1;
const START_SEED: u64 = 0x1f0a;

/// Lowest `k` eigenvalues of a symmetric positive semidefinite sparse matrix, ascending.
pub fn lowest_eigenvalues(s: &CsrMatrix, k: usize) -> Result<Vec<f64>> {
    if s.rows() != s.cols() {
        return Err(Error::Dimension(format!("{}x{} matrix is not square", s.rows(), s.cols())));
    }
    let k = k.min(s.rows());
    if k == 0 {
        return Ok(Vec::new());
    }
    if s.rows() <= DENSE_LIMIT {
        let e = sym_eigen(&SymMatrix::symmetrized(&s.to_dense()));
        return Ok(e.values[..k].to_vec());
    }
    subspace_iteration(s, k)
}

/// Preconditioned conjugate gradients for `(S + shift I) x = b`.
fn cg_solve(s: &CsrMatrix, shift: f64, diag: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    let n = b.len();
    let apply = |x: &[f64]| -> Vec<f64> { s.mul_vec(x).iter().zip(x).map(|(y, xi)| y + shift * xi).collect() };
    let b_norm = norm(b);
    let mut x = vec![0.0; n];
    if b_norm == 0.0 {
        return Ok(x);
    }
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(diag).map(|(ri, d)| ri / d).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    for _ in 0..10 * n {
        let ap = apply(&p);
        let alpha = rz / dot(&p, &ap);
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        if norm(&r) <= 1e-13 * b_norm {
            return Ok(x);
        }
        for i in 0..n {
            z[i] = r[i] / diag[i];
        }
        let rz_next = dot(&r, &z);
        let beta = rz_next / rz;
        rz = rz_next;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(Error::NoConvergence(format!("conjugate gradients stalled on a system of size {n}")))
}

/// Block inverse iteration with Rayleigh-Ritz on the shifted operator.
fn subspace_iteration(s: &CsrMatrix, k: usize) -> Result<Vec<f64>> {
    let n = s.rows();
    let block = (k + 10).min(n);
    let diag: Vec<f64> = s.diagonal().iter().map(|d| d + SHIFT).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);
    let mut x: Vec<Vec<f64>> = (0..block).map(|_| (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()).collect();
    orthonormalize(&mut x);
    for _ in 0..MAX_ITERATIONS {
        let mut y = x.iter().map(|v| cg_solve(s, SHIFT, &diag, v)).collect::<Result<Vec<_>>>()?;
        if !orthonormalize(&mut y) {
            return Err(Error::NoConvergence("iteration block lost rank".into()));
        }
        let sy: Vec<Vec<f64>> = y.iter().map(|v| s.mul_vec(v)).collect();
        let h = Matrix::from_fn(block, block, |i, j| dot(&y[i], &sy[j]));
        let e = sym_eigen(&SymMatrix::symmetrized(&h));
        let mut converged = true;
        let mut next = Vec::with_capacity(block);
        for c in 0..block {
            let w = e.vector(c);
            let mut v = vec![0.0; n];
            let mut sv = vec![0.0; n];
            for (j, wj) in w.iter().enumerate() {
                for i in 0..n {
                    v[i] += wj * y[j][i];
                    sv[i] += wj * sy[j][i];
                }
            }
            if c < k {
                let theta = e.values[c];
                let res: Vec<f64> = sv.iter().zip(&v).map(|(a, b)| a - theta * b).collect();
                if norm(&res) > RESIDUAL_TOL * theta.abs().max(1.0) {
                    converged = false;
                }
            }
            next.push(v);
        }
        x = next;
        if converged {
            return Ok(e.values[..k].to_vec());
        }
    }
    Err(Error::NoConvergence(format!("{k} eigenpairs did not converge in {MAX_ITERATIONS} iterations")))
}

/// Number of leading eigenvalues in the first cluster above `floor`:
/// consecutive values whose relative gap stays below `rel_gap`.
pub fn cluster_multiplicity(values: &[f64], floor: f64, rel_gap: f64) -> usize {
    let mut it = values.iter().skip_while(|v| **v <= floor);
    let Some(&first) = it.next() else { return 0 };
    let mut count = 1;
    let mut prev = first;
    for &v in it {
        if (v - prev) > rel_gap * prev {
            break;
        }
        count += 1;
        prev = v;
    }
    count
}

/// CSV with `index,eigenvalue` rows, 17 significant digits.
pub fn spectrum_csv(values: &[f64]) -> String {
    let mut s = String::from("index,eigenvalue\n");
    for (i, v) in values.iter().enumerate() {
        s.push_str(&format!("{i},{v:.16e}\n"));
    }
    s
}
