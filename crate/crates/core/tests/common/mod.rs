#![allow(dead_code)]

use bochner::curvature::random_curvature;
use bochner::{CurvatureTensor, Matrix, MultiIndexBasis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn random_tensor(n: usize, seed: u64) -> CurvatureTensor {
    random_curvature(n, seed, None, 1.0).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_vec(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    // Box-Muller keeps this helper free of the library's sampling code
    (0..len)
        .map(|_| {
            let u: f64 = rng.random::<f64>().max(1e-300);
            let v: f64 = rng.random();
            (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
        })
        .collect()
}

/// Random symmetric n x n matrix with zero trace.
pub fn random_traceless(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<f64>> {
    let g = gaussian_vec(rng, n * n);
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            m[i][j] = 0.5 * (g[i * n + j] + g[j * n + i]);
        }
    }
    let t: f64 = (0..n).map(|i| m[i][i]).sum::<f64>() / n as f64;
    for (i, row) in m.iter_mut().enumerate() {
        row[i] -= t;
    }
    m
}

/// Householder reduction of a symmetric matrix to tridiagonal `(diag, offdiag)`.
pub fn tridiagonalize(a: &Matrix) -> (Vec<f64>, Vec<f64>) {
    let n = a.rows();
    let mut m: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| a[(i, j)]).collect()).collect();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<f64> = ((k + 1)..n).map(|i| m[i][k]).collect();
        let alpha = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if alpha == 0.0 {
            continue;
        }
        let mut v = x.clone();
        v[0] += if x[0] >= 0.0 { alpha } else { -alpha };
        let vn = v.iter().map(|t| t * t).sum::<f64>().sqrt();
        v.iter_mut().for_each(|t| *t /= vn);
        // m <- H m H with H = I - 2 v vᵀ acting on rows/cols k+1..n
        let idx: Vec<usize> = ((k + 1)..n).collect();
        for j in 0..n {
            let d: f64 = idx.iter().zip(&v).map(|(&i, vi)| vi * m[i][j]).sum();
            for (&i, vi) in idx.iter().zip(&v) {
                m[i][j] -= 2.0 * vi * d;
            }
        }
        for row in m.iter_mut() {
            let d: f64 = idx.iter().zip(&v).map(|(&j, vj)| vj * row[j]).sum();
            for (&j, vj) in idx.iter().zip(&v) {
                row[j] -= 2.0 * vj * d;
            }
        }
    }
    let diag = (0..n).map(|i| m[i][i]).collect();
    let off = (1..n).map(|i| m[i][i - 1]).collect();
    (diag, off)
}

/// Sturm count: eigenvalues of the tridiagonal matrix below `x`.
pub fn count_below(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..diag.len() {
        let e2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        q = diag[i] - x - if i == 0 { 0.0 } else { e2 / q };
        if q == 0.0 {
            q = -1e-300;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// k-th smallest eigenvalue (0-based) of a symmetric matrix by bisection.
pub fn bisect_eigenvalue(a: &Matrix, k: usize) -> f64 {
    let (diag, off) = tridiagonalize(a);
    let n = diag.len();
    let radius = (0..n)
        .map(|i| diag[i].abs() + if i > 0 { off[i - 1].abs() } else { 0.0 } + if i + 1 < n { off[i].abs() } else { 0.0 })
        .fold(0.0, f64::max);
    let (mut lo, mut hi) = (-radius - 1.0, radius + 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if count_below(&diag, &off, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-15 * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Ricci tensor by direct summation.
pub fn ricci_loop(r: &CurvatureTensor) -> Vec<Vec<f64>> {
    let n = r.n();
    let mut ric = vec![vec![0.0; n]; n];
    for k in 0..n {
        for l in 0..n {
            for i in 0..n {
                ric[k][l] += r.get(i, k, i, l);
            }
        }
    }
    ric
}

/// `R(x, y, x, y)` by direct summation, for orthonormal `x, y`.
pub fn sec_loop(r: &CurvatureTensor, x: &[f64], y: &[f64]) -> f64 {
    let n = r.n();
    let mut s = 0.0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    s += r.get(a, b, c, d) * x[a] * y[b] * x[c] * y[d];
                }
            }
        }
    }
    s
}

/// Random orthonormal pair by Gram-Schmidt.
pub fn random_frame(rng: &mut ChaCha8Rng, n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = gaussian_vec(rng, n);
    let nx = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    x.iter_mut().for_each(|v| *v /= nx);
    let mut y = gaussian_vec(rng, n);
    let d: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
    y.iter_mut().zip(&x).for_each(|(v, a)| *v -= d * a);
    let ny = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    y.iter_mut().for_each(|v| *v /= ny);
    (x, y)
}

/// All index tuples of length `p` over `0..n`, lexicographic.
pub fn all_tuples(n: usize, p: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..p {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

pub fn max_entry_diff(a: &Matrix, b: &Matrix) -> f64 {
    assert_eq!((a.rows(), a.cols()), (b.rows(), b.cols()));
    let mut m: f64 = 0.0;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            m = m.max((a[(i, j)] - b[(i, j)]).abs());
        }
    }
    m
}

/// `ℜ₂(φ)_ij = R_ik φ_kj + R_jk φ_ik − 2 R_ikjl φ_kl` on plain matrices.
pub fn explicit_r2(r: &CurvatureTensor, phi: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = r.n();
    let ric = ricci_loop(r);
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut v = 0.0;
            for k in 0..n {
                v += ric[i][k] * phi[k][j] + ric[j][k] * phi[i][k];
                for l in 0..n {
                    v -= 2.0 * r.get(i, k, j, l) * phi[k][l];
                }
            }
            out[i][j] = v;
        }
    }
    out
}

pub fn explicit_r2_matrix(r: &CurvatureTensor, basis: &MultiIndexBasis) -> Matrix {
    let n = r.n();
    let d = basis.dim();
    let mut m = Matrix::zeros(d, d);
    for (col, t) in basis.tuples().iter().enumerate() {
        let mut phi = vec![vec![0.0; n]; n];
        phi[t[0]][t[1]] = 1.0;
        phi[t[1]][t[0]] = 1.0;
        let out = explicit_r2(r, &phi);
        for (row, s) in basis.tuples().iter().enumerate() {
            m[(row, col)] = out[s[0]][s[1]];
        }
    }
    m
}

/// Extremes of sec over `samples` uniformly random planes.
pub fn sampled_extrema(r: &CurvatureTensor, samples: usize, seed: u64) -> (f64, f64) {
    let mut g = rng(seed);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for _ in 0..samples {
        let (x, y) = random_frame(&mut g, r.n());
        let s = sec_loop(r, &x, &y);
        lo = lo.min(s);
        hi = hi.max(s);
    }
    (lo, hi)
}

