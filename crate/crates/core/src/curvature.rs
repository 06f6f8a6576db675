//! Algebraic curvature tensors in an orthonormal frame.
//!
//! Sign convention: `R_ijkl = R(e_i, e_j, e_k, e_l)` with
//! `sec(e_i, e_j) = R_ijij`, so the space form of curvature κ is
//! `R_ijkl = κ(δ_ik δ_jl − δ_il δ_jk)` and `Ric_kl = Σ_i R_ikil`.
//! The curvature operator of the second kind in this convention reads
//! `R̊(φ)_ij = R_iklj φ_kl`; the opposite-sign form `R_ikjl φ_kl` found in
//! some references is its negative.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg::{dot, kernel_basis, Matrix};

/// Relative tolerance used by [`CurvatureTensor::validate`].
pub const VALIDATION_TOL: f64 = 1e-10;

/// A 4-tensor on `R^n`, stored densely. Constructors produce tensors with all
/// curvature symmetries; `from_raw` does not, and [`CurvatureTensor::validate`]
/// reports how far a tensor is from being an algebraic curvature tensor.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureTensor {
    n: usize,
    data: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CanonicalComponent {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub antisymmetry: f64,
    pub pair_symmetry: f64,
    pub bianchi: f64,
    pub norm: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CurvatureTensor {
    pub fn zeros(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Dimension(format!("dimension n = {n} must be at least 2")));
        }
        Ok(Self { n, data: vec![0.0; n * n * n * n] })
    }

    /// Arbitrary dense components in `((i n + j) n + k) n + l` order; no symmetry imposed.
    pub fn from_raw(n: usize, data: Vec<f64>) -> Result<Self> {
        if n < 2 || data.len() != n * n * n * n {
            return Err(Error::Dimension(format!("{} components for n = {n}", data.len())));
        }
        Ok(Self { n, data })
    }

    /// Builds a tensor from independent components, filling every symmetry image.
    /// Each quadruple must be canonical (see [`is_canonical`]).
    pub fn from_canonical(n: usize, comps: &[CanonicalComponent]) -> Result<Self> {
        let mut r = Self::zeros(n)?;
        for c in comps {
            if !is_canonical(c.i, c.j, c.k, c.l) || c.j.max(c.l) >= n {
                return Err(Error::InvalidInput(format!(
                    "({}, {}, {}, {}) is not a canonical quadruple for n = {n}",
                    c.i, c.j, c.k, c.l
                )));
            }
            r.set_with_images(c.i, c.j, c.k, c.l, c.value);
        }
        Ok(r)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn raw(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    fn idx(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.n + j) * self.n + k) * self.n + l
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.data[self.idx(i, j, k, l)]
    }

    /// Writes a single slot, without touching its symmetry images.
    pub fn set_raw(&mut self, i: usize, j: usize, k: usize, l: usize, v: f64) {
        let x = self.idx(i, j, k, l);
        self.data[x] = v;
    }

    /// Writes `R_ijkl = v` together with all images under the curvature symmetries.
    pub fn set_with_images(&mut self, i: usize, j: usize, k: usize, l: usize, v: f64) {
        for (a, b, c, d, s) in [
            (i, j, k, l, 1.0),
            (j, i, k, l, -1.0),
            (i, j, l, k, -1.0),
            (j, i, l, k, 1.0),
            (k, l, i, j, 1.0),
            (l, k, i, j, -1.0),
            (k, l, j, i, -1.0),
            (l, k, j, i, 1.0),
        ] {
            self.set_raw(a, b, c, d, s * v);
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn validate(&self) -> ValidationReport {
        let n = self.n;
        let (mut anti, mut pair, mut bianchi) = (0.0_f64, 0.0_f64, 0.0_f64);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let r = self.get(i, j, k, l);
                        anti = anti
                            .max((r + self.get(j, i, k, l)).abs())
                            .max((r + self.get(i, j, l, k)).abs());
                        pair = pair.max((r - self.get(k, l, i, j)).abs());
                        bianchi = bianchi
                            .max((r + self.get(i, k, l, j) + self.get(i, l, j, k)).abs());
                    }
                }
            }
        }
        let norm = self.frobenius_norm();
        let tolerance = VALIDATION_TOL * norm.max(1.0);
        let all_finite = self.data.iter().all(|x| x.is_finite());
        ValidationReport {
            antisymmetry: anti,
            pair_symmetry: pair,
            bianchi,
            norm,
            tolerance,
            passed: all_finite && anti <= tolerance && pair <= tolerance && bianchi <= tolerance,
        }
    }

    /// Non-zero components at canonical quadruples, 0-based.
    pub fn canonical_components(&self) -> Vec<CanonicalComponent> {
        canonical_quadruples(self.n)
            .into_iter()
            .filter_map(|(i, j, k, l)| {
                let value = self.get(i, j, k, l);
                (value != 0.0).then_some(CanonicalComponent { i, j, k, l, value })
            })
            .collect()
    }

    pub fn ricci(&self) -> Matrix {
        let n = self.n;
        Matrix::from_fn(n, n, |k, l| (0..n).map(|i| self.get(i, k, i, l)).sum())
    }

    pub fn scalar(&self) -> f64 {
        let ric = self.ricci();
        (0..self.n).map(|i| ric[(i, i)]).sum()
    }

    /// `R(x, y, z, w)`.
    pub fn eval(&self, x: &[f64], y: &[f64], z: &[f64], w: &[f64]) -> f64 {
        let v = self.contract_last3(y, z, w);
        dot(x, &v)
    }

    /// `v_a = R(e_a, y, z, w)`.
    pub fn contract_last3(&self, y: &[f64], z: &[f64], w: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n];
        for (a, o) in out.iter_mut().enumerate() {
            let mut s = 0.0;
            for (j, yj) in y.iter().enumerate() {
                if *yj == 0.0 {
                    continue;
                }
                let base = (a * n + j) * n * n;
                let block = &self.data[base..base + n * n];
                let mut t = 0.0;
                for (k, zk) in z.iter().enumerate() {
                    t += zk * dot(&block[k * n..(k + 1) * n], w);
                }
                s += yj * t;
            }
            *o = s;
        }
        out
    }

    /// Sectional curvature of the plane spanned by `x` and `y`.
    pub fn sectional(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        if x.len() != self.n || y.len() != self.n {
            return Err(Error::Dimension(format!("vectors must have length {}", self.n)));
        }
        let xx = dot(x, x);
        let yy = dot(y, y);
        let xy = dot(x, y);
        let gram = xx * yy - xy * xy;
        if !(gram > 1e-12 * (xx * yy).max(1.0)) {
            return Err(Error::DegeneratePlane(gram));
        }
        Ok(self.eval(x, y, x, y) / gram)
    }

    /// First 16 hex digits of a SHA-256 over `n` and the canonical components.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.n as u64).to_le_bytes());
        for c in self.canonical_components() {
            for x in [c.i, c.j, c.k, c.l] {
                h.update((x as u64).to_le_bytes());
            }
            h.update(c.value.to_bits().to_le_bytes());
        }
        hex::encode(h.finalize())[..16].to_string()
    }

    pub fn add_scaled(&self, other: &CurvatureTensor, s: f64) -> CurvatureTensor {
        assert_eq!(self.n, other.n);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + s * b).collect();
        CurvatureTensor { n: self.n, data }
    }
}

/// `(i, j, k, l)` with `i < j`, `k < l` and `(i, j) <= (k, l)` lexicographically.
pub fn is_canonical(i: usize, j: usize, k: usize, l: usize) -> bool {
    i < j && k < l && (i, j) <= (k, l)
}

pub fn canonical_quadruples(n: usize) -> Vec<(usize, usize, usize, usize)> {
    let pairs = index_pairs(n);
    let mut out = Vec::with_capacity(pairs.len() * (pairs.len() + 1) / 2);
    for (a, &(i, j)) in pairs.iter().enumerate() {
        for &(k, l) in &pairs[a..] {
            out.push((i, j, k, l));
        }
    }
    out
}

fn index_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect()
}

/// Canonical representative of `R_ijkl` with its sign; `None` when the
/// component vanishes by antisymmetry.
pub fn canonical_image(i: usize, j: usize, k: usize, l: usize) -> Option<((usize, usize, usize, usize), f64)> {
    if i == j || k == l {
        return None;
    }
    let mut sign = 1.0;
    let (a, b) = if i < j { (i, j) } else { sign = -sign; (j, i) };
    let (c, d) = if k < l { (k, l) } else { sign = -sign; (l, k) };
    if (a, b) <= (c, d) {
        Some(((a, b, c, d), sign))
    } else {
        Some(((c, d, a, b), sign))
    }
}

pub fn constant_curvature(n: usize, kappa: f64) -> Result<CurvatureTensor> {
    let mut r = CurvatureTensor::zeros(n)?;
    for i in 0..n {
        for j in (i + 1)..n {
            r.set_with_images(i, j, i, j, kappa);
        }
    }
    Ok(r)
}

/// Riemannian product of space forms; factor `(n_i, κ_i)` occupies the next `n_i` frame vectors.
pub fn product_space(factors: &[(usize, f64)]) -> Result<CurvatureTensor> {
    if factors.len() < 2 {
        return Err(Error::InvalidInput("a product needs at least two factors".into()));
    }
    if let Some((d, _)) = factors.iter().find(|(d, _)| *d < 2) {
        return Err(Error::Dimension(format!("factor dimension {d} must be at least 2")));
    }
    let n: usize = factors.iter().map(|(d, _)| d).sum();
    let mut r = CurvatureTensor::zeros(n)?;
    let mut offset = 0;
    for &(d, kappa) in factors {
        for i in offset..offset + d {
            for j in (i + 1)..offset + d {
                r.set_with_images(i, j, i, j, kappa);
            }
        }
        offset += d;
    }
    Ok(r)
}

/// Fubini–Study curvature on `C^m = R^{2m}` with holomorphic sectional
/// curvature 4, so that `1 <= sec <= 4`. The complex structure is
/// `J e_{2a} = e_{2a+1}`, `J e_{2a+1} = -e_{2a}`.
pub fn fubini_study(m: usize) -> Result<CurvatureTensor> {
    if m < 2 {
        return Err(Error::Dimension(format!("complex dimension m = {m} must be at least 2")));
    }
    let n = 2 * m;
    let j = complex_structure(m);
    let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    // <J e_a, e_b> = j[(b, a)]
    let jin = |a: usize, b: usize| j[(b, a)];
    let mut data = vec![0.0; n * n * n * n];
    let mut x = 0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for e in 0..n {
                    data[x] = d(a, c) * d(b, e) - d(a, e) * d(b, c) + jin(a, c) * jin(b, e)
                        - jin(a, e) * jin(b, c)
                        + 2.0 * jin(a, b) * jin(c, e);
                    x += 1;
                }
            }
        }
    }
    CurvatureTensor::from_raw(n, data)
}

/// Matrix of `J` (column `a` is `J e_a`).
pub fn complex_structure(m: usize) -> Matrix {
    let n = 2 * m;
    let mut j = Matrix::zeros(n, n);
    for a in 0..m {
        j[(2 * a + 1, 2 * a)] = 1.0;
        j[(2 * a, 2 * a + 1)] = -1.0;
    }
    j
}

/// `base + eps * P(G)`, where `G` is a seeded standard Gaussian in the
/// symmetry-reduced coordinates and `P` is the orthogonal projection onto the
/// solutions of the first Bianchi identity. With `eps == 0` the base is
/// returned unchanged.
pub fn random_curvature(
    n: usize,
    seed: u64,
    base: Option<&CurvatureTensor>,
    eps: f64,
) -> Result<CurvatureTensor> {
    if n < 2 {
        return Err(Error::Dimension(format!("dimension n = {n} must be at least 2")));
    }
    if !(eps >= 0.0) || !eps.is_finite() {
        return Err(Error::InvalidInput(format!("eps must be finite and >= 0, got {eps}")));
    }
    let base = match base {
        Some(b) if b.n() != n => {
            return Err(Error::Dimension(format!("base has n = {}, requested {n}", b.n())))
        }
        Some(b) => b.clone(),
        None => CurvatureTensor::zeros(n)?,
    };
    if eps == 0.0 {
        return Ok(base);
    }
    let perturbation = bianchi_projected_gaussian(n, seed)?;
    Ok(base.add_scaled(&perturbation, eps))
}

fn bianchi_projected_gaussian(n: usize, seed: u64) -> Result<CurvatureTensor> {
    let quads = canonical_quadruples(n);
    let position: HashMap<(usize, usize, usize, usize), usize> =
        quads.iter().enumerate().map(|(p, q)| (*q, p)).collect();
    // full-contraction multiplicity of each canonical component
    let sqrt_mult: Vec<f64> = quads
        .iter()
        .map(|&(i, j, k, l)| if (i, j) == (k, l) { 2.0 } else { 8f64.sqrt() })
        .collect();

    // For tensors with the pair symmetries, the first Bianchi identity reduces to
    // R_abcd + R_acdb + R_adbc = 0 for each 4-subset a < b < c < d.
    let mut rows = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                for d in (c + 1)..n {
                    let mut row = vec![0.0; quads.len()];
                    for (i, j, k, l) in [(a, b, c, d), (a, c, d, b), (a, d, b, c)] {
                        let (q, s) = canonical_image(i, j, k, l).expect("distinct indices");
                        let p = position[&q];
                        row[p] += s / sqrt_mult[p];
                    }
                    rows.push(row);
                }
            }
        }
    }
    let constraint = Matrix::from_fn(rows.len(), quads.len(), |r, c| rows[r][c]);
    let kernel = kernel_basis(&constraint, 1e-12);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g: Vec<f64> = (0..quads.len()).map(|_| StandardNormal.sample(&mut rng)).collect();
    let mut u = vec![0.0; quads.len()];
    for k in &kernel {
        let c = dot(k, &g);
        for (x, y) in u.iter_mut().zip(k) {
            *x += c * y;
        }
    }
    let comps: Vec<CanonicalComponent> = quads
        .iter()
        .zip(u.iter().zip(&sqrt_mult))
        .map(|(&(i, j, k, l), (x, s))| CanonicalComponent { i, j, k, l, value: x / s })
        .collect();
    CurvatureTensor::from_canonical(n, &comps)
}

/// Provenance of a generated tensor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum CurvatureModel {
    Constant { n: usize, kappa: f64 },
    Product { factors: Vec<(usize, f64)> },
    FubiniStudy { m: usize },
    RandomPerturbed { n: usize, base_kappa: f64, seed: u64, eps: f64 },
}

impl CurvatureModel {
    pub fn build(&self) -> Result<CurvatureTensor> {
        match self {
            CurvatureModel::Constant { n, kappa } => constant_curvature(*n, *kappa),
            CurvatureModel::Product { factors } => product_space(factors),
            CurvatureModel::FubiniStudy { m } => fubini_study(*m),
            CurvatureModel::RandomPerturbed { n, base_kappa, seed, eps } => {
                let base = constant_curvature(*n, *base_kappa)?;
                random_curvature(*n, *seed, Some(&base), *eps)
            }
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CurvatureFile {
    n: usize,
    components: Vec<CanonicalComponent>,
}

/// Canonical JSON with 1-based indices; zero components are omitted.
pub fn to_json(r: &CurvatureTensor) -> String {
    let components = r
        .canonical_components()
        .into_iter()
        .map(|c| CanonicalComponent { i: c.i + 1, j: c.j + 1, k: c.k + 1, l: c.l + 1, value: c.value })
        .collect();
    let file = CurvatureFile { n: r.n(), components };
    serde_json::to_string_pretty(&file).expect("curvature file serializes")
}

/// Reads curvature JSON. Canonical quadruples are expanded by symmetry; any
/// other quadruple is written to its own slot only. The result must pass
/// [`CurvatureTensor::validate`], otherwise `Error::Validation` is returned.
pub fn from_json(text: &str) -> Result<CurvatureTensor> {
    let file: CurvatureFile = serde_json::from_str(text)?;
    let n = file.n;
    let mut r = CurvatureTensor::zeros(n)?;
    let mut seen: HashMap<(usize, usize, usize, usize), f64> = HashMap::new();
    let mut raw = Vec::new();
    for c in &file.components {
        if [c.i, c.j, c.k, c.l].iter().any(|&x| x < 1 || x > n) {
            return Err(Error::InvalidInput(format!(
                "index out of range 1..={n} in ({}, {}, {}, {})",
                c.i, c.j, c.k, c.l
            )));
        }
        if !c.value.is_finite() {
            return Err(Error::InvalidInput(format!("non-finite value {}", c.value)));
        }
        let q = (c.i - 1, c.j - 1, c.k - 1, c.l - 1);
        if is_canonical(q.0, q.1, q.2, q.3) {
            if let Some(prev) = seen.insert(q, c.value) {
                if prev != c.value {
                    return Err(Error::Validation(format!(
                        "conflicting values {prev} and {} for ({}, {}, {}, {})",
                        c.value, c.i, c.j, c.k, c.l
                    )));
                }
            }
            r.set_with_images(q.0, q.1, q.2, q.3, c.value);
        } else {
            raw.push((q, c.value));
        }
    }
    for ((i, j, k, l), v) in raw {
        r.set_raw(i, j, k, l, v);
    }
    let report = r.validate();
    if !report.passed {
        return Err(Error::Validation(format!(
            "antisymmetry {:e}, pair symmetry {:e}, Bianchi {:e} (tolerance {:e})",
            report.antisymmetry, report.pair_symmetry, report.bianchi, report.tolerance
        )));
    }
    Ok(r)
}
