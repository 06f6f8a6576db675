//! The zeroth-order curvature term `ℜ` of Lichnerowicz-type Laplacians
//! `Δ = ∇*∇ + t ℜ`, assembled as a matrix on symmetric tensors, traceless
//! symmetric tensors and forms, together with the curvature operator of the
//! second kind, the associated quadratic forms and pointwise bound checks.
//!
//! For a p-tensor the operator is
//!
//! ```text
//! ℜ(φ)_{i1..ip} = Σ_a Ric_{ia k} φ(..k at a..) − Σ_{a≠b} R_{ia k ib l} φ(..k at a.., ..l at b..)
//! ```
//!
//! One routine serves symmetric tensors and forms; both are invariant subspaces.
//! Matrices are given in normalized coordinates (see [`crate::tensor`]), so they
//! are symmetric.

pub mod diagnostics;

use serde::{Deserialize, Serialize};

use crate::curvature::CurvatureTensor;
use crate::error::{Error, Result};
use crate::linalg::{sym_eigen, Matrix, SymEigen, SymMatrix};
use crate::pinching::PinchingReport;
use crate::tensor::{traceless_basis, MultiIndexBasis, Symmetry, TensorCoeffs};

/// Slack used by every [`BoundCheck`].
pub const BOUND_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Space {
    /// All symmetric p-tensors.
    #[serde(rename = "S^p")]
    Symmetric,
    /// Totally traceless symmetric p-tensors.
    #[serde(rename = "S^p_0")]
    TracelessSymmetric,
    /// Alternating q-forms.
    #[serde(rename = "Lambda^q")]
    Forms,
    /// Traceless symmetric 2-tensors under the curvature operator of the second kind.
    #[serde(rename = "S^2_0-second-kind")]
    SecondKind,
}

#[derive(Clone, Debug)]
pub struct WeitzenboeckMatrix {
    pub space: Space,
    pub degree: usize,
    pub n: usize,
    pub t: f64,
    pub matrix: SymMatrix,
    /// Canonical basis of `S^p` or `Λ^q` whose normalized coordinates the matrix uses,
    /// or which ambient the traceless basis lives in.
    pub basis: MultiIndexBasis,
    /// Orthonormal columns spanning the traceless subspace, for the restricted spaces.
    pub traceless: Option<Matrix>,
}

impl WeitzenboeckMatrix {
    pub fn matrix(&self) -> &SymMatrix {
        &self.matrix
    }

    pub fn eigen(&self) -> SymEigen {
        sym_eigen(&self.matrix)
    }

    pub fn lambda_min(&self) -> f64 {
        self.eigen().values[0]
    }

    pub fn lambda_max(&self) -> f64 {
        *self.eigen().values.last().unwrap()
    }
}

/// Matrix of `ℜ` on canonical coefficients (not normalized, not symmetric in general).
pub fn coefficient_matrix(r: &CurvatureTensor, basis: &MultiIndexBasis) -> Result<Matrix> {
    let n = r.n();
    if basis.n() != n {
        return Err(Error::Dimension(format!("basis over n = {} but curvature has n = {n}", basis.n())));
    }
    let p = basis.degree();
    let ric = r.ricci();
    let mut m = Matrix::zeros(basis.dim(), basis.dim());
    let mut work = vec![0usize; p];
    for (row, tuple) in basis.tuples().iter().enumerate() {
        // Ricci action on each slot
        for a in 0..p {
            for k in 0..n {
                let c = ric[(tuple[a], k)];
                if c == 0.0 {
                    continue;
                }
                work.copy_from_slice(tuple);
                work[a] = k;
                if let Some((col, sign)) = basis.canonicalize(&work) {
                    m[(row, col)] += c * sign;
                }
            }
        }
        // paired curvature contractions over ordered slot pairs
        for a in 0..p {
            for b in 0..p {
                if a == b {
                    continue;
                }
                for k in 0..n {
                    for l in 0..n {
                        let c = r.get(tuple[a], k, tuple[b], l);
                        if c == 0.0 {
                            continue;
                        }
                        work.copy_from_slice(tuple);
                        work[a] = k;
                        work[b] = l;
                        if let Some((col, sign)) = basis.canonicalize(&work) {
                            m[(row, col)] -= c * sign;
                        }
                    }
                }
            }
        }
    }
    Ok(m)
}

/// Converts a coefficient-space operator to normalized coordinates.
pub fn normalize_operator(m: &Matrix, basis: &MultiIndexBasis) -> Matrix {
    let sw = basis.sqrt_weights();
    Matrix::from_fn(m.rows(), m.cols(), |i, j| sw[i] * m[(i, j)] / sw[j])
}

fn symmetric_checked(m: &Matrix) -> Result<SymMatrix> {
    SymMatrix::new(m.clone()).map(|_| SymMatrix::symmetrized(m))
}

/// `t · ℜ` on the requested space.
pub fn weitz_matrix(r: &CurvatureTensor, space: Space, degree: usize, t: f64) -> Result<WeitzenboeckMatrix> {
    let n = r.n();
    let (basis, traceless) = match space {
        Space::Symmetric if degree >= 1 => (MultiIndexBasis::symmetric(n, degree)?, None),
        Space::TracelessSymmetric if degree >= 2 => {
            let tb = traceless_basis(n, degree)?;
            (tb.ambient, Some(tb.vectors))
        }
        Space::Forms if degree >= 1 && degree <= n => (MultiIndexBasis::alternating(n, degree)?, None),
        Space::SecondKind => {
            return Err(Error::Dimension("use second_kind_matrix for the second-kind operator".into()))
        }
        _ => return Err(Error::Dimension(format!("degree {degree} is invalid for {space:?} with n = {n}"))),
    };
    let full = symmetric_checked(&normalize_operator(&coefficient_matrix(r, &basis)?, &basis))?;
    let matrix = match &traceless {
        Some(b) => full.compress(b),
        None => full,
    };
    let matrix = SymMatrix::symmetrized(&matrix.matrix().scale(t));
    Ok(WeitzenboeckMatrix { space, degree, n, t, matrix, basis, traceless })
}

/// Matrix of `φ ↦ R_iklj φ_kl` on canonical symmetric 2-tensor coefficients.
pub fn second_kind_coefficients(r: &CurvatureTensor, basis: &MultiIndexBasis) -> Matrix {
    let n = r.n();
    let mut m = Matrix::zeros(basis.dim(), basis.dim());
    for (row, t) in basis.tuples().iter().enumerate() {
        let (i, j) = (t[0], t[1]);
        for k in 0..n {
            for l in 0..n {
                let c = r.get(i, k, l, j);
                if c == 0.0 {
                    continue;
                }
                let (col, _) = basis.canonicalize(&[k, l]).expect("symmetric");
                m[(row, col)] += c;
            }
        }
    }
    m
}

/// Curvature operator of the second kind on traceless symmetric 2-tensors,
/// in an orthonormal traceless basis.
pub fn second_kind_matrix(r: &CurvatureTensor) -> Result<WeitzenboeckMatrix> {
    let tb = traceless_basis(r.n(), 2)?;
    let full = symmetric_checked(&normalize_operator(&second_kind_coefficients(r, &tb.ambient), &tb.ambient))?;
    let matrix = full.compress(&tb.vectors);
    Ok(WeitzenboeckMatrix {
        space: Space::SecondKind,
        degree: 2,
        n: r.n(),
        t: 1.0,
        matrix,
        basis: tb.ambient,
        traceless: Some(tb.vectors),
    })
}

/// `Q(φ) = g(ℜ(φ), φ)` for a symmetric tensor or a form.
pub fn q_form_value(r: &CurvatureTensor, phi: &TensorCoeffs<'_>) -> Result<f64> {
    let basis = phi.basis();
    if basis.n() != r.n() {
        return Err(Error::Dimension(format!("tensor over n = {} but curvature has n = {}", basis.n(), r.n())));
    }
    if basis.degree() == 0 {
        return Err(Error::Dimension("degree must be at least 1".into()));
    }
    let m = coefficient_matrix(r, basis)?;
    let image = m.mul_vec(phi.values());
    let image = TensorCoeffs::new(basis, image)?;
    Ok(image.inner(phi))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagonalIdentity {
    /// `g(ℜ₂(φ), φ)` from the assembled operator.
    pub q_form: f64,
    /// `Σ_{i≠j} sec(e_i, e_j)(ε_i − ε_j)²` in an eigenframe of φ.
    pub sectional_sum: f64,
    /// `|q_form − sectional_sum| / max(1, |q_form|)`.
    pub residual: f64,
}

/// Compares `Q₂(φ)` with its expression through sectional curvatures of the
/// coordinate planes of an eigenframe of φ.
pub fn diag_identity_residual(r: &CurvatureTensor, phi: &TensorCoeffs<'_>) -> Result<DiagonalIdentity> {
    let basis = phi.basis();
    if basis.degree() != 2 || basis.symmetry() != Symmetry::Symmetric {
        return Err(Error::Dimension("expected a symmetric 2-tensor".into()));
    }
    let mat = phi.as_matrix()?;
    let n = mat.rows();
    let trace: f64 = (0..n).map(|i| mat[(i, i)]).sum();
    if trace.abs() > 1e-10 * phi.norm_sq().sqrt().max(1.0) {
        return Err(Error::InvalidInput(format!("tensor is not traceless (trace {trace:e})")));
    }
    let q_form = q_form_value(r, phi)?;
    let eig = sym_eigen(&SymMatrix::symmetrized(&mat));
    let frame: Vec<Vec<f64>> = (0..n).map(|k| eig.vector(k)).collect();
    let mut sectional_sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let sec = r.eval(&frame[i], &frame[j], &frame[i], &frame[j]);
            let d = eig.values[i] - eig.values[j];
            sectional_sum += sec * d * d;
        }
    }
    let residual = (q_form - sectional_sum).abs() / q_form.abs().max(1.0);
    Ok(DiagonalIdentity { q_form, sectional_sum, residual })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundTag {
    /// `Q_p ≥ p(n+p−2)α‖φ‖²` on traceless symmetric tensors.
    #[serde(rename = "eq2.7")]
    Eq2_7,
    /// `Q_p ≥ p(n−1)α‖φ‖²` under the non-strict Ricci bound.
    #[serde(rename = "eq2.9")]
    Eq2_9,
    /// `Q_p ≤ −p(n+p−2)β‖φ‖²` under negative pinching.
    #[serde(rename = "eq3.1")]
    Eq3_1,
    /// `Q_q ≥ q(n−q)α‖ω‖²` on forms.
    #[serde(rename = "eq4.1")]
    Eq4_1,
    /// Eigenvalue bound `λ ≥ p(n+p−2)α` for the Lichnerowicz Laplacian.
    #[serde(rename = "thm3")]
    Thm3,
    /// Eigenvalue bound `λ ≥ p(n+p−2)β` under negative pinching.
    #[serde(rename = "sec3-eigen")]
    Sec3Eigen,
    /// Eigenvalue bound `λ ≥ q(n−q)α` for the Hodge Laplacian.
    #[serde(rename = "sec4-eigen")]
    Sec4Eigen,
}

impl BoundTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundTag::Eq2_7 => "eq2.7",
            BoundTag::Eq2_9 => "eq2.9",
            BoundTag::Eq3_1 => "eq3.1",
            BoundTag::Eq4_1 => "eq4.1",
            BoundTag::Thm3 => "thm3",
            BoundTag::Sec3Eigen => "sec3-eigen",
            BoundTag::Sec4Eigen => "sec4-eigen",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "eq2.7" => BoundTag::Eq2_7,
            "eq2.9" => BoundTag::Eq2_9,
            "eq3.1" => BoundTag::Eq3_1,
            "eq4.1" => BoundTag::Eq4_1,
            "thm3" => BoundTag::Thm3,
            "sec3-eigen" => BoundTag::Sec3Eigen,
            "sec4-eigen" => BoundTag::Sec4Eigen,
            other => return Err(Error::InvalidInput(format!("unknown bound tag {other:?}"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub bound_tag: BoundTag,
    pub space: Space,
    pub degree: usize,
    pub n: usize,
    /// Right-hand side constant, e.g. `p(n+p−2)α`.
    pub rhs: f64,
    /// `λ_min` (lower bounds) or `λ_max` (upper bounds) of the relevant operator.
    pub lambda_extreme: f64,
    /// `λ − rhs` for lower bounds, `rhs − λ` for upper bounds.
    pub margin: f64,
    pub satisfied: bool,
    /// The hypotheses of the bound failed; the check is then reported as satisfied.
    pub vacuous: bool,
    pub tolerance: f64,
    pub inputs_digest: String,
}

impl BoundCheck {
    /// A non-vacuous check whose margin is below `-tolerance`.
    pub fn violated(&self) -> bool {
        !self.satisfied
    }
}

#[allow(clippy::too_many_arguments)]
fn make_check(
    tag: BoundTag,
    space: Space,
    degree: usize,
    n: usize,
    rhs: f64,
    lambda: f64,
    margin: f64,
    hypotheses: bool,
    digest: String,
) -> BoundCheck {
    BoundCheck {
        bound_tag: tag,
        space,
        degree,
        n,
        rhs,
        lambda_extreme: lambda,
        margin,
        satisfied: !hypotheses || margin >= -BOUND_TOL,
        vacuous: !hypotheses,
        tolerance: BOUND_TOL,
        inputs_digest: digest,
    }
}

fn digest(r: &CurvatureTensor, label: &str, degree: usize, constant_name: &str, constant: f64) -> String {
    format!("n={};{label}={degree};{constant_name}={constant:.17e};R={}", r.n(), r.digest())
}

fn ensure_same_n(r: &CurvatureTensor, pinch: &PinchingReport) -> Result<()> {
    if pinch.n != r.n() {
        return Err(Error::Dimension(format!("report for n = {} but curvature has n = {}", pinch.n, r.n())));
    }
    Ok(())
}

/// Lower bound on `ℜ_p` restricted to traceless symmetric tensors.
///
/// `Eq2_7` uses `p(n+p−2)α` under the strict positive hypotheses;
/// `Eq2_9` uses `p(n−1)α` under `sec ≥ α > 0, Ric ≤ nα`.
pub fn bound_positive_sym(r: &CurvatureTensor, pinch: &PinchingReport, p: usize, tag: BoundTag) -> Result<BoundCheck> {
    ensure_same_n(r, pinch)?;
    let n = r.n() as f64;
    let pf = p as f64;
    let alpha = pinch.alpha();
    let (rhs, hyp) = match tag {
        BoundTag::Eq2_7 => (pf * (n + pf - 2.0) * alpha, pinch.verdicts.positive_strict()),
        BoundTag::Eq2_9 => (pf * (n - 1.0) * alpha, pinch.verdicts.lemma1_nonneg),
        other => return Err(Error::InvalidInput(format!("{} is not a positive symmetric bound", other.as_str()))),
    };
    let lambda = weitz_matrix(r, Space::TracelessSymmetric, p, 1.0)?.lambda_min();
    Ok(make_check(
        tag,
        Space::TracelessSymmetric,
        p,
        r.n(),
        rhs,
        lambda,
        lambda - rhs,
        hyp,
        digest(r, "p", p, "alpha", alpha),
    ))
}

/// Upper bound `λ_max(ℜ_p|S^p_0) ≤ −p(n+p−2)β` under strict negative pinching.
pub fn bound_negative_sym(r: &CurvatureTensor, pinch: &PinchingReport, p: usize) -> Result<BoundCheck> {
    ensure_same_n(r, pinch)?;
    let n = r.n() as f64;
    let pf = p as f64;
    let beta = pinch.beta();
    let rhs = -pf * (n + pf - 2.0) * beta;
    let lambda = weitz_matrix(r, Space::TracelessSymmetric, p, 1.0)?.lambda_max();
    Ok(make_check(
        BoundTag::Eq3_1,
        Space::TracelessSymmetric,
        p,
        r.n(),
        rhs,
        lambda,
        rhs - lambda,
        pinch.verdicts.lemma2_strict,
        digest(r, "p", p, "beta", beta),
    ))
}

/// Lower bound `λ_min(ℜ|Λ^q) ≥ q(n−q)α` under the strict positive hypotheses.
pub fn bound_form(r: &CurvatureTensor, pinch: &PinchingReport, q: usize) -> Result<BoundCheck> {
    ensure_same_n(r, pinch)?;
    let n = r.n() as f64;
    let qf = q as f64;
    let alpha = pinch.alpha();
    let rhs = qf * (n - qf) * alpha;
    let lambda = weitz_matrix(r, Space::Forms, q, 1.0)?.lambda_min();
    Ok(make_check(
        BoundTag::Eq4_1,
        Space::Forms,
        q,
        r.n(),
        rhs,
        lambda,
        lambda - rhs,
        pinch.verdicts.positive_strict(),
        digest(r, "q", q, "alpha", alpha),
    ))
}

/// Builds a check of an eigenvalue `lambda` against the constant for `which`,
/// e.g. a discrete Hodge eigenvalue against `q(n−q)α`.
pub fn eigen_bound_check(n: usize, degree: usize, constant: f64, which: BoundTag, lambda: f64, provenance: String) -> Result<BoundCheck> {
    let rhs = eigen_bound_constant(n, degree, constant, which)?;
    let space = match which {
        BoundTag::Sec4Eigen => Space::Forms,
        _ => Space::TracelessSymmetric,
    };
    Ok(make_check(which, space, degree, n, rhs, lambda, lambda - rhs, true, provenance))
}

/// `p(n+p−2)α` (`Thm3`), `p(n+p−2)β` (`Sec3Eigen`) or `q(n−q)α` (`Sec4Eigen`).
pub fn eigen_bound_constant(n: usize, degree: usize, constant: f64, which: BoundTag) -> Result<f64> {
    if n < 2 || degree == 0 || !(constant > 0.0) || !constant.is_finite() {
        return Err(Error::InvalidInput(format!(
            "eigenvalue bounds need n >= 2, degree >= 1 and a positive constant (got n={n}, degree={degree}, {constant})"
        )));
    }
    let (nf, d) = (n as f64, degree as f64);
    match which {
        BoundTag::Thm3 | BoundTag::Sec3Eigen => Ok(d * (nf + d - 2.0) * constant),
        BoundTag::Sec4Eigen => {
            if degree >= n {
                return Err(Error::Dimension(format!("form degree {degree} must be below n = {n}")));
            }
            Ok(d * (nf - d) * constant)
        }
        other => Err(Error::InvalidInput(format!("{} is not an eigenvalue bound", other.as_str()))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rigidity {
    Rigid,
    Inconclusive,
    NotEinstein,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RigidityReport {
    pub verdict: Rigidity,
    pub scalar: f64,
    pub sec_min: f64,
    /// `n² α`.
    pub threshold: f64,
    /// `‖Ric − (s/n) I‖_F`.
    pub einstein_deviation: f64,
    /// `λ_min(R̊)`; positive means no traceless 2-tensor can balance the integral identity.
    pub second_kind_min: f64,
}

/// An Einstein tensor with `sec ≥ α > 0` and `s < n²α` admits no infinitesimal
/// Einstein deformation.
pub fn rigidity_check(r: &CurvatureTensor, pinch: &PinchingReport) -> Result<RigidityReport> {
    ensure_same_n(r, pinch)?;
    let n = r.n();
    let nf = n as f64;
    let ric = r.ricci();
    let s = r.scalar();
    let deviation = ric.sub(&Matrix::identity(n).scale(s / nf)).frobenius_norm();
    let alpha = pinch.sec_min;
    let threshold = nf * nf * alpha;
    let verdict = if deviation > 1e-8 * s.abs().max(1.0) {
        Rigidity::NotEinstein
    } else if alpha > 0.0 && s < threshold - BOUND_TOL {
        Rigidity::Rigid
    } else {
        Rigidity::Inconclusive
    };
    let second_kind_min = second_kind_matrix(r)?.lambda_min();
    Ok(RigidityReport { verdict, scalar: s, sec_min: alpha, threshold, einstein_deviation: deviation, second_kind_min })
}

/// `φ ↦ Ric·φ + φ·Ric` on symmetric 2-tensors, compressed to the traceless subspace.
pub fn ricci_action_traceless(r: &CurvatureTensor) -> Result<SymMatrix> {
    let tb = traceless_basis(r.n(), 2)?;
    let ric = r.ricci();
    let n = r.n();
    let basis = &tb.ambient;
    let mut m = Matrix::zeros(basis.dim(), basis.dim());
    for (row, t) in basis.tuples().iter().enumerate() {
        let (i, j) = (t[0], t[1]);
        for k in 0..n {
            let (c1, _) = basis.canonicalize(&[k, j]).unwrap();
            m[(row, c1)] += ric[(i, k)];
            let (c2, _) = basis.canonicalize(&[i, k]).unwrap();
            m[(row, c2)] += ric[(j, k)];
        }
    }
    let full = symmetric_checked(&normalize_operator(&m, basis))?;
    Ok(full.compress(&tb.vectors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{constant_curvature, random_curvature};
    use crate::pinching::{classify, SearchOptions};

    fn assert_scalar_identity(m: &SymMatrix, c: f64, tol: f64) {
        let d = m.dim();
        for i in 0..d {
            for j in 0..d {
                let want = if i == j { c } else { 0.0 };
                assert!((m.matrix()[(i, j)] - want).abs() <= tol, "({i},{j}) = {}", m.matrix()[(i, j)]);
            }
        }
    }

    #[test]
    fn second_kind_on_space_forms() {
        assert_scalar_identity(second_kind_matrix(&constant_curvature(3, 0.5).unwrap()).unwrap().matrix(), 0.5, 1e-12);
        let h = second_kind_matrix(&constant_curvature(4, -1.0).unwrap()).unwrap();
        assert_eq!(h.matrix.dim(), 9);
        assert_scalar_identity(h.matrix(), -1.0, 1e-12);
    }

    #[test]
    fn space_form_closed_forms() {
        let r = constant_curvature(4, 1.0).unwrap();
        let w = weitz_matrix(&r, Space::TracelessSymmetric, 3, 1.0).unwrap();
        assert_scalar_identity(w.matrix(), 15.0, 1e-10);
        for q in 1..4 {
            let w = weitz_matrix(&r, Space::Forms, q, 1.0).unwrap();
            assert_scalar_identity(w.matrix(), (q * (4 - q)) as f64, 1e-10);
        }
    }

    #[test]
    fn sampson_sign() {
        let r = constant_curvature(3, 1.0).unwrap();
        let w = weitz_matrix(&r, Space::TracelessSymmetric, 2, -1.0).unwrap();
        assert_scalar_identity(w.matrix(), -6.0, 1e-10);
    }

    #[test]
    fn invalid_space_degree() {
        let r = constant_curvature(3, 1.0).unwrap();
        assert!(matches!(weitz_matrix(&r, Space::TracelessSymmetric, 1, 1.0), Err(Error::Dimension(_))));
        assert!(matches!(weitz_matrix(&r, Space::Forms, 4, 1.0), Err(Error::Dimension(_))));
        assert!(matches!(weitz_matrix(&r, Space::Symmetric, 0, 1.0), Err(Error::Dimension(_))));
    }

    #[test]
    fn q_form_zero_and_dimension_mismatch() {
        let r = random_curvature(3, 3, None, 1.0).unwrap();
        let b = MultiIndexBasis::symmetric(3, 2).unwrap();
        assert_eq!(q_form_value(&r, &TensorCoeffs::zeros(&b)).unwrap(), 0.0);
        let b4 = MultiIndexBasis::symmetric(4, 2).unwrap();
        assert!(matches!(q_form_value(&r, &TensorCoeffs::zeros(&b4)), Err(Error::Dimension(_))));
    }

    #[test]
    fn diag_identity_on_sphere() {
        let r = constant_curvature(3, 1.0).unwrap();
        let b = MultiIndexBasis::symmetric(3, 2).unwrap();
        let mut v = vec![0.0; b.dim()];
        v[b.position(&[0, 0]).unwrap()] = 1.0;
        v[b.position(&[1, 1]).unwrap()] = -1.0;
        let phi = TensorCoeffs::new(&b, v).unwrap();
        let d = diag_identity_residual(&r, &phi).unwrap();
        assert!((d.q_form - 12.0).abs() < 1e-12);
        assert!((d.sectional_sum - 12.0).abs() < 1e-12);
        assert!(d.residual <= 1e-10);
        let zero = diag_identity_residual(&r, &TensorCoeffs::zeros(&b)).unwrap();
        assert_eq!((zero.q_form, zero.sectional_sum), (0.0, 0.0));
    }

    #[test]
    fn diag_identity_rejects_trace() {
        let r = constant_curvature(3, 1.0).unwrap();
        let b = MultiIndexBasis::symmetric(3, 2).unwrap();
        let mut v = vec![0.0; b.dim()];
        v[0] = 1.0;
        assert!(diag_identity_residual(&r, &TensorCoeffs::new(&b, v).unwrap()).is_err());
    }

    #[test]
    fn eigen_constants() {
        assert_eq!(eigen_bound_constant(3, 2, 1.0, BoundTag::Thm3).unwrap(), 6.0);
        assert_eq!(eigen_bound_constant(2, 1, 1.0, BoundTag::Sec4Eigen).unwrap(), 1.0);
        assert_eq!(eigen_bound_constant(4, 2, 1.0, BoundTag::Sec3Eigen).unwrap(), 8.0);
        assert!(eigen_bound_constant(4, 2, -1.0, BoundTag::Thm3).is_err());
        assert!(eigen_bound_constant(4, 2, 1.0, BoundTag::Eq2_7).is_err());
    }

    #[test]
    fn sphere_bounds_are_equalities() {
        let r = constant_curvature(3, 1.0).unwrap();
        let rep = classify(&r, SearchOptions::with_restarts(4)).unwrap();
        let c = bound_positive_sym(&r, &rep, 2, BoundTag::Eq2_7).unwrap();
        assert!(!c.vacuous && c.satisfied);
        assert!((c.rhs - 6.0).abs() < 1e-12);
        assert!(c.margin.abs() < 1e-9);
        let weak = bound_positive_sym(&r, &rep, 2, BoundTag::Eq2_9).unwrap();
        assert!(!weak.vacuous && weak.satisfied && (weak.rhs - 4.0).abs() < 1e-12);
        let neg = bound_negative_sym(&r, &rep, 2).unwrap();
        assert!(neg.vacuous && neg.satisfied);
    }

    #[test]
    fn tags_round_trip_through_json() {
        for t in [BoundTag::Eq2_7, BoundTag::Eq3_1, BoundTag::Sec4Eigen] {
            let s = serde_json::to_string(&t).unwrap();
            assert_eq!(s, format!("\"{}\"", t.as_str()));
            assert_eq!(BoundTag::parse(t.as_str()).unwrap(), t);
        }
    }
}
