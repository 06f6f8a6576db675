//! Reported-only comparisons for forms: an alternative quadratic-form
//! coefficient and an auxiliary symmetric 2-tensor built from a q-form.
//! Nothing here is used by the bound checks.

use serde::{Deserialize, Serialize};

use crate::curvature::CurvatureTensor;
use crate::error::{Error, Result};
use crate::tensor::{Symmetry, TensorCoeffs};

use super::q_form_value;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormDiagnostics {
    pub n: usize,
    pub q: usize,
    /// `‖ω‖²` under full contraction.
    pub norm_sq: f64,
    /// `R_ij ω^{i…} ω^{j…}`.
    pub ricci_term: f64,
    /// `R_ijkl ω^{ik…} ω^{jl…}`.
    pub cross_term: f64,
    /// `R_ijkl ω^{ij…} ω^{kl…}`.
    pub pair_term: f64,
    /// `g(ℜω, ω)` from the assembled operator.
    pub operator_q_form: f64,
    /// `q (ricci_term − (q−1)/2 · cross_term)`.
    pub half_coefficient_q_form: f64,
    pub half_coefficient_gap: f64,
    /// `Σ_I ‖tr φ^[I]‖²` for the auxiliary tensors with the `3q/n` trace coefficient.
    pub aux_trace_norm_sq: f64,
    /// `Σ_I R_ijkl φ^{il[I]} φ^{jk[I]}`.
    pub aux_curvature_lhs: f64,
    /// `q (2(n+4q)/n · ricci_term − 3(q−1) · pair_term − 4q/n² · s ‖ω‖²)`.
    pub aux_curvature_rhs: f64,
    /// `Σ_I ‖φ^[I]‖²`.
    pub aux_norm_lhs: f64,
    /// `2q(n+2)(n−q)/n · ‖ω‖²`.
    pub aux_norm_rhs: f64,
}

/// Dense array of all `n^q` components.
fn dense(omega: &TensorCoeffs<'_>) -> Vec<f64> {
    let b = omega.basis();
    let (n, q) = (b.n(), b.degree());
    let total = n.pow(q as u32);
    let mut out = vec![0.0; total];
    let mut idx = vec![0usize; q];
    for slot in out.iter_mut() {
        *slot = omega.component(&idx);
        advance(&mut idx, n);
    }
    out
}

fn advance(idx: &mut [usize], n: usize) {
    for d in (0..idx.len()).rev() {
        idx[d] += 1;
        if idx[d] < n {
            return;
        }
        idx[d] = 0;
    }
}

fn flat(idx: &[usize], n: usize) -> usize {
    idx.iter().fold(0, |acc, &i| acc * n + i)
}

/// Runs the form diagnostics for a q-form `ω`, `1 ≤ q ≤ n`.
pub fn form_diagnostics(r: &CurvatureTensor, omega: &TensorCoeffs<'_>) -> Result<FormDiagnostics> {
    let b = omega.basis();
    if b.symmetry() != Symmetry::Alternating || b.degree() == 0 {
        return Err(Error::Dimension("expected a form of degree at least 1".into()));
    }
    let (n, q) = (r.n(), b.degree());
    if b.n() != n {
        return Err(Error::Dimension(format!("form over n = {} but curvature has n = {n}", b.n())));
    }
    let w = dense(omega);
    let ric = r.ricci();
    let s = r.scalar();
    let (nf, qf) = (n as f64, q as f64);

    let norm_sq: f64 = w.iter().map(|x| x * x).sum();

    // contractions over a shared tail of q-1 (resp. q-2) indices
    let mut ricci_term = 0.0;
    let mut tail = vec![0usize; q - 1];
    let mut full = vec![0usize; q];
    for _ in 0..n.pow((q - 1) as u32) {
        for i in 0..n {
            for j in 0..n {
                full[0] = i;
                full[1..].copy_from_slice(&tail);
                let a = w[flat(&full, n)];
                full[0] = j;
                ricci_term += ric[(i, j)] * a * w[flat(&full, n)];
            }
        }
        advance(&mut tail, n);
    }

    let (mut cross_term, mut pair_term) = (0.0, 0.0);
    if q >= 2 {
        let mut tail = vec![0usize; q - 2];
        let at = |x: usize, y: usize, tail: &[usize]| {
            let mut t = Vec::with_capacity(q);
            t.push(x);
            t.push(y);
            t.extend_from_slice(tail);
            w[flat(&t, n)]
        };
        for _ in 0..n.pow((q - 2) as u32) {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            let c = r.get(i, j, k, l);
                            if c == 0.0 {
                                continue;
                            }
                            cross_term += c * at(i, k, &tail) * at(j, l, &tail);
                            pair_term += c * at(i, j, &tail) * at(k, l, &tail);
                        }
                    }
                }
            }
            advance(&mut tail, n);
        }
    }

    let operator_q_form = q_form_value(r, omega)?;
    let half_coefficient_q_form = qf * (ricci_term - (qf - 1.0) / 2.0 * cross_term);

    // auxiliary tensors, one per increasing multi-index
    let (mut aux_trace, mut aux_curv, mut aux_norm) = (0.0, 0.0, 0.0);
    for tuple in b.tuples() {
        let mut phi = vec![0.0; n * n];
        let mut work = tuple.clone();
        for j in 0..n {
            for k in 0..n {
                let mut v = 0.0;
                for a in 0..q {
                    let ia = tuple[a];
                    work[a] = j;
                    if k == ia {
                        v += w[flat(&work, n)];
                    }
                    work[a] = k;
                    if j == ia {
                        v += w[flat(&work, n)];
                    }
                    work[a] = ia;
                }
                if j == k {
                    v -= 3.0 * qf / nf * w[flat(tuple, n)];
                }
                phi[j * n + k] = v;
            }
        }
        let tr: f64 = (0..n).map(|j| phi[j * n + j]).sum();
        aux_trace += tr * tr;
        aux_norm += phi.iter().map(|x| x * x).sum::<f64>();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        aux_curv += r.get(i, j, k, l) * phi[i * n + l] * phi[j * n + k];
                    }
                }
            }
        }
    }
    let aux_curvature_rhs =
        qf * (2.0 * (nf + 4.0 * qf) / nf * ricci_term - 3.0 * (qf - 1.0) * pair_term - 4.0 * qf / (nf * nf) * s * norm_sq);
    let aux_norm_rhs = 2.0 * qf * (nf + 2.0) * (nf - qf) / nf * norm_sq;

    Ok(FormDiagnostics {
        n,
        q,
        norm_sq,
        ricci_term,
        cross_term,
        pair_term,
        operator_q_form,
        half_coefficient_q_form,
        half_coefficient_gap: half_coefficient_q_form - operator_q_form,
        aux_trace_norm_sq: aux_trace,
        aux_curvature_lhs: aux_curv,
        aux_curvature_rhs,
        aux_norm_lhs: aux_norm,
        aux_norm_rhs,
    })
}
