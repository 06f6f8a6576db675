mod common;

use bochner::curvature::{constant_curvature, random_curvature};
use bochner::pinching::{classify, SearchOptions};
use bochner::tensor::{trace_map, traceless_basis};
use bochner::weitzenboeck::{
    coefficient_matrix, normalize_operator, q_form_value, ricci_action_traceless, second_kind_matrix, weitz_matrix,
    Space,
};
use bochner::{sym_eigen, CurvatureTensor, Matrix, MultiIndexBasis, Symmetry, TensorCoeffs};
use common::*;

fn permutation_sign(t: &[usize]) -> f64 {
    let mut inv = 0;
    for i in 0..t.len() {
        for j in (i + 1)..t.len() {
            if t[i] > t[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// The operator on the full tensor power, read back on canonical tuples.
fn brute_force_matrix(r: &CurvatureTensor, basis: &MultiIndexBasis) -> Matrix {
    let n = r.n();
    let p = basis.degree();
    let ric = ricci_loop(r);
    let tuples = all_tuples(n, p);
    let flat = |t: &[usize]| t.iter().fold(0, |acc, &i| acc * n + i);
    let d = basis.dim();
    let mut m = Matrix::zeros(d, d);
    for (col, t) in basis.tuples().iter().enumerate() {
        let mut phi = vec![0.0; tuples.len()];
        for u in &tuples {
            let mut sorted = u.clone();
            sorted.sort_unstable();
            if &sorted == t {
                phi[flat(u)] = match basis.symmetry() {
                    Symmetry::Symmetric => 1.0,
                    Symmetry::Alternating => permutation_sign(u),
                };
            }
        }
        for (row, s) in basis.tuples().iter().enumerate() {
            let mut v = 0.0;
            let mut w = s.clone();
            for a in 0..p {
                for k in 0..n {
                    w[a] = k;
                    v += ric[s[a]][k] * phi[flat(&w)];
                }
                w[a] = s[a];
            }
            for a in 0..p {
                for b in 0..p {
                    if a == b {
                        continue;
                    }
                    for k in 0..n {
                        for l in 0..n {
                            w[a] = k;
                            w[b] = l;
                            v -= r.get(s[a], k, s[b], l) * phi[flat(&w)];
                            w[a] = s[a];
                            w[b] = s[b];
                        }
                    }
                }
            }
            m[(row, col)] = v;
        }
    }
    m
}

#[test]
fn general_assembly_matches_explicit_r2() {
    for seed in 0..100u64 {
        let n = 3 + (seed % 3) as usize;
        let r = random_tensor(n, seed);
        let basis = MultiIndexBasis::symmetric(n, 2).unwrap();
        let explicit = explicit_r2_matrix(&r, &basis);
        let general = coefficient_matrix(&r, &basis).unwrap();
        assert!(max_entry_diff(&explicit, &general) <= 1e-12, "seed {seed}");
        let w = weitz_matrix(&r, Space::Symmetric, 2, 1.0).unwrap();
        let normalized = normalize_operator(&explicit, &basis);
        assert!(max_entry_diff(&normalized, w.matrix().matrix()) <= 1e-12, "seed {seed}");
    }
}

#[test]
fn general_assembly_matches_full_tensor_brute_force() {
    for (n, p, sym, seed) in [
        (3, 3, Symmetry::Symmetric, 1u64),
        (4, 3, Symmetry::Symmetric, 2),
        (3, 4, Symmetry::Symmetric, 3),
        (4, 2, Symmetry::Alternating, 4),
        (5, 3, Symmetry::Alternating, 5),
    ] {
        let r = random_tensor(n, seed);
        let basis = MultiIndexBasis::new(n, p, sym).unwrap();
        let brute = brute_force_matrix(&r, &basis);
        let general = coefficient_matrix(&r, &basis).unwrap();
        assert!(max_entry_diff(&brute, &general) <= 1e-11, "n={n} p={p} {sym:?}");
    }
}

#[test]
fn space_form_closed_forms() {
    let kappa = 0.7;
    for n in 2..=6 {
        let r = constant_curvature(n, kappa).unwrap();
        for p in 2..=4 {
            let w = weitz_matrix(&r, Space::TracelessSymmetric, p, 1.0).unwrap();
            let c = (p * (n + p - 2)) as f64 * kappa;
            let id = Matrix::identity(w.matrix.dim()).scale(c);
            assert!(max_entry_diff(w.matrix().matrix(), &id) <= 1e-10, "n={n} p={p}");
        }
        for q in 1..n {
            let w = weitz_matrix(&r, Space::Forms, q, 1.0).unwrap();
            let c = (q * (n - q)) as f64 * kappa;
            let id = Matrix::identity(w.matrix.dim()).scale(c);
            assert!(max_entry_diff(w.matrix().matrix(), &id) <= 1e-10, "n={n} q={q}");
        }
    }
}

#[test]
fn operators_are_symmetric() {
    for seed in 0..20u64 {
        let n = 3 + (seed % 2) as usize;
        let r = random_tensor(n, seed);
        let mut mats = vec![second_kind_matrix(&r).unwrap().matrix.into_matrix()];
        for p in 1..=3 {
            mats.push(weitz_matrix(&r, Space::Symmetric, p, 1.0).unwrap().matrix.into_matrix());
        }
        for p in 2..=3 {
            mats.push(weitz_matrix(&r, Space::TracelessSymmetric, p, 1.0).unwrap().matrix.into_matrix());
        }
        for q in 1..=n {
            mats.push(weitz_matrix(&r, Space::Forms, q, 1.0).unwrap().matrix.into_matrix());
        }
        // the normalized coefficient operator before symmetrization
        for p in 2..=3 {
            let b = MultiIndexBasis::symmetric(n, p).unwrap();
            let raw = normalize_operator(&coefficient_matrix(&r, &b).unwrap(), &b);
            assert!(raw.asymmetry().unwrap() <= 1e-12, "seed {seed} p {p}");
        }
        for m in mats {
            assert!(m.asymmetry().unwrap() <= 1e-12);
        }
    }
}

#[test]
fn trace_commutes_with_operator() {
    for n in [3, 4] {
        for seed in 0..5u64 {
            let r = random_tensor(n, 100 + seed);
            for p in [2, 3] {
                let bp = MultiIndexBasis::symmetric(n, p).unwrap();
                let bq = MultiIndexBasis::symmetric(n, p - 2).unwrap();
                let t = trace_map(&bp, (0, 1)).unwrap();
                let lhs = t.mul(&coefficient_matrix(&r, &bp).unwrap());
                let rhs = coefficient_matrix(&r, &bq).unwrap().mul(&t);
                assert!(max_entry_diff(&lhs, &rhs) <= 1e-10, "n={n} p={p}");
            }
            // degree 1 is Ric, degree 0 is zero
            let ric = ricci_loop(&r);
            let m1 = coefficient_matrix(&r, &MultiIndexBasis::symmetric(n, 1).unwrap()).unwrap();
            let want = Matrix::from_fn(n, n, |i, j| ric[i][j]);
            assert!(max_entry_diff(&m1, &want) <= 1e-12);
            let m0 = coefficient_matrix(&r, &MultiIndexBasis::symmetric(n, 0).unwrap()).unwrap();
            assert_eq!(m0.max_abs(), 0.0);
        }
    }
}

#[test]
fn sampson_relation_on_traceless_two_tensors() {
    for seed in 0..20u64 {
        let n = 3 + (seed % 3) as usize;
        let r = random_tensor(n, seed);
        let lich = weitz_matrix(&r, Space::TracelessSymmetric, 2, 1.0).unwrap();
        let ric = ricci_action_traceless(&r).unwrap();
        let sk = second_kind_matrix(&r).unwrap();
        let sum = ric.matrix().add(&sk.matrix().matrix().scale(2.0));
        assert!(max_entry_diff(lich.matrix().matrix(), &sum) <= 1e-12, "seed {seed}");
    }
}

#[test]
fn second_kind_quadratic_form_by_loop() {
    let mut g = rng(7);
    for seed in 0..100u64 {
        let n = 3 + (seed % 2) as usize;
        let r = random_tensor(n, seed);
        let sk = second_kind_matrix(&r).unwrap();
        let tb = traceless_basis(n, 2).unwrap();
        let y = gaussian_vec(&mut g, tb.dim());
        let phi = tb.combine(&y).as_matrix().unwrap();
        let mut direct = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        direct += r.get(i, k, l, j) * phi[(k, l)] * phi[(i, j)];
                    }
                }
            }
        }
        let mv = sk.matrix().matrix().mul_vec(&y);
        let form: f64 = y.iter().zip(&mv).map(|(a, b)| a * b).sum();
        assert!((form - direct).abs() <= 1e-11 * direct.abs().max(1.0), "seed {seed}: {form} vs {direct}");
    }
}

#[test]
fn quadratic_form_matches_contraction_loop() {
    let mut g = rng(11);
    let basis3 = MultiIndexBasis::symmetric(3, 2).unwrap();
    let basis4 = MultiIndexBasis::symmetric(4, 2).unwrap();
    for seed in 0..100u64 {
        let n = 3 + (seed % 2) as usize;
        let basis = if n == 3 { &basis3 } else { &basis4 };
        let r = random_tensor(n, seed);
        let ric = ricci_loop(&r);
        let m = if seed % 3 == 0 {
            // not traceless
            let mut m = random_traceless(&mut g, n);
            m[0][0] += 1.0;
            m
        } else {
            random_traceless(&mut g, n)
        };
        let coeffs: Vec<f64> = basis.tuples().iter().map(|t| m[t[0]][t[1]]).collect();
        let phi = TensorCoeffs::new(basis, coeffs).unwrap();
        let mut a = 0.0;
        let mut b = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    a += ric[i][j] * m[i][k] * m[k][j];
                    for l in 0..n {
                        b += r.get(i, j, k, l) * m[i][k] * m[j][l];
                    }
                }
            }
        }
        let direct = 2.0 * (a - b);
        let q = q_form_value(&r, &phi).unwrap();
        assert!((q - direct).abs() <= 1e-11 * direct.abs().max(1.0), "seed {seed}");
    }
}

#[test]
fn space_form_quadratic_form() {
    let mut g = rng(3);
    let kappa = -0.4;
    for n in [3, 4, 5] {
        let r = constant_curvature(n, kappa).unwrap();
        let basis = MultiIndexBasis::symmetric(n, 2).unwrap();
        let m = random_traceless(&mut g, n);
        let phi = TensorCoeffs::new(&basis, basis.tuples().iter().map(|t| m[t[0]][t[1]]).collect()).unwrap();
        let q = q_form_value(&r, &phi).unwrap();
        let want = 2.0 * n as f64 * kappa * phi.norm_sq();
        assert!((q - want).abs() <= 1e-11 * want.abs());
    }
}

#[test]
fn second_kind_lower_bound_under_pinching() {
    let mut g = rng(5);
    let opts = SearchOptions::with_restarts(16);
    for seed in 0..500u64 {
        let n = 3 + (seed % 2) as usize;
        let base = constant_curvature(n, 1.0).unwrap();
        let r = random_curvature(n, seed, Some(&base), 0.05).unwrap();
        let rep = classify(&r, opts).unwrap();
        let nf = n as f64;
        // worst case over φ: λ_min(ℜ₂|S²₀) / 2 = min [g(R̊φ,φ) + tr(Ric φ²)] / ‖φ‖²
        let lam = weitz_matrix(&r, Space::TracelessSymmetric, 2, 1.0).unwrap().lambda_min();
        assert!(lam / 2.0 >= nf * rep.sec_min - 1e-9, "seed {seed}");
        // and along a random direction
        let tb = traceless_basis(n, 2).unwrap();
        let y = gaussian_vec(&mut g, tb.dim());
        let phi = tb.combine(&y);
        let pm = phi.as_matrix().unwrap();
        let sk = second_kind_matrix(&r).unwrap();
        let mv = sk.matrix().matrix().mul_vec(&y);
        let form: f64 = y.iter().zip(&mv).map(|(a, b)| a * b).sum();
        let ric = r.ricci();
        let ric_term = ric.mul(&pm).mul(&pm);
        let tr: f64 = (0..n).map(|i| ric_term[(i, i)]).sum();
        assert!(form >= nf * rep.sec_min * phi.norm_sq() - tr - 1e-9, "seed {seed}");
    }
}

#[test]
fn vanishing_certificates() {
    let opts = SearchOptions::with_restarts(16);
    for seed in 0..200u64 {
        let n = 3 + (seed % 2) as usize;
        for kappa in [1.0, -1.0] {
            let base = constant_curvature(n, kappa).unwrap();
            let r = random_curvature(n, seed, Some(&base), 0.05).unwrap();
            let rep = classify(&r, opts).unwrap();
            for p in [2, 3] {
                let w = weitz_matrix(&r, Space::TracelessSymmetric, p, 1.0).unwrap();
                if rep.verdicts.lemma1_strict || rep.verdicts.double_pinch_strict {
                    assert!(w.lambda_min() > 0.0, "seed {seed} p {p}");
                }
                if rep.verdicts.lemma2_strict {
                    assert!(w.lambda_max() < 0.0, "seed {seed} p {p}");
                }
            }
        }
    }
}

#[test]
fn jacobi_matches_inertia_bisection() {
    for seed in 0..10u64 {
        let n = 3 + (seed % 2) as usize;
        let r = random_tensor(n, seed);
        for (space, deg) in [(Space::TracelessSymmetric, 3), (Space::Forms, 2), (Space::Symmetric, 2)] {
            let w = weitz_matrix(&r, space, deg, 1.0).unwrap();
            let e = sym_eigen(w.matrix());
            let m = w.matrix().matrix();
            let d = e.values.len();
            for k in [0, d / 2, d - 1] {
                let b = bisect_eigenvalue(m, k);
                assert!((e.values[k] - b).abs() <= 1e-10 * (1.0 + b.abs()), "{space:?} k={k}: {} vs {b}", e.values[k]);
            }
        }
        let sk = second_kind_matrix(&r).unwrap();
        let e = sym_eigen(sk.matrix());
        assert!((e.values[0] - bisect_eigenvalue(sk.matrix().matrix(), 0)).abs() <= 1e-10);
    }
}
