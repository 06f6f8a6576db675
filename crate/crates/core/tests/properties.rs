mod common;

use bochner::curvature::{constant_curvature, from_json, random_curvature, to_json};
use bochner::pinching::{classify, SearchOptions};
use bochner::tensor::{trace_map, traceless_basis};
use bochner::weitzenboeck::{bound_form, bound_positive_sym, coefficient_matrix, diag_identity_residual, BoundTag};
use bochner::MultiIndexBasis;
use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn json_reconstruction(n in 2usize..=5, seed in any::<u64>(), eps in 0.0f64..2.0) {
        let base = constant_curvature(n, 1.0).unwrap();
        let r = random_curvature(n, seed, Some(&base), eps).unwrap();
        prop_assert!(r.validate().passed);
        let back = from_json(&to_json(&r)).unwrap();
        prop_assert_eq!(back.raw(), r.raw());
    }

    #[test]
    fn sectional_depends_only_on_the_plane(
        n in 3usize..=5,
        seed in any::<u64>(),
        frame_seed in any::<u64>(),
        a in -2.0f64..2.0, b in -2.0f64..2.0, c in -2.0f64..2.0, d in -2.0f64..2.0,
    ) {
        prop_assume!((a * d - b * c).abs() > 0.1);
        let r = random_curvature(n, seed, None, 1.0).unwrap();
        let mut g = rng(frame_seed);
        let (x, y) = random_frame(&mut g, n);
        let u: Vec<f64> = x.iter().zip(&y).map(|(p, q)| a * p + b * q).collect();
        let v: Vec<f64> = x.iter().zip(&y).map(|(p, q)| c * p + d * q).collect();
        let s0 = r.sectional(&x, &y).unwrap();
        let s1 = r.sectional(&u, &v).unwrap();
        prop_assert!((s0 - s1).abs() <= 1e-9 * s0.abs().max(1.0));
    }

    #[test]
    fn trace_commutation(n in 3usize..=4, p in 2usize..=3, seed in any::<u64>()) {
        let r = random_curvature(n, seed, None, 1.0).unwrap();
        let bp = MultiIndexBasis::symmetric(n, p).unwrap();
        let bq = MultiIndexBasis::symmetric(n, p - 2).unwrap();
        for slots in [(0, 1), (0, p - 1)] {
            if slots.0 == slots.1 { continue; }
            let t = trace_map(&bp, slots).unwrap();
            let lhs = t.mul(&coefficient_matrix(&r, &bp).unwrap());
            let rhs = coefficient_matrix(&r, &bq).unwrap().mul(&t);
            prop_assert!(max_entry_diff(&lhs, &rhs) <= 1e-10);
        }
    }

    #[test]
    fn diagonalization_identity(n in 3usize..=4, seed in any::<u64>(), phi_seed in any::<u64>()) {
        let r = random_curvature(n, seed, None, 1.0).unwrap();
        let tb = traceless_basis(n, 2).unwrap();
        let y = gaussian_vec(&mut rng(phi_seed), tb.dim());
        let d = diag_identity_residual(&r, &tb.combine(&y)).unwrap();
        prop_assert!(d.residual <= 1e-10, "{:?}", d);
    }

    #[test]
    fn bound_flags_follow_margins(seed in 0u64..10_000, eps in 0.0f64..0.3) {
        let base = constant_curvature(3, 1.0).unwrap();
        let r = random_curvature(3, seed, Some(&base), eps).unwrap();
        let rep = classify(&r, SearchOptions::with_restarts(4)).unwrap();
        for c in [
            bound_positive_sym(&r, &rep, 2, BoundTag::Eq2_7).unwrap(),
            bound_positive_sym(&r, &rep, 2, BoundTag::Eq2_9).unwrap(),
            bound_form(&r, &rep, 1).unwrap(),
        ] {
            if c.vacuous {
                prop_assert!(c.satisfied);
            } else {
                prop_assert_eq!(c.satisfied, c.margin >= -c.tolerance);
            }
        }
    }
}
