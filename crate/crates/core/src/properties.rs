//! Randomized cross-module invariants checked against dense arithmetic.

use proptest::prelude::*;

use crate::dense::relative_error;
use crate::io::{gzz_to_json, zz_to_json};
use crate::metric::quasi_hermiticity_residual;
use crate::oracle::{dense_inverse, inverse_iteration_eigenvectors};
use crate::{
    build_theta, certify_positive, eigen_q, evolve, factor_inverse, gzz_add, gzz_inverse, gzz_mul,
    gzz_to_zz, gzz_transpose, model_from_json, propagator, time_grid, zz_eigen, zz_to_gzz,
    CouplingPattern, DenseMatrix, GzzHamiltonian, ModelFile, Permutation, Spectrum, StateVector,
    ToDense, Variant, WeightVector, ZigZagHamiltonian,
};

/// Models whose coupled pairs sit at least 0.25 apart.
fn gapped_model(max_m: usize) -> impl Strategy<Value = GzzHamiltonian> {
    (1..=max_m).prop_flat_map(|m| {
        (
            prop::collection::vec(0.25f64..4.0, m),
            prop::collection::vec(-4.0f64..-0.25, m),
            prop::collection::vec(prop::option::weighted(0.6, -2.0f64..2.0), m * m),
        )
            .prop_map(move |(lp, lm, ns)| {
                let triplets: Vec<_> = ns
                    .iter()
                    .enumerate()
                    .filter_map(|(k, v)| v.map(|v| (k / m, k % m, v)))
                    .collect();
                GzzHamiltonian::new(lp, lm, triplets).unwrap()
            })
    })
}

fn any_model(max_m: usize) -> impl Strategy<Value = GzzHamiltonian> {
    (1..=max_m).prop_flat_map(|m| {
        (
            prop::collection::vec(-3i32..=3, m),
            prop::collection::vec(-3i32..=3, m),
            prop::collection::vec(prop::option::of(-3i32..=3), m * m),
        )
            .prop_map(move |(lp, lm, ns)| {
                let triplets: Vec<_> = ns
                    .iter()
                    .enumerate()
                    .filter_map(|(k, v)| v.map(|v| (k / m, k % m, v as f64)))
                    .collect();
                GzzHamiltonian::new(
                    lp.into_iter().map(f64::from).collect(),
                    lm.into_iter().map(f64::from).collect(),
                    triplets,
                )
                .unwrap()
            })
    })
}

fn pair(max_m: usize) -> impl Strategy<Value = (GzzHamiltonian, GzzHamiltonian)> {
    (1..=max_m).prop_flat_map(|m| {
        (gapped_model(m), gapped_model(m)).prop_filter("same size", |(a, b)| a.m() == b.m())
    })
}

fn weights(dim: usize) -> impl Strategy<Value = WeightVector> {
    prop::collection::vec(0.05f64..20.0, dim).prop_map(|v| WeightVector::new(v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn dense_roundtrip(h in any_model(6)) {
        prop_assert_eq!(GzzHamiltonian::from_dense(&h.to_dense()).unwrap(), h.clone());
        let n = h.nilpotent_part_dense();
        prop_assert_eq!(n.matmul(&n).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn json_roundtrip(h in gapped_model(6)) {
        prop_assert_eq!(model_from_json(&gzz_to_json(&h)).unwrap(), ModelFile::Gzz(h));
    }

    #[test]
    fn sums_and_products_match_dense((a, b) in pair(6)) {
        let ad = a.to_dense();
        let bd = b.to_dense();
        let sum = gzz_add(&a, &b).unwrap().to_dense();
        prop_assert!(relative_error(&sum, &ad.add(&bd).unwrap()).unwrap() <= 1e-15);
        let prod = gzz_mul(&a, &b).unwrap();
        prop_assert!(relative_error(&prod.to_dense(), &ad.matmul(&bd).unwrap()).unwrap() <= 1e-12);
        let allowed = CouplingPattern::of(&a).union(&CouplingPattern::of(&b));
        prop_assert!(CouplingPattern::of(&prod).is_subset(&allowed));
    }

    #[test]
    fn inverse_matches_elimination(a in gapped_model(6)) {
        let inv = gzz_inverse(&a).unwrap().to_dense();
        let oracle = dense_inverse(&a.to_dense()).unwrap();
        prop_assert!(relative_error(&inv, &oracle).unwrap() <= 1e-11);
    }

    #[test]
    fn transpose_is_dense_transpose(h in any_model(6)) {
        let t = gzz_transpose(&h);
        prop_assert_eq!(t.to_dense(), h.to_dense().transpose());
        prop_assert_eq!(t.transpose(), h);
    }

    #[test]
    fn eigenvectors_agree_with_inverse_iteration(h in gapped_model(5)) {
        prop_assume!(h.spectrum().iter().enumerate().all(|(a, x)| h.spectrum().iter().skip(a + 1).all(|y| (x - y).abs() > 1e-3)));
        let q = eigen_q(&h).unwrap().to_dense();
        let v = inverse_iteration_eigenvectors(&h.to_dense(), &h.spectrum()).unwrap();
        for c in 0..h.dim() {
            let (a, b) = (q.column(c), v.column(c));
            let dot: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
            let cos = dot.abs() / (crate::dense::vec_norm(&a) * crate::dense::vec_norm(&b));
            prop_assert!(1.0 - cos <= 1e-10, "column {} cos {}", c, cos);
        }
        let f = eigen_q(&h).unwrap();
        let prod = f.to_dense().matmul(&factor_inverse(&f).to_dense()).unwrap();
        prop_assert!(prod.sub(&DenseMatrix::identity(h.dim())).unwrap().max_abs() <= 1e-14);
    }

    #[test]
    fn metric_is_positive_quasi_hermitian(h in gapped_model(6), seed in any::<u64>()) {
        let w = WeightVector::new((0..h.dim()).map(|k| 0.1 + ((seed >> (k % 60)) & 7) as f64).collect()).unwrap();
        let theta = build_theta(&h, &w).unwrap().into_theta();
        prop_assert_eq!(&theta, &theta.transpose());
        prop_assert!(quasi_hermiticity_residual(&h.to_dense(), &theta).unwrap() <= 1e-12);
        prop_assert!(certify_positive(&theta).unwrap().is_positive());
    }

    #[test]
    fn theta_norm_is_conserved(h in gapped_model(4), w in weights(8), re in prop::collection::vec(-1.0f64..1.0, 8)) {
        let dim = h.dim();
        let w = WeightVector::new(w.kappa_sq()[..dim].to_vec()).unwrap();
        let psi = StateVector::from_real(&re[..dim]).unwrap();
        prop_assume!(psi.l2_norm_sqr() > 1e-6);
        let traj = evolve(&h, &psi, &time_grid(0.0, 10.0, 50), &w).unwrap();
        prop_assert!(traj.theta_drift() <= 1e-10);
    }

    #[test]
    fn propagator_group_law(h in gapped_model(4), s in -3.0f64..3.0, t in -3.0f64..3.0) {
        let lhs = propagator(&h, s).unwrap().matmul(&propagator(&h, t).unwrap()).unwrap();
        prop_assert!(relative_error(&lhs, &propagator(&h, s + t).unwrap()).unwrap() <= 1e-10);
    }

    #[test]
    fn zigzag_mapping_roundtrip(
        a in prop::collection::vec(-5.0f64..5.0, 1..12),
        seed in prop::collection::vec(-2.0f64..2.0, 11),
        tz in any::<bool>(),
    ) {
        let variant = if tz { Variant::TZ } else { Variant::ZZ };
        let z = ZigZagHamiltonian::new(variant, a.clone(), seed[..a.len() - 1].to_vec()).unwrap();
        let emb = zz_to_gzz(&z).unwrap();
        let padded = if z.dim() % 2 == 1 { crate::embed_odd(&z) } else { z.clone() };
        prop_assert_eq!(emb.zigzag_dense().unwrap(), padded.to_dense());
        prop_assert_eq!(gzz_to_zz(&emb.model, variant).unwrap(), padded.clone());
        let p = Permutation::pair_swap(padded.dim());
        let zz = gzz_to_zz(&emb.model, Variant::ZZ).unwrap();
        prop_assert_eq!(p.conjugate(&emb.model.to_dense()).unwrap(), zz.to_dense());
        prop_assert_eq!(model_from_json(&zz_to_json(&z)).unwrap(), ModelFile::ZigZag(z));
    }

    #[test]
    fn zigzag_eigenvectors_have_small_residual(
        perm_seed in any::<u64>(),
        c in prop::collection::vec(-2.0f64..2.0, 9),
        tz in any::<bool>(),
    ) {
        let mut a: Vec<f64> = (0..10).map(|k| k as f64 * 0.5).collect();
        let mut s = perm_seed;
        for k in (1..a.len()).rev() {
            a.swap(k, (s % (k as u64 + 1)) as usize);
            s = s.rotate_left(7) ^ 0x9e37_79b9_7f4a_7c15;
        }
        let variant = if tz { Variant::TZ } else { Variant::ZZ };
        let z = ZigZagHamiltonian::new(variant, a, c).unwrap();
        let zd = z.to_dense();
        let v = zz_eigen(&z).unwrap().to_dense();
        let r = zd.matmul(&v).unwrap().sub(&v.matmul(&DenseMatrix::from_diagonal(z.a())).unwrap()).unwrap();
        prop_assert!(r.frobenius_norm() <= 1e-12 * zd.frobenius_norm());
    }
}
