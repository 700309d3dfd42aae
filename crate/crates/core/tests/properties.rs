mod common;

use common::oracle;
use cvqkd_manifold::constellation::{build_constellation, gaussian_q, permute_constellation};
use cvqkd_manifold::manifold::{manifold_dims, tradeoff_multiaccess, TradeoffCurve, TradeoffKind, CurveParams};
use cvqkd_manifold::montecarlo::wilson_interval;
use cvqkd_manifold::phase_space::{dft, inverse_dft, ComplexGaussianVector};
use cvqkd_manifold::singular_layer::{reconstruct, svd_decompose, TransmittanceMatrix};
use cvqkd_manifold::Complex64;
use proptest::prelude::*;

fn matrix_strategy() -> impl Strategy<Value = Vec<Vec<Complex64>>> {
    (1usize..=6, 0usize..=3).prop_flat_map(|(k_in, extra)| {
        proptest::collection::vec(
            proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0).prop_map(|(a, b)| Complex64::new(a, b)), k_in),
            k_in + extra,
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn svd_roundtrip_and_spectrum(rows in matrix_strategy()) {
        let m = TransmittanceMatrix::from_rows(&rows).unwrap();
        let d = svd_decompose(&m).unwrap();
        prop_assert!((reconstruct(&d).entries() - m.entries()).norm() < 1e-10);
        prop_assert!(d.lambdas().windows(2).all(|w| w[0] >= w[1]));
        let mut ev = oracle::hermitian_eigenvalues(&oracle::gram_inner(&rows));
        ev.reverse();
        for (l, e) in d.lambdas().iter().zip(&ev) {
            prop_assert!((l * l - e).abs() < 1e-9 * (1.0 + e));
        }
    }

    #[test]
    fn transform_round_trip(v in proptest::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 1..40)) {
        let z: Vec<Complex64> = v.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
        let g = ComplexGaussianVector::new(z.clone(), 1.0).unwrap();
        let back = dft(&inverse_dft(&g));
        for (a, b) in back.samples().iter().zip(&z) {
            prop_assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn dimension_identity(k_in in 1usize..8, extra in 0usize..4, q in 0usize..=32) {
        let k_out = k_in + extra;
        let s = (q as f64 * 0.25).min(k_in as f64);
        let d = manifold_dims(k_in, k_out, s).unwrap();
        prop_assert_eq!(d.dim_m + d.n_dim_perp, (k_in * k_out) as f64);
    }

    #[test]
    fn multiaccess_is_nonincreasing(k_in in 1usize..6, extra in 0usize..4, a in 0.0f64..6.0, b in 0.0f64..6.0) {
        let k_out = k_in + extra;
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(tradeoff_multiaccess(k_in, k_out, hi).unwrap() <= tradeoff_multiaccess(k_in, k_out, lo).unwrap());
    }

    #[test]
    fn multicarrier_scales_single(l in 1usize..12, s in 0.01f64..1.0) {
        let p = CurveParams { l, ..CurveParams::default() };
        let single = TradeoffCurve::evaluate(TradeoffKind::Single, &p, s).unwrap();
        let multi = TradeoffCurve::evaluate(TradeoffKind::Multicarrier, &p, s).unwrap();
        prop_assert!((multi - l as f64 * single).abs() < 1e-12);
    }

    #[test]
    fn wilson_brackets_estimate(n in 1u64..100_000, frac in 0.0f64..=1.0) {
        let s = ((n as f64) * frac).floor() as u64;
        let (lo, hi) = wilson_interval(s, n, 0.95).unwrap();
        let p = s as f64 / n as f64;
        prop_assert!(0.0 <= lo && lo <= p && p <= hi && hi <= 1.0);
    }

    #[test]
    fn q_symmetry(x in -8.0f64..8.0) {
        prop_assert!((gaussian_q(x).unwrap() + gaussian_q(-x).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn permutations_keep_the_point_set(bits in 1u32..6, l in 1usize..5, seed in any::<u64>()) {
        let base = build_constellation(bits as f64).unwrap();
        let pc = permute_constellation(&base, l, seed).unwrap();
        for p in pc.permutations() {
            let mut sorted = p.clone();
            sorted.sort_unstable();
            prop_assert_eq!(sorted, (0..base.cardinality()).collect::<Vec<_>>());
        }
    }
}
