use faber_krahn::harmonics::Phase;
use faber_krahn::perturbation::{deficit_coeffs, geometry_exact, normalize_volume, HarmonicProfile, Mode};
use faber_krahn::special::unit_ball_volume;
use proptest::prelude::*;

fn mode(dim: u32, k: u32, a: f64, sine: bool) -> Mode {
    let phase = match (dim, sine) {
        (2, false) => Phase::Cos,
        (2, true) => Phase::Sin,
        _ => Phase::Zonal,
    };
    Mode::new(k, a, phase)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coefficients_are_additive(dim in 2u32..=6, k1 in 1u32..=8, dk in 1u32..=6, a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let k2 = k1 + dk;
        let both = HarmonicProfile::new(dim, vec![mode(dim, k1, a, false), mode(dim, k2, b, false)]).unwrap();
        let one = deficit_coeffs(&HarmonicProfile::new(dim, vec![mode(dim, k1, a, false)]).unwrap()).unwrap();
        let two = deficit_coeffs(&HarmonicProfile::new(dim, vec![mode(dim, k2, b, false)]).unwrap()).unwrap();
        let sum = deficit_coeffs(&both).unwrap();
        prop_assert!((sum.c_p - one.c_p - two.c_p).abs() <= 1e-12 * sum.c_p.abs().max(1.0));
        prop_assert!((sum.c_lambda - one.c_lambda - two.c_lambda).abs() <= 1e-12 * sum.c_lambda.abs().max(1.0));
    }

    #[test]
    fn normalization_conserves_volume(dim in 2u32..=3, k in 1u32..=6, a in 0.2f64..1.5, t in 0.0f64..0.15, sine: bool) {
        let p = HarmonicProfile::new(dim, vec![mode(dim, k, a, sine)]).unwrap();
        prop_assume!(t * p.sup_norm() <= 0.5);
        let g = geometry_exact(&normalize_volume(&p, t).unwrap()).unwrap();
        let omega = unit_ball_volume(dim);
        prop_assert!(((g.volume - omega) / omega).abs() <= 1e-12);
        prop_assert!(g.delta_p >= -1e-14);
    }

    #[test]
    fn cosine_and_sine_are_interchangeable(k in 2u32..=8, a in 0.2f64..1.0, t in 0.01f64..0.1) {
        let c = geometry_exact(&normalize_volume(&HarmonicProfile::new(2, vec![mode(2, k, a, false)]).unwrap(), t).unwrap()).unwrap();
        let s = geometry_exact(&normalize_volume(&HarmonicProfile::new(2, vec![mode(2, k, a, true)]).unwrap(), t).unwrap()).unwrap();
        prop_assert!((c.delta_p - s.delta_p).abs() <= 1e-13);
    }
}
