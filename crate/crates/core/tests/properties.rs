//! Property tests for the special functions, the S-matrix and the ladder algebra.

use morse_smatrix::ladder::{factorization_residual, intertwining_residual, ExpSmooth};
use morse_smatrix::specfun::{
    kummer_1f1_forced, kummer_derivatives_scaled, log_gamma, EvalPrecision, KummerArgs, KummerRegime,
};
use morse_smatrix::{s_matrix, s_matrix_grid, s_matrix_grid_par, Complex64 as C, GridSpec, PotentialParams};
use proptest::prelude::*;

const STRENGTHS: [f64; 7] = [0.5, 1.5, 2.0, 2.3, 2.5, 3.0, 7.25];

fn wrap(x: f64) -> f64 {
    let t = 2.0 * std::f64::consts::PI;
    x - (x / t).round() * t
}

/// `|e^d - 1|` for a log-domain difference defined modulo `2πi`.
fn log_rel(d: C) -> f64 {
    (C::new(d.re, wrap(d.im)).exp() - 1.0).norm()
}

fn off_integer() -> impl Strategy<Value = C> {
    (-20.0f64..20.0, -5.0f64..5.0).prop_filter("away from poles", |(re, im)| {
        im.abs() > 1e-3 || (re - re.round()).abs() > 1e-3
    })
    .prop_map(|(re, im)| C::new(re, im))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn gamma_reflection(z in off_integer()) {
        let lhs = log_gamma(z).unwrap() + log_gamma(1.0 - z).unwrap();
        let rhs = C::new(std::f64::consts::PI.ln(), 0.0) - (z * std::f64::consts::PI).sin().ln();
        prop_assert!(log_rel(lhs - rhs) <= 1e-9);
    }

    #[test]
    fn gamma_recurrence(z in off_integer()) {
        let d = log_gamma(z + 1.0).unwrap() - log_gamma(z).unwrap() - z.ln();
        prop_assert!(log_rel(d) <= 1e-10);
    }

    #[test]
    fn gamma_conjugation(z in off_integer()) {
        let a = log_gamma(z.conj()).unwrap();
        let b = log_gamma(z).unwrap().conj();
        prop_assert!((a - b).norm() <= 1e-13 * a.norm().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn kummer_ode(
        a_re in -6.0f64..4.0, a_im in -2.0f64..2.0,
        c_re in 0.3f64..8.0, c_im in -2.0f64..2.0,
        r in 0.05f64..60.0, t in -0.8f64..0.8, flip in any::<bool>(),
    ) {
        // Sectors around the real axis; near the imaginary axis the series
        // cancels by e^{|z| - |Re z|} and neither route keeps 1e-8.
        let z = C::from_polar(r, t) * if flip { -1.0 } else { 1.0 };
        let args = KummerArgs::new(C::new(a_re, a_im), C::new(c_re, c_im), z);
        let d = kummer_derivatives_scaled(args, 2, &EvalPrecision::default()).unwrap();
        let s = d[0].log_scale.max(d[1].log_scale).max(d[2].log_scale);
        let (f, f1, f2) = (d[0].at_scale(s), d[1].at_scale(s), d[2].at_scale(s));
        let residual = (z * f2 + (args.c - z) * f1 - args.a * f).norm();
        let scale = (z * f2).norm() + (args.c * f1).norm() + (args.a * f).norm() + (z * f1).norm();
        prop_assert!(residual <= 1e-8 * scale, "residual {residual} scale {scale}");
    }

    #[test]
    fn series_and_asymptotic_overlap(
        // Moderate parameters: the expansion's smallest term at |z| = 24
        // stays below ~1e-6 (it grows like the Pochhammer symbols of c - a, 1 - a).
        a_re in -0.5f64..1.0, a_im in -0.5f64..0.5,
        c_re in 0.5f64..2.5,
        r in 24.0f64..36.0, t in -0.6f64..0.6,
    ) {
        let args = KummerArgs::new(C::new(a_re, a_im), C::new(c_re, 0.0), C::from_polar(r, t));
        let prec = EvalPrecision::default();
        let s = kummer_1f1_forced(args, &prec, KummerRegime::Series).unwrap();
        let a = kummer_1f1_forced(args, &prec, KummerRegime::Asymptotic).unwrap();
        let d = C::new(a.ln_abs() - s.ln_abs(), a.arg() - s.arg());
        prop_assert!(log_rel(d) <= 1e-5, "{args:?}");
    }

    #[test]
    fn unitarity_and_inverse_symmetry(i in 0usize..7, k in 1e-6f64..=20.0) {
        let p = PotentialParams::new(STRENGTHS[i]).unwrap();
        let s = s_matrix(&p, C::new(k, 0.0)).unwrap();
        let sm = s_matrix(&p, C::new(-k, 0.0)).unwrap();
        prop_assert!((s.norm() - 1.0).abs() <= 1e-10);
        prop_assert!((s * sm - 1.0).norm() <= 1e-10);
    }

    #[test]
    fn schwarz_reflection(i in 0usize..7, re in 0.05f64..3.0, im in -3.0f64..3.0, flip in any::<bool>()) {
        let p = PotentialParams::new(STRENGTHS[i]).unwrap();
        let k = C::new(if flip { -re } else { re }, im);
        let a = s_matrix(&p, -k.conj()).unwrap();
        let b = s_matrix(&p, k).unwrap().conj();
        prop_assert!((a - b).norm() <= 1e-10 * b.norm().max(1.0));
    }
}

fn smooth() -> impl Strategy<Value = ExpSmooth<f64>> {
    (0.5f64..2.0, -1.0f64..0.2, -1.5f64..1.5, -1.0f64..1.0, 0.0f64..3.0).prop_map(|(amplitude, a2, a1, s, omega)| {
        ExpSmooth { amplitude, a2, a1, s, omega }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn ladder_identities_hold_for_any_smooth_function(f in smooth(), a in 0.2f64..6.0, eps in 0.6f64..3.0) {
        let p = PotentialParams::new(a).unwrap();
        let xs: Vec<f64> = (0..9).map(|i| -2.0 + 0.5 * i as f64).collect();
        prop_assert!(factorization_residual(&p, eps, &f, &xs).unwrap() <= 1e-7);
        prop_assert!(intertwining_residual(&p, eps, &f, &xs).unwrap() <= 1e-7);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn parallel_grid_is_bitwise_sequential(a in 0.2f64..5.0) {
        let p = PotentialParams::new(a).unwrap();
        let spec = GridSpec::new((-1.0, 1.0), (-3.0, 3.0), 0.1).unwrap();
        let seq = s_matrix_grid(&p, &spec);
        let par = s_matrix_grid_par(&p, &spec);
        for (r1, r2) in seq.values.iter().zip(&par.values) {
            for (x, y) in r1.iter().zip(r2) {
                prop_assert_eq!(x.to_bits(), y.to_bits());
            }
        }
    }
}
