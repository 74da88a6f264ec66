use bmoalab::analytic::numeric_deriv_check;
use bmoalab::quadrature::disc_integrate;
use bmoalab::semigroup::{dw_decompose, flow, Semigroup};
use bmoalab::spaces::{local_seminorm_i, SpaceParam};
use bmoalab::volterra::{apply_tg, VolterraOp, PATH_NODES};
use bmoalab::{AnalyticFn, Complex64, GridSpec};
use proptest::prelude::*;

fn disc_point(max: f64) -> impl Strategy<Value = Complex64> {
    (0.0..max, -std::f64::consts::PI..std::f64::consts::PI).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn catalog() -> impl Strategy<Value = AnalyticFn> {
    prop_oneof![
        Just(AnalyticFn::identity()),
        (1u32..6).prop_map(AnalyticFn::monomial),
        disc_point(0.9).prop_map(|a| AnalyticFn::mobius(a).unwrap()),
        disc_point(1.0).prop_map(|a| AnalyticFn::log_recip_one_minus(a).unwrap()),
        (-1.5f64..1.5).prop_map(|al| AnalyticFn::power_one_minus(al).unwrap()),
        (0.2f64..2.0, -3.0f64..3.0)
            .prop_map(|(g, t)| AnalyticFn::inner_singular(g, Complex64::from_polar(1.0, t)).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mobius_is_an_involution(a in disc_point(0.99), z in disc_point(0.99)) {
        let m = AnalyticFn::mobius(a).unwrap();
        let back = m.value(m.value(z));
        prop_assert!((back - z).norm() <= 1e-9 * (1.0 + z.norm()));
    }

    #[test]
    fn derivatives_match_differences(f in catalog(), z in disc_point(0.8)) {
        prop_assert!(numeric_deriv_check(&f, z) <= 1e-6);
    }

    #[test]
    fn tg_is_linear(al in disc_point(3.0), z in disc_point(0.95), f1 in catalog(), f2 in catalog(), g in catalog()) {
        let op = VolterraOp::new(g);
        let lhs = apply_tg(&op, &f1.scale(al).add(&f2), z, PATH_NODES).unwrap().0;
        let a = apply_tg(&op, &f1, z, PATH_NODES).unwrap().0;
        let b = apply_tg(&op, &f2, z, PATH_NODES).unwrap().0;
        let rhs = al * a + b;
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + lhs.norm() + rhs.norm()));
    }

    #[test]
    fn tg_image_derivative_is_product(z in disc_point(0.7), f in catalog(), g in catalog()) {
        let op = VolterraOp::new(g.clone());
        let h = 1e-4 * (1.0 - z.norm());
        let v = |w: Complex64| apply_tg(&op, &f, w, 4 * PATH_NODES).unwrap().0;
        let fd = (v(z + h) - v(z - h)) / (2.0 * h);
        let exact = f.value(z) * g.deriv_at(z);
        prop_assert!((fd - exact).norm() <= 1e-6 * (1.0 + exact.norm()));
        prop_assert_eq!(op.image(&f).value(Complex64::new(0.0, 0.0)), Complex64::new(0.0, 0.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn monomial_moments_are_exact(m in 0i32..6, n in 0i32..6) {
        let grid = GridSpec::new(32, 64).with_cap(1.0);
        let re = disc_integrate(|q| (q.z.powi(m) * q.z.conj().powi(n)).re, &grid).unwrap();
        let im = disc_integrate(|q| (q.z.powi(m) * q.z.conj().powi(n)).im, &grid).unwrap();
        let expect = if m == n { 1.0 / (n as f64 + 1.0) } else { 0.0 };
        prop_assert!((re.value - expect).abs() <= 1e-12, "{} vs {}", re.value, expect);
        prop_assert!(im.value.abs() <= 1e-12);
    }

    #[test]
    fn berkson_porta_round_trip(b in disc_point(0.9), c in disc_point(0.9), s in 0.1f64..3.0) {
        // P(z) = s (1 + c z) has positive real part on the disc
        let one = Complex64::new(1.0, 0.0);
        let pz = AnalyticFn::polynomial(vec![s * one, s * c]).unwrap();
        let f1 = AnalyticFn::polynomial(vec![-one, b.conj()]).unwrap();
        let f2 = AnalyticFn::polynomial(vec![-b, one]).unwrap();
        let g = f1.mul(&f2).mul(&pz);
        let r = dw_decompose(&g, b).unwrap();
        prop_assert!(r.round_trip <= 1e-9);
        prop_assert!(r.min_re_p >= -1e-8);
    }

    #[test]
    fn flows_stay_inside_and_contract(c in disc_point(0.9), z in disc_point(0.98), t in 0.0f64..4.0) {
        // G(z) = -z (1 + c z) fixes 0, so |phi_t(z)| <= |z|
        let g = AnalyticFn::polynomial(vec![Complex64::new(0.0, 0.0), -Complex64::new(1.0, 0.0), -c]).unwrap();
        let sg = Semigroup::new(g, Complex64::new(0.0, 0.0), None, "contraction").unwrap();
        let r = flow(&sg, z, t, 1e-10).unwrap();
        prop_assert!(r.max_modulus < 1.0);
        prop_assert!(r.final_point.norm() <= z.norm() + 1e-9);
    }

    #[test]
    fn local_seminorm_is_homogeneous(f in catalog(), a in disc_point(0.9), c in disc_point(4.0), p in 1.0f64..2.0) {
        prop_assume!(c.norm() > 1e-3);
        let grid = GridSpec::new(32, 64);
        let sp = SpaceParam::new(p).unwrap();
        let base = local_seminorm_i(&f, sp, a, &grid).unwrap();
        let scaled = local_seminorm_i(&f.scale(c), sp, a, &grid).unwrap();
        let expect = c.norm().powf(p) * base.value;
        prop_assert!((scaled.value - expect).abs() <= 1e-10 * (1.0 + expect));
    }
}
