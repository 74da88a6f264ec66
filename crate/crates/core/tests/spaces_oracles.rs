use bmoalab::spaces::{bmoa_norm, bmoa_seminorm, garsia_norm, vmoa_profile, SpaceParam, SupSearchSpec, Verdict};
use bmoalab::{AnalyticFn, Complex64, GridSpec};

fn p(v: f64) -> SpaceParam {
    SpaceParam::new(v).unwrap()
}

fn log1() -> AnalyticFn {
    AnalyticFn::log_recip_one_minus(Complex64::new(1.0, 0.0)).unwrap()
}

#[test]
fn identity_seminorm_is_attained_at_origin() {
    let g = GridSpec::new(128, 256);
    let s = bmoa_seminorm(&AnalyticFn::identity(), p(2.0), &g, &SupSearchSpec::default()).unwrap();
    assert!((s.value - 0.5).abs() < 1e-8, "{}", s.value);
    assert!(s.witness.unwrap().norm() <= 1e-3);
    assert!(!s.inconclusive);
    let n = bmoa_norm(&AnalyticFn::identity(), p(2.0), &g, &SupSearchSpec::default()).unwrap();
    assert!((n.value - 0.5f64.sqrt()).abs() < 1e-8);
    let c = bmoa_norm(&AnalyticFn::real_constant(2.0), p(2.0), &g, &SupSearchSpec::default()).unwrap();
    assert_eq!(c.value, 2.0);
}

#[test]
fn log_seminorm_is_finite_and_grid_stable() {
    let g = GridSpec::new(64, 128);
    let s1 = bmoa_seminorm(&log1(), p(2.0), &g, &SupSearchSpec::default()).unwrap();
    let s2 = bmoa_seminorm(&log1(), p(2.0), &g.doubled(), &SupSearchSpec::default()).unwrap();
    assert!(s1.value > 0.0 && s1.value.is_finite());
    assert!(((s1.value - s2.value) / s2.value).abs() < 0.02);
}

#[test]
fn vmoa_examples() {
    let g = GridSpec::new(64, 128);
    let id = vmoa_profile(&AnalyticFn::identity(), p(2.0), &g, &[0.0, 1.0], 14).unwrap();
    assert_eq!(id.verdict, Verdict::Vanishes);
    let log = vmoa_profile(&log1(), p(2.0), &g, &[0.0], 14).unwrap();
    assert_eq!(log.verdict, Verdict::BoundedNonvanishing);
    let poly = AnalyticFn::polynomial(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0), Complex64::new(-1.0, 0.5)]).unwrap();
    let pr = vmoa_profile(&poly, p(1.5), &g, &[0.0, 2.0], 14).unwrap();
    assert_eq!(pr.verdict, Verdict::Vanishes);
}

#[test]
fn garsia_is_comparable_to_bmoa_for_log() {
    let s = SupSearchSpec { rays: 8, k_max: 10, iterations: 20, ..Default::default() };
    let gn = garsia_norm(&log1(), &s).unwrap();
    let bn = bmoa_norm(&log1(), p(2.0), &GridSpec::new(64, 128), &s).unwrap();
    assert!(gn.value > 0.0 && gn.value.is_finite());
    let ratio = gn.value / bn.value;
    assert!((0.1..10.0).contains(&ratio), "{ratio}");
}
