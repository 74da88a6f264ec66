use bmoalab::sampling::halton_disc;
use bmoalab::semigroup::{check_plog, ClosedFlow, ConditionSpec, Semigroup};
use bmoalab::spaces::{CarlesonSpec, SpaceParam, SupSearchSpec, Verdict};
use bmoalab::volterra::*;
use bmoalab::{AnalyticFn, Complex64, GridSpec};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn p(v: f64) -> SpaceParam {
    SpaceParam::new(v).unwrap()
}

fn log1() -> AnalyticFn {
    AnalyticFn::log_recip_one_minus(c(1.0, 0.0)).unwrap()
}

#[test]
fn logcar_verdicts() {
    let spec = CarlesonSpec::default();
    let id = logcar_profile(&AnalyticFn::identity(), p(1.5), &spec).unwrap();
    assert_eq!(id.profile.overall_verdict, Verdict::Vanishes);
    assert!(id.compact && id.bounded);
    let log = logcar_profile(&log1(), p(1.5), &spec).unwrap();
    assert_eq!(log.profile.overall_verdict, Verdict::Diverges);
    assert!(!log.bounded);
    let at0 = log.profile.profiles.iter().find(|q| q.center_angle == Some(0.0)).unwrap();
    assert_eq!(at0.verdict, Verdict::Diverges);
    let k = logcar_profile(&AnalyticFn::real_constant(2.0), p(1.5), &spec).unwrap();
    assert_eq!(k.profile.sup_constant, 0.0);
    assert!(k.compact);
}

#[test]
fn image_profiles() {
    let grid = GridSpec::new(96, 128);
    let angles = [0.0, std::f64::consts::PI];
    let one = AnalyticFn::real_constant(1.0);
    let zero_op = VolterraOp::new(AnalyticFn::real_constant(3.0));
    let v = tg_image_vmoa_check(&zero_op, &log1(), p(1.5), &angles, 12, &grid).unwrap();
    assert_eq!(v.verdict, Verdict::Vanishes);
    let id = VolterraOp::new(AnalyticFn::identity());
    let v = tg_image_vmoa_check(&id, &log1(), p(1.5), &angles, 12, &grid).unwrap();
    assert_eq!(v.verdict, Verdict::Vanishes);
    let lg = VolterraOp::new(log1());
    let v = tg_image_vmoa_check(&lg, &one, p(1.5), &angles, 12, &grid).unwrap();
    assert_eq!(v.profiles[0].verdict, Verdict::BoundedNonvanishing);
}

#[test]
fn lower_bounds() {
    let search = SupSearchSpec::default();
    let sched: Vec<Complex64> = (1..=6).map(|k| c(1.0 - 0.5f64.powi(k), 0.0)).collect();
    let k = tg_lower_bound(&VolterraOp::new(AnalyticFn::real_constant(1.0)), p(2.0), p(1.5), &sched, &GridSpec::new(64, 128), &search).unwrap();
    assert_eq!(k.value, 0.0);
    let id = VolterraOp::new(AnalyticFn::identity());
    let short = &sched[..2];
    let a = tg_lower_bound(&id, p(2.0), p(1.5), short, &GridSpec::new(64, 128), &search).unwrap();
    let b = tg_lower_bound(&id, p(2.0), p(1.5), short, &GridSpec::new(128, 256), &search).unwrap();
    assert!(a.value > 0.0 && !a.unbounded);
    assert!((a.value - b.value).abs() < 1e-4 * a.value, "{} {}", a.value, b.value);
    let lg = tg_lower_bound(&VolterraOp::new(log1()), p(2.0), p(1.5), &sched, &GridSpec::new(64, 128), &search).unwrap();
    assert!(lg.unbounded);
}

#[test]
fn gamma_derivatives() {
    let pts = halton_disc(100, 0.95, 0);
    let dil = gamma_symbol(&Semigroup::closed(ClosedFlow::Dilation), PATH_NODES).unwrap();
    let to1 = gamma_symbol(&Semigroup::closed(ClosedFlow::DilationTo1), PATH_NODES).unwrap();
    for z in pts {
        assert!((dil.gamma.deriv_at(z) + 1.0).norm() <= 1e-8);
        assert!((to1.gamma.deriv_at(z) * (1.0 - z) - 1.0).norm() <= 1e-8);
    }
}

#[test]
fn gamma_coherence() {
    let dil = Semigroup::closed(ClosedFlow::Dilation);
    let gm = gamma_symbol(&dil, PATH_NODES).unwrap();
    let spec = CarlesonSpec::default();
    assert_eq!(logcar_profile(&gm.gamma, p(1.5), &spec).unwrap().profile.overall_verdict, Verdict::Vanishes);
    assert_eq!(check_plog(&dil, p(1.5), &ConditionSpec::default()).unwrap().verdict, Verdict::Vanishes);
    let to1 = gamma_symbol(&Semigroup::closed(ClosedFlow::DilationTo1), PATH_NODES).unwrap();
    assert_eq!(logcar_profile(&to1.gamma, p(1.5), &spec).unwrap().profile.overall_verdict, Verdict::Diverges);
}
