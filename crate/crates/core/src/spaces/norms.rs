use num_complex::Complex64;
use serde::Serialize;

use super::search::{polish, sup_search, SupSearchSpec};
use super::{overall_verdict, NormEstimate, SpaceParam, VanishingProfile, Verdict};
use crate::analytic::AnalyticFn;
use crate::error::{Error, Result};
use crate::quadrature::{circle_sum, disc_integrate_clustered, disc_sum, GridSpec, IntegralResult, QuadPoint};
use crate::sampling::boundary_stress_set;

/// Integrals above this are reported as divergent.
const OVERFLOW_GUARD: f64 = 1e100;

fn guard(r: IntegralResult, what: &str) -> Result<IntegralResult> {
    if !(r.value.abs() < OVERFLOW_GUARD) {
        return Err(Error::Divergence(format!("{what}: integral exceeds {OVERFLOW_GUARD:e}")));
    }
    Ok(r)
}

/// `|w|^p` without a `powf` for the common exponents.
fn abs_pow(w: Complex64, p: f64) -> f64 {
    if p == 2.0 {
        w.norm_sqr()
    } else if p == 1.0 {
        w.norm()
    } else {
        w.norm_sqr().powf(p / 2.0)
    }
}

fn q_pow(q: f64, e: f64) -> f64 {
    if e == 0.0 {
        1.0
    } else if e == 1.0 {
        q
    } else {
        q.powf(e)
    }
}

fn norm_from_power(head: f64, body: f64, body_err: f64, p: f64) -> (f64, f64) {
    let s = head + body;
    let value = s.powf(1.0 / p);
    let err = if s > 0.0 { value / (p * s) * body_err } else { body_err.powf(1.0 / p) };
    (value, err + 4.0 * f64::EPSILON * value)
}

/// Absolute rounding allowance for `|f(0)|` itself.
fn head_rounding(f0: Complex64) -> f64 {
    4.0 * f64::EPSILON * f0.norm().max(1.0)
}

fn hints_with(f: &AnalyticFn, a: Complex64) -> Vec<Complex64> {
    let mut h = f.cluster_points();
    if a.norm() > 0.5 {
        h.push(a);
    }
    h
}

/// `(|f(0)|^p + ∫ |f'|^p (1-|z|^2)^{p-1} dm)^{1/p}`.
pub fn dirichlet_norm(f: &AnalyticFn, p: SpaceParam, grid: &GridSpec) -> Result<NormEstimate> {
    let p = p.p();
    let f0 = f.eval(Complex64::new(0.0, 0.0))?;
    let head = abs_pow(f0, p);
    let body = if f.as_const().is_some() {
        IntegralResult { value: 0.0, error_estimate: 0.0, nodes_used: 0 }
    } else {
        let integrand = |n: &QuadPoint| abs_pow(f.deriv_at(n.z), p) * q_pow(n.one_minus_r2, p - 1.0);
        guard(disc_integrate_clustered(integrand, grid, &f.cluster_points())?, "dirichlet norm")?
    };
    let (value, err) = norm_from_power(head, body.value, body.error_estimate, p);
    Ok(NormEstimate { error_estimate: err + head_rounding(f0), grid: Some(*grid), ..NormEstimate::exact(value) })
}

fn seminorm_integrand(f: &AnalyticFn, p: f64, a: Complex64) -> impl Fn(&QuadPoint) -> f64 + Sync + '_ {
    let ac = a.conj();
    let scale = (1.0 - a.norm()) * (1.0 + a.norm());
    move |n: &QuadPoint| {
        let kernel = scale / (1.0 - ac * n.z).norm_sqr();
        abs_pow(f.deriv_at(n.z), p) * q_pow(n.one_minus_r2, p - 1.0) * kernel
    }
}

fn check_point(a: Complex64) -> Result<()> {
    if !(a.norm() < 1.0) {
        return Err(Error::Domain { modulus: a.norm() });
    }
    Ok(())
}

/// `I(f, p, a) = ∫ |f'|^p (1-|z|^2)^{p-2} (1-|φ_a(z)|^2) dm`, computed with
/// `1 - |φ_a|^2 = (1-|a|^2)(1-|z|^2) / |1 - conj(a) z|^2`.
pub fn local_seminorm_i(f: &AnalyticFn, p: SpaceParam, a: Complex64, grid: &GridSpec) -> Result<IntegralResult> {
    check_point(a)?;
    if f.as_const().is_some() {
        return Ok(IntegralResult { value: 0.0, error_estimate: 0.0, nodes_used: 0 });
    }
    let r = disc_integrate_clustered(seminorm_integrand(f, p.p(), a), grid, &hints_with(f, a))?;
    guard(r, "local seminorm")
}

/// Single-grid `I(f, p, a)` without the refinement pass.
pub fn local_seminorm_i_sum(f: &AnalyticFn, p: SpaceParam, a: Complex64, grid: &GridSpec) -> Result<f64> {
    check_point(a)?;
    if f.as_const().is_some() {
        return Ok(0.0);
    }
    Ok(disc_sum(seminorm_integrand(f, p.p(), a), grid, &hints_with(f, a))?.0)
}

/// `sup_a I(f, p, a)`. The sweep runs on a grid coarsened four times per
/// direction; the maximizer is then polished and re-evaluated on `grid`.
pub fn bmoa_seminorm(f: &AnalyticFn, p: SpaceParam, grid: &GridSpec, search: &SupSearchSpec) -> Result<NormEstimate> {
    grid.validate()?;
    if f.as_const().is_some() {
        return Ok(NormEstimate {
            witness: Some(Complex64::new(0.0, 0.0)),
            grid: Some(*grid),
            ..NormEstimate::exact(0.0)
        });
    }
    let coarse = grid.coarsened(4);
    let out = sup_search(|a| local_seminorm_i_sum(f, p, a, &coarse), search, &f.cluster_points())?;
    // the coarse maximizer is shifted by the coarse quadrature error
    let (best, _, spread) = polish(|a| local_seminorm_i_sum(f, p, a, grid), out.best, search)?;
    let boundary = if out.inconclusive { out.search_error } else { 0.0 };
    let fine = local_seminorm_i(f, p, best, grid)?;
    Ok(NormEstimate {
        value: fine.value,
        error_estimate: fine.error_estimate + spread + boundary,
        witness: Some(best),
        grid: Some(*grid),
        search_trace: out.trace,
        inconclusive: out.inconclusive,
    })
}

/// `(|f(0)|^p + sup_a I(f, p, a))^{1/p}`.
pub fn bmoa_norm(f: &AnalyticFn, p: SpaceParam, grid: &GridSpec, search: &SupSearchSpec) -> Result<NormEstimate> {
    let semi = bmoa_seminorm(f, p, grid, search)?;
    let f0 = f.eval(Complex64::new(0.0, 0.0))?;
    let (value, err) = norm_from_power(abs_pow(f0, p.p()), semi.value, semi.error_estimate, p.p());
    Ok(NormEstimate { value, error_estimate: err + head_rounding(f0), ..semi })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VmoaProfile {
    pub profiles: Vec<VanishingProfile>,
    pub verdict: Verdict,
}

/// `I(f, p, r e^{iθ})` along each ray for `r = 1 - 2^{-k}`, `k = 2..=k_max`.
pub fn vmoa_profile(f: &AnalyticFn, p: SpaceParam, grid: &GridSpec, angles: &[f64], k_max: u32) -> Result<VmoaProfile> {
    if k_max < 4 {
        return Err(Error::Parameter(format!("k_max = {k_max} leaves fewer than 3 radii")));
    }
    let ks: Vec<u32> = (2..=k_max).collect();
    let mut profiles = Vec::with_capacity(angles.len());
    for &theta in angles {
        let mut params = Vec::new();
        let mut values = Vec::new();
        let mut errors = Vec::new();
        for &k in &ks {
            let d = 0.5f64.powi(k as i32);
            let r = local_seminorm_i(f, p, Complex64::from_polar(1.0 - d, theta), grid)?;
            params.push(d);
            values.push(r.value);
            errors.push(r.error_estimate);
        }
        let label = format!("ray {theta:.6}");
        profiles.push(VanishingProfile::new(label, ks.clone(), params, values, errors).with_angle(theta));
    }
    let verdict = overall_verdict(&profiles);
    Ok(VmoaProfile { profiles, verdict })
}

/// `sup_z (1-|z|^2) |f'(z)|`.
pub fn bloch_seminorm(f: &AnalyticFn, search: &SupSearchSpec) -> Result<NormEstimate> {
    let objective = |z: Complex64| -> Result<f64> {
        let m = z.norm();
        Ok((1.0 - m) * (1.0 + m) * f.deriv(z)?.norm())
    };
    let out = sup_search(objective, search, &f.cluster_points())?;
    Ok(NormEstimate {
        value: out.value,
        error_estimate: out.search_error,
        witness: Some(out.best),
        grid: None,
        search_trace: out.trace,
        inconclusive: out.inconclusive,
    })
}

/// Radii and circle rule for Garsia evaluations.
#[derive(Debug, Clone, Copy)]
struct GarsiaRule {
    k_lo: u32,
    k_hi: u32,
    nodes: usize,
}

impl GarsiaRule {
    const DEFAULT: GarsiaRule = GarsiaRule { k_lo: 6, k_hi: 12, nodes: 1024 };

    fn mean_at(&self, f: &AnalyticFn, a: Complex64, fa: Complex64, rho: f64, nodes: usize) -> Result<f64> {
        let ac = a.conj();
        let hints = hints_with(f, a);
        circle_sum(|z| (f.value(z) - fa).norm_sqr() / (1.0 - ac * z).norm_sqr(), rho, nodes, &hints)
    }

    /// `(1-|a|^2) mean |f - f(a)|^2 / |1 - conj(a) ζ|^2`, extrapolated
    /// linearly in `1 - ρ` from the two outermost radii.
    fn quantity(&self, f: &AnalyticFn, a: Complex64, nodes: usize) -> Result<f64> {
        check_point(a)?;
        let fa = f.eval(a)?;
        let x1 = 0.5f64.powi(self.k_hi as i32 - 1);
        let x2 = 0.5f64.powi(self.k_hi as i32);
        let v1 = self.mean_at(f, a, fa, 1.0 - x1, nodes)?;
        let v2 = self.mean_at(f, a, fa, 1.0 - x2, nodes)?;
        let limit = v2 - (v1 - v2) * x2 / (x1 - x2);
        Ok((1.0 - a.norm()) * (1.0 + a.norm()) * limit)
    }
}

/// Garsia norm: square root of
/// `sup_a (1-|a|^2) ∫ |f(ζ) - f(a)|^2 / |1 - conj(a) ζ|^2 |dζ|/(2π)`.
pub fn garsia_norm(f: &AnalyticFn, search: &SupSearchSpec) -> Result<NormEstimate> {
    let rule = GarsiaRule::DEFAULT;
    if rule.k_lo >= rule.k_hi {
        return Err(Error::Parameter("empty Garsia radius schedule".into()));
    }
    if f.as_const().is_some() {
        return Ok(NormEstimate { witness: Some(Complex64::new(0.0, 0.0)), ..NormEstimate::exact(0.0) });
    }
    let out = sup_search(|a| rule.quantity(f, a, rule.nodes), search, &f.cluster_points())?;
    let refined = rule.quantity(f, out.best, 2 * rule.nodes)?;
    if !(refined.abs() < OVERFLOW_GUARD) {
        return Err(Error::Divergence("garsia norm: boundary integral exceeds guard".into()));
    }
    let sup = out.value.max(0.0);
    let value = sup.sqrt();
    let err_sq = (refined - out.value).abs() + out.search_error;
    let error_estimate = if value > 0.0 { err_sq / (2.0 * value) } else { err_sq.sqrt() };
    Ok(NormEstimate {
        value,
        error_estimate,
        witness: Some(out.best),
        grid: None,
        search_trace: out.trace,
        inconclusive: out.inconclusive,
    })
}

/// Smallest `C` with `|f(z)| <= C (1 + log((1+|z|)/(1-|z|)))` on the samples;
/// defaults to the boundary stress set.
pub fn growth_constant(f: &AnalyticFn, samples: Option<&[Complex64]>) -> Result<NormEstimate> {
    let owned;
    let samples = match samples {
        Some(s) => s,
        None => {
            owned = boundary_stress_set(0);
            &owned
        }
    };
    let mut best = (Complex64::new(0.0, 0.0), f64::MIN);
    for &z in samples {
        let m = z.norm();
        let weight = 1.0 + ((1.0 + m) / (1.0 - m)).ln();
        let v = f.eval(z)?.norm() / weight;
        if v > best.1 {
            best = (z, v);
        }
    }
    Ok(NormEstimate { witness: Some(best.0), ..NormEstimate::exact(best.1.max(0.0)) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn p(v: f64) -> SpaceParam {
        SpaceParam::new(v).unwrap()
    }

    fn grid() -> GridSpec {
        GridSpec::new(64, 128)
    }

    /// `I(Identity, 2, a)` as a function of `t = |a|^2`.
    fn j(t: f64) -> f64 {
        if t == 0.0 {
            0.5
        } else {
            (1.0 - t) * ((1.0 - t) * (1.0 - t).ln() / (t * t) + 1.0 / t)
        }
    }

    #[test]
    fn dirichlet_examples() {
        let g = grid();
        assert!((dirichlet_norm(&AnalyticFn::real_constant(3.0), p(2.0), &g).unwrap().value - 3.0).abs() < 1e-15);
        let id = AnalyticFn::identity();
        assert!((dirichlet_norm(&id, p(2.0), &g).unwrap().value - 0.5f64.sqrt()).abs() < 1e-9);
        let full = g.with_cap(1.0);
        assert!((dirichlet_norm(&id, p(1.0), &full).unwrap().value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn local_seminorm_matches_closed_form() {
        let id = AnalyticFn::identity();
        for a in [c(0.0, 0.0), c(0.5f64.sqrt(), 0.0), Complex64::from_polar(0.9, 2.0)] {
            let v = local_seminorm_i(&id, p(2.0), a, &grid()).unwrap().value;
            assert!((v - j(a.norm_sqr())).abs() < 1e-8, "{a}: {v}");
        }
        let k = AnalyticFn::real_constant(1.0);
        assert_eq!(local_seminorm_i(&k, p(1.5), c(0.3, 0.0), &grid()).unwrap().value, 0.0);
    }

    #[test]
    fn bloch_examples() {
        let s = SupSearchSpec::default();
        assert_eq!(bloch_seminorm(&AnalyticFn::real_constant(1.0), &s).unwrap().value, 0.0);
        let id = bloch_seminorm(&AnalyticFn::identity(), &s).unwrap();
        assert!((id.value - 1.0).abs() < 1e-12 && id.witness.unwrap().norm() < 1e-6);
        let log = AnalyticFn::log_recip_one_minus(c(1.0, 0.0)).unwrap();
        assert!((bloch_seminorm(&log, &s).unwrap().value - 2.0).abs() < 1e-3);
    }

    #[test]
    fn growth_examples() {
        assert!((growth_constant(&AnalyticFn::real_constant(1.0), None).unwrap().value - 1.0).abs() < 1e-15);
        assert!(growth_constant(&AnalyticFn::identity(), None).unwrap().value <= 1.0);
        let log = AnalyticFn::log_recip_one_minus(c(1.0, 0.0)).unwrap();
        let real: Vec<Complex64> = (1..2000).map(|k| c(k as f64 / 2000.0, 0.0)).collect();
        assert!(growth_constant(&log, Some(&real)).unwrap().value <= 1.0);
    }

    #[test]
    fn garsia_identity_is_one() {
        let s = SupSearchSpec { rays: 8, k_max: 6, iterations: 20, ..Default::default() };
        let g = garsia_norm(&AnalyticFn::identity(), &s).unwrap();
        assert!((g.value - 1.0).abs() < 1e-6, "{}", g.value);
        assert_eq!(garsia_norm(&AnalyticFn::real_constant(2.0), &s).unwrap().value, 0.0);
    }
}
