//! Volterra-type integration operators `T_g f(z) = ∫_0^z f g' dζ`, the
//! logarithmic Carleson conditions on `g` and the symbol attached to a
//! semigroup.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{segment_integral, AnalyticFn, Removable};
use crate::error::{Error, Result};
use crate::quadrature::QuadPoint;
use crate::sampling::{halton_disc, uniform_angles};
use crate::semigroup::Semigroup;
use crate::spaces::{
    bmoa_norm, classify, vmoa_profile, weighted_sweep, CarlesonProfile, CarlesonSpec, SpaceParam, SupSearchSpec,
    VmoaProfile, Verdict,
};
use crate::GridSpec;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Default path rule: 64 nodes (16 four-point panels).
pub const PATH_NODES: usize = 64;

#[derive(Debug, Clone)]
pub struct VolterraOp {
    pub g: AnalyticFn,
    g_prime: AnalyticFn,
}

impl VolterraOp {
    pub fn new(g: AnalyticFn) -> Self {
        let g_prime = match g.as_const() {
            Some(_) => AnalyticFn::real_constant(0.0),
            None => g.derivative(),
        };
        VolterraOp { g, g_prime }
    }

    pub fn g_prime(&self) -> &AnalyticFn {
        &self.g_prime
    }

    pub fn is_zero(&self) -> bool {
        self.g.as_const().is_some()
    }

    /// `T_g f` as a function whose derivative is `f g'`.
    pub fn image(&self, f: &AnalyticFn) -> AnalyticFn {
        if self.is_zero() {
            return AnalyticFn::real_constant(0.0);
        }
        f.mul(&self.g_prime).primitive(ZERO)
    }
}

/// `T_g f(z)` by composite Gauss-Legendre on `[0, z]` with `n_path_nodes`
/// nodes, and the change when the node count is doubled.
pub fn apply_tg(op: &VolterraOp, f: &AnalyticFn, z: Complex64, n_path_nodes: usize) -> Result<(Complex64, f64)> {
    if !(z.norm() < 1.0) {
        return Err(Error::Domain { modulus: z.norm() });
    }
    if op.is_zero() {
        return Ok((ZERO, 0.0));
    }
    let panels = (n_path_nodes / 4).max(1);
    let integrand = |w: Complex64| f.value(w) * op.g_prime.value(w);
    let coarse = segment_integral(integrand, ZERO, z, panels);
    let fine = segment_integral(integrand, ZERO, z, 2 * panels);
    if !(coarse.is_finite() && fine.is_finite()) {
        return Err(Error::Integrand { at: z });
    }
    Ok((coarse, (coarse - fine).norm()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogCarReport {
    pub p: f64,
    pub profile: CarlesonProfile,
    /// Sweep stays bounded (no center diverges or is inconclusive).
    pub bounded: bool,
    /// Every center vanishes.
    pub compact: bool,
}

/// `(log(2/|I|))^p / |I| ∫_{S(I)} |g'|^p (1-|z|^2)^{p-1} dm` over dyadic boxes.
pub fn logcar_profile(g: &AnalyticFn, p: SpaceParam, spec: &CarlesonSpec) -> Result<LogCarReport> {
    let p = p.p();
    let gp = VolterraOp::new(g.clone()).g_prime;
    let density = |n: &QuadPoint| gp.value(n.z).norm().powf(p) * n.one_minus_r2.powf(p - 1.0);
    let profile = weighted_sweep(&density, &g.cluster_points(), spec, |l| (2.0 / l).ln().powf(p) / l)?;
    let v = profile.overall_verdict;
    Ok(LogCarReport {
        p,
        bounded: matches!(v, Verdict::Vanishes | Verdict::BoundedNonvanishing),
        compact: v == Verdict::Vanishes,
        profile,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaCase {
    /// `γ(z) = ∫_b^z (ζ - b) / G(ζ) dζ`.
    Interior,
    /// `γ(z) = ∫_0^z 1 / G(ζ) dζ`.
    Boundary,
}

#[derive(Debug, Clone)]
pub struct GammaSymbol {
    pub gamma: AnalyticFn,
    pub case: GammaCase,
    pub dw_point: Complex64,
    pub label: String,
}

fn check_path(g: &AnalyticFn, base: Complex64, skip: f64, n: usize) -> Result<()> {
    let mut ends = halton_disc(64, 0.99, 0);
    ends.extend(uniform_angles(16).into_iter().map(|t| Complex64::from_polar(0.99, t)));
    for end in ends {
        for j in 1..=n {
            let z = base + (end - base) * (j as f64 / n as f64);
            if (z - base).norm() > skip && g.value(z).norm() < 1e-10 {
                return Err(Error::Path(z));
            }
        }
    }
    Ok(())
}

/// Symbol attached to a semigroup; its derivative is `(z - b)/G` or `1/G`.
pub fn gamma_symbol(sg: &Semigroup, n_path_nodes: usize) -> Result<GammaSymbol> {
    let g = &sg.generator;
    if sg.is_trivial() {
        return Err(Error::InvalidGenerator("trivial generator has no symbol".into()));
    }
    let b = sg.dw_point;
    if sg.interior_dw() {
        let d = g.deriv(b)?;
        if d.norm() < 1e-10 {
            return Err(Error::HigherOrderZero(b));
        }
        check_path(g, b, 1e-6, n_path_nodes)?;
        let shift = AnalyticFn::polynomial(vec![-b, Complex64::new(1.0, 0.0)])?;
        let integrand = shift.quotient(g, Some(Removable { point: b, limit: 1.0 / d, radius: 1e-6 }));
        Ok(GammaSymbol { gamma: integrand.primitive(b), case: GammaCase::Interior, dw_point: b, label: sg.label.clone() })
    } else {
        check_path(g, ZERO, 0.0, n_path_nodes)?;
        let integrand = AnalyticFn::real_constant(1.0).quotient(g, None);
        Ok(GammaSymbol { gamma: integrand.primitive(ZERO), case: GammaCase::Boundary, dw_point: b, label: sg.label.clone() })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TgLowerBound {
    /// Largest ratio found.
    pub value: f64,
    /// `(a, ||T_g f_a|| / ||f_a||)` along the schedule.
    pub ratios: Vec<(Complex64, f64)>,
    /// Ratios increase without stabilizing, or a norm diverged.
    pub unbounded: bool,
}

/// `max_a ||T_g f_a||_{BMOA_{p_to}} / ||f_a||_{BMOA_{p_from}}` for the test
/// functions `f_a = log(1 / (1 - conj(a) z))`.
pub fn tg_lower_bound(
    op: &VolterraOp,
    p_from: SpaceParam,
    p_to: SpaceParam,
    schedule: &[Complex64],
    grid: &GridSpec,
    search: &SupSearchSpec,
) -> Result<TgLowerBound> {
    if op.is_zero() {
        return Ok(TgLowerBound { value: 0.0, ratios: schedule.iter().map(|a| (*a, 0.0)).collect(), unbounded: false });
    }
    let mut ratios = Vec::new();
    for &a in schedule {
        let fa = AnalyticFn::log_recip_one_minus(a)?;
        let den = bmoa_norm(&fa, p_from, grid, search)?;
        let num = match bmoa_norm(&op.image(&fa), p_to, grid, search) {
            Ok(n) => n,
            Err(Error::Divergence(_)) => {
                let value = ratios.iter().map(|r: &(Complex64, f64)| r.1).fold(0.0, f64::max);
                return Ok(TgLowerBound { value, ratios, unbounded: true });
            }
            Err(e) => return Err(e),
        };
        ratios.push((a, num.value / den.value));
    }
    let value = ratios.iter().map(|r| r.1).fold(0.0, f64::max);
    let params: Vec<f64> = ratios.iter().map(|r| 1.0 - r.0.norm()).collect();
    let values: Vec<f64> = ratios.iter().map(|r| r.1).collect();
    let n = values.len();
    let (_, verdict) = classify(&params, &values);
    let rising = n >= 3 && values[n - 3] < values[n - 2] && values[n - 2] < values[n - 1];
    let unbounded = verdict == Verdict::Diverges || (rising && verdict == Verdict::Inconclusive);
    Ok(TgLowerBound { value, ratios, unbounded })
}

/// VMOA profile of `T_g f`.
pub fn tg_image_vmoa_check(
    op: &VolterraOp,
    f: &AnalyticFn,
    p: SpaceParam,
    angles: &[f64],
    k_max: u32,
    grid: &GridSpec,
) -> Result<VmoaProfile> {
    vmoa_profile(&op.image(f), p, grid, angles, k_max)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceRow {
    pub symbol: String,
    pub logcar: Verdict,
    /// `(f, verdict of T_g f)` for each family member.
    pub images: Vec<(String, Verdict)>,
    /// False only when decisive verdicts disagree.
    pub consistent: bool,
}

/// Checks that `logcar_profile(g, p)` vanishes exactly when `T_g f` lies in
/// VMOA_p for every `f` of the family. Inconclusive verdicts never count as
/// a contradiction.
pub fn image_equivalence(
    g: &AnalyticFn,
    family: &[AnalyticFn],
    p: SpaceParam,
    spec: &CarlesonSpec,
    grid: &GridSpec,
    k_max: u32,
) -> Result<EquivalenceRow> {
    let logcar = logcar_profile(g, p, spec)?.profile.overall_verdict;
    let op = VolterraOp::new(g.clone());
    let mut images = Vec::with_capacity(family.len());
    for f in family {
        let mut angles = vec![0.0, std::f64::consts::FRAC_PI_2, std::f64::consts::PI, -std::f64::consts::FRAC_PI_2];
        angles.extend(g.cluster_points().iter().chain(f.cluster_points().iter()).map(|c| c.arg()));
        angles.sort_by(|a, b| a.total_cmp(b));
        angles.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        let v = tg_image_vmoa_check(&op, f, p, &angles, k_max, grid)?.verdict;
        images.push((f.describe(), v));
    }
    let consistent = if logcar == Verdict::Vanishes {
        !images.iter().any(|(_, v)| v.is_decisive() && *v != Verdict::Vanishes)
    } else if logcar.is_decisive() {
        !images.iter().all(|(_, v)| *v == Verdict::Vanishes)
    } else {
        true
    };
    Ok(EquivalenceRow { symbol: g.describe(), logcar, images, consistent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::ClosedFlow;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn apply_examples() {
        let id = VolterraOp::new(AnalyticFn::identity());
        let (v, e) = apply_tg(&id, &AnalyticFn::identity(), c(0.5, 0.0), PATH_NODES).unwrap();
        assert!((v - c(0.125, 0.0)).norm() < 1e-10 && e < 1e-10);
        let log = AnalyticFn::log_recip_one_minus(c(1.0, 0.0)).unwrap();
        let (v, _) = apply_tg(&id, &log, c(0.5, 0.0), PATH_NODES).unwrap();
        let exact = 0.5 * 0.5f64.ln() + 0.5;
        assert!((v.re - exact).abs() < 1e-8 && (exact - 0.153426).abs() < 1e-6);
        let g = AnalyticFn::mobius(c(0.3, 0.2)).unwrap();
        let op = VolterraOp::new(g.clone());
        let z = c(-0.2, 0.6);
        let (v, _) = apply_tg(&op, &AnalyticFn::real_constant(1.0), z, PATH_NODES).unwrap();
        assert!((v - (g.value(z) - g.value(c(0.0, 0.0)))).norm() < 1e-10);
        assert_eq!(op.image(&log).value(c(0.0, 0.0)), c(0.0, 0.0));
    }

    #[test]
    fn gamma_examples() {
        let z = c(0.3, -0.4);
        let dil = gamma_symbol(&Semigroup::closed(ClosedFlow::Dilation), PATH_NODES).unwrap();
        assert_eq!(dil.case, GammaCase::Interior);
        assert!((dil.gamma.value(z) + z).norm() < 1e-12);
        assert!((dil.gamma.deriv_at(c(0.0, 0.0)) + 1.0).norm() < 1e-12);
        let rot = gamma_symbol(&Semigroup::closed(ClosedFlow::Rotation), PATH_NODES).unwrap();
        assert!((rot.gamma.value(z) - c(0.0, -1.0) * z).norm() < 1e-12);
        let to1 = gamma_symbol(&Semigroup::closed(ClosedFlow::DilationTo1), PATH_NODES).unwrap();
        assert_eq!(to1.case, GammaCase::Boundary);
        let log = AnalyticFn::log_recip_one_minus(c(1.0, 0.0)).unwrap();
        assert!((to1.gamma.value(z) - log.value(z)).norm() < 1e-10);
    }

    #[test]
    fn double_zero_is_rejected() {
        let g = AnalyticFn::monomial(2).scale(c(-1.0, 0.0));
        let sg = Semigroup { generator: g, dw_point: c(0.0, 0.0), closed_form: None, label: "z^2".into() };
        assert!(matches!(gamma_symbol(&sg, PATH_NODES), Err(Error::HigherOrderZero(_))));
    }
}
