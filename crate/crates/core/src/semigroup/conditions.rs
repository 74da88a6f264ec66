use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Semigroup;
use crate::analytic::{dedup_points, AnalyticFn};
use crate::error::{Error, Result};
use crate::quadrature::{box_integrate_clustered, CarlesonBox, GridSpec, QuadPoint};
use crate::sampling::{uniform_angles, wrap_angle};
use crate::spaces::{overall_verdict, SpaceParam, VanishingProfile, Verdict};

const SCAN_RADIUS: f64 = 1.0 - 1.0 / 1_048_576.0;
const SCAN_ANGLES: usize = 2048;

/// Points near the circle where `|G|` has a pronounced local minimum:
/// strict minima on `|z| = 1 - 2^{-20}` below 5% of the maximum.
pub fn boundary_zero_scan(g: &AnalyticFn) -> Vec<Complex64> {
    let pts: Vec<Complex64> = uniform_angles(SCAN_ANGLES).into_iter().map(|t| Complex64::from_polar(SCAN_RADIUS, t)).collect();
    let mods: Vec<f64> = pts.iter().map(|z| g.value(*z).norm()).collect();
    let max = mods.iter().cloned().fold(0.0, f64::max);
    if !(max > 0.0) {
        return Vec::new();
    }
    let n = mods.len();
    (0..n)
        .filter(|&i| {
            let (prev, next) = (mods[(i + n - 1) % n], mods[(i + 1) % n]);
            mods[i] < prev && mods[i] < next && mods[i] < 0.05 * max
        })
        .map(|i| pts[i])
        .collect()
}

/// Dyadic box sweep for the boundary conditions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConditionSpec {
    pub k_min: u32,
    pub k_max: u32,
    /// Uniform centers added to the Denjoy-Wolff direction and the scanned
    /// near-zeros of `G`.
    pub centers: usize,
    pub extra_centers: Vec<f64>,
    pub grid: GridSpec,
}

impl Default for ConditionSpec {
    fn default() -> Self {
        ConditionSpec { k_min: 1, k_max: 14, centers: 8, extra_centers: Vec::new(), grid: GridSpec::box_default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub condition: String,
    pub p: f64,
    pub profiles: Vec<VanishingProfile>,
    pub verdict: Verdict,
    pub worst_center: f64,
    pub near_zeros: Vec<Complex64>,
}

fn center_angles(sg: &Semigroup, spec: &ConditionSpec, zeros: &[Complex64]) -> Vec<f64> {
    let mut a: Vec<f64> = uniform_angles(spec.centers).into_iter().map(wrap_angle).collect();
    a.extend(spec.extra_centers.iter().map(|t| wrap_angle(*t)));
    if !sg.interior_dw() {
        a.push(sg.dw_point.arg());
    }
    a.extend(zeros.iter().map(|z| z.arg()));
    a.sort_by(|x, y| x.total_cmp(y));
    a.dedup_by(|x, y| (*x - *y).abs() < 1e-12);
    a
}

fn box_contains(b: &CarlesonBox, z: Complex64) -> bool {
    z.norm() > 1.0 - b.arclength && wrap_angle(z.arg() - b.center_angle).abs() <= b.arclength / 2.0
}

fn sweep(sg: &Semigroup, p: SpaceParam, spec: &ConditionSpec, log_weight: bool) -> Result<ConditionReport> {
    if spec.k_min > spec.k_max || spec.k_max - spec.k_min < 2 {
        return Err(Error::Parameter(format!("dyadic range {}..={} needs 3 boxes", spec.k_min, spec.k_max)));
    }
    spec.grid.validate()?;
    let g = &sg.generator;
    let p = p.p();
    let zeros = boundary_zero_scan(g);
    let mut hints = zeros.clone();
    hints.extend(g.cluster_points());
    if sg.dw_point.norm() > 0.0 {
        hints.push(sg.dw_point);
    }
    let hints = dedup_points(hints);
    let integrand = |n: &QuadPoint| n.one_minus_r2.powf(p - 1.0) / g.value(n.z).norm().powf(p);
    let ks: Vec<u32> = (spec.k_min..=spec.k_max).collect();
    let centers = center_angles(sg, spec, &zeros);
    let jobs: Vec<(f64, u32)> = centers.iter().flat_map(|&c| ks.iter().map(move |&k| (c, k))).collect();
    let results: Vec<Result<(f64, f64)>> = jobs
        .par_iter()
        .map(|&(c, k)| {
            let b = CarlesonBox::dyadic(c, k);
            let region = Error::InvalidRegion { center_angle: c, arclength: b.arclength };
            if sg.interior_dw() && !sg.is_trivial() && box_contains(&b, sg.dw_point) {
                return Err(region);
            }
            let r = box_integrate_clustered(integrand, &b, &spec.grid, &hints).map_err(|e| match e {
                Error::Integrand { .. } => region,
                other => other,
            })?;
            let l = b.arclength;
            let w = if log_weight { (2.0 / l).ln().powf(p) / l } else { 1.0 / l };
            Ok((w * r.value, w * r.error_estimate))
        })
        .collect();
    let mut it = results.into_iter();
    let mut profiles = Vec::new();
    for &c in &centers {
        let mut params = Vec::new();
        let mut values = Vec::new();
        let mut errors = Vec::new();
        for &k in &ks {
            let (v, e) = it.next().expect("one result per job")?;
            params.push(0.5f64.powi(k as i32));
            values.push(v);
            errors.push(e);
        }
        profiles.push(VanishingProfile::new(format!("center {c:.6}"), ks.clone(), params, values, errors).with_angle(c));
    }
    let verdict = overall_verdict(&profiles);
    let worst = profiles
        .iter()
        .filter(|pr| pr.verdict == verdict)
        .max_by(|a, b| a.values.last().unwrap().total_cmp(b.values.last().unwrap()))
        .and_then(|pr| pr.center_angle)
        .unwrap_or(0.0);
    Ok(ConditionReport {
        condition: if log_weight { "pLog" } else { "cond3" }.to_string(),
        p,
        profiles,
        verdict,
        worst_center: worst,
        near_zeros: zeros,
    })
}

/// `(log(2/|I|))^p / |I| ∫_{S(I)} (1-|z|^2)^{p-1} / |G|^p dm` over dyadic boxes.
pub fn check_plog(sg: &Semigroup, p: SpaceParam, spec: &ConditionSpec) -> Result<ConditionReport> {
    sweep(sg, p, spec, true)
}

/// `1/|I| ∫_{S(I)} (1-|z|^2)^{p-1} / |G|^p dm` over dyadic boxes.
pub fn check_cond3(sg: &Semigroup, p: SpaceParam, spec: &ConditionSpec) -> Result<ConditionReport> {
    sweep(sg, p, spec, false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cond2Verdict {
    Bounded,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cond2Report {
    pub a: f64,
    pub ks: Vec<u32>,
    pub radii: Vec<f64>,
    /// `max_θ (1-r)^a / |G(r e^{iθ})|` per radius.
    pub values: Vec<f64>,
    pub argmax_angles: Vec<f64>,
    pub verdict: Cond2Verdict,
}

/// Growth of `(1-|z|)^a / |G(z)|` on circles `|z| = 1 - 2^{-k}`.
///
/// Bounded when none of the last two steps grows by more than 5%.
pub fn check_cond2(sg: &Semigroup, a: f64, k_max: u32) -> Result<Cond2Report> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::Parameter(format!("exponent a = {a} outside (0, 1)")));
    }
    if k_max < 3 {
        return Err(Error::Parameter("cond2 needs k_max >= 3".into()));
    }
    let g = &sg.generator;
    let mut angles = uniform_angles(SCAN_ANGLES);
    angles.extend(boundary_zero_scan(g).iter().map(|z| z.arg()));
    if sg.dw_point.norm() > 0.0 {
        angles.push(sg.dw_point.arg());
    }
    let ks: Vec<u32> = (1..=k_max).collect();
    let mut radii = Vec::new();
    let mut values = Vec::new();
    let mut argmax = Vec::new();
    for &k in &ks {
        let d = 0.5f64.powi(k as i32);
        let r = 1.0 - d;
        let mut best = (f64::MIN, 0.0);
        for &t in &angles {
            let v = d.powf(a) / g.value(Complex64::from_polar(r, t)).norm();
            if !v.is_finite() {
                return Err(Error::InvalidRegion { center_angle: t, arclength: d });
            }
            if v > best.0 {
                best = (v, t);
            }
        }
        radii.push(r);
        values.push(best.0);
        argmax.push(wrap_angle(best.1));
    }
    let n = values.len();
    let bounded = values[n - 3..].windows(2).all(|w| w[1] <= 1.05 * w[0]);
    Ok(Cond2Report {
        a,
        ks,
        radii,
        values,
        argmax_angles: argmax,
        verdict: if bounded { Cond2Verdict::Bounded } else { Cond2Verdict::Unbounded },
    })
}

/// What the conditions imply about `[φ_t, BMOA_p] = VMOA_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoryStatus {
    Equal,
    NotEqual,
    TheoryUndetermined,
}

/// The logarithmic condition is sufficient; for an interior Denjoy-Wolff
/// point the plain condition is necessary. Anything else falls in the gap.
pub fn classify_theory(plog: Verdict, cond3: Verdict, interior_dw: bool) -> TheoryStatus {
    if plog == Verdict::Vanishes {
        TheoryStatus::Equal
    } else if interior_dw && cond3.is_decisive() && cond3 != Verdict::Vanishes {
        TheoryStatus::NotEqual
    } else {
        TheoryStatus::TheoryUndetermined
    }
}

#[cfg(test)]
mod tests {
    use super::super::ClosedFlow;
    use super::*;

    #[test]
    fn scan_finds_boundary_zero() {
        let z = boundary_zero_scan(&ClosedFlow::DilationTo1.generator());
        assert_eq!(z.len(), 1);
        assert!((z[0] - Complex64::new(1.0, 0.0)).norm() < 1e-5);
        assert!(boundary_zero_scan(&ClosedFlow::Dilation.generator()).is_empty());
    }

    #[test]
    fn cond2_examples() {
        let dil = Semigroup::closed(ClosedFlow::Dilation);
        assert_eq!(check_cond2(&dil, 0.5, 14).unwrap().verdict, Cond2Verdict::Bounded);
        let to1 = Semigroup::closed(ClosedFlow::DilationTo1);
        let r = check_cond2(&to1, 0.5, 14).unwrap();
        assert_eq!(r.verdict, Cond2Verdict::Unbounded);
        assert!(r.argmax_angles.last().unwrap().abs() < 1e-12);
    }

    #[test]
    fn theory_classification() {
        use Verdict::*;
        assert_eq!(classify_theory(Vanishes, Vanishes, true), TheoryStatus::Equal);
        assert_eq!(classify_theory(Diverges, BoundedNonvanishing, true), TheoryStatus::NotEqual);
        assert_eq!(classify_theory(Diverges, BoundedNonvanishing, false), TheoryStatus::TheoryUndetermined);
        assert_eq!(classify_theory(Inconclusive, Inconclusive, true), TheoryStatus::TheoryUndetermined);
    }
}
