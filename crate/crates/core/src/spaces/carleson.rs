use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use rayon::prelude::*;

use super::{overall_verdict, VanishingProfile, Verdict};
use crate::error::{Error, Result};
use crate::quadrature::{box_integrate_clustered, disc_integrate_clustered, CarlesonBox, GridSpec, QuadPoint};
use crate::sampling::{uniform_angles, wrap_angle};

const OVERFLOW_GUARD: f64 = 1e100;

/// Dyadic box sweep `|I| = 2^{-k}` over a set of centers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CarlesonSpec {
    pub k_min: u32,
    pub k_max: u32,
    /// Number of uniformly spaced centers.
    pub centers: usize,
    pub extra_centers: Vec<f64>,
    pub grid: GridSpec,
}

impl Default for CarlesonSpec {
    fn default() -> Self {
        CarlesonSpec { k_min: 1, k_max: 14, centers: 16, extra_centers: Vec::new(), grid: GridSpec::box_default() }
    }
}

impl CarlesonSpec {
    pub fn center_angles(&self) -> Vec<f64> {
        let mut a: Vec<f64> = uniform_angles(self.centers).into_iter().map(wrap_angle).collect();
        a.extend(self.extra_centers.iter().map(|t| wrap_angle(*t)));
        a.sort_by(|x, y| x.total_cmp(y));
        a.dedup_by(|x, y| (*x - *y).abs() < 1e-12);
        a
    }

    fn validate(&self) -> Result<()> {
        if self.k_min > self.k_max || self.k_max - self.k_min < 2 {
            return Err(Error::Parameter(format!(
                "dyadic range {}..={} needs at least 3 boxes",
                self.k_min, self.k_max
            )));
        }
        if self.k_max > 19 {
            return Err(Error::Parameter("boxes deeper than 2^-19 fall inside the cap".into()));
        }
        self.grid.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CarlesonProfile {
    /// Largest swept value of the box quantity.
    pub sup_constant: f64,
    pub sup_error: f64,
    pub sup_box: CarlesonBox,
    pub profiles: Vec<VanishingProfile>,
    /// Center whose smallest box carries the largest value.
    pub worst_center: f64,
    /// Verdict of the profile at `worst_center`.
    pub verdict: Verdict,
    /// Worst verdict over all centers.
    pub overall_verdict: Verdict,
}

/// Box quantity `weight(|I|) * ∫_{S(I)} density dm` over dyadic boxes.
pub(crate) fn weighted_sweep<F, W>(density: &F, hints: &[Complex64], spec: &CarlesonSpec, weight: W) -> Result<CarlesonProfile>
where
    F: Fn(&QuadPoint) -> f64 + Sync,
    W: Fn(f64) -> f64 + Sync,
{
    spec.validate()?;
    let ks: Vec<u32> = (spec.k_min..=spec.k_max).collect();
    let centers = spec.center_angles();
    let jobs: Vec<(f64, u32)> = centers.iter().flat_map(|&c| ks.iter().map(move |&k| (c, k))).collect();
    let results: Vec<Result<(f64, f64)>> = jobs
        .par_iter()
        .map(|&(c, k)| {
            let b = CarlesonBox::dyadic(c, k);
            let r = box_integrate_clustered(density, &b, &spec.grid, hints)?;
            let w = weight(b.arclength);
            let v = w * r.value;
            if !(v.abs() < OVERFLOW_GUARD) {
                return Err(Error::Divergence(format!("box quantity exceeds guard at k = {k}")));
            }
            Ok((v, w * r.error_estimate))
        })
        .collect();
    let mut it = results.into_iter();
    let mut profiles = Vec::new();
    let mut sup = (f64::MIN, 0.0, CarlesonBox::dyadic(0.0, spec.k_min));
    for &theta in &centers {
        let mut params = Vec::new();
        let mut values = Vec::new();
        let mut errors = Vec::new();
        for &k in &ks {
            let (v, e) = it.next().expect("one result per box")?;
            let b = CarlesonBox::dyadic(theta, k);
            if v > sup.0 {
                sup = (v, e, b);
            }
            params.push(b.arclength);
            values.push(v);
            errors.push(e);
        }
        let label = format!("center {theta:.6}");
        profiles.push(VanishingProfile::new(label, ks.clone(), params, values, errors).with_angle(theta));
    }
    let worst = profiles
        .iter()
        .max_by(|a, b| {
            let (la, lb) = (a.values.last().unwrap(), b.values.last().unwrap());
            la.total_cmp(lb).then(b.center_angle.unwrap().total_cmp(&a.center_angle.unwrap()))
        })
        .expect("at least one center");
    Ok(CarlesonProfile {
        sup_constant: sup.0,
        sup_error: sup.1,
        sup_box: sup.2,
        worst_center: worst.center_angle.unwrap(),
        verdict: worst.verdict,
        overall_verdict: overall_verdict(&profiles),
        profiles,
    })
}

/// `μ(S(I)) / |I|` for `dμ = density dm` over dyadic boxes.
pub fn carleson_profile<F>(density: F, hints: &[Complex64], spec: &CarlesonSpec) -> Result<CarlesonProfile>
where
    F: Fn(&QuadPoint) -> f64 + Sync,
{
    weighted_sweep(&density, hints, spec, |l| 1.0 / l)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct H2Embedding {
    /// `max_n ∫ |z|^{2n} dμ`, a lower bound for the embedding constant.
    pub value: f64,
    pub error_estimate: f64,
    pub degree: u32,
}

/// Lower bound for `C` in `∫ |f|^2 dμ <= C ||f||^2_{H^2}` from monomials of
/// degree at most `n_max`.
pub fn h2_embedding_constant<F>(density: F, hints: &[Complex64], n_max: u32, grid: &GridSpec) -> Result<H2Embedding>
where
    F: Fn(&QuadPoint) -> f64 + Sync,
{
    let mut best = H2Embedding { value: f64::MIN, error_estimate: 0.0, degree: 0 };
    for n in 0..=n_max {
        let r = disc_integrate_clustered(|q: &QuadPoint| density(q) * q.z.norm_sqr().powi(n as i32), grid, hints)?;
        if r.value > best.value {
            best = H2Embedding { value: r.value, error_estimate: r.error_estimate, degree: n };
        }
    }
    Ok(best)
}
