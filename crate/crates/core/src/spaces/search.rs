use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

use crate::error::Result;
use crate::sampling::{uniform_angles, wrap_angle};

/// Sweep and refinement parameters for sup-over-the-disc searches.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SupSearchSpec {
    pub rays: usize,
    /// Radii `1 - 2^{-k}` for `k = 0..=k_max`.
    pub k_max: u32,
    /// Nelder-Mead iterations after the sweep.
    pub iterations: usize,
    pub max_radius: f64,
    /// Additional ray directions.
    pub extra_angles: Vec<f64>,
}

impl Default for SupSearchSpec {
    fn default() -> Self {
        SupSearchSpec {
            rays: 32,
            k_max: 14,
            iterations: 60,
            max_radius: 1.0 - 0.5f64.powi(16),
            extra_angles: Vec::new(),
        }
    }
}

impl SupSearchSpec {
    pub fn radii(&self) -> Vec<f64> {
        (1..=self.k_max).map(|k| (1.0 - 0.5f64.powi(k as i32)).min(self.max_radius)).collect()
    }

    /// Ray directions: uniform set, extra angles and the directions of the
    /// hint points, sorted and deduplicated.
    pub fn angles(&self, hints: &[Complex64]) -> Vec<f64> {
        let mut angles: Vec<f64> = uniform_angles(self.rays).into_iter().map(wrap_angle).collect();
        angles.extend(self.extra_angles.iter().map(|t| wrap_angle(*t)));
        angles.extend(hints.iter().filter(|h| h.norm() > 1e-12).map(|h| h.arg()));
        angles.sort_by(|a, b| a.total_cmp(b));
        angles.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        angles
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchOutcome {
    pub best: Complex64,
    pub value: f64,
    pub trace: Vec<(Complex64, f64)>,
    pub inconclusive: bool,
    /// Increment at the outermost radius plus the final simplex spread.
    pub search_error: f64,
}

/// Larger value first, then smaller modulus, then smaller argument.
fn rank(a: &(Complex64, f64), b: &(Complex64, f64)) -> Ordering {
    b.1.total_cmp(&a.1)
        .then(a.0.norm().total_cmp(&b.0.norm()))
        .then(a.0.arg().total_cmp(&b.0.arg()))
}

fn project(z: Complex64, max_radius: f64) -> Complex64 {
    let m = z.norm();
    if m > max_radius {
        z * (max_radius / m)
    } else {
        z
    }
}

/// Maximize `objective` over the disc: ray sweep at geometric radii, then
/// Nelder-Mead started from the three best sweep points.
pub fn sup_search<F>(objective: F, spec: &SupSearchSpec, hints: &[Complex64]) -> Result<SearchOutcome>
where
    F: Fn(Complex64) -> Result<f64> + Sync,
{
    let angles = spec.angles(hints);
    let radii = spec.radii();
    let mut points = vec![Complex64::new(0.0, 0.0)];
    for &t in &angles {
        for &r in &radii {
            points.push(Complex64::from_polar(r, t));
        }
    }
    let values: Vec<Result<f64>> = points.par_iter().map(|&a| objective(a)).collect();
    let mut trace = Vec::with_capacity(points.len() + 3 * spec.iterations);
    for (a, v) in points.iter().zip(values) {
        trace.push((*a, v?));
    }

    let mut sweep = trace.clone();
    sweep.sort_by(rank);
    let top = sweep[0];
    let mut search_error = 0.0;
    let mut inconclusive = false;
    let nr = radii.len();
    if nr >= 2 {
        // index of top in the sweep layout: 1 + ray * nr + radius index
        if let Some(pos) = trace[..points.len()].iter().position(|e| e.0 == top.0) {
            if pos > 0 && (pos - 1) % nr == nr - 1 {
                let inner = trace[pos - 1].1;
                let inc = top.1 - inner;
                if inc > 1e-14 * top.1.abs().max(1.0) {
                    inconclusive = true;
                    search_error += inc;
                }
            }
        }
    }

    let spread = nelder_mead(&objective, spec, &sweep, &mut trace)?;
    search_error += spread;

    let best = *trace.iter().min_by(|a, b| rank(a, b)).expect("non-empty trace");
    Ok(SearchOutcome { best: best.0, value: best.1, trace, inconclusive, search_error })
}

/// Nelder-Mead restarted at `start` with a simplex of size
/// `1e-2 (1 - |start|)`; returns the best point, its value and the final
/// simplex spread.
pub fn polish<F>(objective: F, start: Complex64, spec: &SupSearchSpec) -> Result<(Complex64, f64, f64)>
where
    F: Fn(Complex64) -> Result<f64>,
{
    let h = 1e-2 * (1.0 - start.norm()).max(1e-6);
    let mut trace = Vec::new();
    let mut simplex = Vec::with_capacity(3);
    for z in [start, start + h, start + Complex64::new(0.0, h)] {
        let z = project(z, spec.max_radius);
        simplex.push((z, objective(z)?));
    }
    simplex.sort_by(rank);
    trace.extend_from_slice(&simplex);
    let spread = nelder_mead(&objective, spec, &simplex, &mut trace)?;
    let best = *trace.iter().min_by(|a, b| rank(a, b)).expect("non-empty trace");
    Ok((best.0, best.1, spread))
}

fn nelder_mead<F>(
    objective: &F,
    spec: &SupSearchSpec,
    sorted: &[(Complex64, f64)],
    trace: &mut Vec<(Complex64, f64)>,
) -> Result<f64>
where
    F: Fn(Complex64) -> Result<f64>,
{
    if spec.iterations == 0 || sorted.len() < 3 {
        return Ok(0.0);
    }
    let rmax = spec.max_radius;
    let mut eval = |z: Complex64| -> Result<(Complex64, f64)> {
        let z = project(z, rmax);
        let v = objective(z)?;
        trace.push((z, v));
        Ok((z, v))
    };
    let mut s = [sorted[0], sorted[1], sorted[2]];
    let e1 = s[1].0 - s[0].0;
    let e2 = s[2].0 - s[0].0;
    let area = (e1.conj() * e2).im.abs();
    if area < 1e-3 * e1.norm_sqr() {
        s[2] = eval(s[0].0 + Complex64::i() * e1)?;
    }
    for _ in 0..spec.iterations {
        s.sort_by(rank);
        let diameter = (s[1].0 - s[0].0).norm().max((s[2].0 - s[0].0).norm());
        if diameter < 1e-12 {
            break;
        }
        let c = (s[0].0 + s[1].0) / 2.0;
        let r = eval(c + (c - s[2].0))?;
        if r.1 > s[0].1 {
            let e = eval(c + 2.0 * (c - s[2].0))?;
            s[2] = if e.1 > r.1 { e } else { r };
        } else if r.1 > s[1].1 {
            s[2] = r;
        } else {
            let k = eval(c + 0.5 * (s[2].0 - c))?;
            if k.1 > s[2].1 {
                s[2] = k;
            } else {
                let x0 = s[0].0;
                s[1] = eval(x0 + 0.5 * (s[1].0 - x0))?;
                s[2] = eval(x0 + 0.5 * (s[2].0 - x0))?;
            }
        }
    }
    s.sort_by(rank);
    Ok(s[0].1 - s[2].1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_interior_maximum() {
        let peak = Complex64::new(0.3, -0.4);
        let out = sup_search(|a| Ok(1.0 - (a - peak).norm_sqr()), &SupSearchSpec::default(), &[]).unwrap();
        assert!((out.best - peak).norm() < 1e-4, "{}", out.best);
        assert!(!out.inconclusive);
    }

    #[test]
    fn flags_boundary_supremum() {
        let out = sup_search(|a| Ok(a.re), &SupSearchSpec::default(), &[]).unwrap();
        assert!(out.inconclusive);
        assert!(out.best.norm() <= SupSearchSpec::default().max_radius + 1e-15);
    }

    #[test]
    fn ties_prefer_the_origin() {
        let out = sup_search(|_| Ok(1.0), &SupSearchSpec::default(), &[]).unwrap();
        assert_eq!(out.best, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn polish_moves_to_nearby_peak() {
        let peak = Complex64::new(0.3, -0.4);
        let start = peak + Complex64::new(3e-4, 2e-4);
        let (z, v, spread) = polish(|a| Ok(1.0 - (a - peak).norm_sqr()), start, &SupSearchSpec::default()).unwrap();
        assert!((z - peak).norm() < 1e-6, "{z}");
        assert!(v > 1.0 - 1e-12 && spread < 1e-10);
    }
}
