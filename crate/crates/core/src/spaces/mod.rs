//! Norms, seminorms and vanishing profiles for Dirichlet-type, BMOA_p,
//! Bloch and Garsia quantities, plus Carleson measure constants.

mod carleson;
mod norms;
mod search;

pub use carleson::{carleson_profile, h2_embedding_constant, CarlesonProfile, CarlesonSpec, H2Embedding};
pub(crate) use carleson::weighted_sweep;
pub use norms::{
    bloch_seminorm, bmoa_norm, bmoa_seminorm, dirichlet_norm, garsia_norm, growth_constant,
    local_seminorm_i, local_seminorm_i_sum, vmoa_profile, VmoaProfile,
};
pub use search::{polish, sup_search, SearchOutcome, SupSearchSpec};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::GridSpec;

/// Integrability exponent `p >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpaceParam(f64);

impl SpaceParam {
    pub fn new(p: f64) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::Parameter(format!("exponent p = {p} must satisfy 1 <= p < inf")));
        }
        Ok(SpaceParam(p))
    }

    pub fn p(&self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormEstimate {
    pub value: f64,
    pub error_estimate: f64,
    /// Maximizing point for sup-type quantities.
    pub witness: Option<Complex64>,
    pub grid: Option<GridSpec>,
    pub search_trace: Vec<(Complex64, f64)>,
    /// Set when the maximum sits on the outermost searched radius and is
    /// still increasing there; `value` is then only a lower bound.
    pub inconclusive: bool,
}

impl NormEstimate {
    pub fn exact(value: f64) -> Self {
        NormEstimate {
            value,
            error_estimate: 0.0,
            witness: None,
            grid: None,
            search_trace: Vec::new(),
            inconclusive: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Vanishes,
    BoundedNonvanishing,
    Diverges,
    Inconclusive,
}

impl Verdict {
    fn severity(self) -> u8 {
        match self {
            Verdict::Vanishes => 0,
            Verdict::Inconclusive => 1,
            Verdict::BoundedNonvanishing => 2,
            Verdict::Diverges => 3,
        }
    }

    /// The least favourable of two verdicts.
    pub fn worst(self, other: Verdict) -> Verdict {
        if other.severity() > self.severity() {
            other
        } else {
            self
        }
    }

    pub fn is_decisive(self) -> bool {
        self != Verdict::Inconclusive
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Vanishes => "vanishes",
            Verdict::BoundedNonvanishing => "bounded-nonvanishing",
            Verdict::Diverges => "diverges",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Thresholds for reading a limit off a finite profile.
pub mod thresholds {
    /// Points used for the log-log fit.
    pub const TAIL: usize = 5;
    pub const VANISH_SLOPE: f64 = 0.2;
    /// Last value relative to the profile maximum.
    pub const VANISH_DROP: f64 = 0.5;
    pub const DIVERGE_GROWTH: f64 = 10.0;
    pub const FLAT_SLOPE: f64 = 0.05;
    pub const FLAT_SPREAD: f64 = 1.2;
}

/// Values of a quantity along a schedule approaching a limit.
///
/// `params` is the distance to the limit (`1 - |a|`, `|I|` or `t`) and
/// decreases strictly along the profile.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VanishingProfile {
    pub label: String,
    /// Ray or box direction, when the profile has one.
    pub center_angle: Option<f64>,
    pub ks: Vec<u32>,
    pub params: Vec<f64>,
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
    /// Least-squares slope of `ln value` against `ln param` over the tail;
    /// `None` when every value is zero.
    pub slope: Option<f64>,
    pub verdict: Verdict,
}

impl VanishingProfile {
    pub fn new(label: impl Into<String>, ks: Vec<u32>, params: Vec<f64>, values: Vec<f64>, errors: Vec<f64>) -> Self {
        let (slope, verdict) = classify(&params, &values);
        VanishingProfile { label: label.into(), center_angle: None, ks, params, values, errors, slope, verdict }
    }

    pub fn with_angle(mut self, angle: f64) -> Self {
        self.center_angle = Some(angle);
        self
    }

    /// `(k, param, value)` rows in schedule order.
    pub fn rows(&self) -> impl Iterator<Item = (u32, f64, f64)> + '_ {
        self.ks.iter().zip(&self.params).zip(&self.values).map(|((&k, &p), &v)| (k, p, v))
    }
}

fn log_slope(params: &[f64], values: &[f64]) -> f64 {
    let xs: Vec<f64> = params.iter().map(|p| p.ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.max(f64::MIN_POSITIVE).ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// Slope and verdict of a profile.
pub fn classify(params: &[f64], values: &[f64]) -> (Option<f64>, Verdict) {
    use thresholds::*;
    if values.iter().all(|v| *v == 0.0) {
        return (None, Verdict::Vanishes);
    }
    let n = values.len();
    if n < 3 {
        return (None, Verdict::Inconclusive);
    }
    let tail = n.min(TAIL);
    let slope = log_slope(&params[n - tail..], &values[n - tail..]);
    let last3 = &values[n - 3..];
    let max = values.iter().cloned().fold(f64::MIN, f64::max);
    let last = values[n - 1];
    let decreasing = last3[0] > last3[1] && last3[1] > last3[2];
    let increasing = last3[0] < last3[1] && last3[1] < last3[2];
    let verdict = if decreasing && slope > VANISH_SLOPE && last <= VANISH_DROP * max {
        Verdict::Vanishes
    } else if increasing && last > DIVERGE_GROWTH * values[0] {
        Verdict::Diverges
    } else {
        let t = &values[n - tail..];
        let tmax = t.iter().cloned().fold(f64::MIN, f64::max);
        let tmin = t.iter().cloned().fold(f64::MAX, f64::min);
        if slope.abs() <= FLAT_SLOPE && tmin > 0.0 && tmax / tmin <= FLAT_SPREAD {
            Verdict::BoundedNonvanishing
        } else {
            Verdict::Inconclusive
        }
    };
    (Some(slope), verdict)
}

/// Worst verdict over a set of profiles.
pub fn overall_verdict<'a>(profiles: impl IntoIterator<Item = &'a VanishingProfile>) -> Verdict {
    profiles.into_iter().fold(Verdict::Vanishes, |acc, p| acc.worst(p.verdict))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dyadic(n: u32) -> (Vec<u32>, Vec<f64>) {
        let ks: Vec<u32> = (1..=n).collect();
        let ps = ks.iter().map(|k| 0.5f64.powi(*k as i32)).collect();
        (ks, ps)
    }

    #[test]
    fn verdict_rules() {
        let (_, ps) = dyadic(10);
        let vanish: Vec<f64> = ps.iter().map(|p| p.sqrt()).collect();
        assert_eq!(classify(&ps, &vanish).1, Verdict::Vanishes);
        let flat: Vec<f64> = ps.iter().map(|p| 1.0 + p).collect();
        assert_eq!(classify(&ps, &flat).1, Verdict::BoundedNonvanishing);
        let grow: Vec<f64> = ps.iter().map(|p| 1.0 / p).collect();
        assert_eq!(classify(&ps, &grow).1, Verdict::Diverges);
        let (_, ps) = dyadic(8);
        let logish: Vec<f64> = ps.iter().map(|p| -p.ln()).collect();
        assert_eq!(classify(&ps, &logish).1, Verdict::Inconclusive);
        assert_eq!(classify(&ps, &[0.0; 10]).1, Verdict::Vanishes);
    }

    #[test]
    fn worst_verdict_wins() {
        assert_eq!(Verdict::Vanishes.worst(Verdict::Inconclusive), Verdict::Inconclusive);
        assert_eq!(Verdict::Diverges.worst(Verdict::BoundedNonvanishing), Verdict::Diverges);
    }

    #[test]
    fn rejects_small_p() {
        assert!(SpaceParam::new(0.5).is_err());
        assert!(SpaceParam::new(f64::NAN).is_err());
        assert_eq!(SpaceParam::new(1.5).unwrap().p(), 1.5);
    }
}
