use num_complex::Complex64;
use serde::Serialize;
use std::sync::Arc;

use super::flow::FlowMap;
use super::Semigroup;
use crate::analytic::AnalyticFn;
use crate::error::{Error, Result};
use crate::quadrature::GridSpec;
use crate::spaces::{bmoa_norm, SpaceParam, SupSearchSpec, VanishingProfile};

/// ODE tolerance for flow-backed compositions.
const MAP_TOL: f64 = 1e-11;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuityReport {
    pub profile: VanishingProfile,
    pub closed_form: bool,
    /// Quadrature nodes where `|G| < 1e-12` (derivative of the flow taken
    /// from the linearization there).
    pub excluded_nodes: usize,
    pub witnesses: Vec<Option<Complex64>>,
}

/// `||f∘φ_t - f||_{BMOA_p}` for `t = 2^{-k}`, `k = k_min..=k_max`.
pub fn continuity_probe(
    f: &AnalyticFn,
    sg: &Semigroup,
    p: SpaceParam,
    k_min: u32,
    k_max: u32,
    grid: &GridSpec,
    search: &SupSearchSpec,
) -> Result<ContinuityReport> {
    if k_min > k_max {
        return Err(Error::Parameter(format!("empty t schedule 2^-{k_min}..2^-{k_max}")));
    }
    let ks: Vec<u32> = (k_min..=k_max).collect();
    let mut params = Vec::new();
    let mut values = Vec::new();
    let mut errors = Vec::new();
    let mut witnesses = Vec::new();
    let mut excluded = 0;
    for &k in &ks {
        let t = 0.5f64.powi(k as i32);
        params.push(t);
        if sg.is_trivial() {
            values.push(0.0);
            errors.push(0.0);
            witnesses.push(None);
            continue;
        }
        let (phi, map) = match sg.closed_form {
            Some(c) => (c.map(t), None),
            None => {
                let m = Arc::new(FlowMap::new(sg, t, MAP_TOL));
                (AnalyticFn::from_map(m.clone()), Some(m))
            }
        };
        let h = f.compose(&phi)?.sub(f);
        let n = bmoa_norm(&h, p, grid, search)?;
        if let Some(m) = map {
            excluded += m.excluded();
        }
        values.push(n.value);
        errors.push(n.error_estimate);
        witnesses.push(n.witness);
    }
    let label = format!("{} under {}", f.describe(), sg.label);
    Ok(ContinuityReport {
        profile: VanishingProfile::new(label, ks, params, values, errors),
        closed_form: sg.closed_form.is_some(),
        excluded_nodes: excluded,
        witnesses,
    })
}

#[cfg(test)]
mod tests {
    use super::super::ClosedFlow;
    use super::*;
    use crate::spaces::Verdict;

    #[test]
    fn trivial_semigroup_gives_zero() {
        let f = AnalyticFn::log_recip_one_minus(Complex64::new(1.0, 0.0)).unwrap();
        let sg = Semigroup::closed(ClosedFlow::Trivial);
        let r = continuity_probe(&f, &sg, SpaceParam::new(1.5).unwrap(), 1, 10, &GridSpec::new(32, 64), &SupSearchSpec::default()).unwrap();
        assert!(r.profile.values.iter().all(|v| *v == 0.0));
        assert_eq!(r.profile.verdict, Verdict::Vanishes);
    }
}
