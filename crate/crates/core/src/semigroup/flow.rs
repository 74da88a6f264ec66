use num_complex::Complex64;
use serde::Serialize;
use std::sync::atomic::{AtomicUsize, Ordering};

use super::Semigroup;
use crate::analytic::{AnalyticFn, PointMap};
use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-9;

/// Accepted points must satisfy `|w| < 1 - CONTAINMENT`.
const CONTAINMENT: f64 = 1e-12;
const MAX_STEPS: usize = 1_000_000;

// Dormand-Prince 5(4) tableau.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order weights minus embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowResult {
    /// Accepted `(t, w)` pairs including the initial point.
    pub samples: Vec<(f64, Complex64)>,
    pub final_point: Complex64,
    pub steps: usize,
    pub rejected: usize,
    pub max_modulus: f64,
}

/// Integrates `dw/ds = sign * G(w)` over `[0, t]`.
fn integrate(g: &AnalyticFn, z0: Complex64, t: f64, tol: f64, sign: f64, guard: bool) -> Result<FlowResult> {
    let mut res = FlowResult {
        samples: vec![(0.0, z0)],
        final_point: z0,
        steps: 0,
        rejected: 0,
        max_modulus: z0.norm(),
    };
    if t == 0.0 || g.as_const() == Some(Complex64::new(0.0, 0.0)) {
        return Ok(res);
    }
    let rhs = |w: Complex64| sign * g.value(w);
    let mut s = 0.0;
    let mut w = z0;
    let mut k1 = rhs(w);
    let mut h = t.min(0.05);
    while s < t {
        if res.steps + res.rejected > MAX_STEPS || h < 1e-15 * t.max(1.0) {
            return Err(Error::StepUnderflow { t: s });
        }
        let last = s + h >= t;
        if last {
            h = t - s;
        }
        let mut k = [Complex64::new(0.0, 0.0); 7];
        k[0] = k1;
        for i in 1..7 {
            let mut acc = w;
            for j in 0..i {
                acc += h * A[i][j] * k[j];
            }
            k[i] = rhs(acc);
        }
        let mut next = w;
        for j in 0..6 {
            next += h * A[6][j] * k[j];
        }
        let mut err = Complex64::new(0.0, 0.0);
        for j in 0..7 {
            err += h * E[j] * k[j];
        }
        let err = err.norm();
        if !(err.is_finite() && next.is_finite()) || err > tol * h {
            res.rejected += 1;
            h *= 0.5;
            continue;
        }
        s = if last { t } else { s + h };
        w = next;
        k1 = k[6];
        res.steps += 1;
        let m = w.norm();
        res.max_modulus = res.max_modulus.max(m);
        if guard && m >= 1.0 - CONTAINMENT {
            return Err(Error::Containment { modulus: m, t: s });
        }
        res.samples.push((s, w));
        let factor = if err == 0.0 { 2.0 } else { (0.9 * (tol * h / err).powf(0.25)).clamp(0.5, 2.0) };
        h *= factor;
    }
    res.final_point = w;
    Ok(res)
}

/// `φ_t(z0)` by adaptive Dormand-Prince stepping with local error at most
/// `tol` per unit time.
pub fn flow(sg: &Semigroup, z0: Complex64, t: f64, tol: f64) -> Result<FlowResult> {
    if !(z0.norm() < 1.0) {
        return Err(Error::Domain { modulus: z0.norm() });
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Parameter(format!("flow time {t} must be finite and >= 0")));
    }
    if !(tol > 0.0) {
        return Err(Error::Parameter(format!("tolerance {tol} must be positive")));
    }
    integrate(&sg.generator, z0, t, tol, 1.0, true)
}

/// `|φ_t(φ_s(z0)) - φ_{s+t}(z0)|` using the ODE solver for every flow.
pub fn semigroup_law_residual(sg: &Semigroup, z0: Complex64, s: f64, t: f64, tol: f64) -> Result<f64> {
    let mid = flow(sg, z0, s, tol)?.final_point;
    let two = flow(sg, mid, t, tol)?.final_point;
    let one = flow(sg, z0, s + t, tol)?.final_point;
    Ok((two - one).norm())
}

/// Richardson extrapolation of `(φ_t(z) - z) / t` to `t = 0`.
pub fn generator_estimate(sg: &Semigroup, z: Complex64) -> Result<Complex64> {
    if !(z.norm() <= 0.95) {
        return Err(Error::Parameter(format!("generator estimate needs |z| <= 0.95, got {}", z.norm())));
    }
    let ts = [1e-3, 5e-4, 2.5e-4];
    let mut d = [Complex64::new(0.0, 0.0); 3];
    for (i, &t) in ts.iter().enumerate() {
        let w = match sg.closed_form {
            Some(f) => f.apply(t, z),
            None => flow(sg, z, t, 1e-13)?.final_point,
        };
        d[i] = (w - z) / t;
    }
    let r0 = 2.0 * d[1] - d[0];
    let r1 = 2.0 * d[2] - d[1];
    Ok((4.0 * r1 - r0) / 3.0)
}

/// `φ_t` solved numerically, usable inside compositions.
///
/// `φ_t'(z) = G(φ_t(z)) / G(z)`; at nodes with `|G(z)| < 1e-12` the
/// linearization `exp(t G'(z))` is used instead and the node is counted.
pub struct FlowMap {
    generator: AnalyticFn,
    t: f64,
    tol: f64,
    excluded: AtomicUsize,
}

impl FlowMap {
    pub fn new(sg: &Semigroup, t: f64, tol: f64) -> Self {
        FlowMap { generator: sg.generator.clone(), t, tol, excluded: AtomicUsize::new(0) }
    }

    pub fn excluded(&self) -> usize {
        self.excluded.load(Ordering::Relaxed)
    }
}

impl PointMap for FlowMap {
    fn value(&self, z: Complex64) -> Complex64 {
        match integrate(&self.generator, z, self.t, self.tol, 1.0, true) {
            Ok(r) => r.final_point,
            Err(_) => Complex64::new(f64::NAN, f64::NAN),
        }
    }

    fn deriv(&self, z: Complex64) -> Complex64 {
        let gz = self.generator.value(z);
        if gz.norm() < 1e-12 {
            self.excluded.fetch_add(1, Ordering::Relaxed);
            return (self.t * self.generator.deriv_at(z)).exp();
        }
        self.generator.value(self.value(z)) / gz
    }

    fn label(&self) -> String {
        format!("flow(t={})", self.t)
    }

    fn preimage(&self, w: Complex64) -> Option<Complex64> {
        let start = if w.norm() >= 1.0 { w * (1.0 - 1e-9) } else { w };
        let p = integrate(&self.generator, start, self.t, self.tol, -1.0, false).ok()?.final_point;
        if !p.is_finite() {
            None
        } else if p.norm() > 1.0 {
            Some(1.0 / p.conj())
        } else {
            Some(p)
        }
    }
}
