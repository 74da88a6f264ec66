//! Holomorphic semigroups of self-maps of the disc: generators,
//! Denjoy-Wolff decomposition, flows, strong continuity and the boundary
//! conditions on the generator.

mod conditions;
mod continuity;
mod flow;

pub use conditions::{
    boundary_zero_scan, check_cond2, check_cond3, check_plog, classify_theory, Cond2Report, Cond2Verdict,
    ConditionReport, ConditionSpec, TheoryStatus,
};
pub use continuity::{continuity_probe, ContinuityReport};
pub use flow::{flow, generator_estimate, semigroup_law_residual, FlowMap, FlowResult, DEFAULT_TOL};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{AnalyticFn, Removable};
use crate::error::{Error, Result};
use crate::sampling::boundary_stress_set;

/// Semigroups with an explicit flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedFlow {
    /// `φ_t(z) = z`, `G = 0`.
    Trivial,
    /// `φ_t(z) = e^{-t} z`, `G = -z`.
    Dilation,
    /// `φ_t(z) = e^{-t} z + 1 - e^{-t}`, `G = 1 - z`.
    #[serde(rename = "dilation_to_1")]
    DilationTo1,
    /// `φ_t(z) = e^{it} z`, `G = iz`.
    Rotation,
}

impl ClosedFlow {
    pub fn apply(self, t: f64, z: Complex64) -> Complex64 {
        match self {
            ClosedFlow::Trivial => z,
            ClosedFlow::Dilation => (-t).exp() * z,
            ClosedFlow::DilationTo1 => (-t).exp() * z + (-(-t).exp_m1()),
            ClosedFlow::Rotation => Complex64::from_polar(1.0, t) * z,
        }
    }

    /// `φ_t` as an affine catalog function.
    pub fn map(self, t: f64) -> AnalyticFn {
        let (slope, shift) = match self {
            ClosedFlow::Trivial => (Complex64::new(1.0, 0.0), 0.0),
            ClosedFlow::Dilation => (Complex64::new((-t).exp(), 0.0), 0.0),
            ClosedFlow::DilationTo1 => (Complex64::new((-t).exp(), 0.0), -(-t).exp_m1()),
            ClosedFlow::Rotation => (Complex64::from_polar(1.0, t), 0.0),
        };
        AnalyticFn::polynomial(vec![Complex64::new(shift, 0.0), slope]).expect("finite coefficients")
    }

    pub fn generator(self) -> AnalyticFn {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let coeffs = match self {
            ClosedFlow::Trivial => return AnalyticFn::real_constant(0.0),
            ClosedFlow::Dilation => vec![c(0.0, 0.0), c(-1.0, 0.0)],
            ClosedFlow::DilationTo1 => vec![c(1.0, 0.0), c(-1.0, 0.0)],
            ClosedFlow::Rotation => vec![c(0.0, 0.0), c(0.0, 1.0)],
        };
        AnalyticFn::polynomial(coeffs).expect("finite coefficients")
    }

    pub fn dw_point(self) -> Complex64 {
        match self {
            ClosedFlow::DilationTo1 => Complex64::new(1.0, 0.0),
            _ => Complex64::new(0.0, 0.0),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ClosedFlow::Trivial => "trivial",
            ClosedFlow::Dilation => "dilation",
            ClosedFlow::DilationTo1 => "dilation_to_1",
            ClosedFlow::Rotation => "rotation",
        }
    }
}

/// Generator with its Denjoy-Wolff point.
#[derive(Debug, Clone)]
pub struct Semigroup {
    pub generator: AnalyticFn,
    pub dw_point: Complex64,
    pub closed_form: Option<ClosedFlow>,
    pub label: String,
}

impl Semigroup {
    /// Validates the Denjoy-Wolff point and the Berkson-Porta form.
    pub fn new(generator: AnalyticFn, dw_point: Complex64, closed_form: Option<ClosedFlow>, label: impl Into<String>) -> Result<Self> {
        let sg = Semigroup { generator, dw_point, closed_form, label: label.into() };
        if !sg.is_trivial() {
            let report = dw_decompose(&sg.generator, dw_point)?;
            if report.min_re_p < -1e-8 {
                return Err(Error::InvalidGenerator(format!(
                    "Re P = {:.3e} < 0 at {}",
                    report.min_re_p, report.argmin
                )));
            }
        } else if dw_point.norm() > 1.0 + 1e-12 {
            return Err(Error::InvalidGenerator(format!("|b| = {} > 1", dw_point.norm())));
        }
        Ok(sg)
    }

    pub fn closed(flow: ClosedFlow) -> Self {
        Semigroup {
            generator: flow.generator(),
            dw_point: flow.dw_point(),
            closed_form: Some(flow),
            label: flow.label().to_string(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.generator.as_const() == Some(Complex64::new(0.0, 0.0))
    }

    pub fn interior_dw(&self) -> bool {
        self.dw_point.norm() < 1.0 - 1e-12
    }

    /// `φ_t(z)`, from the closed form when available.
    pub fn evaluate(&self, t: f64, z: Complex64) -> Result<Complex64> {
        match self.closed_form {
            Some(f) => Ok(f.apply(t, z)),
            None => Ok(flow(self, z, t, DEFAULT_TOL)?.final_point),
        }
    }
}

/// Result of writing `G(z) = (conj(b) z - 1)(z - b) P(z)`.
#[derive(Debug, Clone)]
pub struct DwReport {
    pub p: AnalyticFn,
    pub min_re_p: f64,
    pub argmin: Complex64,
    /// Largest `|(conj(b) z - 1)(z - b) P(z) - G(z)|` on the samples.
    pub round_trip: f64,
}

/// Berkson-Porta factor `P` and its smallest sampled real part.
pub fn dw_decompose(g: &AnalyticFn, b: Complex64) -> Result<DwReport> {
    let m = b.norm();
    if !(m <= 1.0 + 1e-12) {
        return Err(Error::InvalidGenerator(format!("Denjoy-Wolff point |b| = {m} > 1")));
    }
    let interior = m < 1.0 - 1e-12;
    if interior {
        let gb = g.eval(b)?;
        if gb.norm() > 1e-10 {
            return Err(Error::InvalidGenerator(format!("G(b) = {gb} is not zero at b = {b}")));
        }
    }
    let bc = b.conj();
    let den = AnalyticFn::polynomial(vec![b, Complex64::new(-(1.0 + b.norm_sqr()), 0.0), bc])?;
    let removable = interior.then(|| Removable {
        point: b,
        limit: g.deriv_at(b) / (b.norm_sqr() - 1.0),
        radius: 1e-6,
    });
    let p = g.quotient(&den, removable);
    let mut min = (f64::INFINITY, b);
    let mut round_trip: f64 = 0.0;
    for z in boundary_stress_set(0) {
        let pz = p.value(z);
        if !pz.is_finite() {
            continue;
        }
        if pz.re < min.0 {
            min = (pz.re, z);
        }
        if (z - b).norm() >= 1e-6 {
            let back = den.value(z) * pz;
            let gz = g.value(z);
            round_trip = round_trip.max((back - gz).norm() / (1.0 + gz.norm()));
        }
    }
    Ok(DwReport { p, min_re_p: min.0, argmin: min.1, round_trip })
}
