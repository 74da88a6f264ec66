use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
const UNIT_TOL: f64 = 1e-12;

/// Closed-form building blocks.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "symbol", rename_all = "snake_case")]
pub enum CatalogSymbol {
    Const { c: Complex64 },
    Identity,
    Monomial { n: u32 },
    /// `z -> (a - z) / (1 - conj(a) z)`, `|a| < 1`.
    Mobius { a: Complex64 },
    /// `z -> log(1 / (1 - conj(a) z))`, `|a| <= 1`.
    LogRecipOneMinus { a: Complex64 },
    /// `z -> exp(gamma (z + w) / (z - w))`, `gamma > 0`, `|w| = 1`.
    InnerSingular { gamma: f64, w: Complex64 },
    /// `z -> (1 - z)^alpha`, principal branch.
    PowerOneMinus { alpha: f64 },
    /// Coefficients in increasing degree.
    Polynomial { coeffs: Vec<Complex64> },
}

impl CatalogSymbol {
    pub fn validate(&self) -> Result<()> {
        match self {
            CatalogSymbol::Const { c } if !c.is_finite() => {
                Err(Error::Parameter("constant must be finite".into()))
            }
            CatalogSymbol::Mobius { a } if !(a.norm() < 1.0) => Err(Error::Parameter(format!(
                "mobius parameter must satisfy |a| < 1, got |a| = {}",
                a.norm()
            ))),
            CatalogSymbol::LogRecipOneMinus { a } if !(a.norm() <= 1.0 + UNIT_TOL) => {
                Err(Error::Parameter(format!(
                    "log parameter must satisfy |a| <= 1, got |a| = {}",
                    a.norm()
                )))
            }
            CatalogSymbol::InnerSingular { gamma, w } => {
                if !(*gamma > 0.0 && gamma.is_finite()) {
                    return Err(Error::Parameter("inner function needs gamma > 0".into()));
                }
                if (w.norm() - 1.0).abs() > UNIT_TOL {
                    return Err(Error::Parameter(format!(
                        "inner function needs |w| = 1, got {}",
                        w.norm()
                    )));
                }
                Ok(())
            }
            CatalogSymbol::PowerOneMinus { alpha } if !alpha.is_finite() => {
                Err(Error::Parameter("exponent must be finite".into()))
            }
            CatalogSymbol::Polynomial { coeffs } => {
                if coeffs.is_empty() {
                    Err(Error::Parameter("polynomial needs at least one coefficient".into()))
                } else if coeffs.iter().any(|c| !c.is_finite()) {
                    Err(Error::Parameter("polynomial coefficients must be finite".into()))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    pub fn value(&self, z: Complex64) -> Complex64 {
        match self {
            CatalogSymbol::Const { c } => *c,
            CatalogSymbol::Identity => z,
            CatalogSymbol::Monomial { n } => z.powu(*n),
            CatalogSymbol::Mobius { a } => (a - z) / (ONE - a.conj() * z),
            CatalogSymbol::LogRecipOneMinus { a } => -(ONE - a.conj() * z).ln(),
            CatalogSymbol::InnerSingular { gamma, w } => (*gamma * (z + w) / (z - w)).exp(),
            CatalogSymbol::PowerOneMinus { alpha } => {
                if *alpha == 0.0 {
                    ONE
                } else {
                    (*alpha * (ONE - z).ln()).exp()
                }
            }
            CatalogSymbol::Polynomial { coeffs } => {
                coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
            }
        }
    }

    pub fn deriv(&self, z: Complex64) -> Complex64 {
        match self {
            CatalogSymbol::Const { .. } => Complex64::new(0.0, 0.0),
            CatalogSymbol::Identity => ONE,
            CatalogSymbol::Monomial { n } => match n {
                0 => Complex64::new(0.0, 0.0),
                _ => *n as f64 * z.powu(n - 1),
            },
            CatalogSymbol::Mobius { a } => {
                let d = ONE - a.conj() * z;
                Complex64::new(a.norm_sqr() - 1.0, 0.0) / (d * d)
            }
            CatalogSymbol::LogRecipOneMinus { a } => a.conj() / (ONE - a.conj() * z),
            CatalogSymbol::InnerSingular { gamma, w } => {
                let d = z - w;
                let v = (*gamma * (z + w) / d).exp();
                v * (-2.0 * gamma) * w / (d * d)
            }
            CatalogSymbol::PowerOneMinus { alpha } => {
                if *alpha == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    -*alpha * ((*alpha - 1.0) * (ONE - z).ln()).exp()
                }
            }
            CatalogSymbol::Polynomial { coeffs } => coeffs
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(Complex64::new(0.0, 0.0), |acc, (k, c)| acc * z + c * k as f64),
        }
    }

    /// Points of the closed disc around which the function (or its
    /// derivative) concentrates; a pole at `p` outside the disc is
    /// represented by its reflection `1 / conj(p)`.
    pub fn cluster_points(&self) -> Vec<Complex64> {
        match self {
            CatalogSymbol::Mobius { a } | CatalogSymbol::LogRecipOneMinus { a } => {
                if a.norm() > 0.0 {
                    vec![*a]
                } else {
                    vec![]
                }
            }
            CatalogSymbol::InnerSingular { w, .. } => vec![*w],
            CatalogSymbol::PowerOneMinus { alpha } => {
                if alpha.fract() == 0.0 && *alpha >= 0.0 {
                    vec![]
                } else {
                    vec![ONE]
                }
            }
            _ => vec![],
        }
    }

    /// True when the symbol maps the disc into itself with `0 -> 0`.
    pub fn fixes_origin_self_map(&self) -> bool {
        match self {
            CatalogSymbol::Identity => true,
            CatalogSymbol::Monomial { n } => *n >= 1,
            CatalogSymbol::Mobius { a } => a.norm() == 0.0,
            _ => false,
        }
    }
}
