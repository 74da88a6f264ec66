use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the computation modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("domain error: |z| = {modulus} is not inside the unit disc")]
    Domain { modulus: f64 },

    #[error("inner function is not a self-map of the disc: |g(z)| = {max_modulus} at z = {at}")]
    NotSelfMap { max_modulus: f64, at: Complex64 },

    #[error("integrand is not finite at node z = {at}")]
    Integrand { at: Complex64 },

    #[error("divergence: {0}")]
    Divergence(String),

    #[error("trajectory left the disc: |w| = {modulus} at t = {t}")]
    Containment { modulus: f64, t: f64 },

    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },

    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    #[error("generator vanishes inside the box centred at {center_angle} with |I| = {arclength}")]
    InvalidRegion { center_angle: f64, arclength: f64 },

    #[error("generator has a zero of order > 1 at b = {0}")]
    HigherOrderZero(Complex64),

    #[error("generator vanishes on the integration path at {0}")]
    Path(Complex64),
}

pub type Result<T> = std::result::Result<T, Error>;
