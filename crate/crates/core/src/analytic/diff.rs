use num_complex::Complex64;

use super::AnalyticFn;

/// Base step schedule; each step is scaled by `(1 - |z|) / 2` so the stencil
/// stays inside the disc.
const STEPS: [f64; 3] = [1e-4, 5e-5, 2.5e-5];

/// Richardson-extrapolated central difference of `f` along the real axis.
pub fn richardson_derivative<F: Fn(Complex64) -> Complex64>(f: F, z: Complex64) -> Complex64 {
    let scale = ((1.0 - z.norm()) / 2.0).clamp(1e-6, 0.5);
    let d: Vec<Complex64> = STEPS
        .iter()
        .map(|h| {
            let h = h * scale;
            (f(z + h) - f(z - h)) / (2.0 * h)
        })
        .collect();
    // halving steps: error h^2, then h^4
    let r0 = (4.0 * d[1] - d[0]) / 3.0;
    let r1 = (4.0 * d[2] - d[1]) / 3.0;
    (16.0 * r1 - r0) / 15.0
}

/// `|f'(z) - D(z)| / (1 + |f'(z)|)` with `D` the Richardson difference.
pub fn numeric_deriv_check(f: &AnalyticFn, z: Complex64) -> f64 {
    let exact = f.deriv_at(z);
    let numeric = richardson_derivative(|w| f.value(w), z);
    (exact - numeric).norm() / (1.0 + exact.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn check_examples() {
        assert!(numeric_deriv_check(&AnalyticFn::monomial(2), c(0.5, 0.0)) <= 1e-10);
        let log = AnalyticFn::log_recip_one_minus(c(1.0, 0.0)).unwrap();
        assert!(numeric_deriv_check(&log, c(0.8, 0.0)) <= 1e-7);
        let inner = AnalyticFn::inner_singular(1.0, c(1.0, 0.0)).unwrap();
        assert!(numeric_deriv_check(&inner, c(0.0, 0.0)) <= 1e-7);
    }
}
