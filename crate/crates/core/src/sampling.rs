//! Deterministic sample sets in the disc.

use num_complex::Complex64;
use std::f64::consts::PI;

fn radical_inverse(mut n: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut x = 0.0;
    while n > 0 {
        x += (n % base) as f64 * f;
        n /= base;
        f *= inv;
    }
    x
}

/// Low-discrepancy (Halton 2,3) points, area-uniform in `|z| <= radius`.
///
/// `seed` shifts the start index of the sequence so different seeds give
/// disjoint point sets.
pub fn halton_disc(count: usize, radius: f64, seed: u64) -> Vec<Complex64> {
    let start = 1 + seed.wrapping_mul(7919);
    (0..count as u64)
        .map(|i| {
            let u = radical_inverse(start + i, 2);
            let v = radical_inverse(start + i, 3);
            Complex64::from_polar(radius * u.sqrt(), 2.0 * PI * v)
        })
        .collect()
}

/// `count` equally spaced angles starting at 0.
pub fn uniform_angles(count: usize) -> Vec<f64> {
    (0..count).map(|j| 2.0 * PI * j as f64 / count as f64).collect()
}

/// Radii `1 - 2^{-k}` for `k` in `k_min..=k_max`.
pub fn dyadic_radii(k_min: u32, k_max: u32) -> Vec<f64> {
    (k_min..=k_max).map(|k| 1.0 - 0.5f64.powi(k as i32)).collect()
}

/// Rays times geometric radii plus the interior Halton cloud; used for
/// self-map and admissibility checks near the boundary.
pub fn boundary_stress_set(seed: u64) -> Vec<Complex64> {
    let mut pts = halton_disc(1000, 0.999, seed);
    for theta in uniform_angles(64) {
        for r in dyadic_radii(0, 20) {
            pts.push(Complex64::from_polar(r, theta));
        }
    }
    pts
}

/// Wrap an angle into `(-pi, pi]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let mut t = theta % (2.0 * PI);
    if t <= -PI {
        t += 2.0 * PI;
    } else if t > PI {
        t -= 2.0 * PI;
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halton_points_stay_inside() {
        let pts = halton_disc(500, 0.9, 3);
        assert_eq!(pts.len(), 500);
        assert!(pts.iter().all(|z| z.norm() <= 0.9));
    }

    #[test]
    fn wrap_is_idempotent() {
        for t in [-7.0, -PI, 0.3, PI, 9.0] {
            let w = wrap_angle(t);
            assert!(w > -PI && w <= PI);
            assert!((wrap_angle(w) - w).abs() < 1e-15);
        }
    }
}
