//! Branch-aware complex helpers and the shared tolerance set.

#[allow(unused_imports)]
use num_traits::Float;
use num_complex::Complex64;

/// Tolerances used by every membership test.
///
/// Ray tests are absolute; zero tests are relative to the local magnitude
/// `max(|W̃₊|, |W̃₋|, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Maximum `|Im z|` for `z` to count as real in ray membership.
    pub ray_imag_tol: f64,
    /// Slack on the left endpoint of a ray.
    pub ray_real_tol: f64,
    /// Relative residual accepted for a polynomial root.
    pub root_residual_tol: f64,
    /// Relative tolerance for zero and equality tests.
    pub equality_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            ray_imag_tol: 1e-10,
            ray_real_tol: 1e-10,
            root_residual_tol: 1e-10,
            equality_tol: 1e-9,
        }
    }
}

impl Tolerances {
    /// True when every tolerance is finite and non-negative.
    pub fn is_valid(&self) -> bool {
        [
            self.ray_imag_tol,
            self.ray_real_tol,
            self.root_residual_tol,
            self.equality_tol,
        ]
        .iter()
        .all(|t| t.is_finite() && *t >= 0.0)
    }

    /// `|z| <= equality_tol * scale`.
    pub fn is_zero(&self, z: Complex64, scale: f64) -> bool {
        z.norm() <= self.equality_tol * scale
    }
}

/// Principal square root with argument in `(-π/2, π/2]`.
///
/// Points on the negative real axis map to the positive imaginary axis,
/// whatever the sign of their zero imaginary part. Off that axis the result
/// satisfies `sqrt(conj z) == conj(sqrt z)` bit for bit.
pub fn principal_sqrt(z: Complex64) -> Complex64 {
    let (x, y) = (z.re, z.im);
    if x == 0.0 && y == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let r = x.hypot(y);
    if x >= 0.0 {
        let t = ((r + x) * 0.5).sqrt();
        Complex64::new(t, y / (2.0 * t))
    } else {
        let t = ((r - x) * 0.5).sqrt();
        let re = y.abs() / (2.0 * t);
        // y == -0.0 also takes the upper branch
        let im = if y >= 0.0 { t } else { -t };
        Complex64::new(re, im)
    }
}

/// Membership of `z` in the closed ray `[a, ∞)`.
pub fn in_ray(z: Complex64, a: f64, tol: &Tolerances) -> bool {
    z.im.abs() <= tol.ray_imag_tol && z.re >= a - tol.ray_real_tol
}

/// Membership of `z` in the open ray `(0, ∞)`.
pub fn in_open_ray(z: Complex64, tol: &Tolerances) -> bool {
    z.im.abs() <= tol.ray_imag_tol && z.re > tol.ray_real_tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sqrt_of_minus_one_is_plus_i() {
        assert_eq!(principal_sqrt(c(-1.0, 0.0)), c(0.0, 1.0));
        assert_eq!(principal_sqrt(c(-1.0, -0.0)), c(0.0, 1.0));
        assert_eq!(principal_sqrt(c(-4.0, 0.0)), c(0.0, 2.0));
    }

    #[test]
    fn sqrt_just_below_cut_has_negative_imaginary_part() {
        let s = principal_sqrt(c(-1.0, -1e-300));
        assert!(s.im < 0.0);
        assert!((s.im + 1.0).abs() < 1e-15);
    }

    #[test]
    fn sqrt_of_positive_reals() {
        assert_eq!(principal_sqrt(c(9.0, 0.0)), c(3.0, 0.0));
        assert_eq!(principal_sqrt(c(0.0, 0.0)), c(0.0, 0.0));
    }

    #[test]
    fn ray_tolerance_window() {
        let tol = Tolerances::default();
        assert!(in_ray(c(9.0 + 1e-12, 5e-11), 9.0, &tol));
        assert!(in_ray(c(9.0 - 5e-11, 0.0), 9.0, &tol));
        assert!(!in_ray(c(9.0, 1e-9), 9.0, &tol));
        assert!(!in_ray(c(8.9, 0.0), 9.0, &tol));
        assert!(in_open_ray(c(1e-6, 0.0), &tol));
        assert!(!in_open_ray(c(0.0, 0.0), &tol));
        assert!(!in_open_ray(c(-1.0, 0.0), &tol));
    }

    proptest! {
        #[test]
        fn sqrt_squares_back(re in -1e3f64..1e3, im in -1e3f64..1e3) {
            let z = c(re, im);
            let s = principal_sqrt(z);
            prop_assert!((s * s - z).norm() <= 1e-12 * (1.0 + z.norm()));
        }

        #[test]
        fn sqrt_argument_window(re in -1e3f64..1e3, im in -1e3f64..1e3) {
            let s = principal_sqrt(c(re, im));
            let arg = s.im.atan2(s.re);
            prop_assert!(s.re >= 0.0);
            prop_assert!(arg > -core::f64::consts::FRAC_PI_2 - 1e-15);
            prop_assert!(arg <= core::f64::consts::FRAC_PI_2 + 1e-15);
        }

        #[test]
        fn sqrt_conjugate_symmetry(re in -1e3f64..1e3, im in -1e3f64..1e3) {
            prop_assume!(im != 0.0);
            let z = c(re, im);
            prop_assert_eq!(principal_sqrt(z.conj()), principal_sqrt(z).conj());
        }
    }
}
