//! The normalized bump `φ(y) = C exp(1/(y² − 1))` on `(-1, 1)`.


#[allow(unused_imports)]
use num_traits::Float;
use crate::quad::GaussLegendre;

/// Smooth, compactly supported profile with unit `L²` norm.
#[derive(Debug, Clone)]
pub struct Bump {
    c: f64,
    dphi_norm2: f64,
    d2phi_norm2: f64,
}

impl Default for Bump {
    fn default() -> Self {
        Self::new()
    }
}

impl Bump {
    pub fn new() -> Self {
        let g = GaussLegendre::new(16);
        let raw = |y: f64| raw_phi(y);
        let n2: f64 = g.integrate_panels(-1.0, 1.0, 64, |y| raw(y) * raw(y));
        let c = 1.0 / n2.sqrt();
        let mut b = Self {
            c,
            dphi_norm2: 0.0,
            d2phi_norm2: 0.0,
        };
        b.dphi_norm2 = g.integrate_panels(-1.0, 1.0, 64, |y| b.dphi(y).powi(2));
        b.d2phi_norm2 = g.integrate_panels(-1.0, 1.0, 64, |y| b.d2phi(y).powi(2));
        b
    }

    pub fn phi(&self, y: f64) -> f64 {
        self.c * raw_phi(y)
    }

    pub fn dphi(&self, y: f64) -> f64 {
        if y.abs() >= 1.0 {
            return 0.0;
        }
        let s = y * y - 1.0;
        self.phi(y) * (-2.0 * y / (s * s))
    }

    pub fn d2phi(&self, y: f64) -> f64 {
        if y.abs() >= 1.0 {
            return 0.0;
        }
        let s = y * y - 1.0;
        let g1 = -2.0 * y / (s * s);
        let g2 = -2.0 / (s * s) + 8.0 * y * y / (s * s * s);
        self.phi(y) * (g1 * g1 + g2)
    }

    /// `‖φ'‖²`.
    pub fn dphi_norm2(&self) -> f64 {
        self.dphi_norm2
    }

    /// `‖φ''‖²`.
    pub fn d2phi_norm2(&self) -> f64 {
        self.d2phi_norm2
    }

    /// Fourier transform `∫ φ(y) e^{-iκy} dy`, real because φ is even.
    pub fn fourier(&self, kappa: f64, rule: &GaussLegendre, panels: usize) -> f64 {
        rule.integrate_panels(-1.0, 1.0, panels, |y| self.phi(y) * (kappa * y).cos())
    }
}

fn raw_phi(y: f64) -> f64 {
    if y.abs() >= 1.0 {
        0.0
    } else {
        (1.0 / (y * y - 1.0)).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_norm_and_support() {
        let b = Bump::new();
        let g = GaussLegendre::new(16);
        let n2: f64 = g.integrate_panels(-1.0, 1.0, 128, |y| b.phi(y).powi(2));
        assert!((n2 - 1.0).abs() < 1e-13);
        assert_eq!(b.phi(1.0), 0.0);
        assert_eq!(b.phi(-1.5), 0.0);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let b = Bump::new();
        let h = 1e-5;
        for &y in &[-0.7, -0.2, 0.0, 0.35, 0.8] {
            let fd1 = (b.phi(y + h) - b.phi(y - h)) / (2.0 * h);
            let fd2 = (b.dphi(y + h) - b.dphi(y - h)) / (2.0 * h);
            assert!((fd1 - b.dphi(y)).abs() < 1e-7 * (1.0 + b.dphi(y).abs()));
            assert!((fd2 - b.d2phi(y)).abs() < 1e-6 * (1.0 + b.d2phi(y).abs()));
        }
    }

    #[test]
    fn derivative_norms_by_parts() {
        // ‖φ'‖² = -∫ φ φ''
        let b = Bump::new();
        let g = GaussLegendre::new(16);
        let ibp: f64 = g.integrate_panels(-1.0, 1.0, 128, |y| -b.phi(y) * b.d2phi(y));
        assert!((ibp - b.dphi_norm2()).abs() < 1e-10 * b.dphi_norm2());
    }

    #[test]
    fn plancherel_for_fourier_transform() {
        let b = Bump::new();
        let g = GaussLegendre::new(16);
        let k_max = 300.0;
        let total: f64 = g.integrate_panels(0.0, k_max, 600, |k| b.fourier(k, &g, 96).powi(2));
        // even transform: (1/2π) ∫_ℝ = (1/π) ∫_0^∞
        assert!((total / core::f64::consts::PI - 1.0).abs() < 1e-8);
    }
}
