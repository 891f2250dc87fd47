//! Plasmon modes of the reduced 1D pencil and Weyl-sequence estimators.

pub mod weyl;

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::classify1d::{m_at, n_at};
use crate::dielectric::Side;
use crate::error::{Error, Result};
use crate::numerics::principal_sqrt;
use crate::poly::Poly;
use crate::problem::InterfaceProblem;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// A surface plasmon `ψ = v± e^{∓μ± x₁}` on `±x₁ > 0`, with `ψ₃ = 0`.
///
/// Normalized so that `v_minus = (−ik, μ₋)` and `v_plus = (μ₋/μ₊)(ik, μ₊)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlasmonMode {
    pub omega: Complex64,
    pub k: f64,
    pub mu_plus: Complex64,
    pub mu_minus: Complex64,
    pub v_plus: [Complex64; 2],
    pub v_minus: [Complex64; 2],
    pub wt_plus: Complex64,
    pub wt_minus: Complex64,
    pub w_plus: Complex64,
    pub w_minus: Complex64,
}

/// Residual of a mode: the ODE part on both half-lines and the five
/// interface jumps `⟦W̃ψ₁⟧, ⟦ψ₂⟧, ⟦ψ₃⟧, ⟦ψ₂′ − ikψ₁⟧, ⟦ψ₃′⟧`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeResidual {
    pub ode: f64,
    pub jumps: [f64; 5],
}

impl ModeResidual {
    pub fn max_jump(&self) -> f64 {
        self.jumps.iter().fold(0.0, |a, &b| a.max(b))
    }
}

impl PlasmonMode {
    /// `(ψ₁, ψ₂, ψ₃)(x₁)`; the value at 0 is the limit from the right.
    pub fn eval(&self, x1: f64) -> [Complex64; 3] {
        let (v, e) = self.side_factor(x1);
        [v[0] * e, v[1] * e, Complex64::new(0.0, 0.0)]
    }

    /// `ψ′(x₁)`, again right-continuous at 0.
    pub fn derivative(&self, x1: f64) -> [Complex64; 3] {
        let s = self.exponent(x1);
        let p = self.eval(x1);
        [p[0] * s, p[1] * s, Complex64::new(0.0, 0.0)]
    }

    /// Values just left of the interface.
    pub fn eval_left(&self) -> [Complex64; 3] {
        [self.v_minus[0], self.v_minus[1], Complex64::new(0.0, 0.0)]
    }

    /// Singular values of the 2×2 matching matrix for `(A, B)` in
    /// `Aμ₊ = Bμ₋`, `AW̃₊ = −BW̃₋`, largest first.
    pub fn matching_singular_values(&self) -> [f64; 2] {
        let m = [
            [self.mu_plus, -self.mu_minus],
            [self.wt_plus, self.wt_minus],
        ];
        singular_values_2x2(m)
    }

    fn exponent(&self, x1: f64) -> Complex64 {
        if x1 >= 0.0 {
            -self.mu_plus
        } else {
            self.mu_minus
        }
    }

    fn side_factor(&self, x1: f64) -> ([Complex64; 2], Complex64) {
        let e = (self.exponent(x1) * x1).exp();
        if x1 >= 0.0 {
            (self.v_plus, e)
        } else {
            (self.v_minus, e)
        }
    }
}

/// `max |T_kψ − Wψ|` over `grid` from the exact derivatives, plus the jumps.
pub fn mode_residual(mode: &PlasmonMode, grid: &[f64]) -> ModeResidual {
    let k = mode.k;
    let ik = I * k;
    let k2 = Complex64::new(k * k, 0.0);
    let mut ode: f64 = 0.0;
    for &x in grid {
        if x == 0.0 {
            continue;
        }
        let (w, s) = if x > 0.0 {
            (mode.w_plus, -mode.mu_plus)
        } else {
            (mode.w_minus, mode.mu_minus)
        };
        let u = mode.eval(x);
        let d1 = [u[0] * s, u[1] * s];
        let d2 = [u[1] * s * s];
        let r1 = (k2 - w) * u[0] + ik * d1[1];
        let r2 = ik * d1[0] - d2[0] - w * u[1];
        ode = ode.max(r1.norm()).max(r2.norm());
    }
    let up = mode.eval(0.0);
    let um = mode.eval_left();
    let dp = mode.derivative(0.0);
    let dm = [um[0] * mode.mu_minus, um[1] * mode.mu_minus];
    let jumps = [
        (mode.wt_plus * up[0] - mode.wt_minus * um[0]).norm(),
        (up[1] - um[1]).norm(),
        (up[2] - um[2]).norm(),
        ((dp[1] - ik * up[0]) - (dm[1] - ik * um[0])).norm(),
        0.0,
    ];
    ModeResidual { ode, jumps }
}

impl InterfaceProblem {
    /// `k² = ω²W̃₊W̃₋/(W̃₊+W̃₋)`.
    pub fn dispersion_k2(&self, omega: Complex64) -> Result<Complex64> {
        let v = self.values(omega)?;
        let sum = v.wt_plus + v.wt_minus;
        if self.tol.is_zero(sum, v.scale()) {
            return Err(Error::Precondition(
                "W̃₊ + W̃₋ vanishes, the dispersion relation diverges".into(),
            ));
        }
        Ok(omega * omega * v.wt_plus * v.wt_minus / sum)
    }

    /// `k²(n₊d₋ + n₋d₊) − ω²n₊n₋`, the cleared form of
    /// `k²(W₊+W₋) − W₊W₋` divided by `ω²`.
    pub fn dispersion_poly(&self, k: f64) -> Result<Poly> {
        let (np, dp) = self.plus.as_rational().ok_or(Error::UnsupportedModel(
            "mode search needs a rational model on the plus side",
        ))?;
        let (nm, dm) = self.minus.as_rational().ok_or(Error::UnsupportedModel(
            "mode search needs a rational model on the minus side",
        ))?;
        let k2 = Complex64::new(k * k, 0.0);
        let cross = np.mul(&dm).add(&nm.mul(&dp)).scale(k2);
        Ok(cross.sub(&np.mul(&nm).shift(2)))
    }

    /// All points of `N^(k)`, each with its eigenfunction data, sorted by
    /// real then imaginary part.
    pub fn eigen_omegas(&self, k: f64) -> Result<Vec<PlasmonMode>> {
        let p = self.dispersion_poly(k)?;
        if k == 0.0 {
            return Ok(Vec::new());
        }
        if p.is_zero() {
            return Err(Error::DegenerateDispersion { k });
        }
        let mut modes = Vec::new();
        for root in p.roots(&self.tol)? {
            let omega = root.value;
            let Ok(v) = self.values(omega) else { continue };
            if self.exceptional_values(&v).is_some() {
                continue;
            }
            if m_at(&v, Side::Plus, k, &self.tol) || m_at(&v, Side::Minus, k, &self.tol) {
                continue;
            }
            if !n_at(&v, k, &self.tol) {
                continue;
            }
            modes.push(self.mode_at(omega, k)?);
        }
        modes.sort_by(|a, b| {
            a.omega
                .re
                .total_cmp(&b.omega.re)
                .then(a.omega.im.total_cmp(&b.omega.im))
        });
        Ok(modes)
    }

    /// Eigenfunction data at a given `ω`; `ω` is not checked against `N^(k)`.
    pub fn mode_at(&self, omega: Complex64, k: f64) -> Result<PlasmonMode> {
        let v = self.values(omega)?;
        let k2 = Complex64::new(k * k, 0.0);
        let mu_plus = principal_sqrt(k2 - v.w_plus);
        let mu_minus = principal_sqrt(k2 - v.w_minus);
        if !(mu_plus.re > 0.0 && mu_minus.re > 0.0) {
            return Err(Error::Precondition(
                "both decay rates need a positive real part".into(),
            ));
        }
        let ik = I * k;
        let ratio = mu_minus / mu_plus;
        Ok(PlasmonMode {
            omega,
            k,
            mu_plus,
            mu_minus,
            v_plus: [ratio * ik, ratio * mu_plus],
            v_minus: [-ik, mu_minus],
            wt_plus: v.wt_plus,
            wt_minus: v.wt_minus,
            w_plus: v.w_plus,
            w_minus: v.w_minus,
        })
    }
}

fn singular_values_2x2(m: [[Complex64; 2]; 2]) -> [f64; 2] {
    // eigenvalues of MᴴM
    let a = m[0][0].norm_sqr() + m[1][0].norm_sqr();
    let d = m[0][1].norm_sqr() + m[1][1].norm_sqr();
    let b = m[0][0].conj() * m[0][1] + m[1][0].conj() * m[1][1];
    let tr = a + d;
    let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).norm();
    let disc = ((a - d) * (a - d) + 4.0 * b.norm_sqr()).sqrt();
    let big = (0.5 * (tr + disc)).sqrt();
    let small = if big > 0.0 { det / big } else { 0.0 };
    [big, small]
}
