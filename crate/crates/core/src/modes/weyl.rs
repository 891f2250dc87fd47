//! Weyl sequences and their residuals `‖L u^(n)‖`.
//!
//! Every residual is a quadrature of a closed-form integrand; nothing is
//! differentiated numerically.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::bump::Bump;
use crate::dielectric::Side;
use crate::error::{Error, Result};
use crate::numerics::{in_open_ray, in_ray, principal_sqrt};
use crate::problem::InterfaceProblem;
use crate::quad::GaussLegendre;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Which sequence produced a sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    /// Cut-off plane wave moving to `x₁ → +∞`.
    Right,
    /// Cut-off plane wave moving to `x₁ → −∞`.
    Left,
    /// `(f(x₁ ∓ n), 0, 0)` at `k = 0` where `W_side = 0`.
    K0W0,
    /// Cut-off plane wave in the plane, away from the interface.
    Bulk2d,
    /// Interface-guided sequence built from a plasmon of the fibre `k₀`.
    Interface2d,
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Construction::Right => "1D-right",
            Construction::Left => "1D-left",
            Construction::K0W0 => "1D-k0-W0",
            Construction::Bulk2d => "2D-bulk",
            Construction::Interface2d => "2D-interface",
        })
    }
}

/// One member `u^(n)` of a Weyl sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeylSample {
    pub n: u32,
    pub construction: Construction,
    pub residual_norm: f64,
    /// `‖u^(n)‖`, one by construction.
    pub norm: f64,
    pub support_center: f64,
    /// Half-width of the support in `x₁`.
    pub support_half_width: f64,
}

/// Which 1D sequence to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant1d {
    PlaneWave(Side),
    K0W0(Side),
}

impl InterfaceProblem {
    /// Weyl sequence member for the reduced operator at `(ω, k)`.
    pub fn weyl_sequence_1d(
        &self,
        omega: Complex64,
        k: f64,
        n: u32,
        variant: Variant1d,
        bump: &Bump,
    ) -> Result<WeylSample> {
        if n == 0 {
            return Err(Error::Precondition("n must be positive".into()));
        }
        let v = self.values(omega)?;
        let nf = n as f64;
        match variant {
            Variant1d::K0W0(side) => {
                if k != 0.0 {
                    return Err(Error::Precondition("the k = 0 sequence needs k = 0".into()));
                }
                let w = v.w(side);
                if !self.tol.is_zero(w, v.scale()) {
                    return Err(Error::Precondition(format!(
                        "W{}(ω) = {w} is not zero",
                        sign_glyph(side)
                    )));
                }
                // L₀(f, 0, 0) = (−W f, ik f′, 0) with k = 0
                Ok(WeylSample {
                    n,
                    construction: Construction::K0W0,
                    residual_norm: w.norm(),
                    norm: 1.0,
                    support_center: side.sign() * nf,
                    support_half_width: 1.0,
                })
            }
            Variant1d::PlaneWave(side) => {
                let w = v.w(side);
                let ok = if k == 0.0 {
                    in_open_ray(w, &self.tol)
                } else {
                    in_ray(w, k * k, &self.tol)
                };
                if !ok || self.exceptional_values(&v).is_some() {
                    let ray = if k == 0.0 { "(0, ∞)" } else { "[k², ∞)" };
                    return Err(Error::Precondition(format!(
                        "W{}(ω) = {w} is not in {ray}",
                        sign_glyph(side)
                    )));
                }
                let l = principal_sqrt(w - k * k);
                let center = side.sign() * nf * nf;
                let lw = Complex64::new(k * k, 0.0) - w;
                let g = GaussLegendre::new(16);
                let (norm2, res2) = g.integrate_panels(-1.0, 1.0, 64, |y| {
                    let x = center + nf * y;
                    let ph = (I * l * x).exp() / nf.sqrt();
                    let (p, dp, d2p) = (bump.phi(y), bump.dphi(y), bump.d2phi(y));
                    let u = ph * p;
                    let du2 = ph * (-l * l * p + 2.0 * I * l * dp / nf + d2p / (nf * nf));
                    let lu = -du2 + lw * u;
                    Pair(u.norm_sqr() * nf, lu.norm_sqr() * nf)
                })
                .into();
                Ok(WeylSample {
                    n,
                    construction: match side {
                        Side::Plus => Construction::Right,
                        Side::Minus => Construction::Left,
                    },
                    residual_norm: res2.sqrt(),
                    norm: norm2.sqrt(),
                    support_center: center,
                    support_half_width: nf,
                })
            }
        }
    }

    /// Weyl sequence member for the 2D operator at `ω` with `W_side ∈ (0, ∞)`:
    /// `n⁻¹ e^{iβ·x} φ(y₁)φ(y₂) e₃` centred at `(±n², 0)`, `|β|² = W_side`.
    pub fn weyl_residual_2d_bulk(&self, omega: Complex64, side: Side, n: u32, bump: &Bump) -> Result<WeylSample> {
        if n == 0 {
            return Err(Error::Precondition("n must be positive".into()));
        }
        let v = self.regular_values(omega)?;
        let w = v.w(side);
        if !in_open_ray(w, &self.tol) {
            return Err(Error::Precondition(format!(
                "W{}(ω) = {w} is not in (0, ∞)",
                sign_glyph(side)
            )));
        }
        let nf = n as f64;
        let beta = w.re.sqrt() * core::f64::consts::FRAC_1_SQRT_2;
        let g = GaussLegendre::new(16);
        let nodes: Vec<(f64, f64)> = (0..32)
            .flat_map(|p| {
                let lo = -1.0 + p as f64 / 16.0;
                g.mapped(lo, lo + 1.0 / 16.0).collect::<Vec<_>>()
            })
            .collect();
        let mut norm2 = 0.0;
        let mut res2 = 0.0;
        for &(y1, w1) in &nodes {
            let (p1, d1, dd1) = (bump.phi(y1), bump.dphi(y1), bump.d2phi(y1));
            for &(y2, w2) in &nodes {
                let (p2, d2, dd2) = (bump.phi(y2), bump.dphi(y2), bump.d2phi(y2));
                let phi = p1 * p2;
                let grad = beta * (d1 * p2 + p1 * d2);
                let lap = dd1 * p2 + p1 * dd2;
                // residual amplitude 2iβ·∇Φ/n + ΔΦ/n², Φ real
                let r = Complex64::new(lap / (nf * nf), 2.0 * grad / nf);
                norm2 += w1 * w2 * phi * phi;
                res2 += w1 * w2 * r.norm_sqr();
            }
        }
        Ok(WeylSample {
            n,
            construction: Construction::Bulk2d,
            residual_norm: res2.sqrt(),
            norm: norm2.sqrt(),
            support_center: side.sign() * nf * nf,
            support_half_width: nf,
        })
    }

    /// Residual of the interface-guided 2D sequence for one `n`.
    pub fn weyl_residual_2d_interface(&self, omega: Complex64, a: f64, n: u32) -> Result<InterfaceWeylSample> {
        Ok(InterfaceWeyl::new(self, omega, a)?.sample(n))
    }
}

fn sign_glyph(side: Side) -> &'static str {
    match side {
        Side::Plus => "₊",
        Side::Minus => "₋",
    }
}

#[derive(Clone, Copy)]
struct Pair(f64, f64);

impl num_traits::Zero for Pair {
    fn zero() -> Self {
        Pair(0.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0.0 && self.1 == 0.0
    }
}

impl core::ops::Add for Pair {
    type Output = Pair;
    fn add(self, o: Pair) -> Pair {
        Pair(self.0 + o.0, self.1 + o.1)
    }
}

impl core::ops::Mul<f64> for Pair {
    type Output = Pair;
    fn mul(self, s: f64) -> Pair {
        Pair(self.0 * s, self.1 * s)
    }
}

impl From<Pair> for (f64, f64) {
    fn from(p: Pair) -> Self {
        (p.0, p.1)
    }
}

/// Norms of one interface-guided sample. `u = c_n (v + r)` with `v` the
/// modulated plasmon and `r` the divergence correction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceWeylSample {
    pub n: u32,
    /// `‖L u‖` with `‖u‖ = 1`.
    pub residual_norm: f64,
    /// `c_n ‖L v‖`.
    pub f_norm: f64,
    /// `c_n ‖L r‖`.
    pub g_norm: f64,
    pub v_norm: f64,
    pub r_norm: f64,
    pub c_n: f64,
    /// `c_n ‖⟦u₂′ − iku₁⟧‖`, measured in `L²(dk)`.
    pub tangential_jump: f64,
}

/// Precomputed data for the interface-guided sequence at `(ω, a)`.
///
/// In the Fourier fibre `k = k₀ + κ/n`, `k₀ = √a`, the sample is
/// `û = √n φ̂(κ) [k ψ(x₁) − (κ/n) ψ₂(x₁) e₂]`, which is divergence free in
/// every fibre. The `x₁` integrals are exact; `κ` is integrated by
/// Gauss–Legendre panels.
pub struct InterfaceWeyl {
    k0: f64,
    sides: [SideData; 2],
    jump_v1: Complex64,
    kappa: Vec<(f64, f64, f64)>,
}

struct SideData {
    s: Complex64,
    w: Complex64,
    v: [Complex64; 2],
    inv_two_re_mu: f64,
}

impl InterfaceWeyl {
    pub fn new(problem: &InterfaceProblem, omega: Complex64, a: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::Precondition("a must be positive".into()));
        }
        let v = problem.regular_values(omega)?;
        let tol = &problem.tol;
        if in_ray(v.w_plus, a, tol) || in_ray(v.w_minus, a, tol) {
            return Err(Error::Precondition("W± must avoid [a, ∞)".into()));
        }
        let ac = Complex64::new(a, 0.0);
        let mu_p = principal_sqrt(ac - v.w_plus);
        let mu_m = principal_sqrt(ac - v.w_minus);
        let lhs = v.wt_plus * mu_m + v.wt_minus * mu_p;
        let scale = (v.wt_plus * mu_m).norm() + (v.wt_minus * mu_p).norm();
        if lhs.norm() > 1e-6 * scale {
            return Err(Error::Precondition(format!(
                "(ω, a) violates W̃₊μ₋ + W̃₋μ₊ = 0 (residual {:.3e})",
                lhs.norm() / scale
            )));
        }
        let k0 = a.sqrt();
        let ik0 = I * k0;
        let ratio = mu_p / mu_m;
        let plus = SideData {
            s: -mu_p,
            w: v.w_plus,
            v: [ik0, mu_p],
            inv_two_re_mu: 0.5 / mu_p.re,
        };
        let minus = SideData {
            s: mu_m,
            w: v.w_minus,
            v: [-ik0 * ratio, mu_m * ratio],
            inv_two_re_mu: 0.5 / mu_m.re,
        };
        let jump_v1 = plus.v[0] - minus.v[0];

        let bump = Bump::new();
        let y_rule = GaussLegendre::new(16);
        let k_rule = GaussLegendre::new(8);
        let k_max = 400.0;
        let panels = 800;
        let mut kappa = Vec::with_capacity(2 * panels * k_rule.len());
        let width = k_max / panels as f64;
        for p in 0..panels {
            let lo = p as f64 * width;
            for (x, w) in k_rule.mapped(lo, lo + width) {
                let f = bump.fourier(x, &y_rule, 128);
                let f2 = f * f / (2.0 * core::f64::consts::PI);
                kappa.push((x, w, f2));
                kappa.push((-x, w, f2));
            }
        }
        Ok(Self {
            k0,
            sides: [plus, minus],
            jump_v1,
            kappa,
        })
    }

    pub fn sample(&self, n: u32) -> InterfaceWeylSample {
        let nf = n as f64;
        let k0 = Complex64::new(self.k0, 0.0);
        let mut lu = 0.0;
        let mut lv = 0.0;
        let mut lr = 0.0;
        let mut u2 = 0.0;
        let mut v2 = 0.0;
        let mut r2 = 0.0;
        let mut jump2 = 0.0;
        for &(kap, wq, f2) in &self.kappa {
            let k = self.k0 + kap / nf;
            let kc = Complex64::new(k, 0.0);
            let ik = I * k;
            let corr = Complex64::new(kap / nf, 0.0);
            let wgt = wq * f2;
            for sd in &self.sides {
                let (s, w, v) = (sd.s, sd.w, sd.v);
                let k2w = Complex64::new(k * k, 0.0) - w;
                let s2w = s * s + w;
                let cv1 = k2w * kc * v[0] + ik * s * kc * v[1];
                let cv2 = ik * s * kc * v[0] - s2w * kc * v[1];
                let cr1 = -ik * s * corr * v[1];
                let cr2 = s2w * corr * v[1];
                let m = wgt * sd.inv_two_re_mu;
                lu += m * ((cv1 + cr1).norm_sqr() + (cv2 + cr2).norm_sqr());
                lv += m * (cv1.norm_sqr() + cv2.norm_sqr());
                lr += m * (cr1.norm_sqr() + cr2.norm_sqr());
                u2 += m * ((kc * v[0]).norm_sqr() + (k0 * v[1]).norm_sqr());
                v2 += m * (kc * kc).norm() * (v[0].norm_sqr() + v[1].norm_sqr());
                r2 += m * corr.norm_sqr() * v[1].norm_sqr();
            }
            // ⟦V₂′ − ikV₁⟧ = −i(k² − k₀²)⟦ψ₁⟧ per unit amplitude
            jump2 += wgt * ((k * k - self.k0 * self.k0) * self.jump_v1.norm()).powi(2);
        }
        let c_n = 1.0 / u2.sqrt();
        InterfaceWeylSample {
            n,
            residual_norm: lu.sqrt() * c_n,
            f_norm: lv.sqrt() * c_n,
            g_norm: lr.sqrt() * c_n,
            v_norm: v2.sqrt(),
            r_norm: r2.sqrt(),
            c_n,
            tangential_jump: jump2.sqrt() * c_n,
        }
    }
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dielectric::DielectricModel;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    const NS: [u32; 4] = [8, 16, 32, 64];

    fn constants() -> InterfaceProblem {
        InterfaceProblem::new(
            DielectricModel::real_constant(2.0).unwrap(),
            DielectricModel::real_constant(2.0).unwrap(),
        )
        .unwrap()
    }

    fn slope_of(samples: &[f64]) -> f64 {
        let xs: Vec<f64> = NS.iter().map(|&n| n as f64).collect();
        loglog_slope(&xs, samples)
    }

    #[test]
    fn plane_wave_matches_closed_form_norm() {
        // ‖Lu‖² = 4l²‖φ′‖²/n² + ‖φ″‖²/n⁴ for real l
        let bump = Bump::new();
        let p = constants();
        for &n in &NS {
            let s = p
                .weyl_sequence_1d(c(3.0, 0.0), 3.0, n, Variant1d::PlaneWave(Side::Plus), &bump)
                .unwrap();
            let nf = n as f64;
            let want = (36.0 * bump.dphi_norm2() / (nf * nf) + bump.d2phi_norm2() / nf.powi(4)).sqrt();
            assert!((s.residual_norm - want).abs() < 1e-10 * want, "{s:?} {want}");
            assert!((s.norm - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn plane_wave_slopes() {
        let bump = Bump::new();
        let p = constants();
        for side in [Side::Plus, Side::Minus] {
            let r: Vec<f64> = NS
                .iter()
                .map(|&n| {
                    p.weyl_sequence_1d(c(3.0, 0.0), 3.0, n, Variant1d::PlaneWave(side), &bump)
                        .unwrap()
                        .residual_norm
                })
                .collect();
            assert!(r.windows(2).all(|w| w[1] < w[0]));
            let s = slope_of(&r);
            assert!((-1.15..=-0.85).contains(&s), "{s}");
        }
    }

    #[test]
    fn k_zero_plane_wave() {
        let bump = Bump::new();
        let s = constants()
            .weyl_sequence_1d(c(1.0, 0.0), 0.0, 8, Variant1d::PlaneWave(Side::Minus), &bump)
            .unwrap();
        assert_eq!(s.construction, Construction::Left);
        assert!(s.support_center < 0.0);
    }

    #[test]
    fn supports_leave_every_compact_set() {
        let bump = Bump::new();
        let p = constants();
        for &n in &NS {
            let s = p
                .weyl_sequence_1d(c(3.0, 0.0), 3.0, n, Variant1d::PlaneWave(Side::Plus), &bump)
                .unwrap();
            assert!(s.support_center - s.support_half_width > 5.0);
        }
    }

    #[test]
    fn unqualified_frequency_names_the_ray() {
        let bump = Bump::new();
        let e = constants()
            .weyl_sequence_1d(c(1.0, 0.0), 3.0, 8, Variant1d::PlaneWave(Side::Plus), &bump)
            .unwrap_err();
        match e {
            Error::Precondition(msg) => assert!(msg.contains("[k², ∞)"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn k0_w0_residual_vanishes() {
        let bump = Bump::new();
        let zero = InterfaceProblem::new(
            DielectricModel::real_constant(0.0).unwrap(),
            DielectricModel::real_constant(2.0).unwrap(),
        )
        .unwrap();
        let s = zero
            .weyl_sequence_1d(c(1.3, -0.2), 0.0, 8, Variant1d::K0W0(Side::Plus), &bump)
            .unwrap();
        assert_eq!(s.residual_norm, 0.0);

        let drude = InterfaceProblem::new(
            DielectricModel::real_constant(2.0).unwrap(),
            DielectricModel::drude(0.8, 1.0).unwrap(),
        )
        .unwrap();
        let z = drude.omega0_set().unwrap()[1].omega;
        for &n in &NS {
            let s = drude
                .weyl_sequence_1d(z, 0.0, n, Variant1d::K0W0(Side::Minus), &bump)
                .unwrap();
            assert!(s.residual_norm < 1e-14, "{s:?}");
        }
        assert!(drude
            .weyl_sequence_1d(z, 0.0, 8, Variant1d::K0W0(Side::Plus), &bump)
            .is_err());
    }

    #[test]
    fn bulk_2d_slope() {
        let bump = Bump::new();
        let p = constants();
        let r: Vec<f64> = NS
            .iter()
            .map(|&n| p.weyl_residual_2d_bulk(c(3.0, 0.0), Side::Plus, n, &bump).unwrap().residual_norm)
            .collect();
        let s = slope_of(&r);
        assert!((-1.15..=-0.85).contains(&s), "{s}");
    }

    #[test]
    fn interface_2d_slopes() {
        let p = InterfaceProblem::new(
            DielectricModel::real_constant(2.0).unwrap(),
            DielectricModel::drude(0.6, 2.0).unwrap(),
        )
        .unwrap();
        let a = p.in_n2(c(0.0, -1.0)).unwrap().a.unwrap();
        let w = InterfaceWeyl::new(&p, c(0.0, -1.0), a).unwrap();
        let samples: Vec<InterfaceWeylSample> = NS.iter().map(|&n| w.sample(n)).collect();
        let res: Vec<f64> = samples.iter().map(|s| s.residual_norm).collect();
        let rn: Vec<f64> = samples.iter().map(|s| s.r_norm).collect();
        assert!(res.windows(2).all(|w| w[1] < w[0]));
        let s = slope_of(&res);
        assert!((-1.15..=-0.85).contains(&s), "{s} {res:?}");
        let sr = slope_of(&rn);
        assert!((-1.15..=-0.85).contains(&sr), "{sr}");
        let jumps: Vec<f64> = samples.iter().map(|s| s.tangential_jump).collect();
        let sj = slope_of(&jumps);
        assert!((-1.15..=-0.85).contains(&sj), "{sj}");
        let cs: Vec<f64> = samples.iter().map(|s| s.c_n).collect();
        let (lo, hi) = cs.iter().fold((f64::MAX, 0.0f64), |(l, h), &c| (l.min(c), h.max(c)));
        assert!(hi / lo < 1.5, "{cs:?}");
    }

    #[test]
    fn interface_2d_rejects_bad_pairs() {
        let p = InterfaceProblem::new(
            DielectricModel::real_constant(2.0).unwrap(),
            DielectricModel::drude(0.6, 2.0).unwrap(),
        )
        .unwrap();
        assert!(InterfaceWeyl::new(&p, c(0.0, -1.0), 2.0).is_err());
        assert!(InterfaceWeyl::new(&p, c(0.0, -1.0), -1.0).is_err());
    }
}
