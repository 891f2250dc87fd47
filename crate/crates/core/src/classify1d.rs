//! Spectral classification of the reduced 1D pencil at fixed wavenumber `k`.

use core::fmt;

use num_complex::Complex64;

use crate::dielectric::Side;
use crate::error::{Error, Result};
use crate::numerics::{in_open_ray, in_ray, principal_sqrt, Tolerances};
use crate::problem::{InterfaceProblem, SideValues};

/// How a classification was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `ω` is a pole of one or both sides.
    Pole { plus: bool, minus: bool },
    /// Generic point off the exceptional set.
    Regular { m_plus: bool, m_minus: bool, n: bool },
    /// `ω` lies in (or within tolerance of) the exceptional set `Ω₀`.
    Exceptional { k_zero: bool, near: bool },
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Branch::Pole { plus, minus } => match (plus, minus) {
                (true, true) => f.write_str("pole+-"),
                (true, false) => f.write_str("pole+"),
                _ => f.write_str("pole-"),
            },
            Branch::Regular { m_plus, m_minus, n } => {
                if !(m_plus || m_minus || n) {
                    return f.write_str("resolvent");
                }
                let mut first = true;
                for (on, tag) in [(m_plus, "M+"), (m_minus, "M-"), (n, "N")] {
                    if on {
                        if !first {
                            f.write_str(" ")?;
                        }
                        f.write_str(tag)?;
                        first = false;
                    }
                }
                Ok(())
            }
            Branch::Exceptional { k_zero, near } => {
                f.write_str(if near { "near-Omega0" } else { "Omega0" })?;
                if k_zero {
                    f.write_str(" k=0")?;
                }
                Ok(())
            }
        }
    }
}

/// Spectral flags of one frequency.
///
/// `essential[i]` is the essential spectrum in the sense `e_{i+1}`, so
/// `essential[0] ⊂ … ⊂ essential[4]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpectrumClass {
    pub in_domain: bool,
    pub in_omega0: bool,
    pub resolvent: bool,
    pub point_finite: bool,
    pub point_infinite: bool,
    pub discrete: bool,
    pub weyl: bool,
    pub essential: [bool; 5],
    pub branch: Branch,
}

impl SpectrumClass {
    pub(crate) fn pole(plus: bool, minus: bool) -> Self {
        Self {
            in_domain: false,
            in_omega0: false,
            resolvent: false,
            point_finite: false,
            point_infinite: false,
            discrete: false,
            weyl: false,
            essential: [false; 5],
            branch: Branch::Pole { plus, minus },
        }
    }

    /// Any spectral flag set.
    pub fn in_spectrum(&self) -> bool {
        self.point_finite
            || self.point_infinite
            || self.discrete
            || self.weyl
            || self.essential.iter().any(|&e| e)
    }

    /// Checks the structural invariants shared by both dimensions.
    pub fn check_invariants(&self) -> core::result::Result<(), &'static str> {
        if !self.in_domain {
            if self.resolvent || self.in_spectrum() {
                return Err("a pole carries spectral flags");
            }
            return Ok(());
        }
        if self.resolvent == self.in_spectrum() {
            return Err("resolvent and spectrum are not complementary");
        }
        for i in 0..4 {
            if self.essential[i] && !self.essential[i + 1] {
                return Err("essential spectra are not nested");
            }
        }
        if self.discrete && self.essential[4] {
            return Err("discrete spectrum meets e5");
        }
        if self.weyl != self.essential[1] {
            return Err("Weyl spectrum differs from e2");
        }
        Ok(())
    }
}

impl InterfaceProblem {
    /// `ω ∈ M±^(k)`: `W±(ω) ∈ [k², ∞)`, or `(0, ∞)` when `k = 0`.
    pub fn in_m(&self, side: Side, omega: Complex64, k: f64) -> Result<bool> {
        let v = self.regular_values(omega)?;
        Ok(m_at(&v, side, k, &self.tol))
    }

    /// `ω ∈ N^(k)`: both rays excluded and `W̃₊μ₋ + W̃₋μ₊ = 0`.
    pub fn in_n(&self, omega: Complex64, k: f64) -> Result<bool> {
        let v = self.regular_values(omega)?;
        Ok(n_at(&v, k, &self.tol))
    }

    /// Full 1D classification; total on the complex plane.
    pub fn classify(&self, omega: Complex64, k: f64) -> SpectrumClass {
        let v = match self.values(omega) {
            Ok(v) => v,
            Err(_) => {
                return SpectrumClass::pole(
                    self.plus.wtilde(omega).is_none(),
                    self.minus.wtilde(omega).is_none(),
                )
            }
        };
        if let Some((ex, near)) = self.exceptional_values(&v) {
            return exceptional_1d(&ex, k, near, &self.tol);
        }
        let m_plus = m_at(&v, Side::Plus, k, &self.tol);
        let m_minus = m_at(&v, Side::Minus, k, &self.tol);
        let n = !(m_plus || m_minus) && n_at(&v, k, &self.tol);
        let ess = m_plus || m_minus;
        SpectrumClass {
            in_domain: true,
            in_omega0: false,
            resolvent: !(ess || n),
            point_finite: n,
            point_infinite: false,
            discrete: n,
            weyl: ess,
            essential: [ess; 5],
            branch: Branch::Regular { m_plus, m_minus, n },
        }
    }

    /// Values at `ω` after rejecting poles and exceptional points.
    pub(crate) fn regular_values(&self, omega: Complex64) -> Result<SideValues> {
        let v = self.values(omega)?;
        if self.exceptional_values(&v).is_some() {
            return Err(Error::InExceptionalSet { omega });
        }
        Ok(v)
    }

    /// If `ω` is exceptional, the values to run the exceptional table on and
    /// whether the point was snapped from a neighbour.
    pub(crate) fn exceptional_values(&self, v: &SideValues) -> Option<(SideValues, bool)> {
        if let Some(p) = self.near_omega0(v.omega) {
            if p.omega == v.omega {
                return Some((*v, false));
            }
            if let Ok(snapped) = self.values(p.omega) {
                return Some((snapped, true));
            }
        }
        let s = v.scale();
        if self.tol.is_zero(v.w_plus, s) || self.tol.is_zero(v.w_minus, s) {
            return Some((*v, false));
        }
        None
    }
}

pub(crate) fn m_at(v: &SideValues, side: Side, k: f64, tol: &Tolerances) -> bool {
    let w = v.w(side);
    if k == 0.0 {
        in_open_ray(w, tol)
    } else {
        in_ray(w, k * k, tol)
    }
}

pub(crate) fn n_at(v: &SideValues, k: f64, tol: &Tolerances) -> bool {
    if m_at(v, Side::Plus, k, tol) || m_at(v, Side::Minus, k, tol) {
        return false;
    }
    let k2 = Complex64::new(k * k, 0.0);
    let mu_p = principal_sqrt(k2 - v.w_plus);
    let mu_m = principal_sqrt(k2 - v.w_minus);
    let a = v.wt_plus * mu_m;
    let b = v.wt_minus * mu_p;
    (a + b).norm() <= tol.equality_tol * (a.norm() + b.norm())
}

/// Zero flags on the exceptional set, resolving numerically ambiguous
/// cases: a side whose `W` vanishes away from the origin has `W̃ = 0`.
pub(crate) struct ZeroFlags {
    pub wt_plus: bool,
    pub wt_minus: bool,
    pub both_w: bool,
    pub sum: bool,
}

pub(crate) fn zero_flags(v: &SideValues, tol: &Tolerances) -> ZeroFlags {
    let s = v.scale();
    let wp0 = tol.is_zero(v.w_plus, s);
    let wm0 = tol.is_zero(v.w_minus, s);
    let both_w = wp0 && wm0;
    ZeroFlags {
        wt_plus: tol.is_zero(v.wt_plus, s) || (wp0 && !wm0),
        wt_minus: tol.is_zero(v.wt_minus, s) || (wm0 && !wp0),
        both_w,
        sum: tol.is_zero(v.wt_plus + v.wt_minus, s),
    }
}

fn exceptional_1d(v: &SideValues, k: f64, near: bool, tol: &Tolerances) -> SpectrumClass {
    let z = zero_flags(v, tol);
    let point_infinite = z.wt_plus || z.wt_minus;
    let branch = Branch::Exceptional {
        k_zero: k == 0.0,
        near,
    };
    if k == 0.0 {
        return SpectrumClass {
            in_domain: true,
            in_omega0: true,
            resolvent: false,
            point_finite: false,
            point_infinite,
            discrete: false,
            weyl: true,
            essential: [true; 5],
            branch,
        };
    }
    let regular_origin = z.both_w && !point_infinite;
    let resolvent = regular_origin && !z.sum;
    let point_finite = regular_origin && z.sum;
    let k2 = k * k;
    let e1 = (z.wt_plus && in_ray(v.w_minus, k2, tol)) || (z.wt_minus && in_ray(v.w_plus, k2, tol));
    let mid = point_infinite;
    SpectrumClass {
        in_domain: true,
        in_omega0: true,
        resolvent,
        point_finite,
        point_infinite,
        discrete: false,
        weyl: mid,
        essential: [e1, mid, mid, mid, !resolvent],
        branch,
    }
}
