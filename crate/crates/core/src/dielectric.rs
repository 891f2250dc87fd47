//! Frequency-dependent permittivity models `W̃(ω)` and `W(ω) = ω² W̃(ω)`.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{principal_sqrt, Tolerances};
use crate::poly::Poly;

/// Points closer than this (relative) to a pole count as singular.
const POLE_GUARD: f64 = 1e-12;
/// Relative distance under which a numerator and denominator root cancel.
const CANCEL_TOL: f64 = 1e-7;

/// Which half-space a quantity belongs to: `x₁ > 0` is plus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        }
    }

    pub fn other(self) -> Side {
        match self {
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Plus => "plus",
            Side::Minus => "minus",
        })
    }
}

/// Black-box permittivity; `None` marks a singular point.
#[derive(Clone)]
pub struct CustomFn(pub Arc<dyn Fn(Complex64) -> Option<Complex64> + Send + Sync>);

impl fmt::Debug for CustomFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("CustomFn(..)")
    }
}

#[derive(Debug, Clone)]
pub enum ModelKind {
    Constant(Complex64),
    /// `background − 2π ω_p² / (ω² + iγω)`.
    Drude {
        omega_p: f64,
        gamma: f64,
        background: f64,
    },
    /// `num(ω) / den(ω)` with common roots removed.
    Rational {
        num: Poly,
        den: Poly,
        poles: Vec<Complex64>,
    },
    Custom(CustomFn),
}

/// A permittivity model, multiplied by the positive constant `scale`.
#[derive(Debug, Clone)]
pub struct DielectricModel {
    kind: ModelKind,
    scale: f64,
}

impl DielectricModel {
    pub fn constant(value: Complex64) -> Result<Self> {
        if !value.is_finite() {
            return Err(invalid("value", "must be finite"));
        }
        Ok(Self {
            kind: ModelKind::Constant(value),
            scale: 1.0,
        })
    }

    pub fn real_constant(value: f64) -> Result<Self> {
        Self::constant(Complex64::new(value, 0.0))
    }

    /// Drude metal with unit background.
    pub fn drude(omega_p: f64, gamma: f64) -> Result<Self> {
        Self::drude_with_background(omega_p, gamma, 1.0)
    }

    pub fn drude_with_background(omega_p: f64, gamma: f64, background: f64) -> Result<Self> {
        if !(omega_p.is_finite() && omega_p > 0.0) {
            return Err(invalid("omega_p", "must be a finite number > 0"));
        }
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(invalid("gamma", "must be a finite number >= 0"));
        }
        if !(background.is_finite() && background > 0.0) {
            return Err(invalid("background", "must be a finite number > 0"));
        }
        Ok(Self {
            kind: ModelKind::Drude {
                omega_p,
                gamma,
                background,
            },
            scale: 1.0,
        })
    }

    /// Rational model; common numerator and denominator roots are cancelled.
    pub fn rational(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(invalid("denominator", "must not be identically zero"));
        }
        if num.coeffs().iter().chain(den.coeffs()).any(|c| !c.is_finite()) {
            return Err(invalid("numerator", "coefficients must be finite"));
        }
        let tol = Tolerances::default();
        let (num, den) = if num.is_zero() {
            (num, Poly::constant(Complex64::new(1.0, 0.0)))
        } else {
            cancel_common_roots(num, den, &tol)?
        };
        let poles = expand_roots(&den, &tol)?;
        Ok(Self {
            kind: ModelKind::Rational { num, den, poles },
            scale: 1.0,
        })
    }

    pub fn custom<F>(f: F) -> Self
    where
        F: Fn(Complex64) -> Option<Complex64> + Send + Sync + 'static,
    {
        Self {
            kind: ModelKind::Custom(CustomFn(Arc::new(f))),
            scale: 1.0,
        }
    }

    pub fn with_scale(mut self, scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(invalid("scale", "must be a finite number > 0"));
        }
        self.scale = scale;
        Ok(self)
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn is_rational(&self) -> bool {
        !matches!(self.kind, ModelKind::Custom(_))
    }

    /// `W̃(ω)`, or `None` at a pole.
    pub fn wtilde(&self, omega: Complex64) -> Option<Complex64> {
        let v = match &self.kind {
            ModelKind::Constant(c) => *c,
            ModelKind::Drude {
                omega_p,
                gamma,
                background,
            } => {
                let d = omega * (omega + Complex64::new(0.0, *gamma));
                if near_any(omega, &self.drude_poles()) || d == Complex64::new(0.0, 0.0) {
                    return None;
                }
                let plasma = 2.0 * core::f64::consts::PI * omega_p * omega_p;
                Complex64::new(*background, 0.0) - plasma / d
            }
            ModelKind::Rational { num, den, poles } => {
                if near_any(omega, poles) {
                    return None;
                }
                num.eval(omega) / den.eval(omega)
            }
            ModelKind::Custom(f) => (f.0)(omega)?,
        };
        let v = v * self.scale;
        v.is_finite().then_some(v)
    }

    /// `W(ω) = ω² W̃(ω)`, or `None` at a pole.
    pub fn w(&self, omega: Complex64) -> Option<Complex64> {
        self.wtilde(omega).map(|wt| omega * omega * wt)
    }

    /// `(numerator, denominator)` of `W̃` including the scale.
    pub fn as_rational(&self) -> Option<(Poly, Poly)> {
        let s = Complex64::new(self.scale, 0.0);
        match &self.kind {
            ModelKind::Constant(c) => Some((
                Poly::constant(c * s),
                Poly::constant(Complex64::new(1.0, 0.0)),
            )),
            ModelKind::Drude {
                omega_p,
                gamma,
                background,
            } => {
                let ig = Complex64::new(0.0, *gamma);
                let b = Complex64::new(*background, 0.0);
                let plasma = Complex64::new(2.0 * core::f64::consts::PI * omega_p * omega_p, 0.0);
                let num = Poly::new(vec![b * s, b * ig * s, -plasma * s]);
                let den = Poly::new(vec![Complex64::new(1.0, 0.0), ig, Complex64::new(0.0, 0.0)]);
                Some((num, den))
            }
            ModelKind::Rational { num, den, .. } => Some((num.scale(s), den.clone())),
            ModelKind::Custom(_) => None,
        }
    }

    /// Poles of `W̃`, each listed once.
    pub fn singular_set(&self) -> Result<Vec<Complex64>> {
        match &self.kind {
            ModelKind::Constant(_) => Ok(Vec::new()),
            ModelKind::Drude { .. } => Ok(self.drude_poles()),
            ModelKind::Rational { poles, .. } => Ok(dedup(poles)),
            ModelKind::Custom(_) => Err(Error::UnsupportedModel(
                "the singular set of a black-box model is unknown",
            )),
        }
    }

    /// Zeros of `W̃`, each listed once. A model that vanishes identically
    /// is reported as an error because its zero set is not discrete.
    pub fn zeros(&self, tol: &Tolerances) -> Result<Vec<Complex64>> {
        match &self.kind {
            ModelKind::Constant(c) => {
                if *c == Complex64::new(0.0, 0.0) {
                    Err(Error::Precondition(
                        "a zero constant permittivity vanishes everywhere".into(),
                    ))
                } else {
                    Ok(Vec::new())
                }
            }
            ModelKind::Drude {
                omega_p,
                gamma,
                background,
            } => {
                let disc = Complex64::new(
                    8.0 * core::f64::consts::PI * omega_p * omega_p / background - gamma * gamma,
                    0.0,
                );
                let root = principal_sqrt(disc);
                let ig = Complex64::new(0.0, *gamma);
                Ok(dedup(&[(-ig + root) * 0.5, (-ig - root) * 0.5]))
            }
            ModelKind::Rational { num, .. } => {
                if num.is_zero() {
                    return Err(Error::Precondition(
                        "a zero rational permittivity vanishes everywhere".into(),
                    ));
                }
                Ok(num.roots(tol)?.into_iter().map(|r| r.value).collect())
            }
            ModelKind::Custom(_) => Err(Error::UnsupportedModel(
                "the zero set of a black-box model is unknown",
            )),
        }
    }

    /// True when `W̃(-conj ω) = conj W̃(ω)` holds for the model class.
    pub fn has_reflection_symmetry(&self) -> bool {
        match &self.kind {
            ModelKind::Constant(c) => c.im == 0.0,
            ModelKind::Drude { .. } => true,
            ModelKind::Rational { num, den, .. } => {
                match (reflection_phase(num), reflection_phase(den)) {
                    (Some(a), Some(b)) => (a * b.conj()).im.abs() <= 1e-14,
                    _ => false,
                }
            }
            ModelKind::Custom(_) => false,
        }
    }

    fn drude_poles(&self) -> Vec<Complex64> {
        match &self.kind {
            ModelKind::Drude { gamma, .. } if *gamma > 0.0 => {
                vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, -gamma)]
            }
            _ => vec![Complex64::new(0.0, 0.0)],
        }
    }
}

fn invalid(field: &'static str, reason: &str) -> Error {
    Error::InvalidModel {
        field,
        reason: reason.into(),
    }
}

fn near_any(omega: Complex64, poles: &[Complex64]) -> bool {
    poles
        .iter()
        .any(|p| (omega - p).norm() <= POLE_GUARD * p.norm().max(1.0))
}

fn dedup(points: &[Complex64]) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = Vec::new();
    for &p in points {
        if !out.iter().any(|q| (p - q).norm() <= CANCEL_TOL * p.norm().max(1.0)) {
            out.push(p);
        }
    }
    out
}

fn expand_roots(p: &Poly, tol: &Tolerances) -> Result<Vec<Complex64>> {
    let mut out = Vec::new();
    for r in p.roots(tol)? {
        out.extend(core::iter::repeat_n(r.value, r.multiplicity));
    }
    Ok(out)
}

fn cancel_common_roots(num: Poly, den: Poly, tol: &Tolerances) -> Result<(Poly, Poly)> {
    let mut zn = expand_roots(&num, tol)?;
    let mut zd = expand_roots(&den, tol)?;
    let mut cancelled = false;
    let mut i = 0;
    while i < zd.len() {
        let d = zd[i];
        if let Some(j) = zn
            .iter()
            .position(|z| (z - d).norm() <= CANCEL_TOL * d.norm().max(1.0))
        {
            zn.swap_remove(j);
            zd.swap_remove(i);
            cancelled = true;
        } else {
            i += 1;
        }
    }
    if !cancelled {
        return Ok((num, den));
    }
    Ok((
        Poly::from_roots(num.leading(), &zn),
        Poly::from_roots(den.leading(), &zd),
    ))
}

/// If `p(z) = β q(z)` where the coefficient of `z^j` in `q` is `i^j` times
/// a real number, returns the unit phase of `β`.
fn reflection_phase(p: &Poly) -> Option<Complex64> {
    if p.is_zero() {
        return Some(Complex64::new(1.0, 0.0));
    }
    let n = p.degree();
    let v = p.leading() * i_pow(n).conj();
    let phase = v / v.norm();
    p.coeffs()
        .iter()
        .enumerate()
        .all(|(idx, &c)| {
            let u = c * i_pow(n - idx).conj() * phase.conj();
            u.im.abs() <= 1e-14 * c.norm().max(1.0)
        })
        .then_some(phase)
}

fn i_pow(j: usize) -> Complex64 {
    match j % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn drude_at_i() {
        // 1 - 2π·0.64 / (i² + i·i) = 1 + 2π·0.32
        let m = DielectricModel::drude(0.8, 1.0).unwrap();
        let want = 1.0 + 2.0 * core::f64::consts::PI * 0.32;
        let got = m.wtilde(c(0.0, 1.0)).unwrap();
        assert!((got - c(want, 0.0)).norm() < 1e-14);
        assert!((got.re - 3.01062).abs() < 1e-5);
    }

    #[test]
    fn drude_w_at_half_i() {
        let m = DielectricModel::drude(0.8, 1.0).unwrap();
        let plasma = 2.0 * core::f64::consts::PI * 0.64;
        let want = -0.25 * (1.0 + plasma / 0.75);
        let got = m.w(c(0.0, 0.5)).unwrap();
        assert!((got - c(want, 0.0)).norm() < 1e-14);
        assert!((got.re + 1.59041).abs() < 1e-5);
    }

    #[test]
    fn constant_model() {
        let m = DielectricModel::real_constant(2.0).unwrap();
        assert_eq!(m.wtilde(c(3.0, 0.0)), Some(c(2.0, 0.0)));
        assert_eq!(m.w(c(3.0, 0.0)), Some(c(18.0, 0.0)));
        assert!(m.singular_set().unwrap().is_empty());
    }

    #[test]
    fn drude_poles_are_singular() {
        let m = DielectricModel::drude(0.8, 1.0).unwrap();
        assert_eq!(m.wtilde(c(0.0, 0.0)), None);
        assert_eq!(m.wtilde(c(0.0, -1.0)), None);
        assert_eq!(m.singular_set().unwrap().len(), 2);
        let lossless = DielectricModel::drude(0.8, 0.0).unwrap();
        assert_eq!(lossless.singular_set().unwrap(), vec![c(0.0, 0.0)]);
    }

    #[test]
    fn drude_zeros_closed_form() {
        let m = DielectricModel::drude(0.8, 1.0).unwrap();
        let z = m.zeros(&Tolerances::default()).unwrap();
        let half = 0.5 * (8.0 * core::f64::consts::PI * 0.64 - 1.0f64).sqrt();
        assert_eq!(z.len(), 2);
        assert!((z[0] - c(half, -0.5)).norm() < 1e-14);
        assert!((z[1] - c(-half, -0.5)).norm() < 1e-14);
        for zz in z {
            assert!(m.wtilde(zz).unwrap().norm() < 1e-13);
        }
    }

    #[test]
    fn rational_drude_agrees_with_closed_form() {
        let m = DielectricModel::drude(0.8, 1.0).unwrap().with_scale(1.5).unwrap();
        let (n, d) = m.as_rational().unwrap();
        let r = DielectricModel::rational(n, d).unwrap();
        for &w in &[c(0.3, 0.2), c(-1.0, -0.4), c(2.0, 1.0)] {
            assert!((r.wtilde(w).unwrap() - m.wtilde(w).unwrap()).norm() < 1e-12);
        }
        assert!(r.wtilde(c(0.0, -1.0)).is_none());
    }

    #[test]
    fn rational_cancels_common_factor() {
        // (ω - 1)(ω + 2) / (ω - 1) = ω + 2, no pole at 1
        let num = Poly::from_real(&[1.0, 1.0, -2.0]);
        let den = Poly::from_real(&[1.0, -1.0]);
        let m = DielectricModel::rational(num, den).unwrap();
        assert!(m.singular_set().unwrap().is_empty());
        assert!((m.wtilde(c(1.0, 0.0)).unwrap() - c(3.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn invalid_parameters_name_the_field() {
        match DielectricModel::drude(-1.0, 1.0) {
            Err(Error::InvalidModel { field, .. }) => assert_eq!(field, "omega_p"),
            other => panic!("unexpected {other:?}"),
        }
        match DielectricModel::real_constant(1.0).unwrap().with_scale(0.0) {
            Err(Error::InvalidModel { field, .. }) => assert_eq!(field, "scale"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn custom_model_has_no_singular_set() {
        let m = DielectricModel::custom(|w| Some(w + 1.0));
        assert!(matches!(m.singular_set(), Err(Error::UnsupportedModel(_))));
        assert_eq!(m.wtilde(c(1.0, 0.0)), Some(c(2.0, 0.0)));
    }

    #[test]
    fn reflection_symmetry_detection() {
        assert!(DielectricModel::drude(0.8, 1.0).unwrap().has_reflection_symmetry());
        let plain = DielectricModel::rational(Poly::from_real(&[1.0, 1.0]), Poly::from_real(&[1.0])).unwrap();
        assert!(!plain.has_reflection_symmetry());
    }

    proptest! {
        #[test]
        fn drude_reflection_symmetry(
            wp in 0.1f64..3.0, g in 0.0f64..3.0, re in -5.0f64..5.0, im in -5.0f64..5.0,
        ) {
            let m = DielectricModel::drude(wp, g).unwrap();
            let w = c(re, im);
            if let (Some(a), Some(b)) = (m.w(w), m.w(-w.conj())) {
                prop_assert_eq!(a.conj(), b);
            }
        }

        #[test]
        fn lossless_drude_real_on_real_axis(wp in 0.1f64..3.0, re in 0.01f64..5.0) {
            let m = DielectricModel::drude(wp, 0.0).unwrap();
            prop_assert_eq!(m.wtilde(c(re, 0.0)).unwrap().im, 0.0);
        }
    }
}
