//! The interface problem: two half-space models and shared tolerances.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::dielectric::{DielectricModel, Side};
use crate::error::{Error, Result};
use crate::numerics::Tolerances;

/// A point where `W₊` or `W₋` vanishes inside the common domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Omega0Point {
    pub omega: Complex64,
    /// `W₊(ω) = 0`.
    pub plus: bool,
    /// `W₋(ω) = 0`.
    pub minus: bool,
}

/// `W̃±` and `W±` evaluated at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SideValues {
    pub omega: Complex64,
    pub wt_plus: Complex64,
    pub wt_minus: Complex64,
    pub w_plus: Complex64,
    pub w_minus: Complex64,
}

impl SideValues {
    /// Local magnitude for relative zero tests.
    pub fn scale(&self) -> f64 {
        self.wt_plus.norm().max(self.wt_minus.norm()).max(1.0)
    }

    pub fn wt(&self, side: Side) -> Complex64 {
        match side {
            Side::Plus => self.wt_plus,
            Side::Minus => self.wt_minus,
        }
    }

    pub fn w(&self, side: Side) -> Complex64 {
        match side {
            Side::Plus => self.w_plus,
            Side::Minus => self.w_minus,
        }
    }
}

/// Two dielectric half-spaces glued at `x₁ = 0`.
#[derive(Debug, Clone)]
pub struct InterfaceProblem {
    pub plus: DielectricModel,
    pub minus: DielectricModel,
    pub tol: Tolerances,
    omega0: Option<Vec<Omega0Point>>,
}

impl InterfaceProblem {
    pub fn new(plus: DielectricModel, minus: DielectricModel) -> Result<Self> {
        Self::with_tolerances(plus, minus, Tolerances::default())
    }

    pub fn with_tolerances(
        plus: DielectricModel,
        minus: DielectricModel,
        tol: Tolerances,
    ) -> Result<Self> {
        if !tol.is_valid() {
            return Err(Error::Precondition(
                "tolerances must be finite and non-negative".into(),
            ));
        }
        let mut p = Self {
            plus,
            minus,
            tol,
            omega0: None,
        };
        if p.plus.is_rational() && p.minus.is_rational() {
            p.omega0 = Some(p.compute_omega0()?);
        }
        Ok(p)
    }

    pub fn model(&self, side: Side) -> &DielectricModel {
        match side {
            Side::Plus => &self.plus,
            Side::Minus => &self.minus,
        }
    }

    /// `W̃±(ω)` and `W±(ω)`; fails at a pole of either side.
    pub fn values(&self, omega: Complex64) -> Result<SideValues> {
        let wt_plus = self
            .plus
            .wtilde(omega)
            .ok_or(Error::Singular { omega, side: Side::Plus })?;
        let wt_minus = self
            .minus
            .wtilde(omega)
            .ok_or(Error::Singular { omega, side: Side::Minus })?;
        let w2 = omega * omega;
        Ok(SideValues {
            omega,
            wt_plus,
            wt_minus,
            w_plus: w2 * wt_plus,
            w_minus: w2 * wt_minus,
        })
    }

    /// Union of the poles of both sides, tagged with the side.
    pub fn singular_set(&self) -> Result<Vec<(Complex64, Side)>> {
        let mut out = Vec::new();
        for side in [Side::Plus, Side::Minus] {
            for p in self.model(side).singular_set()? {
                out.push((p, side));
            }
        }
        Ok(out)
    }

    /// The exceptional set `Ω₀`, sorted by real then imaginary part.
    pub fn omega0_set(&self) -> Result<&[Omega0Point]> {
        self.omega0.as_deref().ok_or(Error::UnsupportedModel(
            "the exceptional set needs rational models on both sides",
        ))
    }

    /// The cached `Ω₀` point within `ray_imag_tol` of `omega`, if any.
    pub fn near_omega0(&self, omega: Complex64) -> Option<Omega0Point> {
        self.omega0.as_ref()?.iter().copied().find(|p| {
            (p.omega - omega).norm() <= self.tol.ray_imag_tol
        })
    }

    fn compute_omega0(&self) -> Result<Vec<Omega0Point>> {
        let mut cands: Vec<Omega0Point> = Vec::new();
        let origin = Complex64::new(0.0, 0.0);
        cands.push(Omega0Point {
            omega: origin,
            plus: true,
            minus: true,
        });
        for side in [Side::Plus, Side::Minus] {
            let zeros = match self.model(side).zeros(&self.tol) {
                Ok(z) => z,
                // an identically vanishing side: every point is exceptional,
                // which the pointwise tests handle
                Err(Error::Precondition(_)) => Vec::new(),
                Err(e) => return Err(e),
            };
            for z in zeros {
                cands.push(Omega0Point {
                    omega: z,
                    plus: side == Side::Plus,
                    minus: side == Side::Minus,
                });
            }
        }
        let mut out: Vec<Omega0Point> = Vec::new();
        for c in cands {
            if self.values(c.omega).is_err() {
                continue;
            }
            let merge_radius = self.tol.equality_tol * c.omega.norm().max(1.0);
            if let Some(existing) = out
                .iter_mut()
                .find(|p| (p.omega - c.omega).norm() <= merge_radius)
            {
                existing.plus |= c.plus;
                existing.minus |= c.minus;
            } else {
                out.push(c);
            }
        }
        out.sort_by(|a, b| {
            a.omega
                .re
                .total_cmp(&b.omega.re)
                .then(a.omega.im.total_cmp(&b.omega.im))
        });
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn drude_problem() -> InterfaceProblem {
        InterfaceProblem::new(
            DielectricModel::real_constant(2.0).unwrap(),
            DielectricModel::drude(0.8, 1.0).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn omega0_for_drude_against_constant() {
        let p = drude_problem();
        let set = p.omega0_set().unwrap();
        // zero is a pole of the Drude side, so only the two metal zeros remain
        assert_eq!(set.len(), 2);
        let half = 0.5 * (8.0 * core::f64::consts::PI * 0.64 - 1.0f64).sqrt();
        assert!((set[0].omega - c(-half, -0.5)).norm() < 1e-10);
        assert!((set[1].omega - c(half, -0.5)).norm() < 1e-10);
        assert!(set.iter().all(|q| q.minus && !q.plus));
        let s = p.singular_set().unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.iter().any(|(z, _)| *z == c(0.0, -1.0)));
    }

    #[test]
    fn omega0_for_constants_is_origin() {
        let p = InterfaceProblem::new(
            DielectricModel::real_constant(2.0).unwrap(),
            DielectricModel::real_constant(3.0).unwrap(),
        )
        .unwrap();
        let set = p.omega0_set().unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!(set[0].omega, c(0.0, 0.0));
        assert!(set[0].plus && set[0].minus);
    }

    #[test]
    fn identical_drude_sides_merge_zeros() {
        let d = DielectricModel::drude(0.8, 1.0).unwrap();
        let p = InterfaceProblem::new(d.clone(), d).unwrap();
        let set = p.omega0_set().unwrap();
        assert_eq!(set.len(), 2);
        assert!(set.iter().all(|q| q.plus && q.minus));
    }

    #[test]
    fn values_report_the_singular_side() {
        let p = drude_problem();
        match p.values(c(0.0, -1.0)) {
            Err(Error::Singular { side, .. }) => assert_eq!(side, Side::Minus),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn black_box_has_no_cached_omega0() {
        let p = InterfaceProblem::new(
            DielectricModel::custom(|_| Some(c(2.0, 0.0))),
            DielectricModel::real_constant(1.0).unwrap(),
        )
        .unwrap();
        assert!(matches!(p.omega0_set(), Err(Error::UnsupportedModel(_))));
    }

    #[test]
    fn invalid_tolerances_are_rejected() {
        let tol = Tolerances {
            equality_tol: -1.0,
            ..Tolerances::default()
        };
        let r = InterfaceProblem::with_tolerances(
            DielectricModel::real_constant(1.0).unwrap(),
            DielectricModel::real_constant(1.0).unwrap(),
            tol,
        );
        assert!(matches!(r, Err(Error::Precondition(_))));
    }
}
