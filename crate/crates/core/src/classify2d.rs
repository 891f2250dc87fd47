//! Spectral classification of the full 2D interface problem.

use num_complex::Complex64;

use crate::classify1d::{zero_flags, Branch, SpectrumClass};
use crate::dielectric::{ModelKind, Side};
use crate::error::Result;
use crate::numerics::{in_open_ray, in_ray, principal_sqrt, Tolerances};
use crate::problem::{InterfaceProblem, SideValues};

/// Outcome of the 2D eigenvalue test with its witness `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct N2 {
    pub member: bool,
    /// `W₊W₋/(W₊+W₋)` when it is real to tolerance.
    pub a: Option<f64>,
}

impl InterfaceProblem {
    /// `ω ∈ M±`: `W±(ω) ∈ (0, ∞)`.
    pub fn in_m2(&self, side: Side, omega: Complex64) -> Result<bool> {
        let v = self.regular_values(omega)?;
        Ok(m2_at(&v, side, &self.tol))
    }

    /// `ω ∈ N`: some `a ≥ 0` with `a(W₊+W₋) = W₊W₋` and `W± ∉ [a, ∞)`.
    pub fn in_n2(&self, omega: Complex64) -> Result<N2> {
        let v = self.regular_values(omega)?;
        Ok(n2_at(&v, &self.tol))
    }

    /// Full 2D classification; total on the complex plane.
    pub fn classify2(&self, omega: Complex64) -> SpectrumClass {
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
            let z = zero_flags(&ex, &self.tol);
            return SpectrumClass {
                in_domain: true,
                in_omega0: true,
                resolvent: false,
                point_finite: false,
                point_infinite: z.wt_plus || z.wt_minus || z.sum,
                discrete: false,
                weyl: true,
                essential: [true; 5],
                branch: Branch::Exceptional { k_zero: false, near },
            };
        }
        let m_plus = m2_at(&v, Side::Plus, &self.tol);
        let m_minus = m2_at(&v, Side::Minus, &self.tol);
        let n = n2_at(&v, &self.tol).member;
        let spec = m_plus || m_minus || n;
        SpectrumClass {
            in_domain: true,
            in_omega0: false,
            resolvent: !spec,
            point_finite: false,
            point_infinite: false,
            discrete: false,
            weyl: spec,
            essential: [spec; 5],
            branch: Branch::Regular { m_plus, m_minus, n },
        }
    }

    /// Zeros `ω*±` of `W̃₊ + W̃₋` for a real constant against a Drude metal,
    /// in either order of sides.
    pub fn star_frequencies(&self) -> Option<[Complex64; 2]> {
        let (constant, drude) = match (self.plus.kind(), self.minus.kind()) {
            (ModelKind::Constant(_), ModelKind::Drude { .. }) => (&self.plus, &self.minus),
            (ModelKind::Drude { .. }, ModelKind::Constant(_)) => (&self.minus, &self.plus),
            _ => return None,
        };
        let c = match constant.kind() {
            ModelKind::Constant(c) if c.im == 0.0 => c.re * constant.scale(),
            _ => return None,
        };
        let (wp, g, b) = match drude.kind() {
            ModelKind::Drude {
                omega_p,
                gamma,
                background,
            } => (*omega_p, *gamma, *background),
            _ => return None,
        };
        let s = drude.scale();
        let denom = c + s * b;
        if denom == 0.0 {
            return None;
        }
        // ω² + iγω = 2π ω_p² s / (c + s b)
        let rhs = 2.0 * core::f64::consts::PI * wp * wp * s / denom;
        let root = principal_sqrt(Complex64::new(4.0 * rhs - g * g, 0.0));
        let ig = Complex64::new(0.0, g);
        Some([(-ig + root) * 0.5, (-ig - root) * 0.5])
    }
}

pub(crate) fn m2_at(v: &SideValues, side: Side, tol: &Tolerances) -> bool {
    in_open_ray(v.w(side), tol)
}

pub(crate) fn n2_at(v: &SideValues, tol: &Tolerances) -> N2 {
    let sum = v.w_plus + v.w_minus;
    if sum.norm() <= tol.equality_tol * (v.w_plus.norm() + v.w_minus.norm()) {
        return N2 {
            member: false,
            a: None,
        };
    }
    let a = v.w_plus * v.w_minus / sum;
    if a.im.abs() > tol.ray_imag_tol {
        return N2 {
            member: false,
            a: None,
        };
    }
    let member = a.re >= -tol.ray_real_tol
        && !in_ray(v.w_plus, a.re, tol)
        && !in_ray(v.w_minus, a.re, tol);
    N2 {
        member,
        a: Some(a.re),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dielectric::DielectricModel;
    use crate::error::Error;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn problem(wp: f64, g: f64) -> InterfaceProblem {
        InterfaceProblem::new(
            DielectricModel::real_constant(2.0).unwrap(),
            DielectricModel::drude(wp, g).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn open_ray_for_constant_side() {
        let p = problem(0.8, 1.0);
        assert!(p.in_m2(Side::Plus, c(3.0, 0.0)).unwrap());
        assert!(!p.in_m2(Side::Plus, c(0.0, 3.0)).unwrap());
        assert!(p.in_m2(Side::Minus, c(0.0, -0.9)).unwrap());
    }

    #[test]
    fn imaginary_axis_segment_point() {
        let p = problem(0.6, 2.0);
        let v = p.values(c(0.0, -1.0)).unwrap();
        let plasma = 2.0 * core::f64::consts::PI * 0.36;
        assert!((v.w_plus - c(-2.0, 0.0)).norm() < 1e-14);
        assert!((v.w_minus - c(plasma - 1.0, 0.0)).norm() < 1e-14);
        let n = p.in_n2(c(0.0, -1.0)).unwrap();
        let want = 2.0 * (plasma - 1.0) / (2.0 - (plasma - 1.0));
        assert!(n.member);
        assert!((n.a.unwrap() - want).abs() < 1e-12);
        assert!((want - 3.41973).abs() < 1e-4);
        let cl = p.classify2(c(0.0, -1.0));
        assert!(cl.weyl && !cl.point_finite && !cl.resolvent);
        assert_eq!(cl.branch, Branch::Regular { m_plus: false, m_minus: true, n: true });
    }

    #[test]
    fn identical_constants_have_no_eigenvalues() {
        let p = InterfaceProblem::new(
            DielectricModel::real_constant(2.0).unwrap(),
            DielectricModel::real_constant(2.0).unwrap(),
        )
        .unwrap();
        for &w in &[c(1.0, 0.0), c(0.3, -0.7), c(0.0, 2.0)] {
            assert!(!p.in_n2(w).unwrap().member);
        }
        let origin = p.classify2(c(0.0, 0.0));
        assert!(origin.in_omega0 && origin.weyl && !origin.point_infinite && !origin.resolvent);
    }

    #[test]
    fn star_points_are_excluded_limit_points() {
        let p = problem(0.6, 2.0);
        let stars = p.star_frequencies().unwrap();
        assert!((stars[0] - c(0.0, -0.50399)).norm() < 1e-5);
        assert!((stars[1] - c(0.0, -1.49600)).norm() < 1e-5);
        for s in stars {
            let v = p.values(s).unwrap();
            assert!((v.wt_plus + v.wt_minus).norm() < 1e-12);
            assert!(!p.in_n2(s).unwrap().member);
        }
        // points of the segment strictly between the stars are in N
        assert!(p.in_n2(c(0.0, -0.9)).unwrap().member);
        assert!(!p.in_n2(c(0.0, -0.3)).unwrap().member);
    }

    #[test]
    fn exceptional_point_rejected_by_membership() {
        let p = problem(0.8, 1.0);
        let z = p.omega0_set().unwrap()[0].omega;
        assert!(matches!(p.in_n2(z), Err(Error::InExceptionalSet { .. })));
        let cl = p.classify2(z);
        assert!(cl.in_omega0 && cl.point_infinite && cl.essential == [true; 5]);
    }

    fn arb_problem() -> impl Strategy<Value = InterfaceProblem> {
        (0.5f64..4.0, 0.1f64..2.0, 0.0f64..2.0).prop_map(|(eps, wp, g)| {
            InterfaceProblem::new(
                DielectricModel::real_constant(eps).unwrap(),
                DielectricModel::drude(wp, g).unwrap(),
            )
            .unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn one_d_rays_embed(p in arb_problem(), re in -6.0f64..6.0, im in -4.0f64..2.0, k in 0.05f64..5.0) {
            let w = c(re, im);
            if let Ok(true) = p.in_m(Side::Minus, w, k) {
                prop_assert!(p.in_m2(Side::Minus, w).unwrap());
            }
            if let Ok(true) = p.in_m(Side::Plus, w, k) {
                prop_assert!(p.in_m2(Side::Plus, w).unwrap());
            }
        }

        #[test]
        fn witness_is_positive(p in arb_problem(), re in -3.0f64..3.0, im in -3.0f64..1.0) {
            if let Ok(n) = p.in_n2(c(re, 0.0 * im)) {
                if n.member { prop_assert!(n.a.unwrap() > 0.0); }
            }
            if let Ok(n) = p.in_n2(c(0.0, im)) {
                if n.member { prop_assert!(n.a.unwrap() > 0.0); }
            }
        }

        #[test]
        fn invariants_and_symmetry(p in arb_problem(), re in -6.0f64..6.0, im in -4.0f64..2.0) {
            let w = c(re, im);
            let a = p.classify2(w);
            prop_assert_eq!(a.check_invariants(), Ok(()));
            if p.near_omega0(w).is_none() && p.near_omega0(-w.conj()).is_none() {
                prop_assert_eq!(a, p.classify2(-w.conj()));
            }
        }
    }
}
