use super::*;
use crate::dielectric::DielectricModel;
use crate::resolvent::Profile;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

const PLASMON: f64 = 1.049_810_782_568_871;

fn drude(gamma: f64) -> InterfaceProblem {
    InterfaceProblem::new(
        DielectricModel::real_constant(2.0).unwrap(),
        DielectricModel::drude(0.8, gamma).unwrap(),
    )
    .unwrap()
}

fn example_rhs() -> RhsField {
    RhsField::new(
        3.0,
        Profile::bump_slope(1.5, 0.5, c(1.0, 0.0)).unwrap(),
        Profile::bump(-1.0, 0.7, c(0.0, 1.0)).unwrap(),
    )
    .unwrap()
}

fn discrepancy(h: f64) -> Discrepancy {
    compare_with_resolvent(&drude(1.0), c(0.0, 0.5), &example_rhs(), &DiscretizedPencil::new(20.0, h).unwrap()).unwrap()
}

#[test]
fn zero_rhs_gives_zero_solution() {
    let disc = DiscretizedPencil::new(5.0, 0.05).unwrap();
    let sol = direct_solve(&drude(1.0), c(0.0, 0.5), &RhsField::zero(3.0), &disc).unwrap();
    assert!(sol.u.iter().all(|u| u.iter().all(|v| *v == ZERO)));
}

#[test]
fn matches_resolvent_at_default_grid() {
    let d = discrepancy(DiscretizedPencil::DEFAULT_STEP);
    assert!(d.l2_relative < 1e-3, "{d:?}");
    // pointwise the steep edges of the bump dominate
    assert!(d.max_relative < 5e-3, "{d:?}");
}

#[test]
fn second_order_convergence() {
    let hs = [1.0 / 25.0, 1.0 / 50.0, 1.0 / 100.0, 1.0 / 200.0];
    let errs: Vec<f64> = hs.iter().map(|&h| discrepancy(h).l2_relative).collect();
    for w in errs.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!(order >= 1.9, "{errs:?}");
    }
}

#[test]
fn coupled_solve_reproduces_u3_bitwise() {
    let p = drude(1.0);
    let disc = DiscretizedPencil::new(8.0, 1.0 / 50.0).unwrap();
    let rhs = example_rhs();
    let a = direct_solve(&p, c(0.0, 0.5), &rhs, &disc).unwrap();
    let b = direct_solve_coupled(&p, c(0.0, 0.5), &rhs, &disc).unwrap();
    for (x, y) in a.u.iter().zip(&b.u) {
        assert_eq!(x[2], y[2]);
        assert!((x[0] - y[0]).norm() <= 1e-12 * (1.0 + x[0].norm()));
        assert!((x[1] - y[1]).norm() <= 1e-12 * (1.0 + x[1].norm()));
    }
}

#[test]
fn spectral_points_are_refused() {
    let disc = DiscretizedPencil::new(5.0, 0.05).unwrap();
    let e = direct_solve(&drude(0.0), c(PLASMON, 0.0), &RhsField::zero(3.0), &disc).unwrap_err();
    assert!(matches!(e, Error::NotResolvent { .. }));
}

#[test]
fn grid_must_put_the_interface_on_a_node() {
    assert!(DiscretizedPencil::new(1.0, 0.3).is_err());
    assert!(DiscretizedPencil::new(1.0, 0.25).is_ok());
    let d = DiscretizedPencil::for_problem(&drude(1.0), c(0.0, 0.5), 3.0).unwrap();
    assert_eq!(d.half_length(), 20.0);
    // slow decay forces a longer domain
    let slow = DiscretizedPencil::for_problem(&drude(1.0), c(2.0, 0.01), 1.5).unwrap();
    assert!(slow.half_length() > 20.0);
}

#[test]
fn shooting_finds_the_lossless_plasmon() {
    let p = drude(0.0);
    let root = shoot_root(&p, c(1.0, 0.0), 3.0).unwrap();
    assert!((root - c(PLASMON, 0.0)).norm() < 1e-6, "{root}");
    let below = shoot_determinant(&p, c(PLASMON - 0.01, 0.0), 3.0).unwrap() / I;
    let above = shoot_determinant(&p, c(PLASMON + 0.01, 0.0), 3.0).unwrap() / I;
    assert!(below.im.abs() < 1e-12 && above.im.abs() < 1e-12);
    assert!(below.re * above.re < 0.0, "{below} {above}");
}

#[test]
fn equal_media_have_no_plasmon() {
    let p = InterfaceProblem::new(
        DielectricModel::real_constant(2.0).unwrap(),
        DielectricModel::real_constant(2.0).unwrap(),
    )
    .unwrap();
    for i in 0..20 {
        let omega = c(-2.0 + 0.2 * i as f64, -1.0 + 0.1 * i as f64);
        let d = shoot_determinant(&p, omega, 3.0).unwrap();
        assert!(d.norm() > 0.5, "{omega} {d}");
    }
}

#[test]
fn rejected_quartic_root_has_no_decaying_pair() {
    let p = drude(0.0);
    let poly = p.dispersion_poly(3.0).unwrap();
    let rejected: Vec<Complex64> = poly
        .roots(&p.tol)
        .unwrap()
        .into_iter()
        .map(|r| r.value)
        .filter(|z| (z.norm() - PLASMON).abs() > 1e-6)
        .collect();
    assert!(!rejected.is_empty());
    for z in rejected {
        assert!(matches!(shoot_determinant(&p, z, 3.0), Err(Error::Precondition(_))), "{z}");
    }
}

#[test]
fn shooting_zeros_match_eigen_omegas_in_a_window() {
    let p = drude(1.0);
    let modes = p.eigen_omegas(3.0).unwrap();
    assert!(!modes.is_empty());
    for m in &modes {
        let root = shoot_root(&p, m.omega + c(0.01, 0.01), 3.0).unwrap();
        assert!((root - m.omega).norm() < 1e-6, "{root} {}", m.omega);
    }
    // every start in the window lands on a listed mode or fails to converge
    for i in 0..5 {
        for j in 0..3 {
            let start = c(-2.0 + i as f64, -1.0 + 0.4 * j as f64);
            if let Ok(root) = shoot_root(&p, start, 3.0) {
                if root.norm() < 3.0 {
                    assert!(modes.iter().any(|m| (m.omega - root).norm() < 1e-6), "{start} -> {root}");
                }
            }
        }
    }
}

#[test]
fn plasmon_is_isolated_in_the_lambda_plane() {
    let p = drude(0.0);
    let disc = DiscretizedPencil::for_problem(&p, c(PLASMON, 0.0), 3.0).unwrap();
    let rep = lambda_isolation_probe(&p, c(PLASMON, 0.0), 3.0, &[0.05, 0.1, 0.2], 16, &disc).unwrap();
    assert!(rep.isolated, "{rep:?}");
}

#[test]
fn essential_and_resolvent_points_show_no_isolated_dip() {
    let p = drude(0.0);
    let disc = DiscretizedPencil::new(20.0, 1.0 / 100.0).unwrap();
    let ess = lambda_isolation_probe(&p, c(3.0, 0.0), 3.0, &[0.05, 0.1, 0.2], 12, &disc).unwrap();
    assert!(!ess.isolated, "{}", ess.separation);
    let res = lambda_isolation_probe(&drude(1.0), c(0.0, 0.5), 3.0, &[0.05, 0.1, 0.2], 12, &disc).unwrap();
    assert!(res.separation < 2.0, "{}", res.separation);
}



