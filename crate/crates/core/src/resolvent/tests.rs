use super::*;
use crate::dielectric::DielectricModel;
use alloc::vec;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn drude() -> InterfaceProblem {
    InterfaceProblem::new(
        DielectricModel::real_constant(2.0).unwrap(),
        DielectricModel::drude(0.8, 1.0).unwrap(),
    )
    .unwrap()
}

fn equal_media() -> InterfaceProblem {
    InterfaceProblem::new(
        DielectricModel::real_constant(2.0).unwrap(),
        DielectricModel::real_constant(2.0).unwrap(),
    )
    .unwrap()
}

fn slope_rhs(k: f64, center: f64, amp: Complex64) -> RhsField {
    RhsField::new(k, Profile::bump_slope(center, 0.5, amp).unwrap(), Profile::zero()).unwrap()
}

/// Dirichlet tridiagonal solve of `−u″ + m u = f` on a uniform grid.
fn thomas(m: Complex64, h: f64, f: &[Complex64]) -> Vec<Complex64> {
    let n = f.len();
    let off = Complex64::new(-1.0 / (h * h), 0.0);
    let diag = Complex64::new(2.0 / (h * h), 0.0) + m;
    let mut cp = vec![ZERO; n];
    let mut dp = vec![ZERO; n];
    cp[0] = off / diag;
    dp[0] = f[0] / diag;
    for i in 1..n {
        let den = diag - off * cp[i - 1];
        cp[i] = off / den;
        dp[i] = (f[i] - off * dp[i - 1]) / den;
    }
    let mut u = vec![ZERO; n];
    u[n - 1] = dp[n - 1];
    for i in (0..n - 1).rev() {
        u[i] = dp[i] - cp[i] * u[i + 1];
    }
    u
}

#[test]
fn zero_rhs_gives_zero_field() {
    let sol = solve(&drude(), c(0.0, 0.5), &RhsField::zero(3.0), ResolventOptions::default()).unwrap();
    assert_eq!(sol.c2, ZERO);
    assert_eq!(sol.c3, ZERO);
    assert!(sol.u.iter().all(|u| u.iter().all(|v| *v == ZERO)));
    assert_eq!(sol.norm_ratio, 0.0);
}

#[test]
fn k_zero_u3_matches_dense_fd() {
    // W = −18 on both sides, so −u₃″ + 18u₃ = r₃
    let rhs = RhsField::new(0.0, Profile::zero(), Profile::bump(0.3, 0.4, c(1.0, 0.0)).unwrap()).unwrap();
    let l = 6.0;
    let mut errs = Vec::new();
    for &h in &[1.0 / 100.0, 1.0 / 200.0] {
        let sol = solve(
            &equal_media(),
            c(0.0, 3.0),
            &rhs,
            ResolventOptions { h, half_length: Some(l) },
        )
        .unwrap();
        let n = (2.0 * l / h).round() as usize;
        let xs: Vec<f64> = (1..n).map(|i| -l + h * i as f64).collect();
        let f: Vec<Complex64> = xs.iter().map(|&x| rhs.r3().eval(x)).collect();
        let fd = thomas(c(18.0, 0.0), h, &f);
        let mut err: f64 = 0.0;
        for (x, v) in xs.iter().zip(&fd) {
            let i = sol.index_of(*x, Side::Plus).unwrap();
            err = err.max((sol.u[i][2] - v).norm());
            assert_eq!(sol.u[i][0], ZERO);
            assert_eq!(sol.u[i][1], ZERO);
        }
        errs.push(err);
    }
    assert!(errs[1] < 1e-5, "{errs:?}");
    let ratio = errs[0] / errs[1];
    assert!((3.5..4.5).contains(&ratio), "{errs:?}");
}

#[test]
fn k_zero_decay_rate() {
    let rhs = RhsField::new(0.0, Profile::zero(), Profile::bump(0.0, 0.2, c(1.0, 0.0)).unwrap()).unwrap();
    let sol = solve(&equal_media(), c(0.0, 3.0), &rhs, ResolventOptions::default()).unwrap();
    let a = sol.u[sol.index_of(2.0, Side::Plus).unwrap()][2];
    let b = sol.u[sol.index_of(3.0, Side::Plus).unwrap()][2];
    assert!(((a / b).ln().re - 18f64.sqrt()).abs() < 1e-9);
}

#[test]
fn drude_example_satisfies_equations_and_jumps() {
    let p = drude();
    let rhs = slope_rhs(3.0, 1.5, c(1.0, 0.0));
    let sol = solve(&p, c(0.0, 0.5), &rhs, ResolventOptions::default()).unwrap();
    let rep = verify(&sol, &rhs, &p).unwrap();
    let rn = rep.r_norm;
    assert!(rn > 0.0);
    assert!(rep.max_ode() <= 1e-6 * rn, "{rep:?}");
    assert!(rep.max_jump() <= 1e-8 * rn, "{rep:?}");
    assert!(rep.divergence <= 1e-6 * rn, "{rep:?}");
    assert!(rep.flux_identity.unwrap() <= 1e-10 * rn, "{rep:?}");
    assert!(rep.norm_ratio.is_finite() && rep.norm_ratio > 0.0);
    assert_eq!(sol.residual_interface, rep.max_jump());
}

#[test]
fn spectral_points_are_rejected() {
    let p = drude();
    let rhs = slope_rhs(3.0, 1.5, c(1.0, 0.0));
    // W₊ = 2ω² = 18 lies in [9, ∞)
    let e = solve(&p, c(3.0, 0.0), &rhs, ResolventOptions::default()).unwrap_err();
    assert!(matches!(e, Error::NotResolvent { .. }), "{e:?}");
}

#[test]
fn broken_constant_is_detected() {
    let p = drude();
    let rhs = slope_rhs(3.0, 1.0, c(0.0, 1.0));
    let kernel = ResolventKernel::new(&p, c(0.0, 0.5), &rhs, ResolventOptions::default()).unwrap();
    let (c2, c3) = kernel.constants();
    let good = kernel.assemble(c2, c3);
    let bad = kernel.assemble(c2 + 0.1 * c2.norm().max(1.0), c3);
    let rep_bad = verify(&bad, &rhs, &p).unwrap();
    assert!(good.residual_interface < 1e-8 * rhs.l2_norm());
    assert!(rep_bad.jumps[0] > 1e-3, "{rep_bad:?}");
}

#[test]
fn norm_ratio_stays_bounded_over_random_bumps() {
    let p = drude();
    let mut s = 12345u64;
    let mut next = || {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (s >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut ratios = Vec::new();
    for _ in 0..20 {
        let center = -3.0 + 6.0 * next();
        let width = 0.3 + 0.7 * next();
        let amp = c(next() - 0.5, next() - 0.5);
        let rhs = RhsField::new(
            3.0,
            Profile::bump_slope(center, width, amp).unwrap(),
            Profile::bump(center, width, amp).unwrap(),
        )
        .unwrap();
        let sol = solve(&p, c(0.0, 0.5), &rhs, ResolventOptions { h: 1.0 / 64.0, half_length: None }).unwrap();
        assert!(sol.residual_interface <= 1e-8 * rhs.l2_norm());
        ratios.push(sol.norm_ratio);
    }
    let hi = ratios.iter().cloned().fold(0.0, f64::max);
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(hi / lo < 10.0, "{ratios:?}");
}

#[test]
fn r1_is_divergence_compatible() {
    let rhs = slope_rhs(2.0, 0.2, c(1.0, -2.0));
    let grid: Vec<f64> = (0..=400).map(|i| -1.0 + i as f64 / 200.0).collect();
    assert!(rhs.divergence_defect(&grid) <= 1e-10);
    assert_eq!(rhs.r1(-0.5), ZERO);
    assert!(rhs.r1(0.2).norm() > 0.1);
}

#[test]
fn nonzero_mean_is_rejected_for_nonzero_k() {
    let r2 = Profile::bump(0.0, 1.0, c(1.0, 0.0)).unwrap();
    assert!(RhsField::new(1.0, r2.clone(), Profile::zero()).is_err());
    assert!(RhsField::new(0.0, r2, Profile::zero()).is_ok());
}

#[test]
fn sampled_profile_reproduces_quadratics() {
    let xs: Vec<f64> = (0..=20).map(|i| i as f64 * 0.1).collect();
    let ys: Vec<Complex64> = xs.iter().map(|x| c(x * x, -x)).collect();
    let p = Profile::sampled(xs, ys).unwrap();
    for &x in &[0.33, 0.77, 1.41] {
        assert!((p.eval(x) - c(x * x, -x)).norm() < 1e-12);
    }
    assert_eq!(p.eval(2.5), ZERO);
    assert!(Profile::sampled(vec![0.0, 0.0], vec![ZERO, ZERO]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn solve_is_linear(ar in -2.0f64..2.0, ai in -2.0f64..2.0, br in -2.0f64..2.0, bi in -2.0f64..2.0,
                       c1 in -2.0f64..2.0, c2 in -2.0f64..2.0) {
        let p = drude();
        let opts = ResolventOptions { h: 1.0 / 64.0, half_length: Some(14.0) };
        let (alpha, beta) = (c(ar, ai), c(br, bi));
        let r = slope_rhs(3.0, c1, c(1.0, 0.0));
        let s = RhsField::new(3.0, Profile::zero(), Profile::bump(c2, 0.6, c(0.0, 1.0)).unwrap()).unwrap();
        let comb = r.combine(alpha, &s, beta).unwrap();
        let ur = solve(&p, c(0.0, 0.5), &r, opts).unwrap();
        let us = solve(&p, c(0.0, 0.5), &s, opts).unwrap();
        let uc = solve(&p, c(0.0, 0.5), &comb, opts).unwrap();
        let mut scale: f64 = 0.0;
        let mut diff: f64 = 0.0;
        for i in 0..uc.u.len() {
            for j in 0..3 {
                let want = alpha * ur.u[i][j] + beta * us.u[i][j];
                scale = scale.max(want.norm());
                diff = diff.max((uc.u[i][j] - want).norm());
            }
        }
        prop_assert!(diff <= 1e-9 * scale.max(1e-300), "{} {}", diff, scale);
    }
}

