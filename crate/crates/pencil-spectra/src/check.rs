//! Oracle cross-check suites behind the `check` command.

use std::time::{Duration, Instant};

use anyhow::{anyhow, bail, Result};
use num_complex::Complex64;
use pencil_spectra_core::bump::Bump;
use pencil_spectra_core::fd_oracle::{
    compare_with_resolvent, lambda_isolation_probe, shoot_root, DiscretizedPencil,
};
use pencil_spectra_core::modes::weyl::{loglog_slope, Variant1d};
use pencil_spectra_core::resolvent::{self, Profile, ResolventOptions, RhsField};
use pencil_spectra_core::{InterfaceProblem, Side};

use crate::eigen::mode_table;

/// Largest tolerance the suites accept.
pub const MAX_TOLERANCE: f64 = 1e-6;
pub const SHOOT_AGREEMENT: f64 = 1e-6;
pub const MODE_RESIDUAL: f64 = 1e-10;
pub const FD_AGREEMENT: f64 = 1e-3;
pub const MIN_ORDER: f64 = 1.9;
pub const LINEARITY: f64 = 1e-9;
pub const SLOPE_RANGE: [f64; 2] = [-1.15, -0.85];
pub const RING_RADII: [f64; 3] = [0.05, 0.1, 0.2];

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: &'static str,
    pub passed: bool,
    /// Measurements on success; the violated invariant on failure.
    pub detail: String,
    pub elapsed: Duration,
}

type Suite = fn(&InterfaceProblem, f64) -> Result<String>;

pub const SUITES: [(&str, Suite); 5] = [
    ("tolerances", tolerances),
    ("shoot-vs-quartic", shoot_vs_quartic),
    ("lambda-isolation", lambda_isolation),
    ("resolvent-convergence", resolvent_convergence),
    ("weyl-slopes", weyl_slopes),
];

/// Runs every suite at wavenumber `k`; a suite error becomes a failure.
pub fn run_checks(problem: &InterfaceProblem, k: f64) -> Vec<SuiteReport> {
    SUITES
        .iter()
        .map(|&(name, suite)| {
            let start = Instant::now();
            let outcome = suite(problem, k);
            let elapsed = start.elapsed();
            match outcome {
                Ok(detail) => SuiteReport {
                    name,
                    passed: true,
                    detail,
                    elapsed,
                },
                Err(e) => SuiteReport {
                    name,
                    passed: false,
                    detail: format!("{e:#}"),
                    elapsed,
                },
            }
        })
        .collect()
}

fn tolerances(problem: &InterfaceProblem, _k: f64) -> Result<String> {
    let t = problem.tol;
    for (key, v) in [
        ("ray_imag_tol", t.ray_imag_tol),
        ("ray_real_tol", t.ray_real_tol),
        ("root_residual_tol", t.root_residual_tol),
        ("equality_tol", t.equality_tol),
    ] {
        if !(0.0..=MAX_TOLERANCE).contains(&v) {
            bail!("{key} = {v} violates 0 <= {key} <= {MAX_TOLERANCE:e}");
        }
    }
    Ok("all tolerances within [0, 1e-6]".into())
}

fn shoot_vs_quartic(problem: &InterfaceProblem, k: f64) -> Result<String> {
    let rows = mode_table(problem, k)?;
    if rows.is_empty() {
        return Ok(format!("no modes at k = {k}"));
    }
    let mut worst: f64 = 0.0;
    for r in &rows {
        let shot = shoot_root(problem, r.omega, k)?;
        let d = (shot - r.omega).norm();
        if d > SHOOT_AGREEMENT {
            bail!("|shoot - quartic| = {d:e} > {SHOOT_AGREEMENT:e} at omega = {}", r.omega);
        }
        if r.ode_residual > MODE_RESIDUAL || r.max_jump > MODE_RESIDUAL {
            bail!(
                "mode residual {:e} / jump {:e} > {MODE_RESIDUAL:e} at omega = {}",
                r.ode_residual,
                r.max_jump,
                r.omega
            );
        }
        worst = worst.max(d);
    }
    Ok(format!("{} modes, max |shoot - quartic| = {worst:.2e}", rows.len()))
}

fn lambda_isolation(problem: &InterfaceProblem, k: f64) -> Result<String> {
    let rows = mode_table(problem, k)?;
    let Some(mode) = rows.iter().find(|r| r.omega.re >= 0.0).or(rows.first()) else {
        return Ok(format!("no modes at k = {k}"));
    };
    let disc = DiscretizedPencil::for_problem(problem, mode.omega, k)?;
    let report = lambda_isolation_probe(problem, mode.omega, k, &RING_RADII, 16, &disc)?;
    if !report.isolated {
        bail!(
            "separation {:.3e} < 100 at the mode omega = {}",
            report.separation,
            mode.omega
        );
    }
    Ok(format!("separation {:.3e} at omega = {}", report.separation, mode.omega))
}

/// First candidate in the resolvent set at `k`.
pub fn resolvent_point(problem: &InterfaceProblem, k: f64) -> Option<Complex64> {
    [
        Complex64::new(0.0, 0.5),
        Complex64::new(0.0, 1.0),
        Complex64::new(0.3, 0.7),
        Complex64::new(0.0, 2.0),
        Complex64::new(1.0, 1.5),
    ]
    .into_iter()
    .find(|&w| problem.classify(w, k).resolvent)
}

/// The standard test data: `r₂` the zero-mean derivative of a bump on
/// `[1, 2]`, `r₃` a bump on `[−1.7, −0.3]`.
pub fn standard_rhs(k: f64) -> Result<RhsField> {
    let r2 = Profile::bump_slope(1.5, 0.5, Complex64::new(1.0, 0.0))?;
    let r3 = Profile::bump(-1.0, 0.7, Complex64::new(0.0, 1.0))?;
    Ok(RhsField::new(k, r2, r3)?)
}

fn resolvent_convergence(problem: &InterfaceProblem, k: f64) -> Result<String> {
    let omega = resolvent_point(problem, k)
        .ok_or_else(|| anyhow!("no resolvent point among the probe frequencies"))?;
    let rhs = standard_rhs(k)?;
    let steps = [1.0 / 50.0, 1.0 / 100.0, 1.0 / 200.0];
    let mut errs = Vec::new();
    for h in steps {
        let disc = DiscretizedPencil::for_problem_with_step(problem, omega, k, h)?;
        errs.push(compare_with_resolvent(problem, omega, &rhs, &disc)?.l2_relative);
    }
    let orders: Vec<f64> = errs.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    let fine = errs[2];
    if fine > FD_AGREEMENT {
        bail!("relative discrepancy {fine:.3e} > {FD_AGREEMENT:e} at h = 1/200");
    }
    if let Some(o) = orders.iter().find(|&&o| o < MIN_ORDER) {
        bail!("convergence order {o:.3} < {MIN_ORDER}");
    }

    let other = RhsField::new(
        k,
        Profile::bump_slope(-1.2, 0.4, Complex64::new(0.5, -1.0))?,
        Profile::bump(0.8, 0.3, Complex64::new(2.0, 0.0))?,
    )?;
    let (a, b) = (Complex64::new(0.7, -0.2), Complex64::new(-1.3, 0.4));
    let opts = ResolventOptions {
        half_length: Some(12.0),
        ..ResolventOptions::default()
    };
    let su = resolvent::solve(problem, omega, &rhs, opts)?;
    let sv = resolvent::solve(problem, omega, &other, opts)?;
    let sc = resolvent::solve(problem, omega, &rhs.combine(a, &other, b)?, opts)?;
    let mut num: f64 = 0.0;
    let mut den: f64 = 0.0;
    for ((u, v), w) in su.u.iter().zip(&sv.u).zip(&sc.u) {
        for c in 0..3 {
            num = num.max((a * u[c] + b * v[c] - w[c]).norm());
            den = den.max(w[c].norm());
        }
    }
    let lin = num / den;
    if lin > LINEARITY {
        bail!("linearity defect {lin:.3e} > {LINEARITY:e}");
    }
    Ok(format!(
        "omega = {omega}, l2 discrepancy {:.2e} {:.2e} {:.2e}, orders {:.3} {:.3}, linearity {lin:.1e}",
        errs[0], errs[1], errs[2], orders[0], orders[1]
    ))
}

/// A real frequency in `M_side^(k)` found by scanning `(0, 20]`.
pub fn essential_point(problem: &InterfaceProblem, k: f64) -> Option<(Complex64, Side)> {
    (1..=400).map(|i| 0.05 * i as f64).find_map(|x| {
        let w = Complex64::new(x, 0.0);
        [Side::Plus, Side::Minus]
            .into_iter()
            .find(|&s| problem.in_m(s, w, k).unwrap_or(false))
            .map(|s| (w, s))
    })
}

fn weyl_slopes(problem: &InterfaceProblem, k: f64) -> Result<String> {
    let Some((omega, side)) = essential_point(problem, k) else {
        return Ok(format!("no real point of M+ or M- at k = {k}"));
    };
    let bump = Bump::new();
    let ns = [8u32, 16, 32, 64];
    let mut res = Vec::new();
    for n in ns {
        res.push(
            problem
                .weyl_sequence_1d(omega, k, n, Variant1d::PlaneWave(side), &bump)?
                .residual_norm,
        );
    }
    let xs: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    let slope = loglog_slope(&xs, &res);
    if !(SLOPE_RANGE[0]..=SLOPE_RANGE[1]).contains(&slope) {
        bail!("residual slope {slope:.4} outside [-1.15, -0.85] at omega = {omega}");
    }
    Ok(format!("slope {slope:.4} at omega = {omega} ({side:?} side)"))
}
