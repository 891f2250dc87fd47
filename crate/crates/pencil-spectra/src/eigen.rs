//! Mode tables and dispersion sweeps.

use std::str::FromStr;

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use pencil_spectra_core::modes::{mode_residual, PlasmonMode};
use pencil_spectra_core::InterfaceProblem;

/// One row of `modes.csv`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeRow {
    /// Continuity-tracked branch id in a sweep; the mode index otherwise.
    pub branch: usize,
    pub k: f64,
    pub omega: Complex64,
    pub mu_plus: Complex64,
    pub mu_minus: Complex64,
    pub ode_residual: f64,
    pub max_jump: f64,
}

/// `a:b:n`, inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KRange {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl FromStr for KRange {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            bail!("k range must look like a:b:n, got `{s}`");
        }
        let lo: f64 = parts[0].trim().parse().context("k range start")?;
        let hi: f64 = parts[1].trim().parse().context("k range end")?;
        let n: usize = parts[2].trim().parse().context("k range count")?;
        if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo <= hi) || n == 0 {
            bail!("need 0 <= a <= b and n >= 1, got `{s}`");
        }
        if n == 1 && lo != hi {
            bail!("a single sample needs a = b");
        }
        Ok(Self { lo, hi, n })
    }
}

impl KRange {
    pub fn values(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        (0..self.n)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (self.n - 1) as f64)
            .collect()
    }
}

/// Residuals on a grid of 401 points spanning eight decay lengths.
pub fn residual_row(mode: &PlasmonMode, branch: usize) -> ModeRow {
    let decay = mode.mu_plus.re.min(mode.mu_minus.re);
    let l = 8.0 / decay;
    let grid: Vec<f64> = (0..=400).map(|i| -l + 2.0 * l * i as f64 / 400.0).collect();
    let r = mode_residual(mode, &grid);
    ModeRow {
        branch,
        k: mode.k,
        omega: mode.omega,
        mu_plus: mode.mu_plus,
        mu_minus: mode.mu_minus,
        ode_residual: r.ode,
        max_jump: r.max_jump(),
    }
}

/// All modes at one `k`; empty for `k = 0`.
pub fn mode_table(problem: &InterfaceProblem, k: f64) -> Result<Vec<ModeRow>> {
    let modes = problem.eigen_omegas(k).context("mode search")?;
    Ok(modes.iter().enumerate().map(|(i, m)| residual_row(m, i)).collect())
}

/// Modes over a `k` sweep. Each mode joins the branch whose last point is
/// nearest, pairing the closest candidates first; unmatched modes start new
/// branches.
pub fn sweep(problem: &InterfaceProblem, ks: &[f64]) -> Result<Vec<ModeRow>> {
    let mut rows = Vec::new();
    let mut last: Vec<Complex64> = Vec::new();
    for &k in ks {
        let modes = problem
            .eigen_omegas(k)
            .with_context(|| format!("mode search at k = {k}"))?;
        let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
        for (m, mode) in modes.iter().enumerate() {
            for (b, &w) in last.iter().enumerate() {
                pairs.push(((mode.omega - w).norm(), m, b));
            }
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut assigned: Vec<Option<usize>> = vec![None; modes.len()];
        let mut taken = vec![false; last.len()];
        for (_, m, b) in pairs {
            if assigned[m].is_none() && !taken[b] {
                assigned[m] = Some(b);
                taken[b] = true;
            }
        }
        for (m, mode) in modes.iter().enumerate() {
            let b = match assigned[m] {
                Some(b) => b,
                None => {
                    last.push(mode.omega);
                    last.len() - 1
                }
            };
            last[b] = mode.omega;
            rows.push(residual_row(mode, b));
        }
    }
    Ok(rows)
}
