//! CSV readers and writers.
//!
//! Floats are written with Rust's shortest round-trip formatting, so equal
//! inputs give byte-identical files.

use std::io::{Read, Write};

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use pencil_spectra_core::resolvent::{Profile, ResolventSolution};
use serde::Deserialize;

use crate::eigen::ModeRow;
use crate::portrait::Portrait;

/// `portrait.csv`: `re, im, class, branch_note`, rows in increasing `im`,
/// then increasing `re`.
pub fn write_portrait<W: Write>(out: W, portrait: &Portrait) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["re", "im", "class", "branch_note"])?;
    for cell in &portrait.cells {
        w.write_record([
            cell.re.to_string(),
            cell.im.to_string(),
            cell.class.label().to_string(),
            cell.note.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// `modes.csv`, one row per mode.
pub fn write_modes<W: Write>(out: W, rows: &[ModeRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "branch",
        "k",
        "omega_re",
        "omega_im",
        "mu_plus_re",
        "mu_plus_im",
        "mu_minus_re",
        "mu_minus_im",
        "ode_residual",
        "max_jump",
    ])?;
    for r in rows {
        w.write_record([
            r.branch.to_string(),
            r.k.to_string(),
            r.omega.re.to_string(),
            r.omega.im.to_string(),
            r.mu_plus.re.to_string(),
            r.mu_plus.im.to_string(),
            r.mu_minus.re.to_string(),
            r.mu_minus.im.to_string(),
            r.ode_residual.to_string(),
            r.max_jump.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// `resolvent.csv`: `x1` and the real and imaginary parts of `u₁, u₂, u₃`.
/// The interface appears twice, first as `0−` then as `0+`.
pub fn write_resolvent<W: Write>(out: W, sol: &ResolventSolution) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x1", "u1_re", "u1_im", "u2_re", "u2_im", "u3_re", "u3_im"])?;
    for (x, u) in sol.x.iter().zip(&sol.u) {
        w.write_record([
            x.to_string(),
            u[0].re.to_string(),
            u[0].im.to_string(),
            u[1].re.to_string(),
            u[1].im.to_string(),
            u[2].re.to_string(),
            u[2].im.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RhsRecord {
    x1: f64,
    #[allow(dead_code)]
    #[serde(default)]
    r1_re: Option<f64>,
    #[allow(dead_code)]
    #[serde(default)]
    r1_im: Option<f64>,
    r2_re: f64,
    r2_im: f64,
    r3_re: f64,
    r3_im: f64,
}

/// Reads sampled `r₂, r₃` from CSV with columns `x1, r2_re, r2_im, r3_re,
/// r3_im`. Optional `r1_re, r1_im` columns are accepted and ignored: `r₁`
/// is rebuilt from `r₂`.
pub fn read_rhs<R: Read>(input: R) -> Result<(Profile, Profile)> {
    let mut rd = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let mut xs = Vec::new();
    let mut r2 = Vec::new();
    let mut r3 = Vec::new();
    for (i, rec) in rd.deserialize::<RhsRecord>().enumerate() {
        let rec = rec.with_context(|| format!("rhs row {}", i + 2))?;
        xs.push(rec.x1);
        r2.push(Complex64::new(rec.r2_re, rec.r2_im));
        r3.push(Complex64::new(rec.r3_re, rec.r3_im));
    }
    if xs.len() < 2 {
        bail!("rhs needs at least two rows");
    }
    let p2 = Profile::sampled(xs.clone(), r2).context("r2 samples")?;
    let p3 = Profile::sampled(xs, r3).context("r3 samples")?;
    Ok((p2, p3))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rhs_round_trip() {
        let text = "x1,r2_re,r2_im,r3_re,r3_im\n0,0,0,0,0\n0.5,1,0,0,2\n1,0,0,0,0\n";
        let (p2, p3) = read_rhs(text.as_bytes()).unwrap();
        assert_eq!(p2.eval(0.5), Complex64::new(1.0, 0.0));
        assert_eq!(p3.eval(0.5), Complex64::new(0.0, 2.0));
        assert_eq!(p2.support(), Some((0.0, 1.0)));
    }

    #[test]
    fn rhs_errors_name_the_row() {
        let text = "x1,r2_re,r2_im,r3_re,r3_im\n0,0,0,0,0\n0.5,x,0,0,2\n";
        let e = format!("{:#}", read_rhs(text.as_bytes()).unwrap_err());
        assert!(e.contains("row 3"), "{e}");
        let text = "x1,r2_re,r2_im,r3_re,r3_im,extra\n0,0,0,0,0,1\n";
        assert!(read_rhs(text.as_bytes()).is_err());
    }
}
