//! Dense complex polynomials and a polished Aberth root finder.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::Tolerances;

const MAX_ITER: usize = 500;

/// Polynomial with coefficients in descending powers.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<Complex64>,
}

/// A root together with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub value: Complex64,
    pub multiplicity: usize,
}

impl Poly {
    /// Builds a polynomial, dropping exact leading zeros.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let first = coeffs
            .iter()
            .position(|c| *c != Complex64::new(0.0, 0.0))
            .unwrap_or(coeffs.len());
        let mut coeffs = coeffs[first..].to_vec();
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        Self { coeffs }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Monic-times-`lead` product of linear factors.
    pub fn from_roots(lead: Complex64, roots: &[Complex64]) -> Self {
        let mut p = Self::constant(lead);
        for &r in roots {
            p = p.mul(&Self::new(vec![Complex64::new(1.0, 0.0), -r]));
        }
        p
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Complex64::new(0.0, 0.0)
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs[0]
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Value and derivative by a single Horner sweep.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        let mut p = zero;
        let mut dp = zero;
        for &c in &self.coeffs {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// `Σ |a_j| |z|^j`, the natural scale for residual tests.
    pub fn magnitude_at(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Self {
        let n = self.degree();
        if n == 0 {
            return Self::constant(Complex64::new(0.0, 0.0));
        }
        Self::new(
            self.coeffs[..n]
                .iter()
                .enumerate()
                .map(|(j, &c)| c * (n - j) as f64)
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (i, &c) in self.coeffs.iter().rev().enumerate() {
            out[n - 1 - i] += c;
        }
        for (i, &c) in other.coeffs.iter().rev().enumerate() {
            out[n - 1 - i] += c;
        }
        Self::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Multiplies by `z^m`.
    pub fn shift(&self, m: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.extend(core::iter::repeat_n(Complex64::new(0.0, 0.0), m));
        Self::new(c)
    }

    /// All roots with multiplicities summing to the degree.
    pub fn roots(&self, tol: &Tolerances) -> Result<Vec<Root>> {
        poly_roots(&self.coeffs, tol)
    }
}

/// Roots of the polynomial with descending coefficients `coeffs`.
///
/// Exact zero roots are split off first. The rest are found by Aberth
/// iteration, polished by Newton steps on the original polynomial and merged
/// into clusters when they coincide to within the conditioning of a multiple
/// root.
pub fn poly_roots(coeffs: &[Complex64], tol: &Tolerances) -> Result<Vec<Root>> {
    let p = Poly::new(coeffs.to_vec());
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let zero = Complex64::new(0.0, 0.0);
    let trailing = p.coeffs.iter().rev().take_while(|&&c| c == zero).count();
    let reduced = Poly::new(p.coeffs[..p.coeffs.len() - trailing].to_vec());

    let mut out = Vec::new();
    if trailing > 0 {
        out.push(Root {
            value: zero,
            multiplicity: trailing,
        });
    }
    let approx = match reduced.degree() {
        0 => Vec::new(),
        1 => vec![-reduced.coeffs[1] / reduced.coeffs[0]],
        _ => aberth(&reduced)?,
    };
    let polished: Vec<Complex64> = approx.into_iter().map(|z| polish(&reduced, z)).collect();
    for cluster in cluster_roots(&polished) {
        let r = cluster.value;
        let (val, _) = reduced.eval_with_derivative(r);
        let scale = reduced.magnitude_at(r);
        if val.norm() > tol.root_residual_tol * scale {
            return Err(Error::NoConvergence {
                iterations: MAX_ITER,
            });
        }
        out.push(cluster);
    }
    Ok(out)
}

fn aberth(p: &Poly) -> Result<Vec<Complex64>> {
    let n = p.degree();
    let lead = p.leading();
    // Fujiwara-type bound for the initial circle
    let mut radius: f64 = 0.0;
    for (j, c) in p.coeffs.iter().enumerate().skip(1) {
        let t = (c / lead).norm().powf(1.0 / j as f64);
        radius = radius.max(t);
    }
    let radius = if radius > 0.0 { radius } else { 1.0 };
    let mut z: Vec<Complex64> = (0..n)
        .map(|j| {
            let theta = 2.0 * core::f64::consts::PI * j as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, theta)
        })
        .collect();
    let mut settled = vec![false; n];
    for _ in 0..MAX_ITER {
        let mut all = true;
        for i in 0..n {
            if settled[i] {
                continue;
            }
            let (val, der) = p.eval_with_derivative(z[i]);
            if val == Complex64::new(0.0, 0.0) {
                settled[i] = true;
                continue;
            }
            let mut repulsion = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    if d != Complex64::new(0.0, 0.0) {
                        repulsion += d.inv();
                    }
                }
            }
            let ratio = val / der;
            let denom = Complex64::new(1.0, 0.0) - ratio * repulsion;
            let step = if der == Complex64::new(0.0, 0.0) || !denom.is_finite() || denom.norm() == 0.0 {
                Complex64::new(1e-8 * (1.0 + z[i].norm()), 0.0)
            } else {
                ratio / denom
            };
            z[i] -= step;
            if step.norm() <= 4.0 * f64::EPSILON * z[i].norm().max(f64::MIN_POSITIVE) {
                settled[i] = true;
            } else {
                all = false;
            }
        }
        if all {
            return Ok(z);
        }
    }
    // multiple roots converge linearly; the cluster stage copes with that
    if z.iter().all(|r| r.is_finite()) {
        Ok(z)
    } else {
        Err(Error::NoConvergence {
            iterations: MAX_ITER,
        })
    }
}

fn polish(p: &Poly, mut z: Complex64) -> Complex64 {
    let mut best = p.eval(z).norm();
    for _ in 0..4 {
        let (val, der) = p.eval_with_derivative(z);
        if der == Complex64::new(0.0, 0.0) {
            break;
        }
        let cand = z - val / der;
        let r = p.eval(cand).norm();
        if r < best {
            best = r;
            z = cand;
        } else {
            break;
        }
    }
    z
}

fn cluster_roots(roots: &[Complex64]) -> Vec<Root> {
    let mut used = vec![false; roots.len()];
    let mut out = Vec::new();
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let mut members = vec![roots[i]];
        let radius = 1e-6 * roots[i].norm().max(1.0);
        for j in i + 1..roots.len() {
            if !used[j] && (roots[j] - roots[i]).norm() <= radius {
                used[j] = true;
                members.push(roots[j]);
            }
        }
        let m = members.len();
        let mean = members.iter().sum::<Complex64>() / m as f64;
        out.push(Root {
            value: mean,
            multiplicity: m,
        });
    }
    out
}
