//! Independent numerical checks: a finite-difference discretisation of the
//! reduced pencil, a shooting detector for plasmon frequencies and a
//! `λ`-plane isolation probe.
//!
//! The discretisation is staggered: `u₁` lives at cell midpoints, `u₂` and
//! `u₃` at nodes, and the interface `x₁ = 0` is a node. The flux
//! `q = u₂′ − iku₁` is then continuous across the interface by
//! construction, which together with `W u₁ = ik q − r₁` enforces
//! `⟦W̃u₁⟧ = ⟦u₂′ − iku₁⟧ = 0`; `u₂` and `u₃` are single-valued at the
//! interface node and `⟦u₃′⟧ = 0` is the natural condition of the
//! three-point stencil. The node at 0 uses the mean of `W₊` and `W₋`.
//! Homogeneous Dirichlet conditions at `±L` are only meaningful for fields
//! that have decayed there.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::banded::BandMatrix;
use crate::classify1d::m_at;
use crate::dielectric::Side;
use crate::error::{Error, Result};
use crate::numerics::principal_sqrt;
use crate::problem::{InterfaceProblem, SideValues};
use crate::resolvent::{self, ResolventOptions, RhsField};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);
/// `e^{−Re μ L}` at the truncation edge should fall below this.
const TAIL: f64 = 1e-12;
const MAX_HALF_LENGTH: f64 = 200.0;

/// Uniform grid on `[−L, L]` with the interface at a node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscretizedPencil {
    half_length: f64,
    h: f64,
    cells: usize,
}

impl DiscretizedPencil {
    pub const DEFAULT_HALF_LENGTH: f64 = 20.0;
    pub const DEFAULT_STEP: f64 = 1.0 / 200.0;

    /// `L/h` must be a whole number so that 0 is a node.
    pub fn new(half_length: f64, h: f64) -> Result<Self> {
        if !(half_length.is_finite() && h.is_finite() && half_length > 0.0 && h > 0.0) {
            return Err(Error::Precondition("L and h must be positive".into()));
        }
        let half = half_length / h;
        if (half - half.round()).abs() > 1e-9 * half || half.round() < 2.0 {
            return Err(Error::Precondition(format!(
                "L/h = {half} must be an integer of at least 2"
            )));
        }
        Ok(Self {
            half_length,
            h,
            cells: 2 * half.round() as usize,
        })
    }

    /// Default grid, with `L` grown until `e^{−Re μ± L} < 1e-12` at `λ = 1`.
    pub fn for_problem(problem: &InterfaceProblem, omega: Complex64, k: f64) -> Result<Self> {
        Self::for_problem_with_step(problem, omega, k, Self::DEFAULT_STEP)
    }

    pub fn for_problem_with_step(problem: &InterfaceProblem, omega: Complex64, k: f64, h: f64) -> Result<Self> {
        let v = problem.values(omega)?;
        let k2 = Complex64::new(k * k, 0.0);
        let re = principal_sqrt(k2 - v.w_plus).re.min(principal_sqrt(k2 - v.w_minus).re);
        let mut l = Self::DEFAULT_HALF_LENGTH;
        if re > 0.0 {
            l = l.max((1.0 / TAIL).ln() / re).min(MAX_HALF_LENGTH);
        }
        Self::new((l / h).ceil() * h, h)
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.cells).map(|j| self.node(j)).collect()
    }

    fn node(&self, j: usize) -> f64 {
        -self.half_length + self.h * j as f64
    }

    fn midpoint(&self, m: usize) -> f64 {
        self.node(m) + 0.5 * self.h
    }

    fn zero_node(&self) -> usize {
        self.cells / 2
    }

    fn w_mid(&self, m: usize, c: &Coefficients) -> Complex64 {
        if m < self.zero_node() {
            c.w_minus
        } else {
            c.w_plus
        }
    }

    fn w_node(&self, j: usize, c: &Coefficients) -> Complex64 {
        let z = self.zero_node();
        match j.cmp(&z) {
            core::cmp::Ordering::Less => c.w_minus,
            core::cmp::Ordering::Greater => c.w_plus,
            core::cmp::Ordering::Equal => 0.5 * (c.w_minus + c.w_plus),
        }
    }

    /// Stamps `T_k − λW` for the unknowns present in `layout`.
    fn assemble(&self, c: &Coefficients, layout: Layout) -> BandMatrix {
        let n = self.cells;
        let (kl, ku) = layout.band();
        let mut a = BandMatrix::zeros(layout.size(n), kl, ku);
        let h = self.h;
        let ik = I * c.k;
        let k2 = Complex64::new(c.k * c.k, 0.0);
        let inv_h2 = Complex64::new(1.0 / (h * h), 0.0);
        if let (Some(i1), Some(i2)) = (layout.u1(0), layout.u2(1)) {
            let _ = (i1, i2);
            for m in 0..n {
                let row = layout.u1(m).unwrap_or_default();
                a.add(row, row, k2 - c.lambda * self.w_mid(m, c));
                if m + 1 < n {
                    a.add(row, layout.u2(m + 1).unwrap_or_default(), ik / h);
                }
                if m >= 1 {
                    a.add(row, layout.u2(m).unwrap_or_default(), -ik / h);
                }
            }
            for j in 1..n {
                let row = layout.u2(j).unwrap_or_default();
                a.add(row, row, 2.0 * inv_h2 - c.lambda * self.w_node(j, c));
                if j + 1 < n {
                    a.add(row, layout.u2(j + 1).unwrap_or_default(), -inv_h2);
                }
                if j > 1 {
                    a.add(row, layout.u2(j - 1).unwrap_or_default(), -inv_h2);
                }
                a.add(row, layout.u1(j).unwrap_or_default(), ik / h);
                a.add(row, layout.u1(j - 1).unwrap_or_default(), -ik / h);
            }
        }
        if layout.u3(1).is_some() {
            for j in 1..n {
                let row = layout.u3(j).unwrap_or_default();
                a.add(row, row, 2.0 * inv_h2 + k2 - c.lambda * self.w_node(j, c));
                if j + 1 < n {
                    a.add(row, layout.u3(j + 1).unwrap_or_default(), -inv_h2);
                }
                if j > 1 {
                    a.add(row, layout.u3(j - 1).unwrap_or_default(), -inv_h2);
                }
            }
        }
        a
    }

    fn load(&self, rhs: &RhsField, layout: Layout) -> Vec<Complex64> {
        let n = self.cells;
        let mut b = vec![ZERO; layout.size(n)];
        for m in 0..n {
            if let Some(i) = layout.u1(m) {
                b[i] = rhs.r1(self.midpoint(m));
            }
        }
        for j in 1..n {
            let r = rhs.eval(self.node(j));
            if let Some(i) = layout.u2(j) {
                b[i] = r[1];
            }
            if let Some(i) = layout.u3(j) {
                b[i] = r[2];
            }
        }
        b
    }
}

/// Unknown ordering of one linear system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Layout {
    /// `u₁` at midpoint `m` → `2m`, `u₂` at node `j` → `2j − 1`.
    Block12,
    /// `u₃` at node `j` → `j − 1`.
    Block3,
    /// `u₁` → `3m`, `u₂` → `3j − 2`, `u₃` → `3j − 1`.
    Coupled,
}

impl Layout {
    fn size(self, cells: usize) -> usize {
        match self {
            Layout::Block12 => 2 * cells - 1,
            Layout::Block3 => cells - 1,
            Layout::Coupled => 3 * cells - 2,
        }
    }

    fn band(self) -> (usize, usize) {
        match self {
            Layout::Block12 => (2, 2),
            Layout::Block3 => (1, 1),
            Layout::Coupled => (3, 3),
        }
    }

    fn u1(self, m: usize) -> Option<usize> {
        match self {
            Layout::Block12 => Some(2 * m),
            Layout::Block3 => None,
            Layout::Coupled => Some(3 * m),
        }
    }

    fn u2(self, j: usize) -> Option<usize> {
        match self {
            Layout::Block12 => Some(2 * j - 1),
            Layout::Block3 => None,
            Layout::Coupled => Some(3 * j - 2),
        }
    }

    fn u3(self, j: usize) -> Option<usize> {
        match self {
            Layout::Block12 => None,
            Layout::Block3 => Some(j - 1),
            Layout::Coupled => Some(3 * j - 1),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Coefficients {
    k: f64,
    lambda: Complex64,
    w_plus: Complex64,
    w_minus: Complex64,
}

impl Coefficients {
    fn new(v: &SideValues, k: f64, lambda: Complex64) -> Self {
        Self {
            k,
            lambda,
            w_plus: v.w_plus,
            w_minus: v.w_minus,
        }
    }
}

/// Finite-difference solution sampled at the nodes.
#[derive(Debug, Clone)]
pub struct FdSolution {
    pub x: Vec<f64>,
    /// `u₂` and `u₃` at nodes; `u₁` is the mean of the neighbouring
    /// midpoints, except at the interface node where it is `u₁(0+)`.
    pub u: Vec<[Complex64; 3]>,
    /// `u₁` at the cell midpoints.
    pub u1_mid: Vec<Complex64>,
    pub zero_index: usize,
    pub left0: [Complex64; 3],
    pub right0: [Complex64; 3],
}

impl FdSolution {
    fn build(disc: &DiscretizedPencil, u1: &[Complex64], u2: &[Complex64], u3: &[Complex64]) -> Self {
        let n = disc.cells;
        let z = disc.zero_node();
        let nodal = |j: usize, f: &[Complex64]| if j == 0 || j == n { ZERO } else { f[j - 1] };
        let extrap = |a: Complex64, b: Complex64| 1.5 * a - 0.5 * b;
        let left1 = extrap(u1[z - 1], u1[z - 2]);
        let right1 = extrap(u1[z], u1[z + 1]);
        let u = (0..=n)
            .map(|j| {
                let v1 = match j {
                    0 => extrap(u1[0], u1[1]),
                    _ if j == n => extrap(u1[n - 1], u1[n - 2]),
                    _ if j == z => right1,
                    _ => 0.5 * (u1[j - 1] + u1[j]),
                };
                [v1, nodal(j, u2), nodal(j, u3)]
            })
            .collect();
        Self {
            x: disc.nodes(),
            u,
            u1_mid: u1.to_vec(),
            zero_index: z,
            left0: [left1, nodal(z, u2), nodal(z, u3)],
            right0: [right1, nodal(z, u2), nodal(z, u3)],
        }
    }
}

fn check_resolvent(problem: &InterfaceProblem, omega: Complex64, k: f64) -> Result<SideValues> {
    let class = problem.classify(omega, k);
    if !class.resolvent {
        return Err(Error::NotResolvent {
            omega,
            note: class.branch.to_string(),
        });
    }
    problem.values(omega)
}

/// Solves the discretised `(T_k − W(ω)) u = r`, one block at a time.
pub fn direct_solve(
    problem: &InterfaceProblem,
    omega: Complex64,
    rhs: &RhsField,
    disc: &DiscretizedPencil,
) -> Result<FdSolution> {
    let v = check_resolvent(problem, omega, rhs.k())?;
    let c = Coefficients::new(&v, rhs.k(), Complex64::new(1.0, 0.0));
    let mut b12 = disc.load(rhs, Layout::Block12);
    disc.assemble(&c, Layout::Block12).factor()?.solve(&mut b12);
    let mut b3 = disc.load(rhs, Layout::Block3);
    disc.assemble(&c, Layout::Block3).factor()?.solve(&mut b3);
    let n = disc.cells;
    let u1: Vec<Complex64> = (0..n).map(|m| b12[2 * m]).collect();
    let u2: Vec<Complex64> = (1..n).map(|j| b12[2 * j - 1]).collect();
    Ok(FdSolution::build(disc, &u1, &u2, &b3))
}

/// The same system with all three components interleaved in one matrix.
/// The `u₃` rows never couple to the others, so the `u₃` component is
/// bitwise identical to the one from [`direct_solve`].
pub fn direct_solve_coupled(
    problem: &InterfaceProblem,
    omega: Complex64,
    rhs: &RhsField,
    disc: &DiscretizedPencil,
) -> Result<FdSolution> {
    let v = check_resolvent(problem, omega, rhs.k())?;
    let c = Coefficients::new(&v, rhs.k(), Complex64::new(1.0, 0.0));
    let mut b = disc.load(rhs, Layout::Coupled);
    disc.assemble(&c, Layout::Coupled).factor()?.solve(&mut b);
    let n = disc.cells;
    let u1: Vec<Complex64> = (0..n).map(|m| b[3 * m]).collect();
    let u2: Vec<Complex64> = (1..n).map(|j| b[3 * j - 2]).collect();
    let u3: Vec<Complex64> = (1..n).map(|j| b[3 * j - 1]).collect();
    Ok(FdSolution::build(disc, &u1, &u2, &u3))
}

/// Discrepancy between [`direct_solve`] and the explicit resolvent on the
/// same grid: `u₂`, `u₃` at nodes, `u₁` at midpoints, and the interface
/// traces `u(0±)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Discrepancy {
    pub h: f64,
    /// Discrete `ℓ²` error over all samples divided by the `ℓ²` norm of the
    /// explicit solution.
    pub l2_relative: f64,
    /// Largest sample error over the largest sample of the explicit solution.
    pub max_relative: f64,
}

pub fn compare_with_resolvent(
    problem: &InterfaceProblem,
    omega: Complex64,
    rhs: &RhsField,
    disc: &DiscretizedPencil,
) -> Result<Discrepancy> {
    let h = disc.h;
    let fd = direct_solve(problem, omega, rhs, disc)?;
    let opts = ResolventOptions {
        h: 0.5 * h,
        half_length: Some(disc.half_length),
    };
    let ex = resolvent::solve(problem, omega, rhs, opts)?;
    let at = |x: f64| {
        ex.index_of(x, Side::Plus)
            .map(|i| ex.u[i])
            .ok_or(Error::Precondition("grids do not nest".into()))
    };
    let (mut e2, mut n2, mut emax, mut nmax) = (0.0, 0.0, 0.0f64, 0.0f64);
    let mut add = |a: Complex64, b: Complex64| {
        let e = (a - b).norm();
        e2 += e * e;
        n2 += b.norm_sqr();
        emax = emax.max(e);
        nmax = nmax.max(b.norm());
    };
    for (j, &x) in fd.x.iter().enumerate() {
        let u = at(x)?;
        add(fd.u[j][1], u[1]);
        add(fd.u[j][2], u[2]);
    }
    for (m, &u1) in fd.u1_mid.iter().enumerate() {
        add(u1, at(fd.x[m] + 0.5 * h)?[0]);
    }
    let (l, r) = (ex.u[ex.zero_left], ex.u[ex.zero_right()]);
    for i in 0..3 {
        add(fd.left0[i], l[i]);
        add(fd.right0[i], r[i]);
    }
    let ratio = |a: f64, b: f64| if b > 0.0 { a / b } else { a };
    Ok(Discrepancy {
        h,
        l2_relative: ratio(e2.sqrt(), n2.sqrt()),
        max_relative: ratio(emax, nmax),
    })
}

/// Smallest singular value by inverse iteration on `AᴴA`; 0 if the
/// factorisation hits an exact zero pivot.
fn sigma_min(a: BandMatrix) -> f64 {
    let n = a.dim();
    let Ok(lu) = a.factor() else { return 0.0 };
    let mut x: Vec<Complex64> = (0..n)
        .map(|i| Complex64::new(1.0 + 0.5 * (i as f64 * 0.7).sin(), 0.3 * (i as f64 * 1.3).cos()))
        .collect();
    let norm = |v: &[Complex64]| v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let nx = norm(&x);
    x.iter_mut().for_each(|c| *c /= nx);
    let mut sigma = f64::INFINITY;
    for _ in 0..100 {
        lu.solve_adjoint(&mut x);
        lu.solve(&mut x);
        let g = norm(&x);
        if !(g.is_finite() && g > 0.0) {
            return 0.0;
        }
        let next = 1.0 / g.sqrt();
        x.iter_mut().for_each(|c| *c /= g);
        let done = (sigma - next).abs() <= 1e-6 * next;
        sigma = next;
        if done {
            break;
        }
    }
    sigma
}

/// `σ_min(T_k − λW)` of the discretisation, minimised over both blocks.
pub fn pencil_sigma_min(
    problem: &InterfaceProblem,
    omega: Complex64,
    k: f64,
    lambda: Complex64,
    disc: &DiscretizedPencil,
) -> Result<f64> {
    let v = problem.values(omega)?;
    let c = Coefficients::new(&v, k, lambda);
    let s12 = sigma_min(disc.assemble(&c, Layout::Block12));
    let s3 = sigma_min(disc.assemble(&c, Layout::Block3));
    Ok(s12.min(s3))
}

/// One ring `|λ − 1| = radius` of the isolation probe.
#[derive(Debug, Clone, PartialEq)]
pub struct RingSample {
    pub radius: f64,
    pub lambdas: Vec<Complex64>,
    pub sigmas: Vec<f64>,
}

impl RingSample {
    pub fn min_sigma(&self) -> f64 {
        self.sigmas.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IsolationReport {
    pub omega: Complex64,
    pub k: f64,
    pub sigma_at_one: f64,
    pub rings: Vec<RingSample>,
    /// Smallest ring value over `σ_min` at `λ = 1`.
    pub separation: f64,
    /// `separation ≥ ISOLATION_RATIO`.
    pub isolated: bool,
}

/// Separation that counts as numerical evidence of an isolated eigenvalue.
pub const ISOLATION_RATIO: f64 = 100.0;

/// Smallest singular values of the discrete `T_k − λW(ω)` at `λ = 1` and on
/// rings around it.
pub fn lambda_isolation_probe(
    problem: &InterfaceProblem,
    omega: Complex64,
    k: f64,
    radii: &[f64],
    points_per_ring: usize,
    disc: &DiscretizedPencil,
) -> Result<IsolationReport> {
    if points_per_ring == 0 {
        return Err(Error::Precondition("a ring needs at least one point".into()));
    }
    let one = Complex64::new(1.0, 0.0);
    let sigma_at_one = pencil_sigma_min(problem, omega, k, one, disc)?;
    let mut rings = Vec::with_capacity(radii.len());
    for &radius in radii {
        let lambdas: Vec<Complex64> = (0..points_per_ring)
            .map(|p| {
                let t = core::f64::consts::TAU * (p as f64 + 0.5) / points_per_ring as f64;
                one + Complex64::from_polar(radius, t)
            })
            .collect();
        let sigmas = lambdas
            .iter()
            .map(|&l| pencil_sigma_min(problem, omega, k, l, disc))
            .collect::<Result<Vec<_>>>()?;
        rings.push(RingSample { radius, lambdas, sigmas });
    }
    let ring_min = rings.iter().map(RingSample::min_sigma).fold(f64::INFINITY, f64::min);
    let separation = if sigma_at_one > 0.0 {
        ring_min / sigma_at_one
    } else {
        f64::INFINITY
    };
    Ok(IsolationReport {
        omega,
        k,
        sigma_at_one,
        rings,
        separation,
        isolated: separation >= ISOLATION_RATIO,
    })
}

/// Controls for the shooting integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootOptions {
    pub half_length: f64,
    pub rtol: f64,
    pub atol: f64,
}

impl Default for ShootOptions {
    fn default() -> Self {
        Self {
            half_length: 20.0,
            rtol: 1e-12,
            atol: 1e-300,
        }
    }
}

/// Normalised matching determinant `(W̃₊ψ₁⁺ψ₂⁻ − W̃₋ψ₁⁻ψ₂⁺)/(|…| + |…|)`
/// of the decaying solutions integrated in from `±L`.
pub fn shoot_determinant(problem: &InterfaceProblem, omega: Complex64, k: f64) -> Result<Complex64> {
    shoot_determinant_with(problem, omega, k, ShootOptions::default())
}

pub fn shoot_determinant_with(
    problem: &InterfaceProblem,
    omega: Complex64,
    k: f64,
    opts: ShootOptions,
) -> Result<Complex64> {
    if k == 0.0 {
        return Err(Error::Precondition("shooting needs k != 0".into()));
    }
    let v = problem.values(omega)?;
    for side in [Side::Plus, Side::Minus] {
        if m_at(&v, side, k, &problem.tol) {
            return Err(Error::Precondition(format!(
                "no decaying solution on the {side} side: W(omega) lies in [k^2, inf)"
            )));
        }
    }
    let k2 = Complex64::new(k * k, 0.0);
    let mu_p = principal_sqrt(k2 - v.w_plus);
    let mu_m = principal_sqrt(k2 - v.w_minus);
    let ik = I * k;
    let shoot = |w: Complex64, mu: Complex64, start: [Complex64; 2], sign: f64| -> Result<[Complex64; 2]> {
        let l = opts.half_length.min(600.0 / mu.norm());
        let decay = (-mu * l).exp();
        let y0 = [start[0] * decay, start[1] * decay];
        let c = (w - k2) / ik;
        let f = |y: &[Complex64; 2]| [-ik * y[1], c * y[0]];
        dopri5(f, sign * l, 0.0, y0, opts.rtol, opts.atol)
    };
    let plus = shoot(v.w_plus, mu_p, [ik, mu_p], 1.0)?;
    let minus = shoot(v.w_minus, mu_m, [-ik, mu_m], -1.0)?;
    let a = v.wt_plus * plus[0] * minus[1];
    let b = v.wt_minus * minus[0] * plus[1];
    let scale = a.norm() + b.norm();
    if scale == 0.0 {
        return Err(Error::Precondition("degenerate matching data".into()));
    }
    Ok((a - b) / scale)
}

/// Secant iteration on [`shoot_determinant`] from `guess`.
pub fn shoot_root(problem: &InterfaceProblem, guess: Complex64, k: f64) -> Result<Complex64> {
    let mut x0 = guess;
    let mut x1 = guess * (1.0 + 1e-4) + 1e-6;
    let mut f0 = shoot_determinant(problem, x0, k)?;
    let mut f1 = shoot_determinant(problem, x1, k)?;
    for _ in 0..60 {
        let d = f1 - f0;
        if d == ZERO {
            break;
        }
        let x2 = x1 - f1 * (x1 - x0) / d;
        if (x2 - x1).norm() <= 1e-13 * x2.norm().max(1.0) {
            return Ok(x2);
        }
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = shoot_determinant(problem, x1, k)?;
    }
    if f1.norm() < 1e-10 {
        Ok(x1)
    } else {
        Err(Error::NoConvergence { iterations: 60 })
    }
}

/// Adaptive Dormand–Prince 5(4) for a complex 2-vector from `t0` to `t1`.
fn dopri5<F>(f: F, t0: f64, t1: f64, y0: [Complex64; 2], rtol: f64, atol: f64) -> Result<[Complex64; 2]>
where
    F: Fn(&[Complex64; 2]) -> [Complex64; 2],
{
    const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
    const A: [[f64; 6]; 7] = [
        [0.0; 6],
        [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];
    let _ = C;
    let span = t1 - t0;
    let dir = span.signum();
    let mut t = t0;
    let mut y = y0;
    let mut h = 0.01 * dir;
    let mut steps = 0usize;
    while (t1 - t) * dir > 0.0 {
        steps += 1;
        if steps > 1_000_000 {
            return Err(Error::NoConvergence { iterations: steps });
        }
        if (t + h - t1) * dir > 0.0 {
            h = t1 - t;
        }
        let mut k = [[ZERO; 2]; 7];
        k[0] = f(&y);
        for s in 1..7 {
            let mut ys = y;
            for (r, kr) in k.iter().enumerate().take(s) {
                for c in 0..2 {
                    ys[c] += h * A[s][r] * kr[c];
                }
            }
            k[s] = f(&ys);
        }
        let mut y5 = y;
        let mut err: f64 = 0.0;
        for c in 0..2 {
            let mut e = ZERO;
            for s in 0..7 {
                y5[c] += h * B5[s] * k[s][c];
                e += h * (B5[s] - B4[s]) * k[s][c];
            }
            let sc = atol + rtol * y[c].norm().max(y5[c].norm());
            err = err.max(e.norm() / sc);
        }
        if !err.is_finite() {
            return Err(Error::NoConvergence { iterations: steps });
        }
        if err <= 1.0 {
            t += h;
            y = y5;
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
    }
    Ok(y)
}

#[cfg(test)]
mod tests;
