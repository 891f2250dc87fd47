//! Explicit solution of `(T_k − W(ω)) u = r` by variation of parameters.
//!
//! On each half-line `u₂` and `u₃` solve `−u″ + μ²u = r` with
//! `μ± = √(k² − W±)`, and `u₁ = (r₁ − iku₂′)/μ²`. The kernel integrals
//! `∫ e^{−μ|x−t|} r(t) dt` are accumulated cell by cell with Gauss–Legendre
//! panels and an exponential recursion, so the cost is linear in the grid.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::format;
use alloc::string::ToString;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::bump::Bump;
use crate::dielectric::Side;
use crate::error::{Error, Result};
use crate::numerics::principal_sqrt;
use crate::problem::{InterfaceProblem, SideValues};
use crate::quad::GaussLegendre;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);
/// Widest quadrature panel used on any right-hand side.
const PANEL: f64 = 1.0 / 64.0;
/// `e^{−Re μ · margin}` below this is treated as zero.
const TAIL: f64 = 1e-12;

/// A compactly supported scalar profile.
#[derive(Clone)]
pub struct Profile {
    f: Arc<dyn Fn(f64) -> Complex64 + Send + Sync>,
    support: Option<(f64, f64)>,
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Profile").field("support", &self.support).finish()
    }
}

impl Profile {
    /// Wraps `f`, which must vanish outside `[a, b]`.
    pub fn new<F>(a: f64, b: f64, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::Precondition(format!("support [{a}, {b}] is not a finite interval")));
        }
        Ok(Self {
            f: Arc::new(f),
            support: Some((a, b)),
        })
    }

    pub fn zero() -> Self {
        Self {
            f: Arc::new(|_| ZERO),
            support: None,
        }
    }

    /// `amplitude · φ((x − center)/half_width)` with the unit bump `φ`.
    pub fn bump(center: f64, half_width: f64, amplitude: Complex64) -> Result<Self> {
        let b = Bump::new();
        Self::new(center - half_width, center + half_width, move |x| {
            amplitude * b.phi((x - center) / half_width)
        })
    }

    /// `amplitude · φ′((x − center)/half_width)`; its integral vanishes.
    pub fn bump_slope(center: f64, half_width: f64, amplitude: Complex64) -> Result<Self> {
        let b = Bump::new();
        Self::new(center - half_width, center + half_width, move |x| {
            amplitude * b.dphi((x - center) / half_width)
        })
    }

    /// Cubic Hermite interpolant through samples, zero outside the sample
    /// range. Slopes are one-sided at the ends and centred inside.
    pub fn sampled(xs: Vec<f64>, ys: Vec<Complex64>) -> Result<Self> {
        if xs.len() != ys.len() || xs.len() < 2 {
            return Err(Error::Precondition("need at least two samples of matching length".into()));
        }
        if !xs.windows(2).all(|w| w[0] < w[1]) || !xs.iter().all(|x| x.is_finite()) {
            return Err(Error::Precondition("sample abscissae must be finite and strictly increasing".into()));
        }
        if ys.iter().all(|y| *y == ZERO) {
            return Ok(Self::zero());
        }
        let n = xs.len();
        let slope = |i: usize, j: usize| (ys[j] - ys[i]) / (xs[j] - xs[i]);
        let ds: Vec<Complex64> = (0..n)
            .map(|i| match i {
                0 => slope(0, 1),
                _ if i == n - 1 => slope(n - 2, n - 1),
                _ => slope(i - 1, i + 1),
            })
            .collect();
        let (a, b) = (xs[0], xs[n - 1]);
        Self::new(a, b, move |x| {
            if !(a..=b).contains(&x) {
                return ZERO;
            }
            let i = xs.partition_point(|&t| t <= x).clamp(1, n - 1) - 1;
            let h = xs[i + 1] - xs[i];
            let t = (x - xs[i]) / h;
            let (t2, t3) = (t * t, t * t * t);
            ys[i] * (2.0 * t3 - 3.0 * t2 + 1.0)
                + ds[i] * (h * (t3 - 2.0 * t2 + t))
                + ys[i + 1] * (-2.0 * t3 + 3.0 * t2)
                + ds[i + 1] * (h * (t3 - t2))
        })
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        match self.support {
            Some((a, b)) if (a..=b).contains(&x) => (self.f)(x),
            _ => ZERO,
        }
    }

    pub fn support(&self) -> Option<(f64, f64)> {
        self.support
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        let f = self.f.clone();
        Self {
            f: Arc::new(move |x| s * f(x)),
            support: self.support,
        }
    }

    /// Pointwise sum; the support is the hull of both supports.
    pub fn sum(&self, other: &Profile) -> Self {
        let (f, g) = (self.clone(), other.clone());
        Self {
            support: hull(self.support, other.support),
            f: Arc::new(move |x| f.eval(x) + g.eval(x)),
        }
    }
}

fn hull(a: Option<(f64, f64)>, b: Option<(f64, f64)>) -> Option<(f64, f64)> {
    match (a, b) {
        (Some(a), Some(b)) => Some((a.0.min(b.0), a.1.max(b.1))),
        (a, None) => a,
        (None, b) => b,
    }
}

/// Integrates `g(t) · r(t)` over `[lo, hi] ∩ supp r` with panels no wider
/// than `PANEL`.
fn integrate_on<G>(rule: &GaussLegendre, r: &Profile, lo: f64, hi: f64, g: G) -> Complex64
where
    G: Fn(f64) -> Complex64,
{
    let Some((a, b)) = r.support else { return ZERO };
    let (lo, hi) = (lo.max(a), hi.min(b));
    if lo >= hi {
        return ZERO;
    }
    let panels = ((hi - lo) / PANEL).ceil().max(1.0) as usize;
    let w = (hi - lo) / panels as f64;
    let mut s = ZERO;
    for p in 0..panels {
        let p0 = lo + w * p as f64;
        for (t, wt) in rule.mapped(p0, p0 + w) {
            s += g(t) * (r.f)(t) * wt;
        }
    }
    s
}

/// A divergence-free right-hand side `r = (r₁, r₂, r₃)` for a fixed `k`.
///
/// `r₂` and `r₃` are given; `r₁ = −ik ∫_{−∞}^{x} r₂` so that
/// `r₁′ + ik r₂ = 0`. For `k ≠ 0` this needs `∫ r₂ = 0`, otherwise `r₁`
/// would not decay. For `k = 0`, `r₁ = 0`.
#[derive(Debug, Clone)]
pub struct RhsField {
    k: f64,
    r2: Profile,
    r3: Profile,
    r1_edges: Vec<Complex64>,
    r1_origin: f64,
    r1_width: f64,
    rule: GaussLegendre,
}

impl RhsField {
    pub fn new(k: f64, r2: Profile, r3: Profile) -> Result<Self> {
        if !k.is_finite() {
            return Err(Error::Precondition("k must be finite".into()));
        }
        let rule = GaussLegendre::new(16);
        let mut field = Self {
            k,
            r2,
            r3,
            r1_edges: Vec::new(),
            r1_origin: 0.0,
            r1_width: PANEL,
            rule: rule.clone(),
        };
        if k == 0.0 {
            return Ok(field);
        }
        let Some((a, b)) = field.r2.support else { return Ok(field) };
        let panels = ((b - a) / PANEL).ceil().max(1.0) as usize;
        let w = (b - a) / panels as f64;
        let mut cum = Vec::with_capacity(panels + 1);
        let mut s = ZERO;
        let mut mass = 0.0;
        cum.push(s);
        for p in 0..panels {
            let p0 = a + w * p as f64;
            for (t, wt) in rule.mapped(p0, p0 + w) {
                let v = field.r2.eval(t);
                s += v * wt;
                mass += v.norm() * wt;
            }
            cum.push(s);
        }
        if s.norm() > 1e-9 * mass.max(f64::MIN_POSITIVE) {
            return Err(Error::Precondition(format!(
                "r2 must integrate to zero when k != 0 (integral {s:.3e}, mass {mass:.3e})"
            )));
        }
        field.r1_edges = cum.into_iter().map(|c| -I * k * c).collect();
        field.r1_origin = a;
        field.r1_width = w;
        Ok(field)
    }

    pub fn zero(k: f64) -> Self {
        Self {
            k,
            r2: Profile::zero(),
            r3: Profile::zero(),
            r1_edges: Vec::new(),
            r1_origin: 0.0,
            r1_width: PANEL,
            rule: GaussLegendre::new(16),
        }
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn r2(&self) -> &Profile {
        &self.r2
    }

    pub fn r3(&self) -> &Profile {
        &self.r3
    }

    pub fn r1(&self, x: f64) -> Complex64 {
        if self.r1_edges.len() < 2 {
            return ZERO;
        }
        let last = self.r1_edges.len() - 1;
        let end = self.r1_origin + self.r1_width * last as f64;
        if x <= self.r1_origin || x >= end {
            return ZERO;
        }
        let p = (((x - self.r1_origin) / self.r1_width) as usize).min(last - 1);
        let p0 = self.r1_origin + self.r1_width * p as f64;
        let tail: Complex64 = self.rule.mapped(p0, x).map(|(t, w)| self.r2.eval(t) * w).sum();
        self.r1_edges[p] - I * self.k * tail
    }

    pub fn eval(&self, x: f64) -> [Complex64; 3] {
        [self.r1(x), self.r2.eval(x), self.r3.eval(x)]
    }

    /// Hull of the supports of all three components.
    pub fn support(&self) -> Option<(f64, f64)> {
        hull(self.r2.support, self.r3.support)
    }

    pub fn is_zero(&self) -> bool {
        self.support().is_none()
    }

    /// `‖r‖` in `L²(ℝ; ℂ³)`.
    pub fn l2_norm(&self) -> f64 {
        let Some((a, b)) = self.support() else { return 0.0 };
        let rule = GaussLegendre::new(8);
        let panels = ((b - a) / PANEL).ceil().max(1.0) as usize;
        let s: f64 = rule.integrate_panels(a, b, panels, |x| {
            let r = self.eval(x);
            r[0].norm_sqr() + r[1].norm_sqr() + r[2].norm_sqr()
        });
        s.sqrt()
    }

    /// `max |r₁(b) − r₁(a) + ik ∫_a^b r₂| / (b − a)` over consecutive grid
    /// points, the integrated form of `r₁′ + ik r₂ = 0`.
    pub fn divergence_defect(&self, grid: &[f64]) -> f64 {
        grid.windows(2)
            .map(|w| {
                let int = integrate_on(&self.rule, &self.r2, w[0], w[1], |_| Complex64::new(1.0, 0.0));
                (self.r1(w[1]) - self.r1(w[0]) + I * self.k * int).norm() / (w[1] - w[0])
            })
            .fold(0.0, f64::max)
    }

    /// `α·self + β·other`; both must share `k`.
    pub fn combine(&self, alpha: Complex64, other: &RhsField, beta: Complex64) -> Result<Self> {
        if self.k != other.k {
            return Err(Error::Precondition("right-hand sides for different k".into()));
        }
        RhsField::new(
            self.k,
            self.r2.scaled(alpha).sum(&other.r2.scaled(beta)),
            self.r3.scaled(alpha).sum(&other.r3.scaled(beta)),
        )
    }
}

/// Grid controls for [`solve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolventOptions {
    pub h: f64,
    /// Fixed half-length; by default the decay of `e^{−Re μ x}` decides.
    pub half_length: Option<f64>,
}

impl Default for ResolventOptions {
    fn default() -> Self {
        Self {
            h: 1.0 / 128.0,
            half_length: None,
        }
    }
}

/// Sampled solution on `[−L, L]`, with the interface stored twice:
/// index `zero_left` holds `u(0−)` and `zero_left + 1` holds `u(0+)`.
#[derive(Debug, Clone)]
pub struct ResolventSolution {
    pub omega: Complex64,
    pub k: f64,
    pub h: f64,
    pub x: Vec<f64>,
    pub u: Vec<[Complex64; 3]>,
    /// Closed-form `u₂′`.
    pub du2: Vec<Complex64>,
    /// Closed-form `u₃′`.
    pub du3: Vec<Complex64>,
    pub zero_left: usize,
    pub c2: Complex64,
    pub c3: Complex64,
    pub residual_ode: f64,
    pub residual_interface: f64,
    pub norm_ratio: f64,
}

impl ResolventSolution {
    pub fn zero_right(&self) -> usize {
        self.zero_left + 1
    }

    /// Index of the node at `x` on the given side; `x = 0` picks `0±`.
    pub fn index_of(&self, x: f64, side: Side) -> Option<usize> {
        let n = self.zero_left;
        let j = (x.abs() / self.h).round();
        if (j * self.h - x.abs()).abs() > 1e-9 * self.h || j as usize > n {
            return None;
        }
        let j = j as usize;
        match (x == 0.0, x > 0.0, side) {
            (true, _, Side::Minus) => Some(n),
            (true, _, Side::Plus) => Some(n + 1),
            (false, true, _) => Some(n + 1 + j),
            (false, false, _) => Some(n - j),
        }
    }
}

/// What [`verify`] measured.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyReport {
    /// Largest residual of each equation, averaged over two grid cells.
    pub ode: [f64; 3],
    /// `⟦W̃u₁⟧, ⟦u₂⟧, ⟦u₃⟧, ⟦u₂′ − iku₁⟧, ⟦u₃′⟧`.
    pub jumps: [f64; 5],
    /// `max |u₁′ + iku₂|`, averaged like the ODE residuals.
    pub divergence: f64,
    /// `max |(u₂′ − iku₁) − (Wu₁ + r₁)/(ik)|`, absent for `k = 0`.
    pub flux_identity: Option<f64>,
    pub r_norm: f64,
    pub u_norm: f64,
    pub norm_ratio: f64,
}

impl VerifyReport {
    pub fn max_ode(&self) -> f64 {
        self.ode.iter().fold(0.0, |a, &b| a.max(b))
    }

    pub fn max_jump(&self) -> f64 {
        self.jumps.iter().fold(0.0, |a, &b| a.max(b))
    }
}

/// Kernel integrals on one half-line in the distance variable `t = |x|`:
/// `a(t) = ∫_t^∞ e^{−μ(s−t)} r`, `b(t) = ∫_0^t e^{−μ(t−s)} r`.
#[derive(Debug, Clone)]
struct HalfLine {
    a: Vec<Complex64>,
    b: Vec<Complex64>,
}

impl HalfLine {
    fn new(rule: &GaussLegendre, r: &Profile, mu: Complex64, h: f64, n: usize, sign: f64) -> Self {
        let mut a = alloc::vec![ZERO; n + 1];
        let mut b = alloc::vec![ZERO; n + 1];
        let decay = (-mu * h).exp();
        let rr = |t: f64| sign * t;
        // cells in t: [t_j, t_{j+1}] maps to x between sign·t_j and sign·t_{j+1}
        let cell = |j: usize, g: &dyn Fn(f64) -> Complex64| {
            let (t0, t1) = (h * j as f64, h * (j + 1) as f64);
            let (x0, x1) = (rr(t0), rr(t1));
            let (lo, hi) = if x0 < x1 { (x0, x1) } else { (x1, x0) };
            integrate_on(rule, r, lo, hi, |x| g(sign * x))
        };
        for j in (0..n).rev() {
            let t0 = h * j as f64;
            a[j] = decay * a[j + 1] + cell(j, &|t| (-mu * (t - t0)).exp());
        }
        for j in 0..n {
            let t1 = h * (j + 1) as f64;
            b[j + 1] = decay * b[j] + cell(j, &|t| (-mu * (t1 - t)).exp());
        }
        Self { a, b }
    }

    /// `(u, du/dt)` at node `j` given `u(0) = c`.
    fn eval(&self, j: usize, t: f64, mu: Complex64, c: Complex64) -> (Complex64, Complex64) {
        let hom = (c - self.a[0] / (2.0 * mu)) * (-mu * t).exp();
        let (a, b) = (self.a[j], self.b[j]);
        (hom + (a + b) / (2.0 * mu), -mu * hom + (a - b) / 2.0)
    }
}

/// The kernel tables for one `(ω, k, r)`, from which solutions with any
/// interface constants can be assembled.
#[derive(Debug, Clone)]
pub struct ResolventKernel {
    omega: Complex64,
    k: f64,
    values: SideValues,
    mu: [Complex64; 2],
    h: f64,
    n: usize,
    rhs: RhsField,
    r2: [HalfLine; 2],
    r3: [HalfLine; 2],
    c2: Complex64,
    c3: Complex64,
}

impl ResolventKernel {
    pub fn new(
        problem: &InterfaceProblem,
        omega: Complex64,
        rhs: &RhsField,
        opts: ResolventOptions,
    ) -> Result<Self> {
        let k = rhs.k();
        let class = problem.classify(omega, k);
        if !class.resolvent {
            return Err(Error::NotResolvent {
                omega,
                note: class.branch.to_string(),
            });
        }
        let values = problem.values(omega)?;
        let k2 = Complex64::new(k * k, 0.0);
        let mu = [principal_sqrt(k2 - values.w_plus), principal_sqrt(k2 - values.w_minus)];
        if !(mu[0].re > 0.0 && mu[1].re > 0.0) {
            return Err(Error::Precondition("both decay rates need a positive real part".into()));
        }
        if !(opts.h.is_finite() && opts.h > 0.0) {
            return Err(Error::Precondition("grid step must be positive".into()));
        }
        let edge = rhs.support().map_or(0.0, |(a, b)| a.abs().max(b.abs()));
        let min_re = mu[0].re.min(mu[1].re);
        let half_length = match opts.half_length {
            Some(l) if l >= edge => l,
            Some(l) => {
                return Err(Error::Precondition(format!(
                    "half-length {l} does not cover the support edge {edge}"
                )))
            }
            None => (edge + (1.0 / TAIL).ln() / min_re).max(1.0),
        };
        let n = (half_length / opts.h).ceil() as usize;
        let rule = GaussLegendre::new(16);
        let signs = [1.0, -1.0];
        let r2 = [0, 1].map(|s| HalfLine::new(&rule, rhs.r2(), mu[s], opts.h, n, signs[s]));
        let r3 = [0, 1].map(|s| HalfLine::new(&rule, rhs.r3(), mu[s], opts.h, n, signs[s]));

        let (mp, mm) = (mu[0], mu[1]);
        let (ap, bm) = (r2[0].a[0], r2[1].a[0]);
        let c2 = if k == 0.0 {
            (ap + bm) / (mp + mm)
        } else {
            let (wp, wm) = (values.wt_plus, values.wt_minus);
            let r1 = rhs.r1(0.0);
            let denom = mp * mm * (wp * mm + wm * mp);
            ((wm * mp * mp - wp * mm * mm) * r1 / (I * k) + wp * mm * mm * ap + wm * mp * mp * bm) / denom
        };
        let c3 = (r3[0].a[0] + r3[1].a[0]) / (mp + mm);
        Ok(Self {
            omega,
            k,
            values,
            mu,
            h: opts.h,
            n,
            rhs: rhs.clone(),
            r2,
            r3,
            c2,
            c3,
        })
    }

    /// The interface constants that satisfy all five jump conditions.
    pub fn constants(&self) -> (Complex64, Complex64) {
        (self.c2, self.c3)
    }

    pub fn decay_rates(&self) -> (Complex64, Complex64) {
        (self.mu[0], self.mu[1])
    }

    /// Builds the sampled field for given `u₂(0) = c2`, `u₃(0) = c3`.
    pub fn assemble(&self, c2: Complex64, c3: Complex64) -> ResolventSolution {
        let n = self.n;
        let len = 2 * n + 2;
        let mut x = Vec::with_capacity(len);
        let mut u = Vec::with_capacity(len);
        let mut du2 = Vec::with_capacity(len);
        let mut du3 = Vec::with_capacity(len);
        let ik = I * self.k;
        let mut push = |s: usize, j: usize| {
            let sign = if s == 0 { 1.0 } else { -1.0 };
            let t = self.h * j as f64;
            let xx = sign * t;
            let mu = self.mu[s];
            let (v2, d2) = self.r2[s].eval(j, t, mu, c2);
            let (v3, d3) = self.r3[s].eval(j, t, mu, c3);
            let (d2, d3) = (sign * d2, sign * d3);
            let v1 = (self.rhs.r1(xx) - ik * d2) / (mu * mu);
            x.push(xx);
            u.push([v1, v2, v3]);
            du2.push(d2);
            du3.push(d3);
        };
        for j in (0..=n).rev() {
            push(1, j);
        }
        for j in 0..=n {
            push(0, j);
        }
        let mut sol = ResolventSolution {
            omega: self.omega,
            k: self.k,
            h: self.h,
            x,
            u,
            du2,
            du3,
            zero_left: n,
            c2,
            c3,
            residual_ode: 0.0,
            residual_interface: 0.0,
            norm_ratio: 0.0,
        };
        let report = verify_with(&sol, &self.rhs, &self.values);
        sol.residual_ode = report.max_ode();
        sol.residual_interface = report.max_jump();
        sol.norm_ratio = report.norm_ratio;
        sol
    }

    pub fn solve(&self) -> ResolventSolution {
        self.assemble(self.c2, self.c3)
    }
}

/// Solves `(T_k − W(ω)) u = r` for `ω` in the resolvent set.
pub fn solve(
    problem: &InterfaceProblem,
    omega: Complex64,
    rhs: &RhsField,
    opts: ResolventOptions,
) -> Result<ResolventSolution> {
    Ok(ResolventKernel::new(problem, omega, rhs, opts)?.solve())
}

/// ODE residuals in cell-integrated form (fourth order, using the
/// closed-form first derivatives), the five interface jumps, the divergence
/// and the norm ratio.
pub fn verify(sol: &ResolventSolution, rhs: &RhsField, problem: &InterfaceProblem) -> Result<VerifyReport> {
    let v = problem.values(sol.omega)?;
    Ok(verify_with(sol, rhs, &v))
}

fn verify_with(sol: &ResolventSolution, rhs: &RhsField, v: &SideValues) -> VerifyReport {
    let k = sol.k;
    let ik = I * k;
    let k2 = Complex64::new(k * k, 0.0);
    let h = sol.h;
    let n0 = sol.zero_left;
    let len = sol.x.len();
    let rule = GaussLegendre::new(16);
    let one = |_| Complex64::new(1.0, 0.0);

    // Each equation is integrated over [x_{i−1}, x_{i+1}] and divided by 2h:
    // derivatives become exact differences of the closed-form values,
    // Simpson handles the smooth terms and Gauss–Legendre the data.
    let mut ode = [0.0f64; 3];
    let mut divergence = 0.0f64;
    let mut flux: f64 = 0.0;
    let sides = [(1, n0.saturating_sub(1), v.w_minus), (n0 + 2, len.saturating_sub(2), v.w_plus)];
    for (lo, hi, w) in sides {
        for i in lo..=hi {
            let (a, b) = (sol.x[i - 1], sol.x[i + 1]);
            let simpson = |j: usize| (h / 3.0) * (sol.u[i - 1][j] + 4.0 * sol.u[i][j] + sol.u[i + 1][j]);
            let r = rhs.eval(sol.x[i]);
            let int_r2 = integrate_on(&rule, rhs.r2(), a, b, one);
            let int_r3 = integrate_on(&rule, rhs.r3(), a, b, one);
            let du1 = sol.u[i + 1][0] - sol.u[i - 1][0];
            let e1 = (k2 - w) * sol.u[i][0] + ik * sol.du2[i] - r[0];
            let e2 = ik * du1 - (sol.du2[i + 1] - sol.du2[i - 1]) - w * simpson(1) - int_r2;
            let e3 = -(sol.du3[i + 1] - sol.du3[i - 1]) + (k2 - w) * simpson(2) - int_r3;
            let div = du1 + ik * simpson(1);
            ode[0] = ode[0].max(e1.norm());
            ode[1] = ode[1].max(e2.norm() / (2.0 * h));
            ode[2] = ode[2].max(e3.norm() / (2.0 * h));
            divergence = divergence.max(div.norm() / (2.0 * h));
        }
    }
    if k != 0.0 {
        for i in 0..len {
            let w = if i <= n0 { v.w_minus } else { v.w_plus };
            let q = sol.du2[i] - ik * sol.u[i][0];
            let want = (w * sol.u[i][0] + rhs.r1(sol.x[i])) / ik;
            flux = flux.max((q - want).norm());
        }
    }

    let (l, r) = (n0, n0 + 1);
    let (ul, ur) = (sol.u[l], sol.u[r]);
    let jumps = [
        (v.wt_plus * ur[0] - v.wt_minus * ul[0]).norm(),
        (ur[1] - ul[1]).norm(),
        (ur[2] - ul[2]).norm(),
        ((sol.du2[r] - ik * ur[0]) - (sol.du2[l] - ik * ul[0])).norm(),
        (sol.du3[r] - sol.du3[l]).norm(),
    ];

    // trapezoid on each half-line
    let mut u2 = 0.0;
    for (a, b) in [(0, n0), (n0 + 1, len - 1)] {
        for i in a..b {
            let f = |j: usize| sol.u[j].iter().map(|c| c.norm_sqr()).sum::<f64>();
            u2 += 0.5 * h * (f(i) + f(i + 1));
        }
    }
    let u_norm = u2.sqrt();
    let r_norm = rhs.l2_norm();
    VerifyReport {
        ode,
        jumps,
        divergence,
        flux_identity: (k != 0.0).then_some(flux),
        r_norm,
        u_norm,
        norm_ratio: if r_norm > 0.0 { u_norm / r_norm } else { 0.0 },
    }
}

#[cfg(test)]
mod tests;
