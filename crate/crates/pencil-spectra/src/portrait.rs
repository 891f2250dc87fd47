//! Spectral portraits: a raster of classified cells over a rectangle in the
//! ω-plane plus the point and curve overlays.
//!
//! A cell is the rectangle around a grid node. Its class is the highest of
//! the center classification, the point sets that fall inside it, and the
//! ray or curve sets that cross one of its edges. Curve sets have no area,
//! so a node-only raster would miss them.

use std::fmt;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use pencil_spectra_core::dielectric::ModelKind;
use pencil_spectra_core::{Branch, InterfaceProblem, Side, SpectrumClass};
use rayon::prelude::*;

/// `re0:re1:nx,im0:im1:ny`, both ranges inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub re: [f64; 2],
    pub im: [f64; 2],
    pub nx: usize,
    pub ny: usize,
}

impl FromStr for GridSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(',')
            .context("grid must look like re0:re1:nx,im0:im1:ny")?;
        let (re, nx) = parse_range(a).context("real range")?;
        let (im, ny) = parse_range(b).context("imaginary range")?;
        Ok(Self { re, im, nx, ny })
    }
}

fn parse_range(s: &str) -> Result<([f64; 2], usize)> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        bail!("expected lo:hi:n, got `{s}`");
    }
    let lo: f64 = parts[0].trim().parse().with_context(|| format!("bad number `{}`", parts[0]))?;
    let hi: f64 = parts[1].trim().parse().with_context(|| format!("bad number `{}`", parts[1]))?;
    let n: usize = parts[2].trim().parse().with_context(|| format!("bad count `{}`", parts[2]))?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        bail!("need finite lo < hi, got {lo}:{hi}");
    }
    if n < 2 {
        bail!("need at least two nodes, got {n}");
    }
    Ok(([lo, hi], n))
}

impl GridSpec {
    pub fn dx(&self) -> f64 {
        (self.re[1] - self.re[0]) / (self.nx - 1) as f64
    }

    pub fn dy(&self) -> f64 {
        (self.im[1] - self.im[0]) / (self.ny - 1) as f64
    }

    pub fn node(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(
            self.re[0] + i as f64 * self.dx(),
            self.im[0] + j as f64 * self.dy(),
        )
    }

    /// Lower-left corner of cell `(i, j)`; corners run to `(nx, ny)`.
    fn corner(&self, i: usize, j: usize) -> Complex64 {
        self.node(i, j) - Complex64::new(0.5 * self.dx(), 0.5 * self.dy())
    }

    /// Cell holding `z`, if `z` is inside the padded rectangle.
    pub fn cell_of(&self, z: Complex64) -> Option<(usize, usize)> {
        let fi = ((z.re - self.re[0]) / self.dx() + 0.5).floor();
        let fj = ((z.im - self.im[0]) / self.dy() + 0.5).floor();
        if fi < 0.0 || fj < 0.0 || fi >= self.nx as f64 || fj >= self.ny as f64 {
            return None;
        }
        Some((fi as usize, fj as usize))
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.cell_of(z).is_some()
    }
}

/// Portrait dimension: the reduced 1D pencil at fixed `k`, or the 2D problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Dim {
    One { k: f64 },
    Two,
}

impl Dim {
    pub fn classify(&self, problem: &InterfaceProblem, omega: Complex64) -> SpectrumClass {
        match *self {
            Dim::One { k } => problem.classify(omega, k),
            Dim::Two => problem.classify2(omega),
        }
    }
}

/// Raster class, in increasing precedence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CellClass {
    Resolvent,
    N,
    MPlus,
    MMinus,
    Omega0,
    S,
}

impl CellClass {
    pub const ALL: [CellClass; 6] = [
        CellClass::Resolvent,
        CellClass::N,
        CellClass::MPlus,
        CellClass::MMinus,
        CellClass::Omega0,
        CellClass::S,
    ];

    pub fn label(self) -> &'static str {
        match self {
            CellClass::Resolvent => "resolvent",
            CellClass::N => "N",
            CellClass::MPlus => "M+",
            CellClass::MMinus => "M-",
            CellClass::Omega0 => "Omega0",
            CellClass::S => "S",
        }
    }

    /// Dominant class of a pointwise classification.
    pub fn of(class: &SpectrumClass) -> Self {
        match class.branch {
            Branch::Pole { .. } => CellClass::S,
            Branch::Exceptional { .. } => CellClass::Omega0,
            Branch::Regular { m_minus: true, .. } => CellClass::MMinus,
            Branch::Regular { m_plus: true, .. } => CellClass::MPlus,
            Branch::Regular { n: true, .. } => CellClass::N,
            Branch::Regular { .. } => CellClass::Resolvent,
        }
    }
}

impl fmt::Display for CellClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub re: f64,
    pub im: f64,
    pub class: CellClass,
    /// Branch of the center classification, plus what raised the class.
    pub note: String,
}

/// A closed-form `Im W = 0` curve of a Drude side, kept where `W` lies in
/// the ray.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCurve {
    pub side: Side,
    pub points: Vec<Complex64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overlays {
    pub s: Vec<Complex64>,
    pub omega0: Vec<Complex64>,
    pub n: Vec<Complex64>,
    pub boundary: Vec<BoundaryCurve>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Portrait {
    pub grid: GridSpec,
    pub dim: Dim,
    /// Row-major from the lowest `im`: index `j * nx + i`.
    pub cells: Vec<Cell>,
    pub overlays: Overlays,
}

impl Portrait {
    pub fn cell(&self, i: usize, j: usize) -> &Cell {
        &self.cells[j * self.grid.nx + i]
    }

    pub fn count(&self, class: CellClass) -> usize {
        self.cells.iter().filter(|c| c.class == class).count()
    }
}

/// Classifies every cell of `grid` on the current rayon pool.
pub fn trace(problem: &InterfaceProblem, grid: &GridSpec, dim: Dim) -> Result<Portrait> {
    let overlays = overlays(problem, grid, dim)?;
    let (nx, ny) = (grid.nx, grid.ny);

    // sign data on the cell corners, shared by neighbouring cells
    let corners: Vec<Complex64> = (0..=ny)
        .flat_map(|j| (0..=nx).map(move |i| (i, j)))
        .map(|(i, j)| grid.corner(i, j))
        .collect();
    let curves = curve_sets(dim);
    let corner_g: Vec<Vec<Option<f64>>> = corners
        .par_iter()
        .map(|&z| curves.iter().map(|c| c.g(problem, z)).collect())
        .collect();

    let mut marks = vec![CellClass::Resolvent; nx * ny];
    for (set, class) in [
        (&overlays.n, CellClass::N),
        (&overlays.omega0, CellClass::Omega0),
        (&overlays.s, CellClass::S),
    ] {
        for &z in set {
            if let Some((i, j)) = grid.cell_of(z) {
                let m = &mut marks[j * nx + i];
                *m = (*m).max(class);
            }
        }
    }

    let cells = (0..nx * ny)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx % nx, idx / nx);
            let z = grid.node(i, j);
            let center = dim.classify(problem, z);
            let mut class = CellClass::of(&center);
            let mut note = center.branch.to_string();
            if marks[idx] > class {
                class = marks[idx];
                note.push_str("; point ");
                note.push_str(class.label());
            }
            let cid = |a: usize, b: usize| b * (nx + 1) + a;
            let edges = [
                (cid(i, j), cid(i + 1, j)),
                (cid(i, j + 1), cid(i + 1, j + 1)),
                (cid(i, j), cid(i, j + 1)),
                (cid(i + 1, j), cid(i + 1, j + 1)),
            ];
            for (c, curve) in curves.iter().enumerate() {
                if curve.class <= class {
                    continue;
                }
                let hit = edges.iter().any(|&(a, b)| {
                    curve.crosses(problem, corners[a], corners[b], corner_g[a][c], corner_g[b][c])
                });
                if hit {
                    class = curve.class;
                    note.push_str("; crosses ");
                    note.push_str(class.label());
                }
            }
            Cell {
                re: z.re,
                im: z.im,
                class,
                note,
            }
        })
        .collect();
    Ok(Portrait {
        grid: *grid,
        dim,
        cells,
        overlays,
    })
}

/// A set of the form `{g = 0} ∩ {predicate}` with `g` real.
struct CurveSet {
    class: CellClass,
    kind: CurveKind,
    dim: Dim,
}

#[derive(Clone, Copy)]
enum CurveKind {
    /// `Im W_side`; members lie in the ray.
    Ray(Side),
    /// `Im(W₊W₋/(W₊+W₋))` in 2D.
    Interface,
}

fn curve_sets(dim: Dim) -> Vec<CurveSet> {
    let mut v = vec![
        CurveSet {
            class: CellClass::MPlus,
            kind: CurveKind::Ray(Side::Plus),
            dim,
        },
        CurveSet {
            class: CellClass::MMinus,
            kind: CurveKind::Ray(Side::Minus),
            dim,
        },
    ];
    if dim == Dim::Two {
        v.push(CurveSet {
            class: CellClass::N,
            kind: CurveKind::Interface,
            dim,
        });
    }
    v
}

impl CurveSet {
    fn g(&self, problem: &InterfaceProblem, z: Complex64) -> Option<f64> {
        let v = problem.values(z).ok()?;
        let g = match self.kind {
            CurveKind::Ray(side) => v.w(side).im,
            CurveKind::Interface => (v.w_plus * v.w_minus / (v.w_plus + v.w_minus)).im,
        };
        g.is_finite().then_some(g)
    }

    fn member(&self, problem: &InterfaceProblem, z: Complex64) -> bool {
        match (self.kind, self.dim) {
            (CurveKind::Ray(side), Dim::One { k }) => problem.in_m(side, z, k).unwrap_or(false),
            (CurveKind::Ray(side), Dim::Two) => problem.in_m2(side, z).unwrap_or(false),
            (CurveKind::Interface, _) => problem.in_n2(z).map(|n| n.member).unwrap_or(false),
        }
    }

    /// Finds a zero of `g` on the segment `[a, b]` by bisection and tests
    /// membership there.
    fn crosses(
        &self,
        problem: &InterfaceProblem,
        a: Complex64,
        b: Complex64,
        ga: Option<f64>,
        gb: Option<f64>,
    ) -> bool {
        let (Some(ga), Some(gb)) = (ga, gb) else {
            return false;
        };
        if ga == 0.0 && gb == 0.0 {
            return [a, (a + b) * 0.5, b].iter().any(|&z| self.member(problem, z));
        }
        if ga == 0.0 {
            return self.member(problem, a);
        }
        if gb == 0.0 {
            return self.member(problem, b);
        }
        if ga.signum() == gb.signum() {
            return false;
        }
        let (mut lo, mut hi) = (a, b);
        let mut glo = ga;
        for _ in 0..80 {
            let mid = (lo + hi) * 0.5;
            if mid == lo || mid == hi {
                break;
            }
            match self.g(problem, mid) {
                Some(0.0) => return self.member(problem, mid),
                Some(gm) if gm.signum() == glo.signum() => {
                    lo = mid;
                    glo = gm;
                }
                Some(_) => hi = mid,
                None => return false,
            }
        }
        self.member(problem, lo) || self.member(problem, hi)
    }
}

/// Point overlays and Drude boundary curves inside the padded grid.
pub fn overlays(problem: &InterfaceProblem, grid: &GridSpec, dim: Dim) -> Result<Overlays> {
    let mut out = Overlays::default();
    if let Ok(s) = problem.singular_set() {
        out.s = s.into_iter().map(|(z, _)| z).filter(|&z| grid.contains(z)).collect();
        dedup(&mut out.s);
    }
    if let Ok(set) = problem.omega0_set() {
        out.omega0 = set.iter().map(|p| p.omega).filter(|&z| grid.contains(z)).collect();
    }
    let rational = problem.plus.is_rational() && problem.minus.is_rational();
    if rational {
        out.n = match dim {
            Dim::One { k } => problem
                .eigen_omegas(k)
                .context("mode search")?
                .into_iter()
                .map(|m| m.omega)
                .filter(|&z| grid.contains(z))
                .collect(),
            Dim::Two => n2_sweep(problem, grid)?,
        };
    }
    for side in [Side::Plus, Side::Minus] {
        out.boundary.extend(drude_boundary(problem, side, grid, dim));
    }
    Ok(out)
}

/// Points of the 2D eigenvalue set from roots of `k²(W₊+W₋) = W₊W₋` over a
/// geometric sweep of `a = k²`, filtered by the 2D test.
fn n2_sweep(problem: &InterfaceProblem, grid: &GridSpec) -> Result<Vec<Complex64>> {
    const SAMPLES: usize = 400;
    let (k_lo, k_hi): (f64, f64) = (1e-2, 1e2);
    let ks: Vec<f64> = (0..SAMPLES)
        .map(|i| k_lo * (k_hi / k_lo).powf(i as f64 / (SAMPLES - 1) as f64))
        .collect();
    let found: Vec<Vec<Complex64>> = ks
        .par_iter()
        .map(|&k| -> Result<Vec<Complex64>> {
            let p = problem.dispersion_poly(k)?;
            if p.is_zero() {
                return Ok(Vec::new());
            }
            Ok(p.roots(&problem.tol)?
                .into_iter()
                .map(|r| r.value)
                .filter(|&z| grid.contains(z))
                .filter(|&z| problem.in_n2(z).map(|n| n.member).unwrap_or(false))
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

/// Closed-form `Im W = 0` locus of a Drude side off the imaginary axis:
/// `Re ω = ±√(−πω_p²γ/(b s) − (s+γ)²)` at `Im ω = s < 0`, split into
/// polylines where `W` lies in the ray.
pub fn drude_boundary(
    problem: &InterfaceProblem,
    side: Side,
    grid: &GridSpec,
    dim: Dim,
) -> Vec<BoundaryCurve> {
    const SAMPLES: usize = 2000;
    let model = problem.model(side);
    let ModelKind::Drude {
        omega_p,
        gamma,
        background,
    } = *model.kind()
    else {
        return Vec::new();
    };
    if gamma <= 0.0 || background <= 0.0 {
        return Vec::new();
    }
    let top = grid.im[1].min(0.0);
    if grid.im[0] >= top {
        return Vec::new();
    }
    let in_set = |z: Complex64| match dim {
        Dim::One { k } => problem.in_m(side, z, k).unwrap_or(false),
        Dim::Two => problem.in_m2(side, z).unwrap_or(false),
    };
    let mut curves = Vec::new();
    for sign in [1.0, -1.0] {
        let mut current: Vec<Complex64> = Vec::new();
        for i in 0..SAMPLES {
            let s = grid.im[0] + (top - grid.im[0]) * (i as f64 + 0.5) / SAMPLES as f64;
            let rad = -core::f64::consts::PI * omega_p * omega_p * gamma / (background * s)
                - (s + gamma) * (s + gamma);
            let z = (rad > 0.0).then(|| Complex64::new(sign * rad.sqrt(), s));
            match z.filter(|&z| grid.contains(z) && in_set(z)) {
                Some(z) => current.push(z),
                None => {
                    if current.len() > 1 {
                        curves.push(BoundaryCurve {
                            side,
                            points: std::mem::take(&mut current),
                        });
                    }
                    current.clear();
                }
            }
        }
        if current.len() > 1 {
            curves.push(BoundaryCurve {
                side,
                points: current,
            });
        }
    }
    curves
}

fn dedup(v: &mut Vec<Complex64>) {
    let mut out: Vec<Complex64> = Vec::with_capacity(v.len());
    for &z in v.iter() {
        if !out.iter().any(|&w| (w - z).norm() <= 1e-12 * z.norm().max(1.0)) {
            out.push(z);
        }
    }
    *v = out;
}

/// Smallest `x ∈ [lo, hi]` with `x ∈ M_side^(k)` on the real axis, by
/// bisection, assuming membership is monotone on the interval.
pub fn real_ray_start(
    problem: &InterfaceProblem,
    side: Side,
    k: f64,
    lo: f64,
    hi: f64,
) -> Option<f64> {
    let member = |x: f64| problem.in_m(side, Complex64::new(x, 0.0), k).unwrap_or(false);
    if member(lo) || !member(hi) {
        return None;
    }
    let (mut a, mut b) = (lo, hi);
    while b - a > 1e-14 * b.abs().max(1.0) {
        let m = 0.5 * (a + b);
        if member(m) {
            b = m;
        } else {
            a = m;
        }
    }
    Some(0.5 * (a + b))
}
