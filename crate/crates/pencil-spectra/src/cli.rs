//! Argument parsing and command dispatch.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use pencil_spectra_core::resolvent::{self, ResolventOptions, RhsField};
use pencil_spectra_core::{Branch, InterfaceProblem, SpectrumClass};

use crate::check::{run_checks, standard_rhs};
use crate::config::Config;
use crate::eigen::{mode_table, sweep, KRange};
use crate::io;
use crate::portrait::{self, CellClass, Dim, GridSpec};
use crate::svg;

#[derive(Debug, Parser)]
#[command(name = "pencil-spectra", version, about = "Spectra of a planar dispersive interface")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Problem file (TOML).
    #[arg(long)]
    pub config: PathBuf,
    /// Wavenumber along the interface; overrides `k` in the config.
    #[arg(long)]
    pub k: Option<f64>,
    /// 1 for the reduced pencil at fixed k, 2 for the full problem.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub dim: u8,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify one frequency.
    Classify {
        #[command(flatten)]
        common: Common,
        /// `re,im`
        #[arg(long, allow_hyphen_values = true)]
        omega: String,
    },
    /// Classify a grid and write portrait.csv and portrait.svg.
    Trace {
        #[command(flatten)]
        common: Common,
        /// `re0:re1:nx,im0:im1:ny`
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads; all cores by default.
        #[arg(long)]
        workers: Option<usize>,
        /// Leave markers and curves out of the SVG.
        #[arg(long)]
        no_overlays: bool,
    },
    /// Write the plasmon modes at k, or along a k range, to modes.csv.
    Eigen {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, conflicts_with = "k_range")]
        k: Option<f64>,
        /// `a:b:n`
        #[arg(long)]
        k_range: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve the resolvent problem and write resolvent.csv.
    Resolve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        k: Option<f64>,
        /// `re,im`
        #[arg(long, allow_hyphen_values = true)]
        omega: String,
        /// CSV with columns x1, r2_re, r2_im, r3_re, r3_im.
        #[arg(long)]
        rhs: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Grid step of the sampled solution.
        #[arg(long, default_value_t = 1.0 / 128.0)]
        h: f64,
    },
    /// Run the oracle cross-checks; exit code 1 on any failure.
    Check {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        k: Option<f64>,
    },
}

/// Parses `re,im`.
pub fn parse_omega(s: &str) -> Result<Complex64> {
    let (a, b) = s.split_once(',').context("omega must look like re,im")?;
    let re: f64 = a.trim().parse().with_context(|| format!("bad real part `{a}`"))?;
    let im: f64 = b.trim().parse().with_context(|| format!("bad imaginary part `{b}`"))?;
    Ok(Complex64::new(re, im))
}

fn wavenumber(flag: Option<f64>, config: &Config) -> Result<f64> {
    match flag.or(config.k) {
        Some(k) if k.is_finite() && k >= 0.0 => Ok(k),
        Some(k) => bail!("k must be finite and non-negative, got {k}"),
        None => bail!("no wavenumber: pass --k or set `k` in {}", config.origin),
    }
}

fn dimension(common: &Common, config: &Config) -> Result<Dim> {
    Ok(match common.dim {
        2 => Dim::Two,
        _ => Dim::One {
            k: wavenumber(common.k, config)?,
        },
    })
}

/// Runs a parsed command, writing reports to `out`; returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Classify { common, omega } => {
            let config = Config::load(&common.config)?;
            let dim = dimension(&common, &config)?;
            let omega = parse_omega(&omega)?;
            let class = dim.classify(&config.problem, omega);
            writeln!(out, "{}", describe(&class))?;
            writeln!(out, "re,im,class,branch_note")?;
            writeln!(
                out,
                "{},{},{},{}",
                omega.re,
                omega.im,
                CellClass::of(&class).label(),
                class.branch
            )?;
            Ok(0)
        }
        Command::Trace {
            common,
            grid,
            out: dir,
            workers,
            no_overlays,
        } => {
            let config = Config::load(&common.config)?;
            let dim = dimension(&common, &config)?;
            let grid: GridSpec = grid.parse()?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers.unwrap_or(0))
                .build()?;
            let portrait = pool.install(|| portrait::trace(&config.problem, &grid, dim))?;
            fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
            io::write_portrait(create(&dir.join("portrait.csv"))?, &portrait)?;
            fs::write(dir.join("portrait.svg"), svg::render(&portrait, !no_overlays))
                .context("writing portrait.svg")?;
            for class in CellClass::ALL {
                writeln!(out, "{:>9}: {} cells", class.label(), portrait.count(class))?;
            }
            let o = &portrait.overlays;
            writeln!(
                out,
                "overlays: {} S, {} Omega0, {} N, {} boundary curves",
                o.s.len(),
                o.omega0.len(),
                o.n.len(),
                o.boundary.len()
            )?;
            if let Dim::One { k } = dim {
                report_ray_starts(out, &config.problem, k, &grid)?;
            }
            Ok(0)
        }
        Command::Eigen {
            config,
            k,
            k_range,
            out: dir,
        } => {
            let config = Config::load(&config)?;
            let rows = match k_range {
                Some(r) => sweep(&config.problem, &r.parse::<KRange>()?.values())?,
                None => {
                    let k = wavenumber(k, &config)?;
                    if k == 0.0 {
                        writeln!(out, "note: N^(0) is empty, no surface modes exist at k = 0")?;
                    }
                    mode_table(&config.problem, k)?
                }
            };
            fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
            io::write_modes(create(&dir.join("modes.csv"))?, &rows)?;
            writeln!(out, "{} modes", rows.len())?;
            for r in rows.iter().take(20) {
                writeln!(
                    out,
                    "branch {} k = {} omega = {} residual {:.1e} jump {:.1e}",
                    r.branch, r.k, r.omega, r.ode_residual, r.max_jump
                )?;
            }
            Ok(0)
        }
        Command::Resolve {
            config,
            k,
            omega,
            rhs,
            out: dir,
            h,
        } => {
            let config = Config::load(&config)?;
            let k = wavenumber(k, &config)?;
            let omega = parse_omega(&omega)?;
            let rhs = match rhs {
                Some(path) => {
                    let file = File::open(&path).with_context(|| format!("opening {}", path.display()))?;
                    let (r2, r3) = io::read_rhs(file)?;
                    RhsField::new(k, r2, r3)?
                }
                None => standard_rhs(k)?,
            };
            let opts = ResolventOptions {
                h,
                ..ResolventOptions::default()
            };
            let sol = resolvent::solve(&config.problem, omega, &rhs, opts)?;
            let report = resolvent::verify(&sol, &rhs, &config.problem)?;
            fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
            io::write_resolvent(create(&dir.join("resolvent.csv"))?, &sol)?;
            writeln!(out, "nodes {} on [-{}, {}]", sol.x.len(), sol.x[sol.x.len() - 1], sol.x[sol.x.len() - 1])?;
            writeln!(out, "||u||/||r|| = {:.6e}", report.norm_ratio)?;
            writeln!(out, "max ODE residual {:.3e}, max jump {:.3e}", report.max_ode(), report.max_jump())?;
            Ok(0)
        }
        Command::Check { config, k } => {
            let config = Config::load(&config)?;
            let k = k.or(config.k).unwrap_or(3.0);
            let reports = run_checks(&config.problem, k);
            let mut failed = 0;
            for r in &reports {
                writeln!(
                    out,
                    "{} {:<22} {:>8.2} s  {}",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.name,
                    r.elapsed.as_secs_f64(),
                    r.detail
                )?;
                failed += usize::from(!r.passed);
            }
            writeln!(out, "{} of {} suites passed", reports.len() - failed, reports.len())?;
            Ok(i32::from(failed > 0))
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("creating {}", path.display()))?,
    ))
}

fn report_ray_starts(out: &mut dyn Write, problem: &InterfaceProblem, k: f64, grid: &GridSpec) -> Result<()> {
    let hi = grid.re[0].abs().max(grid.re[1].abs());
    for side in [pencil_spectra_core::Side::Plus, pencil_spectra_core::Side::Minus] {
        if let Some(x) = portrait::real_ray_start(problem, side, k, 0.0, hi) {
            let tag = if side == pencil_spectra_core::Side::Plus { "M+" } else { "M-" };
            writeln!(out, "{tag} meets the positive real axis from {x:.8}")?;
        }
    }
    Ok(())
}

/// One human-readable line for a classification.
pub fn describe(c: &SpectrumClass) -> String {
    match c.branch {
        Branch::Pole { plus, minus } => {
            let which = match (plus, minus) {
                (true, true) => "W̃+ and W̃-",
                (true, false) => "W̃+",
                _ => "W̃-",
            };
            format!("outside D(W̃): pole of {which}")
        }
        Branch::Regular { m_plus, m_minus, n } => {
            if c.resolvent {
                return "resolvent".into();
            }
            let mut via = Vec::new();
            if m_plus {
                via.push("M+");
            }
            if m_minus {
                via.push("M-");
            }
            if n && c.essential[4] {
                via.push("N");
            }
            if c.discrete {
                "discrete eigenvalue (N)".into()
            } else {
                format!("essential (Weyl, e1–e5) via {}", via.join(" and "))
            }
        }
        Branch::Exceptional { .. } => {
            let ess: Vec<String> = c
                .essential
                .iter()
                .enumerate()
                .filter(|(_, &e)| e)
                .map(|(i, _)| format!("e{}", i + 1))
                .collect();
            let mut parts = vec![format!("exceptional set Omega0 ({})", c.branch)];
            if c.point_finite {
                parts.push("eigenvalue of finite multiplicity".into());
            }
            if c.point_infinite {
                parts.push("eigenvalue of infinite multiplicity".into());
            }
            if c.weyl {
                parts.push("Weyl".into());
            }
            if ess.is_empty() {
                parts.push("not essential".into());
            } else {
                parts.push(format!("essential {}", ess.join(" ")));
            }
            parts.join(", ")
        }
    }
}
