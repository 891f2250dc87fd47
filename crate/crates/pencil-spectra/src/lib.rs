//! Command-line front end for `pencil-spectra-core`: TOML problem files,
//! spectral portraits, mode tables, resolvent solves and oracle checks,
//! written as CSV and SVG.

pub mod check;
pub mod cli;
pub mod config;
pub mod eigen;
pub mod io;
pub mod portrait;
pub mod svg;

pub use config::Config;
