//! Spectral classification of the Maxwell pencil for a planar interface
//! between two dispersive half-spaces.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command
//! line and parallel rasters live in the `pencil-spectra` crate.
//!
//! Float math goes through `num_traits::Float` (libm); when a std build
//! is in the graph the inherent methods win and those imports go unused.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod banded;
pub mod bump;
pub mod classify1d;
pub mod classify2d;
pub mod dielectric;
mod error;
pub mod fd_oracle;
pub mod modes;
pub mod numerics;
pub mod poly;
pub mod problem;
pub mod quad;
pub mod resolvent;

pub use classify1d::{Branch, SpectrumClass};
pub use dielectric::{DielectricModel, Side};
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use numerics::Tolerances;
pub use problem::{InterfaceProblem, Omega0Point, SideValues};
