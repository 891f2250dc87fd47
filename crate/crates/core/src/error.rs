use alloc::string::String;

use num_complex::Complex64;

use crate::dielectric::Side;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("polynomial is identically zero")]
    ZeroPolynomial,

    #[error("root finder did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("invalid model parameter `{field}`: {reason}")]
    InvalidModel { field: &'static str, reason: String },

    #[error("omega = {omega} is a pole of the {side} permittivity")]
    Singular { omega: Complex64, side: Side },

    #[error("operation needs a rational model: {0}")]
    UnsupportedModel(&'static str),

    #[error("omega = {omega} lies in the exceptional set where W vanishes")]
    InExceptionalSet { omega: Complex64 },

    #[error("dispersion relation vanishes identically for k = {k}")]
    DegenerateDispersion { k: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("omega = {omega} is not in the resolvent set ({note})")]
    NotResolvent { omega: Complex64, note: String },

    #[error("linear system is numerically singular at pivot {pivot}")]
    SingularSystem { pivot: usize },
}
