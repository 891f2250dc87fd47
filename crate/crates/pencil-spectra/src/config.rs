//! TOML problem files and the tolerance override from the environment.
//!
//! ```toml
//! k = 3.0
//!
//! [plus]
//! kind = "constant"
//! value = 2.0
//!
//! [minus]
//! kind = "drude"
//! omega_p = 0.8
//! gamma = 1.0
//!
//! [tolerances]
//! equality_tol = 1e-9
//! ```

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use pencil_spectra_core::poly::Poly;
use pencil_spectra_core::{DielectricModel, Error as CoreError, InterfaceProblem, Tolerances};
use serde::Deserialize;

/// Environment variable holding `key=value` tolerance overrides.
pub const TOL_ENV: &str = "PENCIL_SPECTRA_TOL";

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{origin}: {source}")]
    Parse {
        origin: String,
        source: toml::de::Error,
    },
    #[error("{origin}: `{key}`: {reason}")]
    Invalid {
        origin: String,
        key: String,
        reason: String,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    k: Option<f64>,
    plus: RawModel,
    minus: RawModel,
    tolerances: Option<RawTolerances>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum RawModel {
    Constant {
        value: f64,
        #[serde(default)]
        value_im: f64,
        #[serde(default = "one")]
        scale: f64,
    },
    Drude {
        omega_p: f64,
        gamma: f64,
        #[serde(default = "one")]
        background: f64,
        #[serde(default = "one")]
        scale: f64,
    },
    Rational {
        num: Vec<Coefficient>,
        den: Vec<Coefficient>,
        #[serde(default = "one")]
        scale: f64,
    },
}

fn one() -> f64 {
    1.0
}

/// A real coefficient or a `[re, im]` pair.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
enum Coefficient {
    Real(f64),
    Complex([f64; 2]),
}

impl From<Coefficient> for Complex64 {
    fn from(c: Coefficient) -> Self {
        match c {
            Coefficient::Real(r) => Complex64::new(r, 0.0),
            Coefficient::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTolerances {
    ray_imag_tol: Option<f64>,
    ray_real_tol: Option<f64>,
    root_residual_tol: Option<f64>,
    equality_tol: Option<f64>,
}

/// A loaded problem file.
#[derive(Debug, Clone)]
pub struct Config {
    pub origin: String,
    pub problem: InterfaceProblem,
    pub k: Option<f64>,
}

impl Config {
    /// Reads a file and applies `PENCIL_SPECTRA_TOL` if set.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let origin = path.display().to_string();
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: origin.clone(),
            source,
        })?;
        let env = std::env::var(TOL_ENV).ok();
        Self::parse(&text, &origin, env.as_deref())
    }

    /// Parses `text`; `overrides` uses the `PENCIL_SPECTRA_TOL` syntax.
    pub fn parse(text: &str, origin: &str, overrides: Option<&str>) -> Result<Self, ConfigError> {
        let raw: RawConfig = toml::from_str(text).map_err(|source| ConfigError::Parse {
            origin: origin.to_string(),
            source,
        })?;
        let invalid = |key: &str, reason: String| ConfigError::Invalid {
            origin: origin.to_string(),
            key: key.to_string(),
            reason,
        };
        let mut tol = Tolerances::default();
        if let Some(t) = raw.tolerances {
            for (key, value, slot) in [
                ("ray_imag_tol", t.ray_imag_tol, &mut tol.ray_imag_tol),
                ("ray_real_tol", t.ray_real_tol, &mut tol.ray_real_tol),
                ("root_residual_tol", t.root_residual_tol, &mut tol.root_residual_tol),
                ("equality_tol", t.equality_tol, &mut tol.equality_tol),
            ] {
                if let Some(v) = value {
                    check_tolerance(v).map_err(|r| invalid(&format!("tolerances.{key}"), r))?;
                    *slot = v;
                }
            }
        }
        if let Some(spec) = overrides {
            tol = apply_overrides(tol, spec).map_err(|(key, reason)| ConfigError::Invalid {
                origin: TOL_ENV.to_string(),
                key,
                reason,
            })?;
        }
        if let Some(k) = raw.k {
            if !(k.is_finite() && k >= 0.0) {
                return Err(invalid("k", format!("must be finite and non-negative, got {k}")));
            }
        }
        let plus = build_model(raw.plus).map_err(|(f, r)| invalid(&format!("plus.{f}"), r))?;
        let minus = build_model(raw.minus).map_err(|(f, r)| invalid(&format!("minus.{f}"), r))?;
        let problem = InterfaceProblem::with_tolerances(plus, minus, tol)
            .map_err(|e| invalid("plus/minus", e.to_string()))?;
        Ok(Self {
            origin: origin.to_string(),
            problem,
            k: raw.k,
        })
    }
}

fn check_tolerance(v: f64) -> Result<(), String> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(format!("must be finite and non-negative, got {v}"))
    }
}

/// Applies `key=value` pairs separated by commas, semicolons or spaces.
pub fn apply_overrides(mut tol: Tolerances, spec: &str) -> Result<Tolerances, (String, String)> {
    for item in spec
        .split(|c: char| c == ',' || c == ';' || c.is_whitespace())
        .filter(|s| !s.is_empty())
    {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| (item.to_string(), "expected key=value".to_string()))?;
        let key = key.trim();
        let v: f64 = value
            .trim()
            .parse()
            .map_err(|e| (key.to_string(), format!("not a number: {e}")))?;
        check_tolerance(v).map_err(|r| (key.to_string(), r))?;
        let slot = match key {
            "ray_imag_tol" => &mut tol.ray_imag_tol,
            "ray_real_tol" => &mut tol.ray_real_tol,
            "root_residual_tol" => &mut tol.root_residual_tol,
            "equality_tol" => &mut tol.equality_tol,
            other => return Err((other.to_string(), "unknown tolerance".to_string())),
        };
        *slot = v;
    }
    Ok(tol)
}

fn build_model(raw: RawModel) -> Result<DielectricModel, (String, String)> {
    let core = |e: CoreError| match e {
        CoreError::InvalidModel { field, reason } => (field.to_string(), reason),
        other => ("kind".to_string(), other.to_string()),
    };
    let (model, scale) = match raw {
        RawModel::Constant {
            value,
            value_im,
            scale,
        } => (DielectricModel::constant(Complex64::new(value, value_im)).map_err(core)?, scale),
        RawModel::Drude {
            omega_p,
            gamma,
            background,
            scale,
        } => (
            DielectricModel::drude_with_background(omega_p, gamma, background).map_err(core)?,
            scale,
        ),
        RawModel::Rational { num, den, scale } => {
            let poly = |c: Vec<Coefficient>| Poly::new(c.into_iter().map(Complex64::from).collect());
            (DielectricModel::rational(poly(num), poly(den)).map_err(core)?, scale)
        }
    };
    model.with_scale(scale).map_err(core)
}

#[cfg(test)]
mod tests {
    use super::*;

    const DRUDE: &str = r#"
k = 3.0

[plus]
kind = "constant"
value = 2.0

[minus]
kind = "drude"
omega_p = 0.8
gamma = 1.0
"#;

    #[test]
    fn parses_the_drude_example() {
        let c = Config::parse(DRUDE, "drude.toml", None).unwrap();
        assert_eq!(c.k, Some(3.0));
        assert_eq!(c.problem.omega0_set().unwrap().len(), 2);
    }

    #[test]
    fn unknown_keys_are_named_with_their_line() {
        let text = DRUDE.replace("gamma = 1.0", "gama = 1.0");
        let e = Config::parse(&text, "bad.toml", None).unwrap_err().to_string();
        assert!(e.contains("gama"), "{e}");
        assert!(e.contains("line"), "{e}");
    }

    #[test]
    fn invalid_values_name_the_key() {
        let text = DRUDE.replace("omega_p = 0.8", "omega_p = -0.8");
        let e = Config::parse(&text, "bad.toml", None).unwrap_err().to_string();
        assert!(e.contains("minus.omega_p"), "{e}");
        let text = format!("{DRUDE}\n[tolerances]\nequality_tol = -1.0\n");
        let e = Config::parse(&text, "bad.toml", None).unwrap_err().to_string();
        assert!(e.contains("tolerances.equality_tol"), "{e}");
    }

    #[test]
    fn rational_coefficients_accept_pairs() {
        let text = r#"
[plus]
kind = "rational"
num = [1.0, [0.0, 1.0]]
den = [1.0]

[minus]
kind = "constant"
value = 1.0
"#;
        let c = Config::parse(text, "r.toml", None).unwrap();
        let w = c.problem.plus.wtilde(Complex64::new(2.0, 0.0)).unwrap();
        assert!((w - Complex64::new(2.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn environment_overrides() {
        let c = Config::parse(DRUDE, "drude.toml", Some("ray_imag_tol=1e-6, equality_tol=1e-7")).unwrap();
        assert_eq!(c.problem.tol.ray_imag_tol, 1e-6);
        assert_eq!(c.problem.tol.equality_tol, 1e-7);
        let e = Config::parse(DRUDE, "drude.toml", Some("nonsense=1")).unwrap_err().to_string();
        assert!(e.contains("nonsense") && e.contains(TOL_ENV), "{e}");
    }
}
