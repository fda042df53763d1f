//! Line-based `key = value` configuration.
//!
//! ```text
//! # model, as dimensionless ratios (coupling = 1)
//! omega_over_epsilon = 10
//! gamma2_over_epsilon = 0.1
//! gamma1_over_gamma2 = 0.95
//! kT_over_omega = 0.01
//!
//! # single point for `extract` and `trajectory`
//! epsilon_tau = 7.82
//! theta_over_pi = 0.716
//! chi = 0
//!
//! [sweep]
//! epsilon_tau = 0.2, 10, 50     # start, stop, steps
//! theta_over_pi = 0, 1, 50
//! ```

use std::fmt;
use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: line {line}: {message}")]
    Syntax { path: String, line: usize, message: String },

    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid configuration: {0}")]
    Invalid(String),
}

/// A closed grid axis `start..=stop` with `steps` evenly spaced values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Axis {
    pub fn fixed(value: f64) -> Self {
        Self { start: value, stop: value, steps: 1 }
    }

    pub fn range(start: f64, stop: f64, steps: usize) -> Result<Self, String> {
        if !(start.is_finite() && stop.is_finite()) {
            return Err("range bounds must be finite".into());
        }
        if steps == 0 {
            return Err("steps must be at least 1".into());
        }
        if start > stop {
            return Err(format!("empty range: start {start} exceeds stop {stop}"));
        }
        if steps == 1 && start != stop {
            return Err("a single step needs start == stop".into());
        }
        Ok(Self { start, stop, steps })
    }

    /// Grid values, with both endpoints included exactly.
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * i as f64 / last
                }
            })
            .collect()
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.steps == 1 {
            write!(f, "{}", self.start)
        } else {
            write!(f, "{}, {}, {}", self.start, self.stop, self.steps)
        }
    }
}

/// Model constants as dimensionless ratios.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelRatios {
    pub omega_over_epsilon: f64,
    pub gamma2_over_epsilon: f64,
    pub gamma1_over_gamma2: f64,
    pub kt_over_omega: f64,
    /// Drop the bath entirely.
    pub ideal: bool,
}

impl Default for ModelRatios {
    fn default() -> Self {
        Self {
            omega_over_epsilon: 10.0,
            gamma2_over_epsilon: 0.1,
            gamma1_over_gamma2: 0.95,
            kt_over_omega: 0.0,
            ideal: false,
        }
    }
}

/// One grid point in the measurement parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub epsilon_tau: f64,
    pub theta_over_pi: f64,
    pub chi: f64,
    pub kt_over_omega: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub model: ModelRatios,
    pub epsilon_tau: f64,
    pub theta_over_pi: f64,
    pub chi: f64,
    pub sweep: SweepAxes,
    pub n_max: usize,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
}

/// Axes left as `None` fall back to the single-point value, except for
/// `epsilon_tau` and `theta_over_pi` which default to the full reference grid.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SweepAxes {
    pub epsilon_tau: Option<Axis>,
    pub theta_over_pi: Option<Axis>,
    pub chi: Option<Axis>,
    pub kt_over_omega: Option<Axis>,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            model: ModelRatios::default(),
            epsilon_tau: 1.0,
            theta_over_pi: 0.0,
            chi: 0.0,
            sweep: SweepAxes::default(),
            n_max: 50,
            workers: None,
            out: None,
        }
    }
}

pub const DEFAULT_EPSILON_TAU_AXIS: Axis = Axis { start: 0.2, stop: 10.0, steps: 50 };
pub const DEFAULT_THETA_AXIS: Axis = Axis { start: 0.0, stop: 1.0, steps: 50 };

impl Config {
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Parses configuration text; `origin` labels error messages.
    pub fn parse(text: &str, origin: &str) -> Result<Self, ConfigError> {
        let mut cfg = Config::default();
        let mut in_sweep = false;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let err = |message: String| ConfigError::Syntax { path: origin.to_string(), line, message };
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if content.starts_with('[') {
                match content {
                    "[sweep]" => in_sweep = true,
                    other => return Err(err(format!("unknown section {other}"))),
                }
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got `{content}`")))?;
            let (key, value) = (key.trim(), value.trim());
            if value.is_empty() {
                return Err(err(format!("missing value for `{key}`")));
            }
            if in_sweep {
                let axis = parse_axis(value).map_err(err)?;
                match key {
                    "epsilon_tau" => cfg.sweep.epsilon_tau = Some(axis),
                    "theta_over_pi" => cfg.sweep.theta_over_pi = Some(axis),
                    "chi" => cfg.sweep.chi = Some(axis),
                    "kT_over_omega" | "kt_over_omega" => cfg.sweep.kt_over_omega = Some(axis),
                    _ => return Err(err(format!("unknown sweep axis `{key}`"))),
                }
                continue;
            }
            match key {
                "omega_over_epsilon" => cfg.model.omega_over_epsilon = parse_f64(value).map_err(err)?,
                "gamma2_over_epsilon" => cfg.model.gamma2_over_epsilon = parse_f64(value).map_err(err)?,
                "gamma1_over_gamma2" => cfg.model.gamma1_over_gamma2 = parse_f64(value).map_err(err)?,
                "kT_over_omega" | "kt_over_omega" => cfg.model.kt_over_omega = parse_f64(value).map_err(err)?,
                "ideal" => cfg.model.ideal = parse_bool(value).map_err(err)?,
                "epsilon_tau" => cfg.epsilon_tau = parse_f64(value).map_err(err)?,
                "theta_over_pi" => cfg.theta_over_pi = parse_f64(value).map_err(err)?,
                "chi" => cfg.chi = parse_f64(value).map_err(err)?,
                "n_max" => cfg.n_max = parse_count(value).map_err(err)?,
                "workers" => cfg.workers = Some(parse_count(value).map_err(err)?),
                "out" => cfg.out = Some(PathBuf::from(value)),
                _ => return Err(err(format!("unknown key `{key}`"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks ranges that do not depend on where a value came from.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let m = &self.model;
        let positive = [
            ("omega_over_epsilon", m.omega_over_epsilon),
            ("epsilon_tau", self.epsilon_tau),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ConfigError::Invalid(format!("{name} must be positive, got {v}")));
            }
        }
        if m.omega_over_epsilon <= 1.0 {
            return Err(ConfigError::Invalid(format!(
                "omega_over_epsilon must exceed 1, got {}",
                m.omega_over_epsilon
            )));
        }
        let non_negative = [
            ("gamma2_over_epsilon", m.gamma2_over_epsilon),
            ("gamma1_over_gamma2", m.gamma1_over_gamma2),
            ("kT_over_omega", m.kt_over_omega),
        ];
        for (name, v) in non_negative {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(ConfigError::Invalid(format!("{name} must be non-negative, got {v}")));
            }
        }
        check_theta(self.theta_over_pi)?;
        check_chi(self.chi)?;
        if self.n_max == 0 {
            return Err(ConfigError::Invalid("n_max must be at least 1".into()));
        }
        if self.workers == Some(0) {
            return Err(ConfigError::Invalid("workers must be at least 1".into()));
        }
        let axes = self.axes();
        if axes.epsilon_tau.start <= 0.0 {
            return Err(ConfigError::Invalid("epsilon_tau axis must be positive".into()));
        }
        check_theta(axes.theta_over_pi.start)?;
        check_theta(axes.theta_over_pi.stop)?;
        check_chi(axes.chi.start)?;
        check_chi(axes.chi.stop)?;
        if axes.kt_over_omega.start < 0.0 {
            return Err(ConfigError::Invalid("kT_over_omega axis must be non-negative".into()));
        }
        Ok(())
    }

    /// The single point used by `extract` and `trajectory`.
    pub fn point(&self) -> Point {
        Point {
            epsilon_tau: self.epsilon_tau,
            theta_over_pi: self.theta_over_pi,
            chi: self.chi,
            kt_over_omega: self.model.kt_over_omega,
        }
    }

    /// Resolved sweep axes.
    pub fn axes(&self) -> ResolvedAxes {
        ResolvedAxes {
            epsilon_tau: self.sweep.epsilon_tau.unwrap_or(DEFAULT_EPSILON_TAU_AXIS),
            theta_over_pi: self.sweep.theta_over_pi.unwrap_or(DEFAULT_THETA_AXIS),
            chi: self.sweep.chi.unwrap_or(Axis::fixed(self.chi)),
            kt_over_omega: self.sweep.kt_over_omega.unwrap_or(Axis::fixed(self.model.kt_over_omega)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolvedAxes {
    pub epsilon_tau: Axis,
    pub theta_over_pi: Axis,
    pub chi: Axis,
    pub kt_over_omega: Axis,
}

fn check_theta(v: f64) -> Result<(), ConfigError> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(ConfigError::Invalid(format!("theta_over_pi must lie in [0, 1], got {v}")))
    }
}

fn check_chi(v: f64) -> Result<(), ConfigError> {
    if (0.0..std::f64::consts::TAU).contains(&v) {
        Ok(())
    } else {
        Err(ConfigError::Invalid(format!("chi must lie in [0, 2 pi), got {v}")))
    }
}

fn parse_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

fn parse_count(s: &str) -> Result<usize, String> {
    s.parse().map_err(|_| format!("`{s}` is not a non-negative integer"))
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(format!("`{s}` is not a boolean")),
    }
}

fn parse_axis(s: &str) -> Result<Axis, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [v] => Ok(Axis::fixed(parse_f64(v)?)),
        [a, b, n] => Axis::range(parse_f64(a)?, parse_f64(b)?, parse_count(n)?),
        _ => Err(format!("expected a value or `start, stop, steps`, got `{s}`")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_reference_ratios() {
        let c = Config::parse("", "mem").unwrap();
        assert_eq!(c.model, ModelRatios::default());
        let axes = c.axes();
        assert_eq!(axes.epsilon_tau.steps, 50);
        assert_eq!(axes.chi, Axis::fixed(0.0));
    }

    #[test]
    fn parses_sections_and_comments() {
        let text = "# header\nkT_over_omega = 0.01  # comment\nideal = true\n[sweep]\nepsilon_tau = 1, 2, 3\nkT_over_omega = 0.1\n";
        let c = Config::parse(text, "mem").unwrap();
        assert_eq!(c.model.kt_over_omega, 0.01);
        assert!(c.model.ideal);
        assert_eq!(c.axes().epsilon_tau.values(), vec![1.0, 1.5, 2.0]);
        assert_eq!(c.axes().kt_over_omega, Axis::fixed(0.1));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = Config::parse("chi = 0\nbogus = 1\n", "f.cfg").unwrap_err();
        assert_eq!(e.to_string(), "f.cfg: line 2: unknown key `bogus`");
        let e = Config::parse("\n\n[sweep]\ntheta_over_pi = 1, 0, 4\n", "f.cfg").unwrap_err();
        assert!(e.to_string().starts_with("f.cfg: line 4:"), "{e}");
        let e = Config::parse("epsilon_tau 3\n", "f.cfg").unwrap_err();
        assert!(e.to_string().contains("line 1"));
        assert!(Config::parse("[model]\n", "f").is_err());
    }

    #[test]
    fn rejects_out_of_range_values() {
        assert!(Config::parse("theta_over_pi = 1.5\n", "f").is_err());
        assert!(Config::parse("omega_over_epsilon = 0.5\n", "f").is_err());
        assert!(Config::parse("[sweep]\nchi = 0, 7, 3\n", "f").is_err());
        assert!(Config::parse("workers = 0\n", "f").is_err());
        assert!(Config::parse("[sweep]\nepsilon_tau = 1, 2, 0\n", "f").is_err());
    }

    #[test]
    fn axis_endpoints_are_exact() {
        let v = Axis::range(0.2, 10.0, 50).unwrap().values();
        assert_eq!(v.len(), 50);
        assert_eq!(v[0], 0.2);
        assert_eq!(v[49], 10.0);
    }
}
