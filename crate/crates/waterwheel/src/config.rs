//! Scenario configuration: defaults, flat key-value config files, and the
//! precedence rules (defaults, then file, then CLI flags).
//!
//! The file format is one `key = value` pair per line with dotted keys
//! (`integrator.step = 1e-3`); `#` starts a comment. Forcing overrides take
//! a JSON expression description (kind, numeric parameters, children).

use crate::diagnostics::LyapunovOptions;
use crate::forcing::TimeFunction;
use crate::integrate::{IntegratorOptions, Method};
use crate::models::ScenarioKind;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid {what}: {message}")]
    Invalid { what: String, message: String },
}

/// Region-classification grid settings (the (x, z) snapshot).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionOptions {
    pub x_range: (f64, f64),
    pub z_range: (f64, f64),
    pub n: usize,
    pub snapshot_tau: f64,
}

impl Default for RegionOptions {
    fn default() -> Self {
        RegionOptions {
            x_range: (-30.0, 30.0),
            z_range: (-10.0, 110.0),
            n: 601,
            snapshot_tau: 5.0,
        }
    }
}

/// Which artifact files a run writes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutputFlags {
    pub trajectory: bool,
    pub g_series: bool,
    pub events: bool,
    pub region: bool,
    pub summary: bool,
}

impl Default for OutputFlags {
    fn default() -> Self {
        OutputFlags {
            trajectory: true,
            g_series: true,
            events: true,
            region: true,
            summary: true,
        }
    }
}

/// Optional replacements for the built-in inflow profile.
#[derive(Debug, Clone, Default)]
pub struct ForcingOverrides {
    pub r: Option<TimeFunction>,
    pub mu: Option<TimeFunction>,
    pub p2: Option<TimeFunction>,
    pub q2: Option<TimeFunction>,
}

/// Everything one scenario run needs.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub kind: ScenarioKind,
    pub x0: f64,
    pub t_end: f64,
    pub integrator: IntegratorOptions,
    pub epsilon: f64,
    pub region: RegionOptions,
    pub lyapunov: LyapunovOptions,
    pub out_dir: PathBuf,
    pub outputs: OutputFlags,
    pub forcing: ForcingOverrides,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            kind: ScenarioKind::UnsteadyAsymmetric,
            x0: 1.0,
            t_end: 60.0,
            integrator: IntegratorOptions::default(),
            epsilon: 0.5,
            region: RegionOptions::default(),
            lyapunov: LyapunovOptions {
                transient: 20.0,
                ..LyapunovOptions::default()
            },
            out_dir: PathBuf::from("out"),
            outputs: OutputFlags::default(),
            forcing: ForcingOverrides::default(),
        }
    }
}

impl ScenarioConfig {
    /// Overlay `key = value` pairs from a config file.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Parse {
                path: path.to_path_buf(),
                line: line_no,
                message: format!("expected 'key = value', got '{raw}'"),
            })?;
            self.set(key.trim(), value.trim())
                .map_err(|message| ConfigError::Parse {
                    path: path.to_path_buf(),
                    line: line_no,
                    message,
                })?;
        }
        Ok(())
    }

    /// Set one dotted key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "scenario" => self.kind = value.parse()?,
            "x0" => self.x0 = parse_f64(value)?,
            "t-end" => {
                let t = parse_f64(value)?;
                if !(t > 0.0) {
                    return Err(format!("t-end must be positive, got {value}"));
                }
                self.t_end = t;
            }
            "epsilon" => {
                let e = parse_f64(value)?;
                if !(e > 0.0) {
                    return Err(format!("epsilon must be positive, got {value}"));
                }
                self.epsilon = e;
            }
            "out" => self.out_dir = PathBuf::from(value),
            "integrator.method" => self.set_method(value)?,
            "integrator.step" => {
                let step = parse_positive(value, "integrator.step")?;
                self.integrator.method = Method::Rk4Fixed { step };
            }
            "integrator.rtol" => {
                let (_, atol) = self.adaptive_tols();
                self.integrator.method = Method::Rk45Adaptive {
                    rel_tol: parse_positive(value, "integrator.rtol")?,
                    abs_tol: atol,
                };
            }
            "integrator.atol" => {
                let (rtol, _) = self.adaptive_tols();
                self.integrator.method = Method::Rk45Adaptive {
                    rel_tol: rtol,
                    abs_tol: parse_positive(value, "integrator.atol")?,
                };
            }
            "integrator.sample-interval" => {
                self.integrator.sample_interval =
                    parse_positive(value, "integrator.sample-interval")?;
            }
            "region.grid-x" => self.region.x_range = parse_range(value)?,
            "region.grid-z" => self.region.z_range = parse_range(value)?,
            "region.grid-n" => {
                let n: usize = value
                    .parse()
                    .map_err(|_| format!("region.grid-n must be an integer, got '{value}'"))?;
                if n < 2 {
                    return Err("region.grid-n must be at least 2".into());
                }
                self.region.n = n;
            }
            "region.snapshot-tau" => self.region.snapshot_tau = parse_f64(value)?,
            "lyapunov.renorm-interval" => {
                self.lyapunov.renorm_interval = parse_positive(value, key)?
            }
            "lyapunov.perturbation" => self.lyapunov.perturbation = parse_positive(value, key)?,
            "lyapunov.transient" => {
                let t = parse_f64(value)?;
                if t < 0.0 {
                    return Err(format!("lyapunov.transient must be >= 0, got {value}"));
                }
                self.lyapunov.transient = t;
            }
            "lyapunov.seed" => {
                self.lyapunov.seed = value
                    .parse()
                    .map_err(|_| format!("lyapunov.seed must be an integer, got '{value}'"))?;
            }
            "outputs.trajectory" => self.outputs.trajectory = parse_bool(value)?,
            "outputs.g-series" => self.outputs.g_series = parse_bool(value)?,
            "outputs.events" => self.outputs.events = parse_bool(value)?,
            "outputs.region" => self.outputs.region = parse_bool(value)?,
            "outputs.summary" => self.outputs.summary = parse_bool(value)?,
            "forcing.r" => self.forcing.r = Some(parse_forcing(value)?),
            "forcing.mu" => self.forcing.mu = Some(parse_forcing(value)?),
            "forcing.p2" => self.forcing.p2 = Some(parse_forcing(value)?),
            "forcing.q2" => self.forcing.q2 = Some(parse_forcing(value)?),
            other => return Err(format!("unknown key '{other}'")),
        }
        Ok(())
    }

    pub fn set_method(&mut self, value: &str) -> Result<(), String> {
        match value {
            "rk4" | "rk4-fixed" => {
                if !matches!(self.integrator.method, Method::Rk4Fixed { .. }) {
                    self.integrator.method = Method::Rk4Fixed { step: 1e-3 };
                }
            }
            "rk45" | "rk45-adaptive" => {
                if !matches!(self.integrator.method, Method::Rk45Adaptive { .. }) {
                    self.integrator.method = IntegratorOptions::rk45_default_tols();
                }
            }
            other => {
                return Err(format!(
                    "unknown method '{other}' (expected rk4-fixed or rk45-adaptive)"
                ))
            }
        }
        Ok(())
    }

    fn adaptive_tols(&self) -> (f64, f64) {
        match self.integrator.method {
            Method::Rk45Adaptive { rel_tol, abs_tol } => (rel_tol, abs_tol),
            _ => match IntegratorOptions::rk45_default_tols() {
                Method::Rk45Adaptive { rel_tol, abs_tol } => (rel_tol, abs_tol),
                _ => unreachable!(),
            },
        }
    }
}

fn parse_f64(value: &str) -> Result<f64, String> {
    let v: f64 = value
        .parse()
        .map_err(|_| format!("expected a number, got '{value}'"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("expected a finite number, got '{value}'"))
    }
}

fn parse_positive(value: &str, what: &str) -> Result<f64, String> {
    let v = parse_f64(value)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("{what} must be positive, got {value}"))
    }
}

fn parse_bool(value: &str) -> Result<bool, String> {
    match value {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => Err(format!("expected a boolean, got '{other}'")),
    }
}

/// `lo:hi` (or `lo,hi`) with lo < hi.
fn parse_range(value: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = value
        .split_once(':')
        .or_else(|| value.split_once(','))
        .ok_or_else(|| format!("expected 'lo:hi', got '{value}'"))?;
    let lo = parse_f64(lo.trim())?;
    let hi = parse_f64(hi.trim())?;
    if lo < hi {
        Ok((lo, hi))
    } else {
        Err(format!("range must have lo < hi, got '{value}'"))
    }
}

fn parse_forcing(value: &str) -> Result<TimeFunction, String> {
    serde_json::from_str(value).map_err(|e| format!("bad forcing expression: {e}"))
}
