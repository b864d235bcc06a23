//! Flat `key = value` run configuration.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use helicoid::solver::{CoreBoundary, Grid, RadialProblem};
use helicoid::sweeps::{EllWindow, SweepAxis};
use helicoid::{ChargeSign, Fields, Geometry, Material, Mode};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}` given twice")]
    Duplicate { line: usize, key: String },
    #[error("line {line}: cannot parse `{value}` for `{key}`: {reason}")]
    Value { line: usize, key: String, value: String, reason: String },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Domain(#[from] helicoid::Error),
}

pub const KEYS: &[&str] = &[
    "mstar_ratio",
    "charge_sign",
    "ell",
    "kz_per_nm",
    "omega1_nm",
    "omega2",
    "B_tesla",
    "phi",
    "rmin_nm",
    "rmax_nm",
    "n_points",
    "n_states",
    "core_boundary",
    "sweep_axis",
    "sweep_values",
    "fan_omega2_values",
    "ell_window_min",
    "ell_window_max",
    "ring_r0_nm",
    "ring_delta_nm",
    "state_index",
];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mstar_ratio: f64,
    pub charge_sign: i64,
    pub ell: i64,
    pub kz_per_nm: f64,
    pub omega1_nm: f64,
    pub omega2: f64,
    pub b_tesla: f64,
    pub phi: f64,
    pub rmin_nm: f64,
    pub rmax_nm: f64,
    pub n_points: usize,
    pub n_states: usize,
    pub core_boundary: CoreBoundary,
    pub sweep_axis: Option<SweepAxis>,
    pub sweep_values: Option<Vec<f64>>,
    pub fan_omega2_values: Vec<f64>,
    pub ell_window_min: Option<i64>,
    pub ell_window_max: Option<i64>,
    pub ring_r0_nm: f64,
    pub ring_delta_nm: f64,
    pub state_index: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            mstar_ratio: 0.067,
            charge_sign: -1,
            ell: 1,
            kz_per_nm: 0.01,
            omega1_nm: 50.0,
            omega2: 0.0,
            b_tesla: 1.0,
            phi: 0.0,
            rmin_nm: 1e-3,
            rmax_nm: 500.0,
            n_points: 2000,
            n_states: 2,
            core_boundary: CoreBoundary::Auto,
            sweep_axis: None,
            sweep_values: None,
            fan_omega2_values: vec![0.0],
            ell_window_min: None,
            ell_window_max: None,
            ring_r0_nm: 20.0,
            ring_delta_nm: 5.0,
            state_index: 0,
        }
    }
}

/// Parses and validates configuration text; omitted keys keep their defaults.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut config = RunConfig::default();
    let mut seen = BTreeSet::new();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .filter(|(k, v)| !k.is_empty() && !v.is_empty())
            .ok_or_else(|| ConfigError::Syntax { line, text: raw.trim().to_string() })?;
        if !KEYS.contains(&key) {
            return Err(ConfigError::UnknownKey { line, key: key.to_string() });
        }
        if !seen.insert(key.to_string()) {
            return Err(ConfigError::Duplicate { line, key: key.to_string() });
        }
        config.set(key, value).map_err(|reason| ConfigError::Value {
            line,
            key: key.to_string(),
            value: value.to_string(),
            reason,
        })?;
    }
    config.validate()?;
    Ok(config)
}

fn float(value: &str) -> Result<f64, String> {
    let x: f64 = value.parse().map_err(|e| format!("{e}"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err("not a finite number".into())
    }
}

fn int(value: &str) -> Result<i64, String> {
    value.parse().map_err(|e| format!("{e}"))
}

fn count(value: &str) -> Result<usize, String> {
    value.parse().map_err(|e| format!("{e}"))
}

/// Comma list `a, b, c` or inclusive range `start:stop:step`.
pub fn parse_values(value: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = value.split(':').map(str::trim).collect();
    match parts.as_slice() {
        [start, stop, step] => {
            let (start, stop, step) = (float(start)?, float(stop)?, float(step)?);
            if !(step > 0.0) {
                return Err("range step must be > 0".into());
            }
            if stop < start {
                return Err("range stop is below start".into());
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize;
            Ok((0..=n).map(|i| start + i as f64 * step).collect())
        }
        [_] => value.split(',').map(|v| float(v.trim())).collect(),
        _ => Err("expected a comma list or start:stop:step".into()),
    }
}

impl RunConfig {
    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "mstar_ratio" => self.mstar_ratio = float(value)?,
            "charge_sign" => self.charge_sign = int(value)?,
            "ell" => self.ell = int(value)?,
            "kz_per_nm" => self.kz_per_nm = float(value)?,
            "omega1_nm" => self.omega1_nm = float(value)?,
            "omega2" => self.omega2 = float(value)?,
            "B_tesla" => self.b_tesla = float(value)?,
            "phi" => self.phi = float(value)?,
            "rmin_nm" => self.rmin_nm = float(value)?,
            "rmax_nm" => self.rmax_nm = float(value)?,
            "n_points" => self.n_points = count(value)?,
            "n_states" => self.n_states = count(value)?,
            "core_boundary" => {
                self.core_boundary = value.parse().map_err(|e: helicoid::Error| e.to_string())?
            }
            "sweep_axis" => {
                self.sweep_axis = Some(value.parse().map_err(|e: helicoid::Error| e.to_string())?)
            }
            "sweep_values" => self.sweep_values = Some(parse_values(value)?),
            "fan_omega2_values" => self.fan_omega2_values = parse_values(value)?,
            "ell_window_min" => self.ell_window_min = Some(int(value)?),
            "ell_window_max" => self.ell_window_max = Some(int(value)?),
            "ring_r0_nm" => self.ring_r0_nm = float(value)?,
            "ring_delta_nm" => self.ring_delta_nm = float(value)?,
            "state_index" => self.state_index = count(value)?,
            _ => unreachable!("key list checked by the caller"),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let problem = self.problem()?;
        problem.validate()?;
        let max = problem.max_states();
        if self.n_states == 0 || self.n_states > max {
            return Err(ConfigError::Invalid(format!(
                "n_states must be between 1 and n_points/4 = {max}, got {}",
                self.n_states
            )));
        }
        if self.state_index >= max {
            return Err(ConfigError::Invalid(format!(
                "state_index must be below {max}, got {}",
                self.state_index
            )));
        }
        if !(self.ring_delta_nm > 0.0) {
            return Err(ConfigError::Invalid(format!(
                "ring_delta_nm must be > 0, got {}",
                self.ring_delta_nm
            )));
        }
        match (self.ell_window_min, self.ell_window_max) {
            (Some(lo), Some(hi)) if lo > hi => {
                return Err(ConfigError::Invalid(format!("ell_window_min {lo} exceeds ell_window_max {hi}")))
            }
            (Some(_), None) | (None, Some(_)) => {
                return Err(ConfigError::Invalid(
                    "ell_window_min and ell_window_max must be given together".into(),
                ))
            }
            _ => {}
        }
        if let Some(values) = &self.sweep_values {
            if values.is_empty() || values.windows(2).any(|w| w[1] <= w[0]) {
                return Err(ConfigError::Invalid(
                    "sweep_values must be nonempty and strictly increasing".into(),
                ));
            }
        }
        if self.fan_omega2_values.is_empty() {
            return Err(ConfigError::Invalid("fan_omega2_values must be nonempty".into()));
        }
        Ok(())
    }

    pub fn problem(&self) -> Result<RadialProblem, ConfigError> {
        let charge = ChargeSign::from_int(self.charge_sign)?;
        Ok(RadialProblem {
            geometry: Geometry { omega1: self.omega1_nm, omega2: self.omega2 },
            fields: Fields { b_tesla: self.b_tesla, phi: self.phi },
            mode: Mode { ell: self.ell, kz: self.kz_per_nm },
            material: Material { mstar_ratio: self.mstar_ratio, charge },
            grid: Grid {
                r_min: self.rmin_nm,
                r_max: self.rmax_nm,
                n_points: self.n_points,
                core: self.core_boundary,
            },
        })
    }

    pub fn ell_window(&self) -> Option<EllWindow> {
        match (self.ell_window_min, self.ell_window_max) {
            (Some(min), Some(max)) => Some(EllWindow { min, max }),
            _ => None,
        }
    }

    /// Resolved configuration as `# key = value` comment lines.
    pub fn provenance(&self) -> String {
        let list = |v: &[f64]| v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(",");
        let opt_int = |v: Option<i64>| v.map_or("unset".to_string(), |x| x.to_string());
        let mut out = String::new();
        let mut line = |k: &str, v: String| {
            let _ = writeln!(out, "# {k} = {v}");
        };
        line("mstar_ratio", format!("{}", self.mstar_ratio));
        line("charge_sign", self.charge_sign.to_string());
        line("ell", self.ell.to_string());
        line("kz_per_nm", format!("{}", self.kz_per_nm));
        line("omega1_nm", format!("{}", self.omega1_nm));
        line("omega2", format!("{}", self.omega2));
        line("B_tesla", format!("{}", self.b_tesla));
        line("phi", format!("{}", self.phi));
        line("rmin_nm", format!("{}", self.rmin_nm));
        line("rmax_nm", format!("{}", self.rmax_nm));
        line("n_points", self.n_points.to_string());
        line("n_states", self.n_states.to_string());
        line("core_boundary", self.core_boundary.to_string());
        line("sweep_axis", self.sweep_axis.map_or("unset".into(), |a| a.to_string()));
        line("sweep_values", self.sweep_values.as_deref().map_or("unset".into(), list));
        line("fan_omega2_values", list(&self.fan_omega2_values));
        line("ell_window_min", opt_int(self.ell_window_min));
        line("ell_window_max", opt_int(self.ell_window_max));
        line("ring_r0_nm", format!("{}", self.ring_r0_nm));
        line("ring_delta_nm", format!("{}", self.ring_delta_nm));
        line("state_index", self.state_index.to_string());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_gives_defaults() {
        assert_eq!(parse_config("").unwrap(), RunConfig::default());
        assert_eq!(parse_config("# only a comment\n\n").unwrap(), RunConfig::default());
    }

    #[test]
    fn override_single_key() {
        let c = parse_config("omega2 = 1.5").unwrap();
        assert_eq!(c, RunConfig { omega2: 1.5, ..RunConfig::default() });
        let c = parse_config("B_tesla = -2 # reversed\nell=0").unwrap();
        assert_eq!((c.b_tesla, c.ell), (-2.0, 0));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_config("n_points = 8"), Err(ConfigError::Domain(_))));
        assert!(matches!(parse_config("rmin_nm = 0"), Err(ConfigError::Domain(_))));
        assert!(matches!(parse_config("colour = red"), Err(ConfigError::UnknownKey { line: 1, .. })));
        assert!(matches!(parse_config("ell = 1.5"), Err(ConfigError::Value { .. })));
        assert!(matches!(parse_config("phi = nan"), Err(ConfigError::Value { .. })));
        assert!(matches!(parse_config("ell 3"), Err(ConfigError::Syntax { .. })));
        assert!(matches!(parse_config("ell = 1\nell = 2"), Err(ConfigError::Duplicate { line: 2, .. })));
        assert!(matches!(parse_config("charge_sign = 0"), Err(ConfigError::Domain(_))));
        assert!(parse_config("n_states = 0").is_err());
        assert!(parse_config("n_states = 501").is_err());
        assert!(parse_config("ell_window_min = 3\nell_window_max = 1").is_err());
        assert!(parse_config("ell_window_min = 3").is_err());
        assert!(parse_config("sweep_values = 1, 1").is_err());
        assert!(parse_config("core_boundary = neumann").is_err());
        assert!(parse_config("sweep_axis = temperature").is_err());
    }

    #[test]
    fn value_lists() {
        assert_eq!(parse_values("0, 0.5,1").unwrap(), vec![0.0, 0.5, 1.0]);
        let r = parse_values("0:2:0.02").unwrap();
        assert_eq!(r.len(), 101);
        assert!((r[100] - 2.0).abs() < 1e-12);
        assert_eq!(parse_values("1:1:0.5").unwrap(), vec![1.0]);
        assert!(parse_values("0:1:0").is_err());
        assert!(parse_values("1:0:0.1").is_err());
        assert!(parse_values("0:1").is_err());
    }

    #[test]
    fn provenance_lists_every_key() {
        let text = RunConfig::default().provenance();
        for key in KEYS {
            assert!(text.contains(&format!("# {key} = ")), "{key}");
        }
    }
}
