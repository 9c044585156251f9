//! TOML scenario files.
//!
//! ```toml
//! model = "both"          # single_mode | full | both
//! task = "sweep"          # spectrum | limits | optimize | bandwidth | sweep
//! omega = 0.0             # sideband frequency, rad/s
//!
//! [cavity]
//! t_c = 0.01
//! eps_int = 0.001
//! eps_read = 0.1
//!
//! [squeeze]
//! q = 0.0
//! sqz_db = 15.0           # or `beta = 31.6`
//! zeta_db = 0.0           # or `zeta = 1.0`
//!
//! [sweep]
//! axis = "eps_read"
//! start = 1e-4
//! stop = 0.5
//! points = 50
//! scale = "log"
//!
//! [output]
//! path = "fig2_top.csv"
//! format = "csv"
//! ```

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::model::{db_to_factor, validate, CavityParams, SqueezeSettings, Violation};
use crate::spectrum::{linear_grid, log_grid, ModelKind};

/// A configuration problem, located as precisely as the source allows.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    /// 1-based line in the configuration text.
    pub line: Option<usize>,
    /// Dotted field path, e.g. `cavity.eps_read`.
    pub field: Option<String>,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (&self.line, &self.field) {
            (Some(line), Some(field)) => write!(f, "line {line}, field `{field}`: {}", self.message),
            (Some(line), None) => write!(f, "line {line}: {}", self.message),
            (None, Some(field)) => write!(f, "field `{field}`: {}", self.message),
            (None, None) => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelChoice {
    SingleMode,
    Full,
    Both,
}

impl ModelChoice {
    pub fn kinds(self) -> &'static [ModelKind] {
        match self {
            ModelChoice::SingleMode => &[ModelKind::SingleMode],
            ModelChoice::Full => &[ModelKind::Full],
            ModelChoice::Both => &[ModelKind::SingleMode, ModelKind::Full],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Spectrum,
    Limits,
    Optimize,
    Bandwidth,
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    EpsRead,
    EpsInt,
    EpsInj,
    BetaDb,
    Q,
    Zeta,
    Omega,
}

impl Axis {
    pub fn as_str(self) -> &'static str {
        match self {
            Axis::EpsRead => "eps_read",
            Axis::EpsInt => "eps_int",
            Axis::EpsInj => "eps_inj",
            Axis::BetaDb => "beta_db",
            Axis::Q => "q",
            Axis::Zeta => "zeta",
            Axis::Omega => "omega",
        }
    }

    /// Config field that a sweep along this axis overrides.
    pub fn field(self) -> &'static str {
        match self {
            Axis::EpsRead => "cavity.eps_read",
            Axis::EpsInt => "cavity.eps_int",
            Axis::EpsInj => "cavity.eps_inj",
            Axis::BetaDb => "squeeze.sqz_db",
            Axis::Q => "squeeze.q",
            Axis::Zeta => "squeeze.zeta",
            Axis::Omega => "omega",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub axis: Axis,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default)]
    pub scale: Scale,
}

impl SweepSpec {
    pub fn grid(&self) -> Vec<f64> {
        match self.scale {
            Scale::Linear => linear_grid(self.start, self.stop, self.points),
            Scale::Log => log_grid(self.start, self.stop, self.points),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SqueezeSection {
    #[serde(default)]
    pub q: f64,
    pub beta: Option<f64>,
    pub sqz_db: Option<f64>,
    pub zeta: Option<f64>,
    pub zeta_db: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    /// Relative paths are resolved against the configuration file's directory.
    pub path: PathBuf,
    #[serde(default)]
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default = "default_model")]
    pub model: ModelChoice,
    pub task: Task,
    #[serde(default)]
    pub omega: f64,
    pub cavity: CavityParams,
    #[serde(default)]
    pub squeeze: SqueezeSection,
    pub sweep: Option<SweepSpec>,
    pub output: OutputSpec,
}

fn default_model() -> ModelChoice {
    ModelChoice::SingleMode
}

/// One fully substituted evaluation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    /// Sweep axis and value; `None` for a single-point run.
    pub axis: Option<(Axis, f64)>,
    pub params: CavityParams,
    pub settings: SqueezeSettings,
    pub omega: f64,
}

impl Point {
    pub fn label(&self) -> String {
        match self.axis {
            Some((axis, value)) => format!("{} = {value:e}", axis.as_str()),
            None => "configured point".into(),
        }
    }
}

impl ScenarioConfig {
    /// Parses and validates a configuration. Errors carry the line of the
    /// offending key where it can be found in `source`.
    pub fn from_toml_str(source: &str) -> Result<Self, ConfigError> {
        let config: ScenarioConfig = toml::from_str(source).map_err(|e| ConfigError {
            line: e.span().map(|s| line_of(source, s.start)),
            field: None,
            message: e.message().trim().to_owned(),
        })?;
        config.check(source)?;
        Ok(config)
    }

    pub fn settings(&self) -> SqueezeSettings {
        let s = &self.squeeze;
        let beta = s.beta.or(s.sqz_db.map(db_to_factor)).unwrap_or(1.0);
        let zeta = s.zeta.or(s.zeta_db.map(db_to_factor)).unwrap_or(1.0);
        SqueezeSettings::new(s.q, beta, zeta)
    }

    /// Evaluation points in sweep order. Without a sweep: the configured
    /// point, or the default frequency grid for the `spectrum` task.
    pub fn points(&self) -> Vec<Point> {
        let base = Point {
            axis: None,
            params: self.cavity,
            settings: self.settings(),
            omega: self.omega,
        };
        match (&self.sweep, self.task) {
            (Some(sweep), _) => sweep.grid().into_iter().map(|v| substitute(base, sweep.axis, v)).collect(),
            (None, Task::Spectrum) => crate::spectrum::default_grid(self.cavity.tau)
                .into_iter()
                .map(|v| substitute(base, Axis::Omega, v))
                .collect(),
            (None, _) => vec![base],
        }
    }

    /// True when the frequency grid is the built-in default.
    pub fn uses_default_grid(&self) -> bool {
        self.sweep.is_none() && self.task == Task::Spectrum
    }

    fn check(&self, source: &str) -> Result<(), ConfigError> {
        let err = |section: Option<&str>, key: &str, message: String| ConfigError {
            line: find_key_line(source, section, key),
            field: Some(match section {
                Some(s) => format!("{s}.{key}"),
                None => key.to_owned(),
            }),
            message,
        };

        let s = &self.squeeze;
        if s.beta.is_some() && s.sqz_db.is_some() {
            return Err(err(Some("squeeze"), "sqz_db", "give either `beta` or `sqz_db`, not both".into()));
        }
        if s.zeta.is_some() && s.zeta_db.is_some() {
            return Err(err(Some("squeeze"), "zeta_db", "give either `zeta` or `zeta_db`, not both".into()));
        }
        if !(self.omega.is_finite() && self.omega >= 0.0) {
            return Err(err(None, "omega", format!("must be finite and >= 0, got {}", self.omega)));
        }

        if let Some(sweep) = &self.sweep {
            if sweep.points < 2 {
                return Err(err(Some("sweep"), "points", format!("need at least 2 points, got {}", sweep.points)));
            }
            if !(sweep.start.is_finite() && sweep.stop.is_finite() && sweep.start < sweep.stop) {
                return Err(err(
                    Some("sweep"),
                    "stop",
                    format!("need start < stop, got start = {}, stop = {}", sweep.start, sweep.stop),
                ));
            }
            if sweep.scale == Scale::Log && sweep.start <= 0.0 {
                return Err(err(Some("sweep"), "start", "a log sweep needs start > 0".into()));
            }
            if sweep.axis == Axis::Omega && sweep.start < 0.0 {
                return Err(err(Some("sweep"), "start", "frequencies must be >= 0".into()));
            }
        }

        for point in self.points() {
            for violation in validate(&point.params, &point.settings).violations {
                // Threshold crossings are numerical failures, reported when evaluated.
                if let Violation::OutOfRange { field, value, allowed } = violation {
                    let swept = self.sweep.map(|s| s.axis.field());
                    let (section, key) = config_location(field, swept);
                    let at = match point.axis {
                        Some(_) => format!(" at sweep point {}", point.label()),
                        None => String::new(),
                    };
                    return Err(err(section, key, format!("value {value} outside {allowed}{at}")));
                }
            }
        }
        Ok(())
    }
}

fn substitute(mut p: Point, axis: Axis, value: f64) -> Point {
    p.axis = Some((axis, value));
    match axis {
        Axis::EpsRead => p.params.eps_read = value,
        Axis::EpsInt => p.params.eps_int = value,
        Axis::EpsInj => p.params.eps_inj = value,
        Axis::BetaDb => p.settings.beta = db_to_factor(value),
        Axis::Q => p.settings.q = value,
        Axis::Zeta => p.settings.zeta = value,
        Axis::Omega => p.omega = value,
    }
    p
}

/// Maps a validated parameter name to the config key it came from. When the
/// parameter is the swept one the sweep range is to blame.
fn config_location(field: &'static str, swept: Option<&'static str>) -> (Option<&'static str>, &'static str) {
    let path = match field {
        "q" => "squeeze.q",
        "beta" => "squeeze.beta",
        "zeta" => "squeeze.zeta",
        other => match other {
            "t_c" => "cavity.t_c",
            "eps_int" => "cavity.eps_int",
            "eps_read" => "cavity.eps_read",
            "eps_inj" => "cavity.eps_inj",
            "tau" => "cavity.tau",
            "length" => "cavity.length",
            "power" => "cavity.power",
            _ => "cavity.wavelength",
        },
    };
    let beta_sweep = swept == Some("squeeze.sqz_db") && field == "beta";
    if swept == Some(path) || beta_sweep {
        return (Some("sweep"), "start");
    }
    match path.split_once('.') {
        Some((section, key)) => (Some(section), key),
        None => (None, path),
    }
}

fn line_of(source: &str, offset: usize) -> usize {
    source[..offset.min(source.len())].matches('\n').count() + 1
}

/// Line of `key = ...` inside `[section]` (or before any section when
/// `section` is `None`).
fn find_key_line(source: &str, section: Option<&str>, key: &str) -> Option<usize> {
    let mut current: Option<String> = None;
    let mut section_line = None;
    for (i, raw) in source.lines().enumerate() {
        let line = raw.trim();
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            current = Some(name.trim().to_owned());
            if section == Some(name.trim()) {
                section_line = Some(i + 1);
            }
            continue;
        }
        let in_section = current.as_deref() == section;
        if in_section {
            if let Some((k, _)) = line.split_once('=') {
                if k.trim() == key {
                    return Some(i + 1);
                }
            }
        }
    }
    section_line
}
