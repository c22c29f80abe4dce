//! Suite configuration: TOML file, command-line overrides and validation.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use ptolemy_core::Model;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("invalid `{field}`: {message}")]
    Field { field: String, message: String },
    #[error("cannot read config {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("cannot parse config {path}: {source}")]
    Parse { path: PathBuf, source: toml::de::Error },
}

impl ConfigError {
    pub fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError::Field { field: field.into(), message: message.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Ptolemy,
    Inversions,
    Duality,
    Slope,
    Zigzag,
    Fibration,
    Filling,
    Asymptotics,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Ptolemy,
        Suite::Inversions,
        Suite::Duality,
        Suite::Slope,
        Suite::Zigzag,
        Suite::Fibration,
        Suite::Filling,
        Suite::Asymptotics,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Ptolemy => "ptolemy",
            Suite::Inversions => "inversions",
            Suite::Duality => "duality",
            Suite::Slope => "slope",
            Suite::Zigzag => "zigzag",
            Suite::Fibration => "fibration",
            Suite::Filling => "filling",
            Suite::Asymptotics => "asymptotics",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}` (expected one of {})", suite_names()))
    }
}

fn suite_names() -> String {
    Suite::ALL.map(|s| s.name()).join(", ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Euclidean,
    Heisenberg,
}

impl FromStr for ModelKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "euclidean" => Ok(ModelKind::Euclidean),
            "heisenberg" => Ok(ModelKind::Heisenberg),
            _ => Err(format!("unknown model `{s}` (expected euclidean or heisenberg)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(format!("unknown format `{s}` (expected json or csv)")),
        }
    }
}

/// Config file contents; every field is optional and command-line flags win.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub model: Option<ModelKind>,
    pub dim: Option<usize>,
    pub suites: Option<Vec<Suite>>,
    pub samples: Option<usize>,
    pub tol: Option<f64>,
    /// Per-check or per-suite tolerances, keyed by check id or suite name.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub timings: Option<bool>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text =
            std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
        toml::from_str(&text).map_err(|source| ConfigError::Parse { path: path.to_path_buf(), source })
    }
}

/// A validated run configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub model: Model,
    pub suites: Vec<Suite>,
    pub samples: usize,
    /// Overrides every check tolerance when set.
    pub tol: Option<f64>,
    pub tolerances: BTreeMap<String, f64>,
    pub seed: u64,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub format: Format,
    pub timings: bool,
}

pub const DEFAULT_SAMPLES: usize = 1000;
pub const DEFAULT_SEED: u64 = 0x5eed;

/// Values given on the command line (or through the environment).
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub model: Option<ModelKind>,
    pub dim: Option<usize>,
    pub suites: Vec<Suite>,
    pub samples: Option<usize>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub timings: bool,
}

impl SuiteConfig {
    pub fn resolve(file: FileConfig, cli: Overrides) -> Result<Self, ConfigError> {
        let kind = cli.model.or(file.model).unwrap_or(ModelKind::Heisenberg);
        let dim = cli.dim.or(file.dim).unwrap_or(1);
        if dim == 0 {
            return Err(ConfigError::field("dim", "must be at least 1"));
        }
        let model = match kind {
            ModelKind::Euclidean => Model::euclidean(dim),
            ModelKind::Heisenberg => Model::heisenberg(dim),
        };
        let mut suites = if cli.suites.is_empty() { file.suites.unwrap_or_default() } else { cli.suites };
        if suites.is_empty() {
            suites = Suite::ALL.to_vec();
        }
        suites.sort();
        suites.dedup();
        let samples = cli.samples.or(file.samples).unwrap_or(DEFAULT_SAMPLES);
        if samples == 0 {
            return Err(ConfigError::field("samples", "must be at least 1"));
        }
        let tol = cli.tol.or(file.tol);
        if let Some(t) = tol {
            check_tol("tol", t)?;
        }
        for (k, v) in &file.tolerances {
            check_tol(&format!("tolerances.{k}"), *v)?;
        }
        Ok(SuiteConfig {
            model,
            suites,
            samples,
            tol,
            tolerances: file.tolerances,
            seed: cli.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            out: cli.out.or(file.out),
            format: cli.format.or(file.format).unwrap_or(Format::Json),
            timings: cli.timings || file.timings.unwrap_or(false),
        })
    }

    /// Tolerance for a check: `--tol`, then the check id, then its suite,
    /// then the built-in default.
    pub fn tolerance(&self, id: &str, suite: Suite, default: f64) -> f64 {
        self.tol
            .or_else(|| self.tolerances.get(id).copied())
            .or_else(|| self.tolerances.get(suite.name()).copied())
            .unwrap_or(default)
    }
}

fn check_tol(field: &str, t: f64) -> Result<(), ConfigError> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(ConfigError::field(field, format!("must be positive and finite, got {t}")))
    }
}
