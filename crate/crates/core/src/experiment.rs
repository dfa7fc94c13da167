//! Experiment configuration: JSON config files plus CLI-friendly parsing.
//!
//! Defaults: delta = pi/4, success target P = 0.5, target site (0, 0),
//! CSV output. A config file is a flat JSON object; unknown keys are
//! rejected so typos fail loudly.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;

use crate::analysis::LapseRule;
use crate::correlations::CorrelationKind;
use crate::engine::{default_kmax, IMAConfig, RunMode};
use crate::error::{Error, Result};
use crate::geometry::{GridGeometry, Position};
use crate::operators::OracleSpec;

/// The coin-control rotation angle: a fixed radian value or the
/// N-dependent choice arccos(1 / sqrt(log2 N)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeltaSpec {
    Radians(f64),
    Tulsi,
}

impl DeltaSpec {
    pub fn resolve(&self, geometry: &GridGeometry) -> f64 {
        match *self {
            DeltaSpec::Radians(value) => value,
            DeltaSpec::Tulsi => OracleSpec::tulsi(geometry, Position::ORIGIN).delta(),
        }
    }
}

impl FromStr for DeltaSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.eq_ignore_ascii_case("tulsi") {
            return Ok(DeltaSpec::Tulsi);
        }
        if t.eq_ignore_ascii_case("pi/4") {
            return Ok(DeltaSpec::Radians(std::f64::consts::FRAC_PI_4));
        }
        t.parse::<f64>()
            .map(DeltaSpec::Radians)
            .map_err(|_| Error::InvalidConfig(format!("cannot parse delta '{text}'")))
    }
}

impl<'de> Deserialize<'de> for DeltaSpec {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Number(value) => Ok(DeltaSpec::Radians(value)),
            Raw::Text(text) => DeltaSpec::from_str(&text).map_err(serde::de::Error::custom),
        }
    }
}

/// Lapse field of a run config: a step count or the unitary marker.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LapseSpec {
    Steps(usize),
    Unitary,
}

impl FromStr for LapseSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.eq_ignore_ascii_case("unitary") {
            return Ok(LapseSpec::Unitary);
        }
        match t.parse::<usize>() {
            Ok(steps) if steps >= 1 => Ok(LapseSpec::Steps(steps)),
            _ => Err(Error::InvalidConfig(format!(
                "lapse must be a positive integer or 'unitary', got '{text}'"
            ))),
        }
    }
}

impl<'de> Deserialize<'de> for LapseSpec {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(usize),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Number(steps) if steps >= 1 => Ok(LapseSpec::Steps(steps)),
            Raw::Number(_) => Err(serde::de::Error::custom("lapse must be >= 1")),
            Raw::Text(text) => LapseSpec::from_str(&text).map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        match text.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::InvalidConfig(format!(
                "unknown output format '{other}' (expected csv or json)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeSpec {
    Deterministic,
    MonteCarlo,
}

/// One experiment as described by a config file. CLI flags override fields
/// after loading; see the binary for the flag set.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Free-form note describing what the config reproduces.
    #[serde(default)]
    pub description: Option<String>,

    /// Position qubits (grid is 2^(n/2) x 2^(n/2)).
    pub n_qubits: Option<u32>,
    #[serde(default = "default_delta")]
    pub delta: DeltaSpec,
    /// Target site as [x, y].
    #[serde(default)]
    pub target: Option<(usize, usize)>,
    #[serde(default)]
    pub lapse: Option<LapseSpec>,
    /// Step budget; defaults to round((pi/4) sqrt(N log2 N)).
    #[serde(default)]
    pub k_max: Option<usize>,
    #[serde(default = "default_success_target")]
    pub success_target: f64,
    #[serde(default)]
    pub mode: Option<ModeSpec>,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,

    /// Correlation columns to record, by label (e.g. "MI_coin_pos").
    #[serde(default)]
    pub correlations: Vec<String>,
    /// Odd moving-average window; adds smoothed columns when set.
    #[serde(default)]
    pub smoothing_window: Option<usize>,
    /// Rescale smoothed correlation columns to unit maximum.
    #[serde(default)]
    pub normalize: bool,

    #[serde(default)]
    pub output_path: Option<PathBuf>,
    #[serde(default = "default_format")]
    pub output_format: OutputFormat,

    /// Grid exponents for sweep-order.
    #[serde(default)]
    pub exponents: Vec<u32>,
    /// Lapse rules for sweep-order (e.g. "unitary", "1", "sqrtN/4").
    #[serde(default)]
    pub lapse_rules: Vec<String>,
    /// Measurement densities m = sqrt(N)/l for sweep-lapse.
    #[serde(default)]
    pub m_values: Vec<u32>,

    /// Worker cap for sweep parallelism.
    #[serde(default)]
    pub jobs: Option<usize>,
}

fn default_delta() -> DeltaSpec {
    DeltaSpec::Radians(std::f64::consts::FRAC_PI_4)
}

fn default_success_target() -> f64 {
    0.5
}

fn default_trials() -> u64 {
    10_000
}

fn default_format() -> OutputFormat {
    OutputFormat::Csv
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            description: None,
            n_qubits: None,
            delta: default_delta(),
            target: None,
            lapse: None,
            k_max: None,
            success_target: default_success_target(),
            mode: None,
            trials: default_trials(),
            seed: 0,
            correlations: Vec::new(),
            smoothing_window: None,
            normalize: false,
            output_path: None,
            output_format: default_format(),
            exponents: Vec::new(),
            lapse_rules: Vec::new(),
            m_values: Vec::new(),
            jobs: None,
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|err| {
            Error::InvalidConfig(format!("cannot read config {}: {err}", path.display()))
        })?;
        serde_json::from_str(&text).map_err(|err| {
            Error::InvalidConfig(format!("cannot parse config {}: {err}", path.display()))
        })
    }

    pub fn geometry(&self) -> Result<GridGeometry> {
        let n = self
            .n_qubits
            .ok_or_else(|| Error::InvalidConfig("n_qubits is required".into()))?;
        GridGeometry::new(n)
    }

    pub fn target_position(&self) -> Position {
        self.target
            .map_or(Position::ORIGIN, |(x, y)| Position::new(x, y))
    }

    pub fn correlation_kinds(&self) -> Result<Vec<CorrelationKind>> {
        self.correlations
            .iter()
            .map(|label| CorrelationKind::parse(label))
            .collect()
    }

    pub fn lapse_rules(&self) -> Result<Vec<LapseRule>> {
        self.lapse_rules
            .iter()
            .map(|label| LapseRule::parse(label))
            .collect()
    }

    /// Assembles the engine config for a `run` invocation. The lapse field
    /// must be present (either a step count or "unitary").
    pub fn ima_config(&self) -> Result<(IMAConfig, bool)> {
        let geometry = self.geometry()?;
        let lapse = self
            .lapse
            .ok_or_else(|| Error::InvalidConfig("lapse is required (integer or 'unitary')".into()))?;
        let (lapse_steps, unitary) = match lapse {
            LapseSpec::Steps(steps) => (steps, false),
            LapseSpec::Unitary => (1, true),
        };
        let mode = match self.mode.unwrap_or(ModeSpec::Deterministic) {
            ModeSpec::Deterministic => RunMode::Deterministic,
            ModeSpec::MonteCarlo => RunMode::MonteCarlo {
                trials: self.trials,
                seed: self.seed,
            },
        };
        let config = IMAConfig {
            geometry,
            delta: self.delta.resolve(&geometry),
            target: self.target_position(),
            lapse: lapse_steps,
            k_max: self.k_max.unwrap_or_else(|| default_kmax(&geometry)),
            success_target: self.success_target,
            mode,
        };
        config.validate()?;
        Ok((config, unitary))
    }
}
