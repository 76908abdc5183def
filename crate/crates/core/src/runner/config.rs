//! Scenario configuration: JSON schema, presets, validation and sweep axes.
//!
//! A configuration document is a JSON object whose keys are the fields of
//! [`ScenarioConfig`]. Documents may be partial; missing keys inherit from the
//! base (a preset or [`ScenarioConfig::default`]). Unknown keys are rejected.
//!
//! ```json
//! {
//!   "j": 100.0, "nu": 1.5707963267948966, "eta": 20.0, "epsilon": 0.001,
//!   "n_kicks": 3000, "cx": 0.95, "cy": -0.85, "cz": 0.85,
//!   "initial": { "mode": "random", "seed": 1 },
//!   "source": { "kind": "qkt" },
//!   "outputs": ["F", "alpha", "Q", "CC", "REE", "concurrence", "MI", "lambdas"],
//!   "output": "fig2.csv",
//!   "format": "csv"
//! }
//! ```

use std::f64::consts::FRAC_PI_2;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::correlations::BellDiagonalParams;
use crate::dephasing_channels::DephasingSource;
use crate::kicked_top::KickedTopParams;
use crate::spin_algebra::{random_sphere_angles, SpinCoherentAngles, SpinParams};

/// Seed used by every named preset.
pub const PRESET_SEED: u64 = 1;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("invalid value for `{key}`: {reason}")]
    Invalid { key: String, reason: String },
    #[error("malformed configuration: {0}")]
    Malformed(String),
    #[error("unknown preset `{0}` (expected fig1-chaotic, fig1-regular, fig2 or fig3)")]
    UnknownPreset(String),
    #[error("`{0}` is not a scalar sweep axis")]
    UnknownAxis(String),
}

impl ConfigError {
    fn invalid(key: &str, reason: impl ToString) -> Self {
        Self::Invalid {
            key: key.to_string(),
            reason: reason.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialAngles {
    Explicit { theta: f64, phi: f64 },
    Random { seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SourceKind {
    Qkt,
    Markovian { gamma: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Column {
    F,
    #[serde(rename = "alpha")]
    Alpha,
    Q,
    CC,
    REE,
    #[serde(rename = "concurrence")]
    Concurrence,
    MI,
    #[serde(rename = "lambdas")]
    Lambdas,
}

impl Column {
    pub const ALL: [Column; 8] = [
        Column::F,
        Column::Alpha,
        Column::Q,
        Column::CC,
        Column::REE,
        Column::Concurrence,
        Column::MI,
        Column::Lambdas,
    ];

    pub fn headers(self) -> &'static [&'static str] {
        match self {
            Column::F => &["F"],
            Column::Alpha => &["alpha"],
            Column::Q => &["Q"],
            Column::CC => &["CC"],
            Column::REE => &["REE"],
            Column::Concurrence => &["concurrence"],
            Column::MI => &["MI"],
            Column::Lambdas => &["l1", "l2", "l3", "l4"],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub j: f64,
    pub nu: f64,
    pub eta: f64,
    pub epsilon: f64,
    pub n_kicks: usize,
    pub cx: f64,
    pub cy: f64,
    pub cz: f64,
    pub initial: InitialAngles,
    pub source: SourceKind,
    pub outputs: Vec<Column>,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            j: 100.0,
            nu: FRAC_PI_2,
            eta: 20.0,
            epsilon: 0.001,
            n_kicks: 3000,
            cx: 0.95,
            cy: -0.85,
            cz: 0.85,
            initial: InitialAngles::Random { seed: PRESET_SEED },
            source: SourceKind::Qkt,
            outputs: Column::ALL.to_vec(),
            output: None,
            format: Format::Csv,
        }
    }
}

/// Named reference parameter sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Preset {
    /// J = 100, ν = π/2, ε = 0.001, η = 20.
    #[value(name = "fig1-chaotic")]
    Fig1Chaotic,
    /// As fig1-chaotic with η = 0.1.
    #[value(name = "fig1-regular")]
    Fig1Regular,
    /// Chaotic top with c = (0.95, −0.85, 0.85).
    #[value(name = "fig2")]
    Fig2,
    /// As fig2 with η = 0.1.
    #[value(name = "fig3")]
    Fig3,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig1Chaotic => "fig1-chaotic",
            Preset::Fig1Regular => "fig1-regular",
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
        }
    }

    pub fn from_name(name: &str) -> Result<Self, ConfigError> {
        [
            Preset::Fig1Chaotic,
            Preset::Fig1Regular,
            Preset::Fig2,
            Preset::Fig3,
        ]
        .into_iter()
        .find(|p| p.name() == name)
        .ok_or_else(|| ConfigError::UnknownPreset(name.to_string()))
    }

    /// The fig1 runs span two revivals of the regular top at ε = 0.001 (τ ≈ 3140
    /// kicks); fig2 and fig3 cover the long-time windows up to 3000 and 3300 kicks.
    pub fn config(self) -> ScenarioConfig {
        let base = ScenarioConfig::default();
        match self {
            Preset::Fig1Chaotic => ScenarioConfig {
                eta: 20.0,
                n_kicks: 7000,
                ..base
            },
            Preset::Fig1Regular => ScenarioConfig {
                eta: 0.1,
                n_kicks: 7000,
                ..base
            },
            Preset::Fig2 => ScenarioConfig {
                eta: 20.0,
                n_kicks: 3000,
                ..base
            },
            Preset::Fig3 => ScenarioConfig {
                eta: 0.1,
                n_kicks: 3300,
                ..base
            },
        }
    }
}

/// Checked physical objects built from a configuration.
#[derive(Debug, Clone)]
pub struct ValidatedScenario {
    pub top: KickedTopParams,
    pub correlations: BellDiagonalParams,
    pub angles: SpinCoherentAngles,
    pub source: Option<DephasingSource>,
    pub seed: Option<u64>,
}

impl ScenarioConfig {
    /// Parses a (possibly partial) JSON document on top of `base`.
    pub fn from_json_over(base: &ScenarioConfig, text: &str) -> Result<Self, ConfigError> {
        let overlay: serde_json::Value =
            serde_json::from_str(text).map_err(|e| ConfigError::Malformed(e.to_string()))?;
        let serde_json::Value::Object(overlay) = overlay else {
            return Err(ConfigError::Malformed(
                "top level must be a JSON object".into(),
            ));
        };
        let mut merged = serde_json::to_value(base).expect("config serializes");
        let obj = merged.as_object_mut().expect("config is an object");
        for (k, v) in overlay {
            if !obj.contains_key(&k) {
                return Err(ConfigError::invalid(&k, "unknown key"));
            }
            obj.insert(k, v);
        }
        let cfg: ScenarioConfig =
            serde_json::from_value(merged).map_err(|e| ConfigError::Malformed(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn seed(&self) -> Option<u64> {
        match self.initial {
            InitialAngles::Random { seed } => Some(seed),
            InitialAngles::Explicit { .. } => None,
        }
    }

    pub fn validate(&self) -> Result<ValidatedScenario, ConfigError> {
        let spin = SpinParams::new(self.j).map_err(|e| ConfigError::invalid("j", e))?;
        let top = KickedTopParams::new(self.nu, self.eta, self.epsilon, spin).map_err(|e| {
            let key = match e {
                crate::kicked_top::TopError::InvalidParam { name, .. } => name,
                _ => "epsilon",
            };
            ConfigError::invalid(key, e)
        })?;
        let correlations = BellDiagonalParams::new(self.cx, self.cy, self.cz)
            .map_err(|e| ConfigError::invalid("cx/cy/cz", e))?;
        let angles = match self.initial {
            InitialAngles::Explicit { theta, phi } => SpinCoherentAngles::new(theta, phi)
                .map_err(|e| ConfigError::invalid("initial", e))?,
            InitialAngles::Random { seed } => random_sphere_angles(seed),
        };
        let source = match self.source {
            SourceKind::Qkt => None,
            SourceKind::Markovian { gamma } => Some(
                DephasingSource::markovian(gamma).map_err(|e| ConfigError::invalid("gamma", e))?,
            ),
        };
        if self.outputs.is_empty() {
            return Err(ConfigError::invalid(
                "outputs",
                "at least one column required",
            ));
        }
        Ok(ValidatedScenario {
            top,
            correlations,
            angles,
            source,
            seed: self.seed(),
        })
    }

    /// Requested columns in canonical order without duplicates.
    pub fn columns(&self) -> Vec<Column> {
        let mut cols = self.outputs.clone();
        cols.sort();
        cols.dedup();
        cols
    }

    /// Copy with one scalar field replaced, for parameter sweeps.
    pub fn with_axis(&self, axis: &str, value: f64) -> Result<Self, ConfigError> {
        let mut cfg = self.clone();
        let as_count = |key: &str| -> Result<u64, ConfigError> {
            if value < 0.0 || value.fract() != 0.0 || !value.is_finite() {
                return Err(ConfigError::invalid(key, "expected a non-negative integer"));
            }
            Ok(value as u64)
        };
        match axis {
            "j" => cfg.j = value,
            "nu" => cfg.nu = value,
            "eta" => cfg.eta = value,
            "epsilon" => cfg.epsilon = value,
            "n_kicks" | "kicks" => cfg.n_kicks = as_count(axis)? as usize,
            "cx" => cfg.cx = value,
            "cy" => cfg.cy = value,
            "cz" => cfg.cz = value,
            "seed" => {
                cfg.initial = InitialAngles::Random {
                    seed: as_count(axis)?,
                }
            }
            "theta0" | "phi0" => {
                let (mut theta, mut phi) = match cfg.initial {
                    InitialAngles::Explicit { theta, phi } => (theta, phi),
                    InitialAngles::Random { seed } => {
                        let a = random_sphere_angles(seed);
                        (a.theta(), a.phi())
                    }
                };
                if axis == "theta0" {
                    theta = value;
                } else {
                    phi = value;
                }
                cfg.initial = InitialAngles::Explicit { theta, phi };
            }
            "gamma" => cfg.source = SourceKind::Markovian { gamma: value },
            other => return Err(ConfigError::UnknownAxis(other.to_string())),
        }
        Ok(cfg)
    }
}
