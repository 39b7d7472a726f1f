//! Run settings from a flat `key = value` file, merged with command-line
//! flags (flags win).

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use ness_core::models::{CoupledQubitsParams, OscillatorParams, TwoLevelParams};
use ness_core::presets::{preset, Preset};
use ness_core::sweep::{Axis, OutputSet, SweepSpec};
use ness_core::{ModelParams, Temperature};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ModelKind {
    TwoLevel,
    CoupledQubits,
    Oscillator,
}

impl ModelKind {
    fn of(params: &ModelParams) -> Self {
        match params {
            ModelParams::TwoLevel(_) => ModelKind::TwoLevel,
            ModelParams::CoupledQubits(_) => ModelKind::CoupledQubits,
            ModelParams::Oscillator(_) => ModelKind::Oscillator,
        }
    }

    fn name(self) -> &'static str {
        match self {
            ModelKind::TwoLevel => "two-level",
            ModelKind::CoupledQubits => "coupled-qubits",
            ModelKind::Oscillator => "oscillator",
        }
    }
}

impl FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "two-level" => Ok(ModelKind::TwoLevel),
            "coupled-qubits" => Ok(ModelKind::CoupledQubits),
            "oscillator" => Ok(ModelKind::Oscillator),
            other => Err(format!("unknown model {other:?}, expected two-level, coupled-qubits or oscillator")),
        }
    }
}

/// A problem with the run configuration; reported with exit code 2.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageError {
    pub line: Option<usize>,
    pub message: String,
}

impl UsageError {
    pub fn new(message: impl Into<String>) -> Self {
        Self { line: None, message: message.into() }
    }

    fn at(line: usize, message: impl Into<String>) -> Self {
        Self { line: Some(line), message: message.into() }
    }
}

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(n) => write!(f, "line {n}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for UsageError {}

/// Every configurable value; `None` means "not given".
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub model: Option<ModelKind>,
    pub preset: Option<String>,
    pub omega: Option<f64>,
    pub omega1: Option<f64>,
    pub omega2: Option<f64>,
    pub j: Option<f64>,
    pub gamma: Option<f64>,
    pub big_gamma: Option<f64>,
    pub cutoff: Option<usize>,
    pub t1: Option<f64>,
    pub t2: Option<f64>,
    pub axis1: Option<Axis>,
    pub axis2: Option<Axis>,
    pub outputs: Option<OutputSet>,
    pub out_path: Option<PathBuf>,
}

fn parse_value<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T, UsageError>
where
    T::Err: fmt::Display,
{
    value.parse().map_err(|e| UsageError::at(line, format!("bad value for {key}: {e}")))
}

impl Settings {
    /// Parses the config text format: one `key = value` per line, `#`
    /// starts a comment, blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self, UsageError> {
        let mut s = Settings::default();
        let mut seen: Vec<String> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let n = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(UsageError::at(n, format!("expected `key = value`, got {line:?}")));
            };
            let (key, value) = (key.trim(), value.trim());
            if value.is_empty() {
                return Err(UsageError::at(n, format!("missing value for {key}")));
            }
            if seen.iter().any(|k| k == key) {
                return Err(UsageError::at(n, format!("duplicate key {key}")));
            }
            match key {
                "model" => s.model = Some(parse_value(n, key, value)?),
                "preset" => {
                    preset(value).map_err(|e| UsageError::at(n, e.to_string()))?;
                    s.preset = Some(value.to_string());
                }
                "omega" => s.omega = Some(parse_value(n, key, value)?),
                "omega1" => s.omega1 = Some(parse_value(n, key, value)?),
                "omega2" => s.omega2 = Some(parse_value(n, key, value)?),
                "j" => s.j = Some(parse_value(n, key, value)?),
                "gamma" => s.gamma = Some(parse_value(n, key, value)?),
                "big_gamma" => s.big_gamma = Some(parse_value(n, key, value)?),
                "cutoff" => s.cutoff = Some(parse_value(n, key, value)?),
                "t1" => s.t1 = Some(parse_value(n, key, value)?),
                "t2" => s.t2 = Some(parse_value(n, key, value)?),
                "axis1" => s.axis1 = Some(parse_value(n, key, value)?),
                "axis2" => s.axis2 = Some(parse_value(n, key, value)?),
                "outputs" => s.outputs = Some(parse_value(n, key, value)?),
                "out" | "out_path" => s.out_path = Some(PathBuf::from(value)),
                other => return Err(UsageError::at(n, format!("unknown key {other:?}"))),
            }
            seen.push(key.to_string());
        }
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self, UsageError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| UsageError::new(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| UsageError::new(format!("{}: {e}", path.display())))
    }

    /// Values set in `top` replace those in `self`.
    pub fn overlay(self, top: Settings) -> Settings {
        Settings {
            model: top.model.or(self.model),
            preset: top.preset.or(self.preset),
            omega: top.omega.or(self.omega),
            omega1: top.omega1.or(self.omega1),
            omega2: top.omega2.or(self.omega2),
            j: top.j.or(self.j),
            gamma: top.gamma.or(self.gamma),
            big_gamma: top.big_gamma.or(self.big_gamma),
            cutoff: top.cutoff.or(self.cutoff),
            t1: top.t1.or(self.t1),
            t2: top.t2.or(self.t2),
            axis1: top.axis1.or(self.axis1),
            axis2: top.axis2.or(self.axis2),
            outputs: top.outputs.or(self.outputs),
            out_path: top.out_path.or(self.out_path),
        }
    }

    fn preset(&self) -> Result<Option<Preset>, UsageError> {
        self.preset.as_deref().map(preset).transpose().map_err(|e| UsageError::new(e.to_string()))
    }

    /// Model parameters: the preset's values (if any) overridden by explicit
    /// settings. Without a preset every parameter of the model is required.
    pub fn model_params(&self) -> Result<ModelParams, UsageError> {
        let base = self.preset()?.map(|p| p.params);
        let kind = match (self.model, base) {
            (Some(k), Some(b)) if k != ModelKind::of(&b) => {
                return Err(UsageError::new(format!(
                    "preset {} is a {} model, not {}",
                    self.preset.as_deref().unwrap_or_default(),
                    ModelKind::of(&b).name(),
                    k.name()
                )))
            }
            (Some(k), _) => k,
            (None, Some(b)) => ModelKind::of(&b),
            (None, None) => return Err(UsageError::new("either --preset or --model is required")),
        };
        self.reject_foreign(kind)?;

        let need = |v: Option<f64>, from_base: Option<f64>, flag: &str| {
            v.or(from_base).ok_or_else(|| UsageError::new(format!("--{flag} is required for the {} model", kind.name())))
        };
        let temp = |v: Option<f64>, from_base: Option<Temperature>, flag: &str| -> Result<Temperature, UsageError> {
            let x = need(v, from_base.map(Temperature::value), flag)?;
            Temperature::new(x).map_err(|e| UsageError::new(format!("--{flag}: {e}")))
        };

        Ok(match kind {
            ModelKind::TwoLevel => {
                let b = match base {
                    Some(ModelParams::TwoLevel(p)) => Some(p),
                    _ => None,
                };
                ModelParams::TwoLevel(TwoLevelParams {
                    omega: need(self.omega, b.map(|p| p.omega), "omega")?,
                    gamma: need(self.gamma, b.map(|p| p.gamma), "gamma")?,
                    big_gamma: need(self.big_gamma, b.map(|p| p.big_gamma), "big-gamma")?,
                    t1: temp(self.t1, b.map(|p| p.t1), "t1")?,
                    t2: temp(self.t2, b.map(|p| p.t2), "t2")?,
                })
            }
            ModelKind::CoupledQubits => {
                let b = match base {
                    Some(ModelParams::CoupledQubits(p)) => Some(p),
                    _ => None,
                };
                ModelParams::CoupledQubits(CoupledQubitsParams {
                    omega1: need(self.omega1, b.map(|p| p.omega1), "omega1")?,
                    omega2: need(self.omega2, b.map(|p| p.omega2), "omega2")?,
                    j: need(self.j, b.map(|p| p.j), "j")?,
                    gamma: need(self.gamma, b.map(|p| p.gamma), "gamma")?,
                    big_gamma: need(self.big_gamma, b.map(|p| p.big_gamma), "big-gamma")?,
                    t1: temp(self.t1, b.map(|p| p.t1), "t1")?,
                    t2: temp(self.t2, b.map(|p| p.t2), "t2")?,
                })
            }
            ModelKind::Oscillator => {
                let b = match base {
                    Some(ModelParams::Oscillator(p)) => Some(p),
                    _ => None,
                };
                ModelParams::Oscillator(OscillatorParams {
                    omega: need(self.omega, b.map(|p| p.omega), "omega")?,
                    gamma: need(self.gamma, b.map(|p| p.gamma), "gamma")?,
                    big_gamma: need(self.big_gamma, b.map(|p| p.big_gamma), "big-gamma")?,
                    t1: temp(self.t1, b.map(|p| p.t1), "t1")?,
                    t2: temp(self.t2, b.map(|p| p.t2), "t2")?,
                    cutoff: self.cutoff.or(b.map(|p| p.cutoff)).ok_or_else(|| {
                        UsageError::new("--cutoff is required for the oscillator model")
                    })?,
                })
            }
        })
    }

    fn reject_foreign(&self, kind: ModelKind) -> Result<(), UsageError> {
        let foreign: &[(&str, bool)] = match kind {
            ModelKind::TwoLevel => &[
                ("omega1", self.omega1.is_some()),
                ("omega2", self.omega2.is_some()),
                ("j", self.j.is_some()),
                ("cutoff", self.cutoff.is_some()),
            ],
            ModelKind::CoupledQubits => &[("omega", self.omega.is_some()), ("cutoff", self.cutoff.is_some())],
            ModelKind::Oscillator => &[
                ("omega1", self.omega1.is_some()),
                ("omega2", self.omega2.is_some()),
                ("j", self.j.is_some()),
            ],
        };
        match foreign.iter().find(|(_, set)| *set) {
            Some((flag, _)) => {
                Err(UsageError::new(format!("--{flag} does not apply to the {} model", kind.name())))
            }
            None => Ok(()),
        }
    }

    /// Sweep description; axes and outputs default to the preset's.
    pub fn sweep_spec(&self) -> Result<SweepSpec, UsageError> {
        let params = self.model_params()?;
        let preset = self.preset()?;
        let axis1 = self
            .axis1
            .or(preset.as_ref().map(|p| p.axis1))
            .ok_or_else(|| UsageError::new("--axis1 is required without a preset"))?;
        let axis2 = self.axis2.or(preset.as_ref().and_then(|p| p.axis2));
        let outputs = self.outputs.or(preset.as_ref().map(|p| p.outputs)).unwrap_or_else(|| {
            "U,S".parse().expect("static output list")
        });
        SweepSpec::new(params, axis1, axis2, outputs).map_err(|e| UsageError::new(e.to_string()))
    }
}
