//! Run configuration: what to compute, on which packet, at which tolerance.
//!
//! A configuration is either assembled from command-line flags or read back
//! from JSON, including the `config` member of a previous result record.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use timeobs_core::cosmology::{CosmoParams, CosmoState};
use timeobs_core::wavepacket::{ProfileFamily, ProfileSpec};
use timeobs_core::{Dispersion, Interval, MomentumProfile};

use crate::error::CliError;

/// Largest accepted quadrature tolerance.
pub const MAX_TOLERANCE: f64 = 1e-2;
pub const DEFAULT_TOLERANCE: f64 = 1e-8;
pub const DEFAULT_BINS: usize = 64;
/// Arrival mass allowed outside an automatically chosen range.
pub const AUTO_RANGE_TAIL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Arrival-time distribution at the origin on equal bins.
    Arrival,
    /// Dwell time in a region.
    Dwell,
    /// Conditional probabilities P(I|J) for each time interval I.
    Condprob,
    /// Finite-aperture arrival masses.
    Aperture,
    /// Aharonov-Bohm time moment.
    AbMoment,
    /// Scale-factor dwell time of a cosmological state.
    CosmoDwell,
    /// Emergent time at given scale parameters.
    CosmoTime,
    /// Cross-check suite against the grid oracles.
    Validate,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).ok();
        f.write_str(s.as_ref().and_then(|v| v.as_str()).unwrap_or("?"))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum DwellMethodConfig {
    #[default]
    Momentum,
    Time,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Gaussian,
    OddGaussian,
    Bump,
}

/// A builtin profile family with its parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileConfig {
    pub family: Family,
    pub p0: f64,
    /// `σ` for the Gaussian families, half-width for the bump.
    #[serde(alias = "sigma", alias = "w", alias = "sigma_or_w")]
    pub width: f64,
    #[serde(default)]
    pub truncate_positive: bool,
    #[serde(default)]
    pub x0: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl ProfileConfig {
    pub fn build(&self) -> Result<MomentumProfile, CliError> {
        let family = match self.family {
            Family::Gaussian => ProfileFamily::Gaussian,
            Family::OddGaussian => ProfileFamily::OddGaussian,
            Family::Bump => ProfileFamily::Bump,
        };
        let spec = ProfileSpec {
            family,
            p0: self.p0,
            width: self.width,
            truncate_positive: self.truncate_positive,
            x0: self.x0,
            label: self.label.clone(),
        };
        Ok(spec.build()?)
    }
}

/// `nonrel:m=..`, `rel:m=..` or `cosmo:kappa=..`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum DispersionConfig {
    Nonrel { m: f64 },
    Rel { m: f64 },
    Cosmo { kappa: f64 },
}

impl Default for DispersionConfig {
    fn default() -> Self {
        DispersionConfig::Nonrel { m: 1.0 }
    }
}

impl DispersionConfig {
    pub fn build(&self) -> Result<Dispersion, CliError> {
        Ok(match *self {
            DispersionConfig::Nonrel { m } => Dispersion::nonrelativistic(m)?,
            DispersionConfig::Rel { m } => Dispersion::relativistic(m)?,
            DispersionConfig::Cosmo { kappa } => Dispersion::cosmological(kappa)?,
        })
    }
}

impl FromStr for DispersionConfig {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = || {
            CliError::Config(format!(
                "dispersion '{s}': expected nonrel:m=<x>, rel:m=<x> or cosmo:kappa=<x>"
            ))
        };
        let (kind, param) = s.split_once(':').ok_or_else(bad)?;
        let (key, value) = param.split_once('=').ok_or_else(bad)?;
        let value: f64 = value.trim().parse().map_err(|_| bad())?;
        match (kind.trim(), key.trim()) {
            ("nonrel", "m") => Ok(DispersionConfig::Nonrel { m: value }),
            ("rel", "m") => Ok(DispersionConfig::Rel { m: value }),
            ("cosmo", "kappa") => Ok(DispersionConfig::Cosmo { kappa: value }),
            _ => Err(bad()),
        }
    }
}

/// A cosmological state; a missing sector is identically zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateConfig {
    #[serde(default = "unit")]
    pub kappa: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plus: Option<ProfileConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minus: Option<ProfileConfig>,
}

fn unit() -> f64 {
    1.0
}

impl StateConfig {
    pub fn build(&self) -> Result<CosmoState, CliError> {
        let sector = |p: &Option<ProfileConfig>| match p {
            Some(p) => p.build(),
            None => Ok(MomentumProfile::zero()),
        };
        Ok(CosmoState::new(
            CosmoParams::new(self.kappa)?,
            sector(&self.plus)?,
            sector(&self.minus)?,
        ))
    }
}

/// Everything a run depends on. Serialized verbatim into every result.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<ProfileConfig>,
    #[serde(default)]
    pub dispersion: DispersionConfig,
    /// Time intervals (or, for `arrival`, the binned range).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub intervals: Vec<[f64; 2]>,
    /// Spatial region `J`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bins: Option<usize>,
    pub tolerance: f64,
    #[serde(default)]
    pub format: Format,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub aperture: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub p_scale: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<StateConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<DwellMethodConfig>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            profile: None,
            dispersion: DispersionConfig::default(),
            intervals: Vec::new(),
            region: None,
            bins: None,
            tolerance: DEFAULT_TOLERANCE,
            format: Format::Csv,
            output: None,
            aperture: Vec::new(),
            p_scale: Vec::new(),
            state: None,
            method: None,
        }
    }

    /// Accepts a bare configuration or a result record with a `config`
    /// member.
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let value: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| CliError::Config(format!("config JSON: {e}")))?;
        let inner = match value.get("config") {
            Some(c) if value.get("schema").is_some() => c.clone(),
            _ => value,
        };
        serde_json::from_value(inner).map_err(|e| CliError::Config(format!("config JSON: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Checks everything that can be checked without computing.
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.tolerance > 0.0 && self.tolerance <= MAX_TOLERANCE) {
            return Err(CliError::Config(format!(
                "tolerance {} outside (0, {MAX_TOLERANCE}]",
                self.tolerance
            )));
        }
        for iv in self.intervals.iter().chain(self.region.iter()) {
            interval(*iv)?;
        }
        if self.bins == Some(0) {
            return Err(CliError::Config("bins must be positive".into()));
        }
        let needs = |what: &str, ok: bool| {
            if ok {
                Ok(())
            } else {
                Err(CliError::Config(format!("{} needs {what}", self.command)))
            }
        };
        use Command::*;
        match self.command {
            Arrival | AbMoment => needs("--profile", self.profile.is_some()),
            Dwell => {
                needs("--profile", self.profile.is_some())?;
                needs("--region", self.region.is_some())
            }
            Condprob => {
                needs("--profile", self.profile.is_some())?;
                needs("--region", self.region.is_some())?;
                needs("at least one --interval", !self.intervals.is_empty())
            }
            Aperture => {
                needs("--profile", self.profile.is_some())?;
                needs("at least one --interval", !self.intervals.is_empty())?;
                needs("at least one --aperture", !self.aperture.is_empty())
            }
            CosmoDwell => {
                needs("--state", self.state.is_some())?;
                needs("--region", self.region.is_some())
            }
            CosmoTime => needs("--state", self.state.is_some()),
            Validate => Ok(()),
        }
    }
}

/// A bounded interval from a `[lo, hi]` pair.
pub fn interval(pair: [f64; 2]) -> Result<Interval, CliError> {
    let [lo, hi] = pair;
    if !lo.is_finite() || !hi.is_finite() {
        return Err(CliError::Config(format!(
            "interval [{lo}, {hi}] must be finite"
        )));
    }
    Interval::new(lo, hi)
        .map_err(|_| CliError::Config(format!("interval [{lo}, {hi}] has lo > hi")))
}

/// Parses `lo,hi`.
pub fn parse_pair(s: &str) -> Result<[f64; 2], CliError> {
    let bad = || CliError::Config(format!("'{s}': expected lo,hi"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let lo = a.trim().parse().map_err(|_| bad())?;
    let hi = b.trim().parse().map_err(|_| bad())?;
    let pair = [lo, hi];
    interval(pair)?;
    Ok(pair)
}

/// An inline JSON object, or the path of a file holding one.
pub fn read_json_arg<T: for<'de> Deserialize<'de>>(arg: &str, what: &str) -> Result<T, CliError> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| CliError::Io(format!("{what} file {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{what}: {e}")))
}
