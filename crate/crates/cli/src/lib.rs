//! Command-line front end for `timeobs-core`: parses run configurations,
//! dispatches them and writes CSV or JSON tables.

pub mod config;
pub mod error;
pub mod output;
pub mod run;

use std::path::PathBuf;

use clap::Parser;

pub use config::RunConfig;
pub use error::CliError;

use config::{parse_pair, read_json_arg, Command, DispersionConfig, DwellMethodConfig, Format};

#[derive(Debug, Parser)]
#[command(
    name = "timeobs",
    version,
    about = "Time observables of free wave packets"
)]
pub struct Cli {
    /// Computation to run; may be omitted with --config.
    #[arg(value_enum)]
    pub command: Option<Command>,
    /// Profile as inline JSON or a JSON file, e.g. {"family":"bump","p0":5,"w":1}.
    #[arg(long)]
    pub profile: Option<String>,
    /// nonrel:m=<x>, rel:m=<x> or cosmo:kappa=<x>.
    #[arg(long)]
    pub dispersion: Option<String>,
    /// Time interval lo,hi; repeatable.
    #[arg(long = "interval", allow_hyphen_values = true)]
    pub intervals: Vec<String>,
    /// Spatial region lo,hi.
    #[arg(long, allow_hyphen_values = true)]
    pub region: Option<String>,
    #[arg(long)]
    pub bins: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Aperture half-width a; repeatable.
    #[arg(long)]
    pub aperture: Vec<f64>,
    /// Scale parameter p for cosmo-time; repeatable.
    #[arg(long = "p-scale")]
    pub p_scale: Vec<f64>,
    /// Cosmological state {kappa, plus, minus} as inline JSON or a file.
    #[arg(long)]
    pub state: Option<String>,
    /// Dwell-time method.
    #[arg(long, value_enum)]
    pub method: Option<DwellMethodConfig>,
    /// Configuration or earlier JSON result to rerun.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl Cli {
    /// The run configuration; with `--config`, only `--out` and `--format`
    /// may be overridden since nothing else may change the results.
    pub fn into_config(self) -> Result<RunConfig, CliError> {
        if let Some(path) = &self.config {
            let computing = self.command.is_some()
                || self.profile.is_some()
                || self.dispersion.is_some()
                || !self.intervals.is_empty()
                || self.region.is_some()
                || self.bins.is_some()
                || self.tol.is_some()
                || !self.aperture.is_empty()
                || !self.p_scale.is_empty()
                || self.state.is_some()
                || self.method.is_some();
            if computing {
                return Err(CliError::Config(
                    "--config only combines with --out and --format".into(),
                ));
            }
            let mut c = RunConfig::load(path)?;
            if let Some(f) = self.format {
                c.format = f;
            }
            if self.out.is_some() {
                c.output = self.out;
            }
            return Ok(c);
        }
        let command = self
            .command
            .ok_or_else(|| CliError::Config("a command or --config is required".into()))?;
        let mut c = RunConfig::new(command);
        if let Some(p) = &self.profile {
            c.profile = Some(read_json_arg(p, "profile")?);
        }
        if let Some(d) = &self.dispersion {
            c.dispersion = d.parse::<DispersionConfig>()?;
        }
        c.intervals = self
            .intervals
            .iter()
            .map(|s| parse_pair(s))
            .collect::<Result<_, _>>()?;
        c.region = self.region.as_deref().map(parse_pair).transpose()?;
        c.bins = self.bins;
        if let Some(t) = self.tol {
            c.tolerance = t;
        }
        c.format = self.format.unwrap_or_default();
        c.output = self.out;
        c.aperture = self.aperture;
        c.p_scale = self.p_scale;
        if let Some(s) = &self.state {
            c.state = Some(read_json_arg(s, "state")?);
        }
        c.method = self.method;
        Ok(c)
    }
}

/// Runs a configuration end to end, writing its output.
pub fn run(config: &RunConfig) -> Result<(), CliError> {
    let mut report = run::execute(config)?;
    let bytes = output::render(config, &report)?;
    output::emit(config, &bytes)?;
    match report.failure.take() {
        Some(e) => Err(e),
        None => Ok(()),
    }
}
