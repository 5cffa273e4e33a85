//! Dispatch of a validated configuration to the computations.

use serde_json::{json, Map, Value};
use timeobs_core::cosmology::{
    emergent_time_moment, mean_inverse_speed, scale_dwell, time_zero_norm,
};
use timeobs_core::povm::{
    ab_time_moment, arrival_distribution, auto_range, finite_aperture_mass, povm_mass,
};
use timeobs_core::validation::{run_validation, DEFAULT_AGREEMENT};
use timeobs_core::weights::{
    conditional_probability, dwell_time_by, mean_inverse_velocity, DwellMethod,
};
use timeobs_core::{Interval, Wavepacket};

use crate::config::{
    interval, Command, DwellMethodConfig, RunConfig, AUTO_RANGE_TAIL, DEFAULT_BINS,
};
use crate::error::CliError;

/// A result table plus scalar summary values.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    pub summary: Map<String, Value>,
    /// Set when the computation finished but the run must still fail.
    pub failure: Option<CliError>,
}

impl Report {
    fn new(columns: &[&'static str]) -> Self {
        Report {
            columns: columns.to_vec(),
            rows: Vec::new(),
            summary: Map::new(),
            failure: None,
        }
    }

    fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn note(&mut self, key: &str, value: Value) {
        self.summary.insert(key.to_string(), value);
    }
}

fn pair(i: Interval) -> Value {
    json!([i.lo(), i.hi()])
}

pub fn execute(config: &RunConfig) -> Result<Report, CliError> {
    config.validate()?;
    let tol = config.tolerance;
    let packet = || -> Result<Wavepacket, CliError> {
        let profile = config.profile.as_ref().expect("validated").build()?;
        Ok(Wavepacket::new(profile, config.dispersion.build()?))
    };
    let region = || interval(config.region.expect("validated"));

    match config.command {
        Command::Arrival => {
            let wp = packet()?;
            let range = match config.intervals.first() {
                Some(&p) => interval(p)?,
                None => auto_range(&wp.profile, wp.dispersion, AUTO_RANGE_TAIL, tol)?,
            };
            let bins = range.partition(config.bins.unwrap_or(DEFAULT_BINS))?;
            let dist = arrival_distribution(&wp.profile, wp.dispersion, &bins, tol)?;
            let mut r = Report::new(&["bin_lo", "bin_hi", "mass"]);
            for (b, m) in &dist.bins {
                r.push(vec![json!(b.lo()), json!(b.hi()), json!(m)]);
            }
            r.note("range", pair(range));
            r.note("binned_mass", json!(dist.total_mass));
            r.note("first_moment", json!(dist.first_moment));
            if wp.profile.vanishes_at_zero() {
                r.note(
                    "ab_time_moment",
                    json!(ab_time_moment(&wp.profile, wp.dispersion, tol)?),
                );
            }
            Ok(r)
        }
        Command::Dwell => {
            let wp = packet()?;
            let j = region()?;
            let method = match config.method.unwrap_or_default() {
                DwellMethodConfig::Momentum => DwellMethod::MomentumDomain,
                DwellMethodConfig::Time => DwellMethod::TimeDomain,
            };
            let d = dwell_time_by(&wp, j, tol, method)?;
            let mut r = Report::new(&["region_lo", "region_hi", "dwell_time", "weight"]);
            r.push(vec![
                json!(j.lo()),
                json!(j.hi()),
                json!(d.value),
                json!(d.weight),
            ]);
            r.note(
                "mean_inverse_velocity",
                json!(mean_inverse_velocity(&wp, tol)?),
            );
            if let Some(t) = d.time_window {
                r.note("time_window", json!(t));
            }
            Ok(r)
        }
        Command::Condprob => {
            let wp = packet()?;
            let j = region()?;
            let mut r = Report::new(&["interval_lo", "interval_hi", "probability", "abs_error"]);
            for &p in &config.intervals {
                let i = interval(p)?;
                let c = conditional_probability(&wp, i, j, tol)?;
                r.push(vec![
                    json!(i.lo()),
                    json!(i.hi()),
                    json!(c.value),
                    json!(c.abs_error),
                ]);
            }
            r.note("region", pair(j));
            Ok(r)
        }
        Command::Aperture => {
            let wp = packet()?;
            let mut r = Report::new(&[
                "aperture",
                "interval_lo",
                "interval_hi",
                "aperture_mass",
                "arrival_mass",
                "gap",
            ]);
            for &p in &config.intervals {
                let i = interval(p)?;
                let exact = povm_mass(&wp.profile, wp.dispersion, i, tol)?;
                for &a in &config.aperture {
                    let m = finite_aperture_mass(&wp.profile, wp.dispersion, a, i, tol)?;
                    r.push(vec![
                        json!(a),
                        json!(i.lo()),
                        json!(i.hi()),
                        json!(m),
                        json!(exact),
                        json!((m - exact).abs()),
                    ]);
                }
            }
            Ok(r)
        }
        Command::AbMoment => {
            let wp = packet()?;
            let mut r = Report::new(&["ab_time_moment", "mean_inverse_velocity"]);
            r.push(vec![
                json!(ab_time_moment(&wp.profile, wp.dispersion, tol)?),
                json!(mean_inverse_velocity(&wp, tol)?),
            ]);
            Ok(r)
        }
        Command::CosmoDwell => {
            let state = config.state.as_ref().expect("validated").build()?;
            let j = region()?;
            let d = scale_dwell(&state, j, tol)?;
            let norm = time_zero_norm(&state, tol)?;
            let mut r = Report::new(&["region_lo", "region_hi", "scale_dwell", "per_norm"]);
            let per_norm = if norm > 0.0 {
                json!(d / norm)
            } else {
                Value::Null
            };
            r.push(vec![json!(j.lo()), json!(j.hi()), json!(d), per_norm]);
            r.note("norm", json!(norm));
            r.note(
                "mean_inverse_speed",
                json!(mean_inverse_speed(&state, tol)?),
            );
            Ok(r)
        }
        Command::CosmoTime => {
            let state = config.state.as_ref().expect("validated").build()?;
            let scales = if config.p_scale.is_empty() {
                vec![1.0]
            } else {
                config.p_scale.clone()
            };
            let mut r =
                Report::new(&["p_scale", "ln_p", "at_unit_scale", "slope", "emergent_time"]);
            for p in scales {
                let t = emergent_time_moment(&state, p, tol)?;
                r.push(vec![
                    json!(p),
                    json!(p.ln()),
                    json!(t.at_unit_scale),
                    json!(t.slope),
                    json!(t.value),
                ]);
            }
            Ok(r)
        }
        Command::Validate => {
            let cases = run_validation(tol, DEFAULT_AGREEMENT)?;
            let mut r = Report::new(&[
                "case",
                "value",
                "oracle",
                "oracle_refinement",
                "relative_error",
                "passed",
            ]);
            for c in &cases {
                r.push(vec![
                    json!(c.name),
                    json!(c.value),
                    json!(c.oracle),
                    json!(c.oracle_refinement),
                    json!(c.relative_error),
                    json!(c.passed),
                ]);
            }
            let failed = cases.iter().filter(|c| !c.passed).count();
            r.note("agreement", json!(DEFAULT_AGREEMENT));
            r.note("passed", json!(cases.len() - failed));
            r.note("total", json!(cases.len()));
            if failed > 0 {
                r.failure = Some(CliError::ValidationFailed {
                    failed,
                    total: cases.len(),
                });
            }
            Ok(r)
        }
    }
}
