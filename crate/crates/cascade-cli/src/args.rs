//! Command-line definitions and argument parsing helpers.

use crate::CliError;
use cascade::polarization::PolarizerSetting;
use clap::{Parser, Subcommand, ValueEnum};
use std::f64::consts::PI;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "cascade",
    version,
    about = "Polarization-resolved photon-pair correlations of a four-level cascade emitter"
)]
pub struct Cli {
    /// JSON file with the rate parameters (keys: gamma1, gamma3, gamma2,
    /// gamma4, gamma_ab, gamma_ba, delta, pump_rate). Without it the
    /// symmetric preset gamma1 = gamma3 = gamma2 = gamma4 = 0.5 is used.
    #[arg(long, global = true, value_name = "PATH")]
    pub params: Option<PathBuf>,

    /// Output CSV path; stdout when omitted. `figure` writes into --outdir instead.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Computation engine for curves that support it.
    #[arg(long, global = true, value_enum, default_value_t = Method::Analytic)]
    pub method: Method,

    /// Maximum relative error accepted by `verify`.
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub tolerance: f64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Analytic,
    Oracle,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Level populations and exciton coherence versus time from the
    /// upper-level initial state.
    Populations {
        /// End of the time grid (in the parameter time unit).
        #[arg(long, default_value_t = 10.0)]
        t_max: f64,
        /// Number of grid points (>= 2), including t = 0.
        #[arg(long, default_value_t = 201)]
        points: usize,
    },
    /// Reduced two-photon correlation versus delay for a pair of analyzer
    /// settings (preset name, "theta,phi" in radians, or "deg:theta,phi").
    G2 {
        #[arg(long, default_value = "H")]
        setting1: String,
        #[arg(long, default_value = "H")]
        setting2: String,
        #[arg(long, default_value_t = 10.0)]
        tau_max: f64,
        #[arg(long, default_value_t = 201)]
        points: usize,
    },
    /// Degree of correlation versus delay in the basis spanned by a setting
    /// and its orthogonal partner.
    Degree {
        #[arg(long, default_value = "R")]
        basis: String,
        #[arg(long, default_value_t = 10.0)]
        tau_max: f64,
        #[arg(long, default_value_t = 201)]
        points: usize,
    },
    /// Time-averaged degree of correlation versus linear basis angle over [0, pi].
    DegreeAvg {
        #[arg(long, default_value_t = 181)]
        points: usize,
    },
    /// Emit the CSV data of a named figure preset (3a, 3b, 4a, 4b or 5).
    Figure {
        id: String,
        #[arg(long, default_value = "figures")]
        outdir: PathBuf,
    },
    /// Cross-check the closed-form correlation against the numerical
    /// integrator on a randomized grid and report the errors as JSON.
    Verify {
        #[arg(long, default_value_t = 200)]
        sets: usize,
        #[arg(long, default_value_t = 50)]
        tau_points: usize,
        #[arg(long, default_value_t = 10.0)]
        tau_max: f64,
        #[arg(long, default_value_t = 20260808)]
        seed: u64,
    },
}

/// Resolve an analyzer description: preset name, "theta,phi" in radians, or
/// "deg:theta,phi" in degrees.
pub fn parse_setting(input: &str) -> Result<PolarizerSetting, CliError> {
    if let Ok(preset) = PolarizerSetting::preset(input) {
        return Ok(preset);
    }
    let (body, scale) = match input.strip_prefix("deg:") {
        Some(rest) => (rest, PI / 180.0),
        None => (input, 1.0),
    };
    let parts: Vec<&str> = body.split(',').collect();
    if parts.len() != 2 {
        return Err(CliError::Usage(format!(
            "cannot parse analyzer setting {input:?}: expected a preset (H, V, D, Dprime, R, L), \
             \"theta,phi\" in radians, or \"deg:theta,phi\""
        )));
    }
    let mut angles = [0.0f64; 2];
    for (slot, text) in angles.iter_mut().zip(&parts) {
        *slot = text
            .trim()
            .parse::<f64>()
            .map_err(|e| CliError::Usage(format!("bad angle {text:?} in {input:?}: {e}")))?;
        if !slot.is_finite() {
            return Err(CliError::Usage(format!("non-finite angle in {input:?}")));
        }
    }
    Ok(PolarizerSetting::new(angles[0] * scale, angles[1] * scale))
}
