use std::path::PathBuf;

use clap::Parser;

use crate::config::{preset, Cutoff, ExperimentConfig, ExperimentKind, Format};
use crate::error::CliError;

/// Repeated qubit measurements on the quantum Rabi model.
///
/// Start from a figure preset, a TOML config file, or the built-in default
/// (jittered survival at g = ω = ω₀ = 1 GHz), then override single fields.
/// List-valued flags take comma-separated values.
#[derive(Debug, Parser)]
#[command(name = "antizeno", version)]
pub struct Args {
    #[arg(long, conflicts_with = "config")]
    pub preset: Option<String>,
    /// TOML file with the ExperimentConfig keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub kind: Option<ExperimentKind>,
    /// Resonator frequency (GHz).
    #[arg(long)]
    pub omega: Option<f64>,
    /// Qubit splitting (GHz).
    #[arg(long)]
    pub omega0: Option<f64>,
    /// Coupling values (GHz).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub g: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub epsilon: Vec<f64>,
    /// Fock cutoff, or "auto".
    #[arg(long)]
    pub n_max: Option<Cutoff>,
    /// Base periods as ωT₁.
    #[arg(long = "omega-t1", value_delimiter = ',', allow_hyphen_values = true)]
    pub omega_t1: Vec<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub ratio: Option<f64>,
    #[arg(long)]
    pub n_measurements: Option<usize>,
    /// Jitter half-width as ωΔt.
    #[arg(long, allow_hyphen_values = true)]
    pub jitter: Option<f64>,
    #[arg(long)]
    pub runs: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// csv or json; inferred from a .json output extension otherwise.
    #[arg(long)]
    pub format: Option<Format>,
}

impl Args {
    /// Base config (preset, file or default) with flag overrides applied.
    pub fn resolve(&self) -> Result<ExperimentConfig, CliError> {
        let mut c = match (&self.preset, &self.config) {
            (Some(name), _) => preset(name)?,
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path)?;
                toml::from_str(&text).map_err(|e| {
                    CliError::Validation(format!("cli: config {}: {e}", path.display()))
                })?
            }
            (None, None) => ExperimentConfig::default(),
        };
        if let Some(k) = self.kind {
            c.kind = k;
        }
        if let Some(v) = self.omega {
            c.model.omega = v;
        }
        if let Some(v) = self.omega0 {
            c.model.omega0 = v;
        }
        if !self.g.is_empty() {
            c.model.g = self.g.clone();
        }
        if !self.epsilon.is_empty() {
            c.measurement.epsilon = self.epsilon.clone();
        }
        if let Some(v) = self.n_max {
            c.model.n_max = v;
        }
        if !self.omega_t1.is_empty() {
            c.schedule.omega_t1 = self.omega_t1.clone();
        }
        if let Some(v) = self.ratio {
            c.schedule.ratio = v;
        }
        if let Some(v) = self.n_measurements {
            c.schedule.n_measurements = v;
        }
        if let Some(v) = self.jitter {
            c.schedule.jitter = v;
        }
        if let Some(v) = self.runs {
            c.schedule.runs = v;
        }
        if let Some(v) = self.seed {
            c.seed = v;
        }
        if let Some(p) = &self.out {
            c.output.path = Some(p.to_string_lossy().into_owned());
            if self.format.is_none() && p.extension().is_some_and(|e| e == "json") {
                c.output.format = Format::Json;
            }
        }
        if let Some(f) = self.format {
            c.output.format = f;
        }
        Ok(c)
    }
}
