use std::f64::consts::{PI, SQRT_2};
use std::fmt;

use antizeno_core::model::ModelParams;
use antizeno_core::protocol::T1Sampling;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const PRESETS: [&str; 6] = ["fig1", "fig2", "fig3", "fig4", "fig5", "fig6"];
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_CUTOFF_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    /// `p_e` over a coupling grid with the quadratic fit.
    GroundState,
    /// `<P_e>(t)` after one no-click, per coupling.
    ExcitationTrace,
    /// Mean final survival over a set of periods, per coupling.
    T1Sweep,
    /// Jitter-averaged survival per (period, coupling, ε).
    Survival,
    /// Survival plus decay rates in `t/T₁` units across periods.
    Collapse,
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ExperimentKind::GroundState => "ground_state",
            ExperimentKind::ExcitationTrace => "excitation_trace",
            ExperimentKind::T1Sweep => "t1_sweep",
            ExperimentKind::Survival => "survival",
            ExperimentKind::Collapse => "collapse",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for ExperimentKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        serde_json::from_value(serde_json::Value::String(s.into())).map_err(|_| {
            format!(
                "unknown kind {s:?} (expected ground_state, excitation_trace, t1_sweep, survival or collapse)"
            )
        })
    }
}

/// Fixed photon cutoff, or `"auto"` to search for a converged one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CutoffRepr", into = "CutoffRepr")]
pub enum Cutoff {
    Fixed(usize),
    Auto,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CutoffRepr {
    Fixed(usize),
    Named(String),
}

impl TryFrom<CutoffRepr> for Cutoff {
    type Error = String;

    fn try_from(r: CutoffRepr) -> Result<Self, String> {
        match r {
            CutoffRepr::Fixed(n) => Ok(Cutoff::Fixed(n)),
            CutoffRepr::Named(s) => s.parse(),
        }
    }
}

impl From<Cutoff> for CutoffRepr {
    fn from(c: Cutoff) -> Self {
        match c {
            Cutoff::Fixed(n) => CutoffRepr::Fixed(n),
            Cutoff::Auto => CutoffRepr::Named("auto".into()),
        }
    }
}

impl std::str::FromStr for Cutoff {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(Cutoff::Auto);
        }
        s.parse()
            .map(Cutoff::Fixed)
            .map_err(|_| format!("n_max must be a non-negative integer or \"auto\", got {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    /// Resonator frequency (GHz).
    pub omega: f64,
    /// Qubit splitting (GHz).
    pub omega0: f64,
    /// Coupling values (GHz).
    pub g: Vec<f64>,
    pub n_max: Cutoff,
    pub cutoff_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleSection {
    /// Base periods as `ωT₁`.
    pub omega_t1: Vec<f64>,
    pub ratio: f64,
    pub n_measurements: usize,
    /// Jitter half-width as `ωΔt`.
    pub jitter: f64,
    pub runs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub omega_t1_min: f64,
    pub omega_t1_max: f64,
    pub count: usize,
    pub sampling: T1Sampling,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceSection {
    pub omega_t_max: f64,
    pub omega_t_step: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasurementSection {
    pub epsilon: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("format must be csv or json, got {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    /// Standard output when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub seed: u64,
    pub model: ModelSection,
    pub schedule: ScheduleSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<TraceSection>,
    pub measurement: MeasurementSection,
    pub output: OutputSection,
}

impl Default for ExperimentConfig {
    /// Jittered projective survival at `g = ω = ω₀ = 1 GHz`, `ωT₁ = 2π`.
    fn default() -> Self {
        ExperimentConfig {
            kind: ExperimentKind::Survival,
            seed: DEFAULT_SEED,
            model: ModelSection {
                omega: 1.0,
                omega0: 1.0,
                g: vec![1.0],
                n_max: Cutoff::Fixed(40),
                cutoff_tol: DEFAULT_CUTOFF_TOL,
            },
            schedule: ScheduleSection {
                omega_t1: vec![2.0 * PI],
                ratio: SQRT_2,
                n_measurements: 8,
                jitter: 0.2 * PI,
                runs: 20,
            },
            sweep: None,
            trace: None,
            measurement: MeasurementSection { epsilon: vec![0.0] },
            output: OutputSection {
                path: None,
                format: Format::Csv,
            },
        }
    }
}

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

const THIRDS: [f64; 3] = [1.0 / 3.0, 2.0 / 3.0, 1.0];

/// Figure presets at `ω = ω₀ = 1 GHz`, so couplings read directly as `g/ω`.
pub fn preset(name: &str) -> Result<ExperimentConfig, CliError> {
    let mut c = ExperimentConfig::default();
    match name {
        "fig1" => {
            c.kind = ExperimentKind::GroundState;
            c.model.g = grid(0.0, 1.0, 101);
        }
        "fig2" => {
            c.kind = ExperimentKind::ExcitationTrace;
            c.model.g = THIRDS.to_vec();
            c.trace = Some(TraceSection {
                omega_t_max: 40.0,
                omega_t_step: 0.02,
            });
        }
        "fig3" => {
            c.kind = ExperimentKind::T1Sweep;
            c.model.g = grid(0.0, 1.0, 11);
            c.schedule.jitter = 0.0;
            c.schedule.runs = 1;
            c.sweep = Some(SweepSection {
                omega_t1_min: 2.0 * PI * 0.1,
                omega_t1_max: 2.0 * PI * 5.0,
                count: 100,
                sampling: T1Sampling::Uniform,
            });
        }
        "fig4" => {
            c.model.g = THIRDS.to_vec();
            c.schedule.omega_t1 = vec![2.0 * PI, 0.75 * PI];
        }
        "fig5" => {
            c.kind = ExperimentKind::Collapse;
            c.schedule.omega_t1 = vec![PI, 2.0 * PI, 3.0 * PI];
        }
        "fig6" => {
            c.measurement.epsilon = vec![0.0, 0.1, 0.2];
        }
        other => {
            return Err(CliError::Validation(format!(
                "cli: unknown preset {other:?} (expected one of {})",
                PRESETS.join(", ")
            )))
        }
    }
    Ok(c)
}

fn bad(field: &str, reason: impl fmt::Display) -> CliError {
    CliError::Validation(format!("cli: invalid {field}: {reason}"))
}

fn positive(field: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(bad(field, format!("{v} must be positive and finite")))
    }
}

impl ExperimentConfig {
    /// Checks every field the selected kind reads, before any computation.
    pub fn validate(&self) -> Result<(), CliError> {
        let m = &self.model;
        if m.g.is_empty() {
            return Err(bad("model.g", "empty coupling list"));
        }
        if let Cutoff::Fixed(n) = m.n_max {
            for &g in &m.g {
                ModelParams::new(m.omega, m.omega0, g, n).map_err(CliError::from)?;
            }
        } else {
            for &g in &m.g {
                ModelParams::new(m.omega, m.omega0, g, 1).map_err(CliError::from)?;
            }
        }
        positive("model.cutoff_tol", m.cutoff_tol)?;

        let s = &self.schedule;
        let uses_schedule = matches!(
            self.kind,
            ExperimentKind::Survival | ExperimentKind::Collapse | ExperimentKind::T1Sweep
        );
        if uses_schedule {
            positive("schedule.ratio", s.ratio)?;
            if s.n_measurements == 0 {
                return Err(bad("schedule.n_measurements", "need at least one measurement"));
            }
            for eps in &self.measurement.epsilon {
                if !(0.0..=1.0).contains(eps) {
                    return Err(bad("measurement.epsilon", format!("{eps} outside [0, 1]")));
                }
            }
            if self.measurement.epsilon.is_empty() {
                return Err(bad("measurement.epsilon", "empty list"));
            }
        }
        match self.kind {
            ExperimentKind::GroundState => {
                if m.g.len() < 3 {
                    return Err(bad("model.g", "the quadratic fit needs at least 3 couplings"));
                }
            }
            ExperimentKind::ExcitationTrace => {
                let t = self
                    .trace
                    .as_ref()
                    .ok_or_else(|| bad("trace", "excitation_trace needs a [trace] section"))?;
                positive("trace.omega_t_max", t.omega_t_max)?;
                positive("trace.omega_t_step", t.omega_t_step)?;
            }
            ExperimentKind::T1Sweep => {
                let w = self
                    .sweep
                    .as_ref()
                    .ok_or_else(|| bad("sweep", "t1_sweep needs a [sweep] section"))?;
                positive("sweep.omega_t1_min", w.omega_t1_min)?;
                if !(w.omega_t1_max >= w.omega_t1_min && w.omega_t1_max.is_finite()) {
                    return Err(bad("sweep.omega_t1_max", "must be at least omega_t1_min"));
                }
                if w.count == 0 {
                    return Err(bad("sweep.count", "need at least one period"));
                }
            }
            ExperimentKind::Survival | ExperimentKind::Collapse => {
                if s.omega_t1.is_empty() {
                    return Err(bad("schedule.omega_t1", "empty period list"));
                }
                for &t in &s.omega_t1 {
                    positive("schedule.omega_t1", t)?;
                }
                if !(s.jitter >= 0.0 && s.jitter.is_finite()) {
                    return Err(bad("schedule.jitter", "must be non-negative"));
                }
                if s.runs == 0 {
                    return Err(bad("schedule.runs", "need at least one run"));
                }
                if self.kind == ExperimentKind::Collapse && s.omega_t1.len() < 2 {
                    return Err(bad("schedule.omega_t1", "collapse needs at least two periods"));
                }
                if s.n_measurements < 2 {
                    return Err(bad("schedule.n_measurements", "decay fits need at least two events"));
                }
            }
        }
        Ok(())
    }

    /// True when an unjittered schedule uses a period ratio close to a
    /// small-denominator rational, which invites dynamical resonances.
    pub fn commensurate_schedule(&self) -> bool {
        let uses_jitter = matches!(self.kind, ExperimentKind::Survival | ExperimentKind::Collapse);
        if uses_jitter && self.schedule.jitter > 0.0 {
            return false;
        }
        if !matches!(
            self.kind,
            ExperimentKind::Survival | ExperimentKind::Collapse | ExperimentKind::T1Sweep
        ) {
            return false;
        }
        let r = self.schedule.ratio;
        (1..=12u32).any(|q| {
            let scaled = r * q as f64;
            (scaled - scaled.round()).abs() < 1e-9 * scaled.max(1.0)
        })
    }
}
