use antizeno_core::analysis::{collapse_slopes, fit_exponential, fit_quadratic_origin};
use antizeno_core::dynamics::excitation_trace_with;
use antizeno_core::measurement::{measure_no_click, MeasurementModel};
use antizeno_core::model::{check_cutoff, converge_cutoff, ground_state, ModelParams};
use antizeno_core::par::{map_slice, Execution};
use antizeno_core::protocol::{t1_values, two_period_schedule, EnsembleTrace, SurvivalSimulator, GENERATOR};
use serde::{Deserialize, Serialize};

use crate::config::{Cutoff, ExperimentConfig, ExperimentKind};
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutoffReport {
    pub n_max: usize,
    /// `fixed` or `auto`.
    pub mode: String,
    pub tol: f64,
    /// Coupling (GHz) at which convergence was checked: the largest requested.
    pub checked_at_g: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub generator: String,
    pub seed: u64,
    pub cutoff: CutoffReport,
    pub commensurate_schedule: bool,
    pub config: ExperimentConfig,
}

/// Long-format numeric table, one observable per column.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub metadata: Metadata,
    pub table: Table,
}

fn resolve_cutoff(c: &ExperimentConfig) -> Result<CutoffReport, CliError> {
    let m = &c.model;
    let g_ref = m.g.iter().copied().fold(0.0, f64::max);
    let probe = |n| ModelParams::new(m.omega, m.omega0, g_ref, n);
    let (n_max, mode) = match m.n_max {
        Cutoff::Fixed(n) => {
            check_cutoff(&probe(n)?, m.cutoff_tol)?;
            (n, "fixed")
        }
        Cutoff::Auto => (converge_cutoff(&probe(1)?, m.cutoff_tol)?, "auto"),
    };
    Ok(CutoffReport {
        n_max,
        mode: mode.into(),
        tol: m.cutoff_tol,
        checked_at_g: g_ref,
    })
}

/// Validates, resolves the cutoff and computes the experiment's table.
pub fn run(config: &ExperimentConfig) -> Result<RunOutput, CliError> {
    config.validate()?;
    let cutoff = resolve_cutoff(config)?;
    let params: Vec<ModelParams> = config
        .model
        .g
        .iter()
        .map(|&g| ModelParams::new(config.model.omega, config.model.omega0, g, cutoff.n_max))
        .collect::<Result<_, _>>()?;
    let table = match config.kind {
        ExperimentKind::GroundState => ground_state_table(&params)?,
        ExperimentKind::ExcitationTrace => excitation_table(config, &params)?,
        ExperimentKind::T1Sweep => sweep_table(config, &params)?,
        ExperimentKind::Survival | ExperimentKind::Collapse => survival_table(config, &params)?,
    };
    Ok(RunOutput {
        metadata: Metadata {
            tool: "antizeno".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            generator: GENERATOR.into(),
            seed: config.seed,
            cutoff,
            commensurate_schedule: config.commensurate_schedule(),
            config: config.clone(),
        },
        table,
    })
}

fn ground_state_table(params: &[ModelParams]) -> Result<Table, CliError> {
    let p_e = map_slice(Execution::default(), params, |p| ground_state(p).map(|gs| gs.p_e))
        .into_iter()
        .collect::<Result<Vec<f64>, _>>()?;
    let x: Vec<f64> = params.iter().map(ModelParams::g_over_omega).collect();
    let fit = fit_quadratic_origin(&x, &p_e)?;
    Ok(Table {
        columns: vec!["g_over_omega", "p_e", "lambda_fit", "r_squared"],
        rows: x
            .iter()
            .zip(&p_e)
            .map(|(&g, &pe)| vec![g, pe, fit.lambda(), fit.r_squared])
            .collect(),
    })
}

fn excitation_table(c: &ExperimentConfig, params: &[ModelParams]) -> Result<Table, CliError> {
    let grid = c.trace.as_ref().expect("validated");
    let steps = (grid.omega_t_max / grid.omega_t_step + 1e-9).floor() as usize;
    let omega_t: Vec<f64> = (0..=steps).map(|k| k as f64 * grid.omega_t_step).collect();
    let times: Vec<f64> = omega_t.iter().map(|wt| wt / c.model.omega).collect();
    let mut rows = Vec::with_capacity(params.len() * omega_t.len());
    for p in params {
        let sim = SurvivalSimulator::new(p)?;
        // start from the conditional state after one ideal no-click
        let start = measure_no_click(&sim.ground().to_state(), MeasurementModel::projective())?;
        let trace = excitation_trace_with(
            sim.spectrum(),
            sim.basis(),
            &start.post_state,
            &times,
            Execution::default(),
        )?;
        rows.extend(
            omega_t
                .iter()
                .zip(&trace.values)
                .map(|(&wt, &pe)| vec![p.g_over_omega(), wt, pe]),
        );
    }
    Ok(Table {
        columns: vec!["g_over_omega", "omega_t", "p_e"],
        rows,
    })
}

fn sweep_table(c: &ExperimentConfig, params: &[ModelParams]) -> Result<Table, CliError> {
    let w = c.sweep.as_ref().expect("validated");
    let omega = c.model.omega;
    let periods = t1_values(w.omega_t1_min / omega, w.omega_t1_max / omega, w.count, w.sampling, c.seed)?;
    let sims: Vec<SurvivalSimulator> = params
        .iter()
        .map(SurvivalSimulator::new)
        .collect::<Result<_, _>>()?;
    let x2: Vec<f64> = params.iter().map(|p| p.g_over_omega().powi(2)).collect();
    let mut rows = Vec::new();
    for &eps in &c.measurement.epsilon {
        let m = MeasurementModel::new(eps)?;
        let means = sims
            .iter()
            .map(|s| s.sweep_t1(c.schedule.n_measurements, &periods, c.schedule.ratio, m, Execution::default()))
            .collect::<Result<Vec<f64>, _>>()?;
        // ln P̄ = -rate · (g/ω)²
        let (rate, r2) = if params.len() >= 2 {
            let fit = fit_exponential(&x2, &means)?;
            (fit.rate(), fit.r_squared)
        } else {
            (f64::NAN, f64::NAN)
        };
        rows.extend(
            params
                .iter()
                .zip(&means)
                .map(|(p, &mean)| vec![p.g_over_omega(), eps, mean, rate, r2]),
        );
    }
    Ok(Table {
        columns: vec!["g_over_omega", "epsilon", "mean_survival", "gaussian_rate", "r_squared"],
        rows,
    })
}

struct Series {
    omega_t1: f64,
    g_over_omega: f64,
    epsilon: f64,
    trace: EnsembleTrace,
}

fn survival_table(c: &ExperimentConfig, params: &[ModelParams]) -> Result<Table, CliError> {
    let s = &c.schedule;
    let omega = c.model.omega;
    let sims: Vec<SurvivalSimulator> = params
        .iter()
        .map(SurvivalSimulator::new)
        .collect::<Result<_, _>>()?;
    let mut series = Vec::new();
    for &wt1 in &s.omega_t1 {
        let base = two_period_schedule(wt1 / omega, s.ratio, s.n_measurements)?;
        for (p, sim) in params.iter().zip(&sims) {
            for &eps in &c.measurement.epsilon {
                let m = MeasurementModel::new(eps)?;
                // same seed for every series: common random schedules across g and ε
                let trace = sim.ensemble(&base, m, s.jitter, s.runs, c.seed, Execution::default())?;
                series.push(Series {
                    omega_t1: wt1,
                    g_over_omega: p.g_over_omega(),
                    epsilon: eps,
                    trace,
                });
            }
        }
    }

    let collapse = c.kind == ExperimentKind::Collapse;
    let mut columns = vec![
        "omega_t1",
        "g_over_omega",
        "epsilon",
        "n",
        "omega_t",
        "t_over_t1",
        "single_mean",
        "single_std",
        "cumulative_mean",
        "cumulative_std",
        "chi",
        "mean_single",
        "rate_per_event",
        "fit_r_squared",
    ];
    if collapse {
        columns.extend(["collapse_rate", "collapse_ratio"]);
    }

    let events: Vec<f64> = (1..=s.n_measurements).map(|n| n as f64).collect();
    let mut rows = Vec::new();
    for sr in &series {
        let tr = &sr.trace;
        let fit = fit_exponential(&events, &tr.cumulative_mean)?;
        let extra = if collapse {
            let group: Vec<(f64, &EnsembleTrace)> = series
                .iter()
                .filter(|o| o.g_over_omega == sr.g_over_omega && o.epsilon == sr.epsilon)
                .map(|o| (o.omega_t1 / omega, &o.trace))
                .collect();
            let report = collapse_slopes(&group)?;
            let own = report
                .fits
                .iter()
                .position(|(t1, _)| *t1 == sr.omega_t1 / omega)
                .expect("series is in its own group");
            vec![report.fits[own].1.rate(), report.ratio]
        } else {
            Vec::new()
        };
        for k in 0..tr.times.len() {
            let t = tr.times[k];
            let chi = if sr.g_over_omega > 0.0 {
                (1.0 - tr.single_mean[k]) / sr.g_over_omega.powi(2)
            } else {
                f64::NAN
            };
            let mut row = vec![
                sr.omega_t1,
                sr.g_over_omega,
                sr.epsilon,
                (k + 1) as f64,
                omega * t,
                t * omega / sr.omega_t1,
                tr.single_mean[k],
                tr.single_std[k],
                tr.cumulative_mean[k],
                tr.cumulative_std[k],
                chi,
                tr.mean_single,
                fit.rate(),
                fit.r_squared,
            ];
            row.extend(&extra);
            rows.push(row);
        }
    }
    Ok(Table { columns, rows })
}
