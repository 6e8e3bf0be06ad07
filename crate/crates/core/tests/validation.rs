//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.
//!
//! Run with `cargo test -p antizeno-core --test validation --release`.

use std::f64::consts::{PI, SQRT_2};
use std::process::ExitCode;
use std::time::Instant;

use antizeno_core::analysis::{collapse_slopes, fit_exponential, fit_linear, fit_quadratic_origin};
use antizeno_core::dynamics::{evolve, QuantumState};
use antizeno_core::measurement::{click_probability, measure_no_click, MeasurementModel};
use antizeno_core::model::{
    check_cutoff, ground_state, ground_state_from, jaynes_cummings_hamiltonian, perturbative_lambda,
    rabi_hamiltonian, ModelParams,
};
use antizeno_core::numkit::{hermitian_eig, propagator, ComplexMatrix};
use antizeno_core::operators::parity_operator;
use antizeno_core::par::Execution;
use antizeno_core::protocol::{
    jitter_schedule, t1_values, truncated_survival, two_period_schedule, EnsembleTrace,
    SurvivalSimulator, T1Sampling,
};
use antizeno_core::Result;

const N_MAX: usize = 40;
const SEED: u64 = 42;
const RUNS: usize = 20;
const JITTER: f64 = 0.2 * PI;
const N_EVENTS: usize = 8;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Result<Verdict> {
    Ok(Verdict { pass, detail })
}

fn resonant(g: f64) -> Result<ModelParams> {
    ModelParams::resonant(1.0, g, N_MAX)
}

fn unit_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| k as f64 / (n - 1) as f64).collect()
}

fn jittered(g: f64, omega_t1: f64, eps: f64) -> Result<EnsembleTrace> {
    let sim = SurvivalSimulator::new(&resonant(g)?)?;
    let base = two_period_schedule(omega_t1, SQRT_2, N_EVENTS)?;
    sim.ensemble(&base, MeasurementModel::new(eps)?, JITTER, RUNS, SEED, Execution::default())
}

fn events() -> Vec<f64> {
    (1..=N_EVENTS).map(|n| n as f64).collect()
}

fn quadratic_law() -> Result<Verdict> {
    let x = unit_grid(101);
    let pe = x
        .iter()
        .map(|&g| Ok(ground_state(&resonant(g)?)?.p_e))
        .collect::<Result<Vec<f64>>>()?;
    let full = fit_quadratic_origin(&x, &pe)?;
    let small = fit_quadratic_origin(&x[..6], &pe[..6])?;
    let target = perturbative_lambda(&resonant(0.05)?);
    let rel = (small.lambda() - target).abs() / target;
    verdict(
        full.r_squared >= 0.999 && rel <= 0.02,
        format!(
            "R²={:.5} (≥0.999), small-g λ={:.5} vs {target} rel={:.2e} (≤0.02)",
            full.r_squared,
            small.lambda(),
            rel
        ),
    )
}

fn rwa_null() -> Result<Verdict> {
    let mut worst_pe = 0.0f64;
    let mut worst_dev = 0.0f64;
    for g in [0.1, 0.5, 0.9] {
        let p = resonant(g)?;
        let h = jaynes_cummings_hamiltonian(&p)?;
        let gs = ground_state_from(&hermitian_eig(&h)?, p.basis()?);
        worst_pe = worst_pe.max(gs.p_e);
        let sim = SurvivalSimulator::from_hamiltonian(&h, p.basis()?, p.omega)?;
        let base = two_period_schedule(2.0 * PI, SQRT_2, 20)?;
        for eps in [0.0, 0.2] {
            let s = jitter_schedule(&base, JITTER, 1.0, SEED)?;
            let tr = sim.run(&s, MeasurementModel::new(eps)?)?;
            for v in tr.single.iter().chain(&tr.cumulative) {
                worst_dev = worst_dev.max((1.0 - v).abs());
            }
        }
    }
    verdict(
        worst_pe <= 1e-12 && worst_dev <= 1e-12,
        format!("max p_e={worst_pe:.1e} (≤1e-12), max |1-P|={worst_dev:.1e} (≤1e-12)"),
    )
}

fn closed_form() -> Result<Verdict> {
    let mut worst_e = 0.0f64;
    let mut worst_p = 0.0f64;
    for g in [0.3, 1.0] {
        let gs = ground_state(&ModelParams::new(1.0, 0.0, g, N_MAX)?)?;
        worst_e = worst_e.max((gs.energy + g * g).abs());
        worst_p = worst_p.max((gs.p_e - 0.5).abs());
    }
    verdict(
        worst_e <= 1e-9 && worst_p <= 1e-9,
        format!("max |E+g²/ω|={worst_e:.1e}, max |p_e-1/2|={worst_p:.1e} (both ≤1e-9)"),
    )
}

fn exponential_law() -> Result<Verdict> {
    let mut rates = Vec::new();
    let mut worst_r2 = 1.0f64;
    for g in [1.0 / 3.0, 2.0 / 3.0, 1.0] {
        let tr = jittered(g, 0.75 * PI, 0.0)?;
        let fit = fit_exponential(&events(), &tr.cumulative_mean)?;
        worst_r2 = worst_r2.min(fit.r_squared);
        rates.push(fit.rate());
    }
    let increasing = rates.windows(2).all(|w| w[1] > w[0]);
    verdict(
        worst_r2 >= 0.95 && increasing,
        format!("min R²={worst_r2:.4} (≥0.95), rates {rates:.4?} strictly increasing: {increasing}"),
    )
}

fn mean_single_law() -> Result<Verdict> {
    let x = unit_grid(11);
    let deficit = x
        .iter()
        .map(|&g| Ok(1.0 - jittered(g, 0.75 * PI, 0.0)?.mean_single))
        .collect::<Result<Vec<f64>>>()?;
    let fit = fit_quadratic_origin(&x, &deficit)?;
    verdict(
        fit.r_squared >= 0.99,
        format!("χ̄={:.4}, R²={:.4} (≥0.99)", fit.lambda(), fit.r_squared),
    )
}

fn gaussian_in_g() -> Result<Verdict> {
    let periods = t1_values(0.2 * PI, 10.0 * PI, 100, T1Sampling::Uniform, SEED)?;
    let x = unit_grid(11);
    let mut ln_p = Vec::new();
    for &g in &x {
        let sim = SurvivalSimulator::new(&resonant(g)?)?;
        let mean = sim.sweep_t1(N_EVENTS, &periods, SQRT_2, MeasurementModel::projective(), Execution::default())?;
        ln_p.push(mean.ln());
    }
    let x2: Vec<f64> = x.iter().map(|g| g * g).collect();
    let fit = fit_linear(&x2, &ln_p)?;
    verdict(
        fit.r_squared >= 0.95,
        format!("slope={:.4}, R²={:.4} (≥0.95)", fit.slope, fit.r_squared),
    )
}

fn collapse() -> Result<Verdict> {
    let series = [PI, 2.0 * PI, 3.0 * PI]
        .iter()
        .map(|&t1| Ok((t1, jittered(1.0, t1, 0.0)?)))
        .collect::<Result<Vec<_>>>()?;
    let report = collapse_slopes(&series)?;
    verdict(
        report.ratio <= 1.4,
        format!("rates per t/T₁ {:.4?}, max/min={:.4} (≤1.4)", report.rates(), report.ratio),
    )
}

fn weak_measurement() -> Result<Verdict> {
    let traces = [0.0, 0.1, 0.2]
        .iter()
        .map(|&e| jittered(1.0, 2.0 * PI, e))
        .collect::<Result<Vec<_>>>()?;
    let monotone = traces
        .iter()
        .all(|t| t.cumulative_mean.windows(2).all(|w| w[1] <= w[0]));
    let r2 = fit_exponential(&events(), &traces[2].cumulative_mean)?.r_squared;
    let mut worst_margin = f64::INFINITY;
    for pair in traces.windows(2) {
        let (lo, hi) = (&pair[0], &pair[1]);
        for k in 0..N_EVENTS {
            let margin = hi.cumulative_mean[k] - lo.cumulative_mean[k] + lo.cumulative_std[k];
            worst_margin = worst_margin.min(margin);
        }
    }
    verdict(
        monotone && r2 >= 0.9 && worst_margin >= 0.0,
        format!(
            "monotone: {monotone}, R²(ε=0.2)={r2:.4} (≥0.9), min ordering margin={worst_margin:.4} (≥0)"
        ),
    )
}

fn truncated_model() -> Result<Verdict> {
    let periods = t1_values(0.2 * PI, 10.0 * PI, 100, T1Sampling::Uniform, SEED)?;
    let mut ratios = Vec::new();
    for g in [0.1, 0.2, 1.0 / 3.0] {
        let sim = SurvivalSimulator::new(&resonant(g)?)?;
        let simulated =
            sim.sweep_t1(N_EVENTS, &periods, SQRT_2, MeasurementModel::projective(), Execution::default())?;
        let c0 = sim.ground().c0().norm();
        ratios.push(simulated / truncated_survival(c0, N_EVENTS));
    }
    let ok = ratios.iter().all(|r| (0.5..=2.0).contains(r));
    verdict(ok, format!("simulated/|c₀|^18 at g/ω=0.1,0.2,1/3: {ratios:.4?} (within [0.5, 2])"))
}

fn invariants() -> Result<Verdict> {
    let p = resonant(1.0)?;
    let basis = p.basis()?;
    let h = rabi_hamiltonian(&p)?;
    let spec = hermitian_eig(&h)?;
    let parity = parity_operator(basis);

    let herm = h.matrix().hermiticity_defect();
    let id = ComplexMatrix::identity(basis.dim());
    let mut unit = 0.0f64;
    for t in [0.3, 7.0, 40.0] {
        let u = propagator(&spec, t);
        unit = unit.max((&u * &u.adjoint()).max_abs_diff(&id));
    }
    let comm = h.matrix().commutator(parity.matrix()).max_abs();

    // parity of an evolved no-click state stays put
    let gs = ground_state(&p)?;
    let start = measure_no_click(&gs.to_state(), MeasurementModel::projective())?.post_state;
    let par0 = start.expectation(&parity);
    let par_drift = [1.0, 5.0, 25.0]
        .iter()
        .map(|&t| (evolve(&spec, &start, t).expectation(&parity) - par0).abs())
        .fold(0.0, f64::max);

    let mut cp = 0.0f64;
    for (t, eps) in [(0.7, 0.0), (2.1, 0.1), (4.4, 0.5), (9.9, 1.0)] {
        let st: QuantumState = evolve(&spec, &start, t);
        let m = MeasurementModel::new(eps)?;
        let total = click_probability(&st, m)? + measure_no_click(&st, m)?.no_click_probability;
        cp = cp.max((total - 1.0).abs());
    }

    let sim = SurvivalSimulator::new(&p)?;
    let base = two_period_schedule(0.75 * PI, SQRT_2, 30)?;
    let mut monotone = true;
    for (k, eps) in [0.0, 0.1, 0.2].into_iter().enumerate() {
        let s = jitter_schedule(&base, JITTER, 1.0, SEED + k as u64)?;
        let tr = sim.run(&s, MeasurementModel::new(eps)?)?;
        monotone &= tr.cumulative.windows(2).all(|w| w[1] <= w[0]);
    }

    let cutoff_ok = check_cutoff(&p, 1e-8).is_ok();

    let m = MeasurementModel::new(0.1)?;
    let seq = sim.ensemble(&two_period_schedule(2.0 * PI, SQRT_2, 8)?, m, JITTER, 8, SEED, Execution::Sequential)?;
    let par = sim.ensemble(&two_period_schedule(2.0 * PI, SQRT_2, 8)?, m, JITTER, 8, SEED, Execution::Parallel)?;
    let again = sim.ensemble(&two_period_schedule(2.0 * PI, SQRT_2, 8)?, m, JITTER, 8, SEED, Execution::Parallel)?;
    let deterministic = seq == par && par == again;

    let pass = herm <= 1e-12
        && unit <= 1e-12
        && comm <= 1e-12
        && par_drift <= 1e-12
        && cp <= 1e-12
        && monotone
        && cutoff_ok
        && deterministic;
    verdict(
        pass,
        format!(
            "hermiticity {herm:.1e}, unitarity {unit:.1e}, [H,Π] {comm:.1e}, parity drift {par_drift:.1e}, \
             click+no-click {cp:.1e}, monotone {monotone}, cutoff 40→50 {cutoff_ok}, bit-identical {deterministic}"
        ),
    )
}

type Check = fn() -> Result<Verdict>;

fn main() -> ExitCode {
    let checks: [(&str, Check); 10] = [
        ("quadratic ground-state law", quadratic_law),
        ("RWA null test", rwa_null),
        ("closed-form ω₀=0 anchor", closed_form),
        ("exponential survival law", exponential_law),
        ("mean single-shot survival", mean_single_law),
        ("Gaussian-in-g sweep", gaussian_in_g),
        ("t/T₁ collapse", collapse),
        ("weak-measurement robustness", weak_measurement),
        ("truncated-model oracle", truncated_model),
        ("invariant suite", invariants),
    ];
    let mut passed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let start = Instant::now();
        let (status, detail) = match check() {
            Ok(v) => (if v.pass { "PASS" } else { "FAIL" }, v.detail),
            Err(e) => ("FAIL", format!("error: {e}")),
        };
        if status == "PASS" {
            passed += 1;
        }
        println!(
            "criterion {:>2} {status}: {name}: {detail} [{:.1}s]",
            i + 1,
            start.elapsed().as_secs_f64()
        );
    }
    println!("{passed}/{} criteria passed", checks.len());
    if passed == checks.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
