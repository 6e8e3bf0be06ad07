//! Repeated-measurement protocol: schedules built from two incommensurate
//! periods, optional timing jitter, survival accumulation, ensemble averages
//! over jittered schedules and sweeps over the base period.
//!
//! Determinism: every random draw comes from a `ChaCha8Rng` seeded from a
//! 64-bit seed. Ensemble member `k` uses [`derive_seed`]`(base_seed, k)`.
//! Ensemble and sweep members may run in parallel but are reduced in index
//! order, so results do not depend on the thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::DecayCurve;
use crate::dynamics::{evolve, QuantumState};
use crate::error::{Error, Result};
use crate::measurement::{measure_no_click, MeasurementModel};
use crate::model::{ground_state_from, rabi_hamiltonian, GroundStateDecomposition, ModelParams};
use crate::numkit::{hermitian_eig, HermitianOperator, SpectralDecomposition};
use crate::operators::FockBasis;
use crate::par::{map_indexed, map_slice, Execution};

/// Name of the pseudo-random generator, recorded in output metadata.
pub const GENERATOR: &str = "ChaCha8Rng (rand_chacha 0.9), splitmix64 child seeds";

pub const JITTER_ATTEMPTS: usize = 100;

/// Child seed for ensemble member `k`: the splitmix64 finalizer applied to
/// `base + (k + 1) * 0x9E3779B97F4A7C15` (wrapping).
pub fn derive_seed(base_seed: u64, k: u64) -> u64 {
    let mut z = base_seed.wrapping_add(k.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScheduleProvenance {
    pub t1: f64,
    pub ratio: f64,
    /// Dimensionless half-width `ω Δt` of the jitter window; 0 if unjittered.
    pub jitter_width: f64,
    pub seed: Option<u64>,
}

/// Strictly increasing measurement times (ns), first time positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementSchedule {
    times: Vec<f64>,
    provenance: ScheduleProvenance,
}

impl MeasurementSchedule {
    pub fn new(times: Vec<f64>, provenance: ScheduleProvenance) -> Result<Self> {
        match times.first() {
            None => return Err(Error::param("protocol", "times", 0.0, "schedule is empty")),
            Some(&t) if !(t > 0.0) || !t.is_finite() => {
                return Err(Error::param("protocol", "t1", t, "first time must be positive"))
            }
            _ => {}
        }
        if let Some(w) = times.windows(2).find(|w| !(w[1] > w[0]) || !w[1].is_finite()) {
            return Err(Error::param(
                "protocol",
                "times",
                w[1],
                "times must be strictly increasing",
            ));
        }
        Ok(MeasurementSchedule { times, provenance })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn provenance(&self) -> ScheduleProvenance {
        self.provenance
    }
}

/// `t_n ∈ {T₁, T₁+T₂, 2T₁+T₂, 2T₁+2T₂, ...}` with `T₂ = ratio · T₁`.
pub fn two_period_schedule(t1: f64, ratio: f64, n: usize) -> Result<MeasurementSchedule> {
    if !(t1 > 0.0 && t1.is_finite()) {
        return Err(Error::param("protocol", "T1", t1, "must be positive"));
    }
    if !(ratio > 0.0 && ratio.is_finite()) {
        return Err(Error::param("protocol", "ratio", ratio, "must be positive"));
    }
    if n == 0 {
        return Err(Error::param("protocol", "N", 0.0, "need at least one measurement"));
    }
    let t2 = ratio * t1;
    // closed form per event keeps long schedules free of accumulated rounding
    let times = (1..=n)
        .map(|k| {
            let long = (k / 2) as f64;
            let short = k.div_ceil(2) as f64;
            short * t1 + long * t2
        })
        .collect();
    MeasurementSchedule::new(
        times,
        ScheduleProvenance {
            t1,
            ratio,
            jitter_width: 0.0,
            seed: None,
        },
    )
}

/// Shifts every time by an independent uniform draw in `[-width/ω, +width/ω]`.
///
/// A draw that breaks strict ordering (or makes the first time non-positive)
/// is redrawn, up to [`JITTER_ATTEMPTS`] times per event.
pub fn jitter_schedule(
    s: &MeasurementSchedule,
    width: f64,
    omega: f64,
    seed: u64,
) -> Result<MeasurementSchedule> {
    if !(width >= 0.0 && width.is_finite()) {
        return Err(Error::param("protocol", "jitter_width", width, "must be non-negative"));
    }
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::param("protocol", "omega", omega, "must be positive"));
    }
    let mut provenance = s.provenance;
    provenance.jitter_width = width;
    provenance.seed = Some(seed);
    if width == 0.0 {
        return MeasurementSchedule::new(s.times.clone(), provenance);
    }
    let half = width / omega;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(s.len());
    for (index, &t) in s.times.iter().enumerate() {
        let floor = out.last().copied().unwrap_or(0.0);
        let mut placed = None;
        for _ in 0..JITTER_ATTEMPTS {
            let candidate = t + rng.random_range(-half..=half);
            if candidate > floor {
                placed = Some(candidate);
                break;
            }
        }
        out.push(placed.ok_or(Error::JitterOrdering {
            index,
            attempts: JITTER_ATTEMPTS,
        })?);
    }
    MeasurementSchedule::new(out, provenance)
}

/// Per-event no-click probabilities and their running product.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurvivalTrace {
    pub times: Vec<f64>,
    /// `p_ng`, one per measurement event.
    pub single: Vec<f64>,
    /// `P_g^N = Π_{n<=N} p_ng`, accumulated in log space.
    pub cumulative: Vec<f64>,
    /// Arithmetic mean of `single`.
    pub mean_single: f64,
}

impl SurvivalTrace {
    fn from_single(times: Vec<f64>, single: Vec<f64>) -> Self {
        let mut log_sum = 0.0;
        let cumulative = single
            .iter()
            .map(|p| {
                log_sum += p.ln();
                log_sum.exp()
            })
            .collect();
        let mean_single = single.iter().sum::<f64>() / single.len() as f64;
        SurvivalTrace {
            times,
            single,
            cumulative,
            mean_single,
        }
    }

    pub fn final_survival(&self) -> f64 {
        *self.cumulative.last().expect("non-empty trace")
    }

    /// Per-event `χ_n = (1 - p_ng)(ω/g)²`; NaN at zero coupling.
    pub fn chi(&self, g_over_omega: f64) -> Vec<f64> {
        chi_column(&self.single, g_over_omega)
    }
}

pub(crate) fn chi_column(single: &[f64], g_over_omega: f64) -> Vec<f64> {
    single
        .iter()
        .map(|p| {
            if g_over_omega > 0.0 {
                (1.0 - p) / (g_over_omega * g_over_omega)
            } else {
                f64::NAN
            }
        })
        .collect()
}

impl DecayCurve for SurvivalTrace {
    fn event_times(&self) -> &[f64] {
        &self.times
    }

    fn survival(&self) -> &[f64] {
        &self.cumulative
    }
}

/// Ensemble statistics over jittered realizations of one base schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleTrace {
    /// Nominal (unjittered) event times.
    pub times: Vec<f64>,
    pub single_mean: Vec<f64>,
    pub single_std: Vec<f64>,
    pub cumulative_mean: Vec<f64>,
    pub cumulative_std: Vec<f64>,
    /// Mean over runs of each run's `mean_single`.
    pub mean_single: f64,
    pub runs: usize,
    pub base_seed: u64,
}

impl DecayCurve for EnsembleTrace {
    fn event_times(&self) -> &[f64] {
        &self.times
    }

    fn survival(&self) -> &[f64] {
        &self.cumulative_mean
    }
}

/// Population mean and standard deviation per column.
fn column_stats(rows: &[&[f64]]) -> (Vec<f64>, Vec<f64>) {
    let n = rows.len() as f64;
    let width = rows[0].len();
    let mut mean = vec![0.0; width];
    for r in rows {
        for (m, v) in mean.iter_mut().zip(r.iter()) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n);
    let mut var = vec![0.0; width];
    for r in rows {
        for ((s, v), m) in var.iter_mut().zip(r.iter()).zip(&mean) {
            *s += (v - m) * (v - m);
        }
    }
    let std = var.into_iter().map(|s| (s / n).sqrt()).collect();
    (mean, std)
}

/// One diagonalized system, shared read-only across schedule runs.
#[derive(Debug, Clone)]
pub struct SurvivalSimulator {
    omega: f64,
    basis: FockBasis,
    spec: SpectralDecomposition,
    ground: GroundStateDecomposition,
}

impl SurvivalSimulator {
    /// Rabi model at `p`.
    pub fn new(p: &ModelParams) -> Result<Self> {
        Self::from_hamiltonian(&rabi_hamiltonian(p)?, p.basis()?, p.omega)
    }

    /// Any Hamiltonian on `basis`; `omega` sets the jitter time scale.
    pub fn from_hamiltonian(h: &HermitianOperator, basis: FockBasis, omega: f64) -> Result<Self> {
        if h.dim() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                got: h.dim(),
            });
        }
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::param("protocol", "omega", omega, "must be positive"));
        }
        let spec = hermitian_eig(h)?;
        let ground = ground_state_from(&spec, basis);
        Ok(SurvivalSimulator {
            omega,
            basis,
            spec,
            ground,
        })
    }

    pub fn ground(&self) -> &GroundStateDecomposition {
        &self.ground
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spec
    }

    pub fn basis(&self) -> FockBasis {
        self.basis
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Starts in the ground state and measures at every scheduled time.
    ///
    /// Uses the pure-state path whenever the conditional state stays pure
    /// (ε ∈ {0, 1}), the density-matrix path otherwise.
    pub fn run(&self, schedule: &MeasurementSchedule, m: MeasurementModel) -> Result<SurvivalTrace> {
        let eps = m.epsilon();
        let start = self.ground.to_state();
        if eps == 0.0 || eps == 1.0 {
            self.run_from(start, schedule, m)
        } else {
            self.run_from(start.into_density(), schedule, m)
        }
    }

    /// Same as [`SurvivalSimulator::run`] but always on density matrices.
    pub fn run_density(
        &self,
        schedule: &MeasurementSchedule,
        m: MeasurementModel,
    ) -> Result<SurvivalTrace> {
        self.run_from(self.ground.to_state().into_density(), schedule, m)
    }

    fn run_from(
        &self,
        mut state: QuantumState,
        schedule: &MeasurementSchedule,
        m: MeasurementModel,
    ) -> Result<SurvivalTrace> {
        let mut single = Vec::with_capacity(schedule.len());
        // The ground state only picks up a global phase before the first event.
        let mut last = schedule.times()[0];
        for &t in schedule.times() {
            if t != last {
                state = evolve(&self.spec, &state, t - last);
                last = t;
            }
            let outcome = measure_no_click(&state, m)?;
            single.push(outcome.no_click_probability.min(1.0));
            state = outcome.post_state;
        }
        Ok(SurvivalTrace::from_single(schedule.times().to_vec(), single))
    }

    /// Statistics over `runs` jittered copies of `base`.
    pub fn ensemble(
        &self,
        base: &MeasurementSchedule,
        m: MeasurementModel,
        jitter_width: f64,
        runs: usize,
        base_seed: u64,
        exec: Execution,
    ) -> Result<EnsembleTrace> {
        if runs == 0 {
            return Err(Error::param("protocol", "runs", 0.0, "need at least one run"));
        }
        let traces = map_indexed(exec, runs, |k| {
            let schedule = jitter_schedule(base, jitter_width, self.omega, derive_seed(base_seed, k as u64))?;
            self.run(&schedule, m)
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

        let singles: Vec<&[f64]> = traces.iter().map(|t| t.single.as_slice()).collect();
        let cumulatives: Vec<&[f64]> = traces.iter().map(|t| t.cumulative.as_slice()).collect();
        let (single_mean, single_std) = column_stats(&singles);
        let (cumulative_mean, cumulative_std) = column_stats(&cumulatives);
        let mean_single = traces.iter().map(|t| t.mean_single).sum::<f64>() / runs as f64;
        Ok(EnsembleTrace {
            times: base.times().to_vec(),
            single_mean,
            single_std,
            cumulative_mean,
            cumulative_std,
            mean_single,
            runs,
            base_seed,
        })
    }

    /// Mean over `t1_values` of the final survival `P_g^N`.
    pub fn sweep_t1(
        &self,
        n: usize,
        t1_values: &[f64],
        ratio: f64,
        m: MeasurementModel,
        exec: Execution,
    ) -> Result<f64> {
        if t1_values.is_empty() {
            return Err(Error::param("protocol", "T1_values", 0.0, "sweep is empty"));
        }
        let finals = map_slice(exec, t1_values, |&t1| {
            let s = two_period_schedule(t1, ratio, n)?;
            Ok(self.run(&s, m)?.final_survival())
        })
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
        Ok(finals.iter().sum::<f64>() / finals.len() as f64)
    }
}

/// Survival trace of the Rabi model at `p` for one schedule.
pub fn run_survival(
    p: &ModelParams,
    s: &MeasurementSchedule,
    m: MeasurementModel,
) -> Result<SurvivalTrace> {
    SurvivalSimulator::new(p)?.run(s, m)
}

/// Ensemble over `runs` jittered schedules; seeds derived from `base_seed`.
pub fn ensemble_survival(
    p: &ModelParams,
    base: &MeasurementSchedule,
    m: MeasurementModel,
    jitter_width: f64,
    runs: usize,
    base_seed: u64,
) -> Result<EnsembleTrace> {
    SurvivalSimulator::new(p)?.ensemble(base, m, jitter_width, runs, base_seed, Execution::default())
}

/// Mean final survival over a set of base periods.
pub fn sweep_t1(
    p: &ModelParams,
    n: usize,
    t1_values: &[f64],
    ratio: f64,
    m: MeasurementModel,
) -> Result<f64> {
    SurvivalSimulator::new(p)?.sweep_t1(n, t1_values, ratio, m, Execution::default())
}

/// Survival if every no-click projected straight back onto `|G>`: `|c₀|^(2N+2)`.
pub fn truncated_survival(c0: f64, n: usize) -> f64 {
    let c0 = c0.abs();
    assert!(c0 <= 1.0, "|c0| = {c0} exceeds 1");
    c0.powi(2 * n as i32 + 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum T1Sampling {
    /// Equally spaced, both endpoints included.
    Uniform,
    /// Independent uniform draws from the seeded generator.
    Random,
}

/// `count` periods in `[lo, hi]`.
pub fn t1_values(lo: f64, hi: f64, count: usize, sampling: T1Sampling, seed: u64) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
        return Err(Error::param("protocol", "T1_range", lo, "need 0 < lo <= hi"));
    }
    if count == 0 {
        return Err(Error::param("protocol", "T1_count", 0.0, "need at least one period"));
    }
    Ok(match sampling {
        T1Sampling::Uniform if count == 1 => vec![lo],
        T1Sampling::Uniform => (0..count)
            .map(|k| lo + (hi - lo) * k as f64 / (count - 1) as f64)
            .collect(),
        T1Sampling::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count).map(|_| rng.random_range(lo..=hi)).collect()
        }
    })
}
