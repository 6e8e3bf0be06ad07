//! Two-outcome qubit readout: an ideal projective measurement of `P_e`, or an
//! imperfect one that leaves the state untouched with probability ε.
//!
//! The unnormalized no-click branch is
//! `σ = (1-ε) P_g ρ P_g + ε ρ`, and its trace is the no-click probability.
//! A "do nothing" event and a genuine no-click are indistinguishable in the record.

use nalgebra::DVector;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::dynamics::QuantumState;
use crate::error::{Error, Result};
use crate::model::excitation_probability;

/// No-click probabilities below this are reported as a certain click.
pub const CERTAIN_CLICK_TOL: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementModel {
    epsilon: f64,
}

impl MeasurementModel {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::param(
                "measurement",
                "epsilon",
                epsilon,
                "must lie in [0, 1]",
            ));
        }
        Ok(MeasurementModel { epsilon })
    }

    pub fn projective() -> Self {
        MeasurementModel { epsilon: 0.0 }
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

#[derive(Debug, Clone)]
pub struct MeasurementOutcome {
    pub no_click_probability: f64,
    /// Conditional state after no click, normalized.
    pub post_state: QuantumState,
}

fn project_ground_vector(v: &DVector<C64>) -> DVector<C64> {
    let half = v.len() / 2;
    let mut out = v.clone();
    out.rows_mut(half, half).fill(C64::new(0.0, 0.0));
    out
}

/// Applies the no-click branch and renormalizes.
///
/// Pure input stays pure at ε = 0 (and at ε = 1, where the map is the
/// identity); for 0 < ε < 1 the conditional state is mixed and is returned
/// as a density matrix.
pub fn measure_no_click(state: &QuantumState, m: MeasurementModel) -> Result<MeasurementOutcome> {
    let eps = m.epsilon();
    if eps == 1.0 {
        return Ok(MeasurementOutcome {
            no_click_probability: 1.0,
            post_state: state.clone(),
        });
    }
    match state {
        QuantumState::Pure(v) if eps == 0.0 => {
            let projected = project_ground_vector(v);
            let prob = projected.norm_squared();
            if prob < CERTAIN_CLICK_TOL {
                return Err(Error::CertainClick { probability: prob });
            }
            Ok(MeasurementOutcome {
                no_click_probability: prob,
                post_state: QuantumState::Pure(projected.unscale(prob.sqrt())),
            })
        }
        _ => {
            let mut sigma = state.to_density_matrix();
            let dim = sigma.nrows();
            let half = dim / 2;
            // P_g ρ P_g keeps only the g-g block, so σ is ρ with every
            // block touching |e> scaled by ε.
            for j in 0..dim {
                for i in 0..dim {
                    if i >= half || j >= half {
                        sigma[(i, j)] *= eps;
                    }
                }
            }
            let prob = sigma.trace().re;
            if prob < CERTAIN_CLICK_TOL {
                return Err(Error::CertainClick { probability: prob });
            }
            sigma.unscale_mut(prob);
            Ok(MeasurementOutcome {
                no_click_probability: prob,
                post_state: QuantumState::Density(sigma),
            })
        }
    }
}

/// `(1-ε) <P_e>`.
pub fn click_probability(state: &QuantumState, m: MeasurementModel) -> Result<f64> {
    Ok((1.0 - m.epsilon()) * excitation_probability(state)?)
}
