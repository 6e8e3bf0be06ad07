//! Quantum states and their unitary evolution under a fixed Hamiltonian.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::model::{rabi_hamiltonian, ModelParams};
use crate::numkit::{hermitian_eig, ComplexMatrix, HermitianOperator, SpectralDecomposition};
use crate::operators::{qubit_operator, FockBasis, QubitOp};
use crate::par::{map_slice, Execution};

pub const PURE_NORM_TOL: f64 = 1e-10;
pub const DENSITY_HERMITIAN_TOL: f64 = 1e-12;
pub const DENSITY_TRACE_TOL: f64 = 1e-10;
pub const DENSITY_POSITIVITY_TOL: f64 = 1e-10;

/// A pure amplitude vector or a density matrix over the composite basis.
///
/// The validating constructors enforce unit norm / unit trace and positivity;
/// the variants are public so callers can pattern match.
#[derive(Debug, Clone, PartialEq)]
pub enum QuantumState {
    Pure(DVector<C64>),
    Density(DMatrix<C64>),
}

impl QuantumState {
    pub fn pure(amplitudes: DVector<C64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > PURE_NORM_TOL {
            return Err(Error::InvalidState(format!("pure state norm {norm}")));
        }
        Ok(QuantumState::Pure(amplitudes))
    }

    /// Normalizes `amplitudes` first.
    pub fn pure_normalized(amplitudes: DVector<C64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        Ok(QuantumState::Pure(amplitudes.unscale(norm)))
    }

    pub fn density(rho: DMatrix<C64>) -> Result<Self> {
        let m = ComplexMatrix::new(rho.clone())?;
        let defect = m.hermiticity_defect();
        if defect > DENSITY_HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("density matrix not Hermitian ({defect:e})")));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > DENSITY_TRACE_TOL || tr.im.abs() > DENSITY_TRACE_TOL {
            return Err(Error::InvalidState(format!("density matrix trace {tr}")));
        }
        let min = HermitianOperator::new(m)
            .and_then(|h| hermitian_eig(&h))?
            .eigenvalues()[0];
        if min < -DENSITY_POSITIVITY_TOL {
            return Err(Error::InvalidState(format!("density matrix eigenvalue {min:e}")));
        }
        Ok(QuantumState::Density(rho))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let mut rho = DMatrix::<C64>::identity(dim, dim);
        rho.unscale_mut(dim as f64);
        QuantumState::Density(rho)
    }

    pub fn dim(&self) -> usize {
        match self {
            QuantumState::Pure(v) => v.len(),
            QuantumState::Density(m) => m.nrows(),
        }
    }

    pub fn is_pure_variant(&self) -> bool {
        matches!(self, QuantumState::Pure(_))
    }

    /// `|psi><psi|` for pure states, a clone otherwise.
    pub fn to_density_matrix(&self) -> DMatrix<C64> {
        match self {
            QuantumState::Pure(v) => v * v.adjoint(),
            QuantumState::Density(m) => m.clone(),
        }
    }

    pub fn into_density(self) -> Self {
        match self {
            QuantumState::Pure(_) => QuantumState::Density(self.to_density_matrix()),
            d => d,
        }
    }

    /// Squared norm (pure) or real trace (density).
    pub fn weight(&self) -> f64 {
        match self {
            QuantumState::Pure(v) => v.norm_squared(),
            QuantumState::Density(m) => m.trace().re,
        }
    }

    /// `tr(rho^2)`; 1 for pure states.
    pub fn purity(&self) -> f64 {
        match self {
            QuantumState::Pure(v) => v.norm_squared().powi(2),
            QuantumState::Density(m) => m.iter().map(|z| z.norm_sqr()).sum(),
        }
    }

    pub fn expectation(&self, op: &HermitianOperator) -> f64 {
        match self {
            QuantumState::Pure(v) => op.expectation(v),
            QuantumState::Density(m) => op.expectation_density(m),
        }
    }
}

/// `U(t) psi` or `U(t) rho U(t)^H`.
pub fn evolve(spec: &SpectralDecomposition, state: &QuantumState, t: f64) -> QuantumState {
    assert!(t.is_finite(), "evolution time must be finite");
    match state {
        QuantumState::Pure(v) => QuantumState::Pure(spec.propagate_vector(v, t)),
        QuantumState::Density(m) => QuantumState::Density(spec.propagate_density(m, t)),
    }
}

/// Qubit excitation probability `p_1e(t)` sampled on a time grid (ns).
#[derive(Debug, Clone, PartialEq)]
pub struct ExcitationTrace {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

impl ExcitationTrace {
    /// Trapezoidal time average over the sampled window.
    pub fn time_average(&self) -> f64 {
        let span = self.times.last().unwrap_or(&0.0) - self.times.first().unwrap_or(&0.0);
        if self.times.len() < 2 || span <= 0.0 {
            return self.values.first().copied().unwrap_or(0.0);
        }
        let area: f64 = self
            .times
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1]))
            .sum();
        area / span
    }
}

fn check_grid(t_grid: &[f64]) -> Result<()> {
    if let Some(bad) = t_grid.iter().find(|t| !t.is_finite()) {
        return Err(Error::param("dynamics", "t_grid", *bad, "times must be finite"));
    }
    if let Some(w) = t_grid.windows(2).find(|w| w[1] < w[0]) {
        return Err(Error::param("dynamics", "t_grid", w[1], "times must be ascending"));
    }
    Ok(())
}

/// Excitation trace under a prepared spectral decomposition.
pub fn excitation_trace_with(
    spec: &SpectralDecomposition,
    basis: FockBasis,
    initial: &QuantumState,
    t_grid: &[f64],
    exec: Execution,
) -> Result<ExcitationTrace> {
    check_grid(t_grid)?;
    if initial.dim() != basis.dim() || spec.dim() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            got: initial.dim(),
        });
    }
    let pe = qubit_operator(QubitOp::ProjE, basis);
    let values = map_slice(exec, t_grid, |&t| {
        evolve(spec, initial, t).expectation(&pe).clamp(0.0, 1.0)
    });
    Ok(ExcitationTrace {
        times: t_grid.to_vec(),
        values,
    })
}

/// `p_1e(t) = <P_e>` along the Rabi evolution of `initial`.
pub fn excitation_trace(
    p: &ModelParams,
    initial: &QuantumState,
    t_grid: &[f64],
) -> Result<ExcitationTrace> {
    let h = rabi_hamiltonian(p)?;
    let spec = hermitian_eig(&h)?;
    excitation_trace_with(&spec, p.basis()?, initial, t_grid, Execution::default())
}
