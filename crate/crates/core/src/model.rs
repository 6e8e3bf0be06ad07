//! Rabi and Jaynes–Cummings Hamiltonians and their dressed ground state.
//!
//! Units: frequencies in GHz, times in ns, ħ = 1.

use nalgebra::DVector;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::dynamics::QuantumState;
use crate::error::{Error, Result};
use crate::numkit::{hermitian_eig, ComplexMatrix, HermitianOperator, SpectralDecomposition};
use crate::operators::{
    annihilation, creation, embed_field, embed_qubit, number, qubit_operator, sigma_plus,
    FockBasis, Qubit, QubitOp,
};

/// Gap below which the ground manifold counts as degenerate.
pub const DEGENERACY_GAP: f64 = 1e-10;

/// Norm/trace slack accepted by [`excitation_probability`].
pub const NORMALIZATION_TOL: f64 = 1e-8;

pub const CUTOFF_START: usize = 10;
pub const CUTOFF_STEP: usize = 10;
pub const CUTOFF_CAP: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Resonator frequency ω.
    pub omega: f64,
    /// Qubit splitting ω₀.
    pub omega0: f64,
    /// Coupling strength g.
    pub g: f64,
    /// Fock cutoff.
    pub n_max: usize,
}

impl ModelParams {
    pub fn new(omega: f64, omega0: f64, g: f64, n_max: usize) -> Result<Self> {
        let p = ModelParams {
            omega,
            omega0,
            g,
            n_max,
        };
        p.validate()?;
        Ok(p)
    }

    /// Resonant (ω = ω₀) parameters at a given `g/ω`.
    pub fn resonant(omega: f64, g_over_omega: f64, n_max: usize) -> Result<Self> {
        Self::new(omega, omega, g_over_omega * omega, n_max)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(Error::param("model", "omega", self.omega, "must be positive"));
        }
        if !(self.omega0 >= 0.0 && self.omega0.is_finite()) {
            return Err(Error::param("model", "omega0", self.omega0, "must be non-negative"));
        }
        if !(self.g >= 0.0 && self.g.is_finite()) {
            return Err(Error::param("model", "g", self.g, "must be non-negative"));
        }
        if self.n_max < 1 {
            return Err(Error::param("model", "n_max", self.n_max as f64, "must be at least 1"));
        }
        Ok(())
    }

    pub fn g_over_omega(&self) -> f64 {
        self.g / self.omega
    }

    pub fn with_cutoff(&self, n_max: usize) -> Self {
        ModelParams { n_max, ..*self }
    }

    pub fn basis(&self) -> Result<FockBasis> {
        FockBasis::new(self.n_max)
    }
}

fn free_part(p: &ModelParams, basis: FockBasis) -> ComplexMatrix {
    embed_field(basis, &number(basis))
        .scale(p.omega)
        .add(&qubit_operator(QubitOp::SigmaZ, basis).matrix().scale(p.omega0 / 2.0))
}

/// `H = ω a†a + (ω₀/2) σ^z + g σ^x (a + a†)`.
pub fn rabi_hamiltonian(p: &ModelParams) -> Result<HermitianOperator> {
    p.validate()?;
    let basis = p.basis()?;
    let quadrature = embed_field(basis, &annihilation(basis).add(&creation(basis)));
    let sx = qubit_operator(QubitOp::SigmaX, basis);
    let coupling = (sx.matrix() * &quadrature).scale(p.g);
    HermitianOperator::new(free_part(p, basis).add(&coupling))
}

/// `H_JC = ω a†a + (ω₀/2) σ^z + g (σ⁺ a + σ⁻ a†)`.
pub fn jaynes_cummings_hamiltonian(p: &ModelParams) -> Result<HermitianOperator> {
    p.validate()?;
    let basis = p.basis()?;
    let raise = &embed_qubit(basis, &sigma_plus()) * &embed_field(basis, &annihilation(basis));
    let coupling = raise.add(&raise.adjoint()).scale(p.g);
    HermitianOperator::new(free_part(p, basis).add(&coupling))
}

/// Ground state `|G> = c₀|g,0> + c₁|e,1> + c₂|g,2> + ...`.
#[derive(Debug, Clone)]
pub struct GroundStateDecomposition {
    pub energy: f64,
    /// Lowest eigenvector, phase fixed so that `c₀ >= 0` unless `degenerate`.
    pub state: DVector<C64>,
    /// `c_{2n} = <g,2n|G>`, `c_{2n+1} = <e,2n+1|G>` for `0 <= k <= n_max`.
    pub even_chain: Vec<C64>,
    /// `<G|P_e|G>`; averaged over the ground manifold when degenerate.
    pub p_e: f64,
    /// Set when the gap to the first excited level is below [`DEGENERACY_GAP`]
    /// (e.g. ω₀ = 0). The state is then an arbitrary member of the manifold and
    /// is not phase fixed; the parity invariants do not apply.
    pub degenerate: bool,
    pub n_max: usize,
}

impl GroundStateDecomposition {
    pub fn c0(&self) -> C64 {
        self.even_chain[0]
    }

    pub fn c1(&self) -> C64 {
        self.even_chain[1]
    }

    /// Weight outside the even chain.
    pub fn odd_weight(&self) -> f64 {
        1.0 - self.even_chain.iter().map(|c| c.norm_sqr()).sum::<f64>()
    }

    pub fn to_state(&self) -> QuantumState {
        QuantumState::Pure(self.state.clone())
    }
}

/// Ground-state decomposition from an existing eigendecomposition.
pub fn ground_state_from(spec: &SpectralDecomposition, basis: FockBasis) -> GroundStateDecomposition {
    let evals = spec.eigenvalues();
    let scale = evals.iter().fold(1.0f64, |m, e| m.max(e.abs()));
    let multiplicity = evals
        .iter()
        .take_while(|&&e| e - evals[0] < DEGENERACY_GAP * scale)
        .count();
    let degenerate = multiplicity > 1;

    let mut state = spec.eigenvector(0);
    let pe = qubit_operator(QubitOp::ProjE, basis);
    let p_e = if degenerate {
        (0..multiplicity)
            .map(|k| pe.expectation(&spec.eigenvector(k)))
            .sum::<f64>()
            / multiplicity as f64
    } else {
        let c0 = state[basis.index(Qubit::Ground, 0)];
        if c0.norm() > 0.0 {
            let phase = c0.conj() / c0.norm();
            for z in state.iter_mut() {
                *z *= phase;
            }
        }
        // c0 is now real up to rounding; pin its imaginary part.
        let i0 = basis.index(Qubit::Ground, 0);
        state[i0] = C64::new(state[i0].re.max(0.0), 0.0);
        pe.expectation(&state)
    };

    let even_chain = (0..=basis.n_max())
        .map(|k| {
            let q = if k % 2 == 0 { Qubit::Ground } else { Qubit::Excited };
            state[basis.index(q, k)]
        })
        .collect();

    GroundStateDecomposition {
        energy: evals[0],
        state,
        even_chain,
        p_e,
        degenerate,
        n_max: basis.n_max(),
    }
}

/// Lowest eigenstate of the Rabi Hamiltonian.
pub fn ground_state(p: &ModelParams) -> Result<GroundStateDecomposition> {
    let spec = hermitian_eig(&rabi_hamiltonian(p)?)?;
    Ok(ground_state_from(&spec, p.basis()?))
}

/// `<P_e>` for a normalized pure state or density matrix.
pub fn excitation_probability(state: &QuantumState) -> Result<f64> {
    let weight = state.weight();
    if (weight - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::InvalidState(format!(
            "state not normalized (norm/trace {weight})"
        )));
    }
    let dim = state.dim();
    if dim < 4 || !dim.is_multiple_of(2) {
        return Err(Error::DimensionMismatch {
            expected: 2 * (dim / 2).max(2),
            got: dim,
        });
    }
    let half = dim / 2;
    let p = match state {
        QuantumState::Pure(v) => v.rows(half, half).norm_squared(),
        QuantumState::Density(m) => (half..dim).map(|i| m[(i, i)].re).sum(),
    };
    Ok(p.clamp(0.0, 1.0))
}

/// First-order perturbative `c₁ = -g/(ω + ω₀)`.
pub fn perturbative_c1(p: &ModelParams) -> f64 {
    -p.g / (p.omega + p.omega0)
}

/// Small-coupling `λ = ω²/(ω + ω₀)²` in `p_e ≈ λ (g/ω)²`.
pub fn perturbative_lambda(p: &ModelParams) -> f64 {
    (p.omega / (p.omega + p.omega0)).powi(2)
}

fn cutoff_changes(p: &ModelParams, n_max: usize) -> Result<(f64, f64)> {
    let a = ground_state(&p.with_cutoff(n_max))?;
    let b = ground_state(&p.with_cutoff(n_max + CUTOFF_STEP))?;
    Ok(((a.energy - b.energy).abs(), (a.p_e - b.p_e).abs()))
}

/// Smallest `n_max` in 10, 20, ... for which the ground energy and `p_e` move
/// by less than `tol` when the cutoff grows by 10. The largest cutoff ever
/// diagonalized is [`CUTOFF_CAP`].
pub fn converge_cutoff(p: &ModelParams, tol: f64) -> Result<usize> {
    if !(tol > 0.0) {
        return Err(Error::param("model", "tol", tol, "must be positive"));
    }
    p.validate()?;
    let mut n = CUTOFF_START;
    while n + CUTOFF_STEP <= CUTOFF_CAP {
        let (de, dp) = cutoff_changes(p, n)?;
        if de < tol && dp < tol {
            return Ok(n);
        }
        n += CUTOFF_STEP;
    }
    Err(Error::CutoffNotConverged {
        tol,
        cap: CUTOFF_CAP,
    })
}

/// Verifies that `p.n_max` is converged to `tol` against `n_max + 10`.
pub fn check_cutoff(p: &ModelParams, tol: f64) -> Result<()> {
    let (de, dp) = cutoff_changes(p, p.n_max)?;
    if de < tol && dp < tol {
        Ok(())
    } else {
        Err(Error::CutoffCheckFailed {
            n_max: p.n_max,
            energy_change: de,
            pe_change: dp,
            tol,
        })
    }
}

/// `|<E_k|psi>|²` for the `k` lowest eigenstates.
pub fn eigenstate_overlaps(
    state: &DVector<C64>,
    spec: &SpectralDecomposition,
    k: usize,
) -> Result<Vec<f64>> {
    if state.len() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            got: state.len(),
        });
    }
    if k > spec.dim() {
        return Err(Error::param("model", "k", k as f64, "exceeds the dimension"));
    }
    Ok((0..k)
        .map(|i| spec.eigenvectors().column(i).dotc(state).norm_sqr())
        .collect())
}
