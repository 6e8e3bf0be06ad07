//! Operators on the truncated qubit ⊗ Fock space.
//!
//! Basis convention: composite index `s * (n_max + 1) + n`, qubit-major, with
//! `s = 0` the qubit ground state `|g>` and `s = 1` the excited state `|e>`.
//! `σ^z |e> = +|e>`, so `(ω₀/2) σ^z` puts the bare qubit ground state at `-ω₀/2`.

use nalgebra::DVector;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::{tensor_product, ComplexMatrix, HermitianOperator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Qubit {
    Ground,
    Excited,
}

impl Qubit {
    fn slot(self) -> usize {
        match self {
            Qubit::Ground => 0,
            Qubit::Excited => 1,
        }
    }
}

/// Fock space truncated at `n_max` photons, tensored with one qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FockBasis {
    n_max: usize,
}

impl FockBasis {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::param("operators", "n_max", n_max as f64, "must be at least 1"));
        }
        Ok(FockBasis { n_max })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Number of Fock levels, `n_max + 1`.
    pub fn field_dim(&self) -> usize {
        self.n_max + 1
    }

    /// Composite dimension `2 (n_max + 1)`.
    pub fn dim(&self) -> usize {
        2 * self.field_dim()
    }

    pub fn index(&self, qubit: Qubit, n: usize) -> usize {
        assert!(n <= self.n_max, "photon number {n} above cutoff {}", self.n_max);
        qubit.slot() * self.field_dim() + n
    }

    /// Inverse of [`FockBasis::index`].
    pub fn label(&self, index: usize) -> (Qubit, usize) {
        let q = if index < self.field_dim() {
            Qubit::Ground
        } else {
            Qubit::Excited
        };
        (q, index % self.field_dim())
    }

    /// `|s, n>` as an amplitude vector.
    pub fn ket(&self, qubit: Qubit, n: usize) -> DVector<C64> {
        let mut v = DVector::zeros(self.dim());
        v[self.index(qubit, n)] = C64::new(1.0, 0.0);
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QubitOp {
    SigmaX,
    SigmaZ,
    /// `|e><e|`
    ProjE,
    /// `|g><g|`
    ProjG,
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Field annihilation operator on the `n_max + 1` Fock levels.
pub fn annihilation(basis: FockBasis) -> ComplexMatrix {
    ComplexMatrix::from_fn(basis.field_dim(), |i, j| {
        if j == i + 1 {
            real((j as f64).sqrt())
        } else {
            real(0.0)
        }
    })
}

/// Field creation operator.
pub fn creation(basis: FockBasis) -> ComplexMatrix {
    annihilation(basis).adjoint()
}

/// Photon number `a^†a` on the field factor.
pub fn number(basis: FockBasis) -> ComplexMatrix {
    let diag: Vec<f64> = (0..basis.field_dim()).map(|n| n as f64).collect();
    ComplexMatrix::from_real_diagonal(&diag)
}

fn qubit_matrix(which: QubitOp) -> ComplexMatrix {
    let z = real(0.0);
    let one = real(1.0);
    // rows/cols ordered (g, e)
    let entries = match which {
        QubitOp::SigmaX => [z, one, one, z],
        QubitOp::SigmaZ => [real(-1.0), z, z, one],
        QubitOp::ProjE => [z, z, z, one],
        QubitOp::ProjG => [one, z, z, z],
    };
    ComplexMatrix::from_row_major(2, &entries).expect("2x2 qubit operator")
}

/// `|e><g|`, raising the qubit.
pub fn sigma_plus() -> ComplexMatrix {
    ComplexMatrix::from_row_major(2, &[real(0.0), real(0.0), real(1.0), real(0.0)])
        .expect("2x2 qubit operator")
}

/// `q ⊗ 1_field`.
pub fn embed_qubit(basis: FockBasis, q: &ComplexMatrix) -> ComplexMatrix {
    tensor_product(q, &ComplexMatrix::identity(basis.field_dim())).expect("basis within cap")
}

/// `1_qubit ⊗ f`.
pub fn embed_field(basis: FockBasis, f: &ComplexMatrix) -> ComplexMatrix {
    debug_assert_eq!(f.dim(), basis.field_dim());
    tensor_product(&ComplexMatrix::identity(2), f).expect("basis within cap")
}

pub fn qubit_operator(which: QubitOp, basis: FockBasis) -> HermitianOperator {
    HermitianOperator::new(embed_qubit(basis, &qubit_matrix(which)))
        .expect("qubit operators are Hermitian")
}

/// Parity `(-1)^(n + s)`; the Rabi Hamiltonian conserves it.
pub fn parity_operator(basis: FockBasis) -> HermitianOperator {
    let diag: Vec<f64> = (0..basis.dim())
        .map(|i| {
            let (q, n) = basis.label(i);
            if (n + q.slot()) % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        })
        .collect();
    HermitianOperator::new(ComplexMatrix::from_real_diagonal(&diag)).expect("diagonal is Hermitian")
}

/// Parity of a single basis index.
pub fn parity_of(basis: FockBasis, index: usize) -> i8 {
    let (q, n) = basis.label(index);
    if (n + q.slot()) % 2 == 0 {
        1
    } else {
        -1
    }
}
