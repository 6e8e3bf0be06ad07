//! Simulation of repeated, slow and possibly imperfect qubit measurements on
//! an ultrastrongly coupled qubit–resonator (quantum Rabi) system.
//!
//! The dressed ground state of the Rabi model carries a small excited-qubit
//! component that grows like `(g/ω)²`. Measuring the qubit repeatedly and
//! conditioning on "no click" drives the system out of equilibrium, and the
//! probability of never seeing the qubit excited decays roughly exponentially
//! in the number of measurements.
//!
//! Module map:
//!
//! * [`numkit`]: dense complex matrices, Kronecker products, Hermitian
//!   eigendecomposition, propagators.
//! * [`operators`]: ladder, Pauli, projector and parity operators on qubit ⊗ Fock.
//! * [`model`]: Rabi / Jaynes–Cummings Hamiltonians and the ground-state chain.
//! * [`dynamics`]: pure and mixed states and their unitary evolution.
//! * [`measurement`]: projective and ε-imperfect no-click maps.
//! * [`protocol`]: schedules, survival traces, ensembles and period sweeps.
//! * [`analysis`]: least-squares laws and the `t/T₁` collapse.
//! * [`par`]: rayon dispatch with a sequential fallback (`parallel` feature).

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod dynamics;
pub mod error;
pub mod measurement;
pub mod model;
pub mod numkit;
pub mod operators;
pub mod par;
pub mod protocol;

pub use error::{Error, ErrorKind, Result};
pub use num_complex::Complex64 as C64;
