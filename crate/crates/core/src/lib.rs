//! Two-qubit system-plus-ancilla open quantum system.
//!
//! A system qubit `S` is damped by a thermal bath and coupled through an XYZ
//! exchange interaction to an undamped ancilla qubit `A`. The joint `S+A`
//! evolution is a Lindblad semigroup while the reduced evolution of `S` is in
//! general non-Markovian. The crate provides:
//!
//! * [`linalg`]: dense complex algebra for 2- and 4-dimensional Hilbert spaces
//!   (Pauli operators, partial traces, matrix logarithms, entropies).
//! * [`model`]: Hamiltonians, the dissipator and the vectorised Liouvillian.
//! * [`dynamics`]: adaptive time evolution and the stationary state.
//! * [`correlations`]: concurrence, entanglement of formation, mutual
//!   information and effective inverse temperatures.
//! * [`thermo`]: entropy production and entropy production rates.
//! * [`nonmarkov`]: trace-distance dynamics and information backflow.
//! * [`analytic`]: closed-form solution of the excitation-preserving,
//!   resonant case, used as an independent check of the numerics.
//!
//! Basis conventions are fixed crate-wide: the joint space is ordered
//! `S ⊗ A`, and each qubit has the ground state `|0⟩` before the excited state
//! `|1⟩`, with `σ_z = |1⟩⟨1| − |0⟩⟨0|` so that `ω σ_z` assigns energy `−ω` to
//! the ground state. Entropies are in nats unless stated otherwise.
#![no_std]

extern crate alloc;

pub mod analytic;
pub mod correlations;
pub mod dynamics;
mod error;
pub mod linalg;
pub(crate) mod math;
pub mod model;
pub mod nonmarkov;
pub mod ode;
pub mod thermo;

pub use error::{Error, Result};
pub use linalg::{DensityMatrix, Operator, Subsystem, Superoperator, C64};
pub use model::ModelParams;
