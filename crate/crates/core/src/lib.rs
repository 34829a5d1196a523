//! Adiabatic quantum state transfer through a non-uniform triple quantum dot.
//!
//! An electron is moved from the left dot to the right dot of a linear
//! three-dot chain by sweeping the end-dot gate voltages with two
//! time-shifted Gaussian pulses while the system follows its instantaneous
//! ground state. The crate provides:
//!
//! - [`model`]: pulse schedules and the instantaneous Hamiltonian,
//! - [`spectral`]: Jacobi eigen-decomposition, gap tracking, adiabaticity metric,
//! - [`perturbation`]: the first-order ground state and closed-form fidelity,
//! - [`dynamics`]: RK4 integration of the von Neumann and Schrödinger equations,
//! - [`experiments`]: parameter sweeps over pulse width, duration, depth and coupling ratio,
//! - [`cli`]: config parsing and CSV output behind the `adiapass` binary.
//!
//! Units: ħ = 1, energies in units of the M–R coupling, time in its inverse.

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod model;
pub mod perturbation;
pub mod spectral;

pub use error::{Error, Result};
pub use model::{CouplingPair, HermitianMatrix3, PulseSchedule, SystemConfig};
