//! Coupled-mode model of a magnon and a phonon that talk to each other only
//! through a shared, pumped optical cavity.
//!
//! The crate is `no_std` (it needs `alloc` for sweep results) and covers the
//! whole numerical pipeline:
//!
//! * [`model`]: mode parameters, susceptibilities and the pump-enhanced
//!   couplings `G_a` (photon-magnon) and `G_b` (photon-phonon).
//! * [`self_energy`]: optically induced self-energies and the mediated
//!   magnon/phonon couplings, plus detuning sweeps.
//! * [`noise`]: frequency-domain Langevin solve for the TE output field under
//!   thermal drive, its closed-form cross-check and the resulting PSD.
//! * [`spectral`]: the reduced two-mode non-Hermitian Hamiltonian, its
//!   eigen-structure, exceptional-point search and branch-tracked surfaces.
//! * [`encircle`]: adiabatic transport around loops in (drive, detuning)
//!   space, energy fractions and chirality metrics.
//!
//! All rates share one unit (the crate never inserts factors of 2π) and
//! ħ = 1.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod encircle;
pub mod error;
pub mod grid;
pub mod linalg;
pub mod model;
pub mod noise;
pub mod ode;
pub mod self_energy;
pub mod spectral;

pub use error::{Error, Result};
pub use model::{
    effective_couplings, steady_amplitude, steady_tm_amplitude, susceptibility, ConjugationConvention,
    EffectiveCoupling, ModeKind, OscillatorMode, PumpDrive, SigmaEvalFrequency, SystemConfig,
};

/// Complex double used throughout.
pub type C64 = num_complex::Complex<f64>;

/// One plotted unit on the drive axis of the parameter plane (0.1 THz).
pub const DRIVE_UNIT: f64 = 1.0e11;
/// One plotted unit on the TE detuning axis (1 MHz).
pub const DETUNING_UNIT: f64 = 1.0e6;
