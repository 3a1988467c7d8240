//! Local-field electrodynamics of a finite linear chain of polarizable atoms.
//!
//! The crate solves the coupled-dipole equations for the electromagnetic mode
//! functions at every atom of the chain, extracts the per-atom amplitude
//! factors, and turns them into single-emitter observables: decay rate and
//! lifetime relative to free space, the radiative frequency shift, and the
//! rotated angular distribution of the emitted photons.
//!
//! The crate is `no_std` (with `alloc`) when built without the default `std`
//! feature. The `std` feature adds the FFT-backed Toeplitz product.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod analytic;
pub mod chain;
pub mod emission;
mod error;
pub mod golden;
pub mod quadrature;
pub mod solver;
pub mod vector;

pub use crate::analytic::{ApproxAmplitudes, ApproxOrder};
pub use crate::chain::{
    riemann_zeta3, ChainSpec, DipoleOrientation, ModeSpec, Polarization, ReferenceScales, Warning,
};
pub use crate::emission::{EmissionReport, IntensityPrefactor};
pub use crate::error::Error;
pub use crate::solver::{
    AmplitudeMethod, AmplitudeProfile, Component, FieldProfile, ScalarSystem, SolveMethod,
    SolveOptions, SolveReport, ZMode,
};

pub use num_complex::Complex64;

pub type Result<T, E = Error> = core::result::Result<T, E>;
