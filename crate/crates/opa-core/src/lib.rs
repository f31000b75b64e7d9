//! Spatially multimode phase-sensitive optical parametric amplifier model.
//!
//! The crate builds the far-field two-photon amplitude of a pumped
//! second-order nonlinear crystal, decomposes it into Schmidt mode pairs via
//! a Takagi factorization, and evaluates the seeded output photon number and
//! its phase-scan visibility for Gaussian coherent seeds. On top of these
//! primitives sit parameter sweeps over seed divergence and central angle.
//!
//! Everything here is a pure function of its inputs; all result values are
//! immutable after construction and safe to share across threads.
//!
//! Conventions adopted throughout:
//! - SI units everywhere (rad/m for transverse wavevectors, m for positions);
//! - the far-to-near Fourier kernel is `e^{+i q ρ}`;
//! - intensity FWHM is the width convention for both the pump waist and the
//!   seed divergence.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod amplifier;
pub mod error;
pub mod fourier;
pub mod grid;
pub mod scan;
pub mod schmidt;
pub mod seed;
pub mod tpa;

pub use amplifier::{output_photon_number, phase_scan, PhaseScanResult};
pub use error::Error;
pub use fourier::{far_to_near, near_to_far};
pub use grid::{make_qgrid, QGrid, RGrid};
pub use scan::{
    fwhm, scan_angle, scan_map, GridSpec, MapContext, ScanSpec, VisibilityMap, VisibilityResult,
};
pub use schmidt::{decompose, schmidt_number, Parity, SchmidtDecomposition, DEFAULT_TRUNCATION};
pub use seed::{gaussian_seed, overlaps, OverlapSet, SeedSpectrum};
pub use tpa::{
    build_delta_tpa, build_tpa, phase_matching_bandwidth, CrystalPumpConfig, Domain,
    PhaseMatchingModel, TwoPhotonAmplitude,
};

/// Complex scalar used for all amplitudes.
pub type C64 = num_complex::Complex64;
