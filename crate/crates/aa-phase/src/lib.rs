//! Geometric phases of anharmonic Bose Hamiltonians in a truncated Fock
//! basis.
//!
//! The library builds the banded family
//! `H = sum_p eps_p (a^dag a)^p + sum_s A_s [(a^dag a)^s a^2 + a^dag^2 (a^dag a)^s]`,
//! prepares initial states from standard photon-statistics families, evolves
//! them exactly through a Hermitian eigendecomposition, and computes the
//! non-adiabatic (Aharonov-Anandan) geometric phase over one gauge period
//! `T = 2*pi / sum_s A_s` three ways: the closed-form amplitude sums, a
//! coherent-state specialization, and an independent finite-difference
//! quadrature over the gauged trajectory.
//!
//! Start with the runnable examples:
//!
//! - `build_hamiltonian` - construct the banded operator, inspect bands
//! - `photon_statistics` - the state families, mean photon number, Mandel Q
//! - `evolve_state` - exact spectral propagation, conservation checks
//! - `phase_report` - every phase quantity for one parameter point
//! - `theta_sweep` - tunability of the phase with the input-field phase
//! - `quadrature_convergence` - measured order of the quadrature oracle
//!
//! ```bash
//! cargo run --release -p aa-phase --example phase_report
//! ```
//!
//! The `aa-phase` binary exposes the same pipeline as `single`, `sweep`, and
//! `verify` subcommands; see the repository README for the configuration
//! schema and output formats.

// Tolerance checks are written as `!(x <= tol)` so that a NaN fails the
// check instead of slipping through a plain `x > tol`.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod evolution;
pub mod fock;
pub mod hamiltonian;
pub mod oracles;
pub mod phase;
pub mod statistics;
pub mod sweep;
pub mod tolerances;
pub mod verify;

pub use error::{Error, Result};
pub use evolution::{decompose, gauge_transform, SpectralDecomposition, TrajectorySample};
pub use fock::FockState;
pub use hamiltonian::{
    build_hamiltonian, lambda_and_period, BandedHermitianOperator, GaugeSchedule, QesParams,
};
pub use phase::{
    closed_form_breakdown, dynamical_phase, dynamical_phase_quadrature, full_report,
    geometric_phase_closed, geometric_phase_coherent, geometric_phase_quadrature,
    total_phase_and_cyclicity, ClosedFormBreakdown, CyclicityCheck, PhaseReport,
};
pub use statistics::{
    amplitudes, amplitudes_with_min_dim, mandel_q, mean_photon, StatisticsSpec, TailReport,
};
