//! Simulation of a pulsed, driven quantum harmonic oscillator whose
//! spectral-density-weighted drive averages reproduce the non-Markovian
//! dynamics of a damped oscillator, plus the exact master-equation benchmark
//! the simulation is validated against and a trapped-ion experiment planner.
//!
//! Module map:
//! - [`closed_drive`]: single-drive coherent amplitude and heating formulas;
//! - [`spectral`]: Ohmic Lorentz–Drude reservoir model;
//! - [`ensemble_average`]: phase/frequency averaging engine, density matrix,
//!   coherence checks;
//! - [`exact_benchmark`]: time-dependent diffusion coefficient, exact heating,
//!   thermal populations, characteristic-function verification;
//! - [`ion_planner`]: discrete experiment plans and their Riemann-sum heating;
//! - [`quad`]: the adaptive Gauss–Legendre integrator the engines share.

// `!(x >= 0.0)` is used instead of `x < 0.0` throughout so NaN inputs
// fail domain checks too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod closed_drive;
pub mod ensemble_average;
pub mod error;
pub mod exact_benchmark;
pub mod fock;
pub mod ion_planner;
pub mod quad;
pub mod series;
pub mod spectral;

pub use closed_drive::{
    CoherentAmplitude, DerivedCouplings, DriveSpec, OscillatorParams, RESONANCE_EPS,
};
pub use ensemble_average::{FrequencyBand, PhaseMode};
pub use error::{Error, Result};
pub use fock::FockDensityMatrix;
pub use ion_planner::{ExperimentPlan, IonParams, PhasePolicy, TargetReservoir};
pub use quad::QuadConfig;
pub use series::{HeatingSeries, SeriesMeta};
pub use spectral::SpectralModel;
