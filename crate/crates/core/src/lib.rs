//! Simulation and optimization of the reversible optical-to-spin conversion
//! in an atomic-frequency-comb spin-wave memory.
//!
//! The model propagates two-level Bloch dynamics under chirped HSH control
//! pulses, averages the inversion efficiency over Gaussian spectra and over
//! the Gaussian beam geometry (co-linear or crossed), applies the Lorentzian
//! RF-circuit filtering to the spin control, and composes the single-pulse
//! efficiencies into the back-and-forth conversion and total memory
//! efficiencies. Parameter sweeps and a control-waist optimizer sit on top.
//!
//! All core math is generic over the scalar type (`f32`/`f64`) through the
//! [`Real`] trait; concrete `f64` aliases for the main types are exported at
//! the crate root. Quantities are SI: seconds, meters, and rad/s for every
//! frequency-like value (multiply an ordinary frequency by 2 pi).

// Validation is written `!(x > 0)` rather than `x <= 0` so NaN inputs are
// rejected instead of accepted.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod beams;
pub mod bloch;
pub mod efficiency;
pub mod error;
pub mod float;
pub mod interp;
pub mod ode;
pub mod optimize;
pub mod pulses;
pub mod quad;
pub mod spatial;
pub mod spectral;
pub mod spincontrol;
pub mod sweeps;

pub use error::{Error, Result};
pub use float::Real;

/// Concrete `f64` aliases for the main model types.
pub type HshParams64 = pulses::HshParams<f64>;
pub type HshPulse64 = pulses::HshPulse<f64>;
pub type SquarePulse64 = pulses::SquarePulse<f64>;
pub type BlochVector64 = bloch::BlochVector<f64>;
pub type GaussianSpectrum64 = spectral::GaussianSpectrum<f64>;
pub type GaussianBeam64 = beams::GaussianBeam<f64>;
pub type CrystalGeometry64 = beams::CrystalGeometry<f64>;
pub type OpticalControlConfig64 = spatial::OpticalControlConfig<f64>;
pub type RadialEfficiencyMap64 = spatial::RadialEfficiencyMap<f64>;
pub type RfCircuit64 = spincontrol::RfCircuit<f64>;
pub type SpinControlConfig64 = spincontrol::SpinControlConfig<f64>;
pub type EfficiencyResult64 = efficiency::EfficiencyResult<f64>;
pub type AfcDecayParams64 = efficiency::AfcDecayParams<f64>;
pub type ModelConfig64 = sweeps::ModelConfig<f64>;
pub type SweepSpec64 = sweeps::SweepSpec<f64>;
pub type SweepResult64 = sweeps::SweepResult<f64>;
