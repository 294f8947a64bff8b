//! Classical analog of electromagnetically induced transparency (EIT) in two
//! linearly coupled damped harmonic oscillators, and in the equivalent pair of
//! coupled RLC meshes.
//!
//! The crate provides three independent routes to the same physics:
//!
//! * [`response`] — closed-form steady-state observables: the complex probe
//!   amplitude, the period-averaged absorbed power, and the mesh power
//!   transfer with the pump branch switched in or out.
//! * [`timedomain`] — a fixed-step RK4 integration of the real equations of
//!   motion plus quadrature demodulation, used as a numerical oracle for the
//!   closed forms.
//! * [`spectrum`] — frequency sweeps over any observable and extraction of
//!   the transparency phenomenology: dip, Autler-Townes splitting, dispersion
//!   slope and phase-jump structure.
//!
//! [`model`] holds the parameter sets for both pictures, derived quantities
//! (natural frequencies, coupling frequency, normal modes) and the role-based
//! translation between the mechanical and electrical descriptions.
//!
//! All types are plain immutable values and all functions are pure; everything
//! is `Send + Sync` and safe to evaluate concurrently. The numerics are
//! generic over the scalar type through [`Scalar`] (`f32` or `f64`); the
//! aliases at the crate root pin the common double-precision instantiations.

pub mod error;
pub mod model;
pub mod response;
pub mod spectrum;
pub mod timedomain;

mod scalar;

pub use error::{Error, Result};
pub use model::{
    circuit_to_mech, circuit_to_mech_scaled, derive_frequencies, mech_to_circuit,
    mech_to_circuit_scaled, normal_modes, CircuitParams, DerivedFrequencies, DrivenPair,
    MechanicalParams, NormalModes, Params, Picture, Translation,
};
pub use response::{
    circuit_power_closed, circuit_power_open, probe_amplitude, probe_amplitude_with_floor,
    probe_power, ComplexResponse, PowerSample,
};
pub use scalar::Scalar;
pub use spectrum::{
    dispersion_slope, find_extrema, phase_features, sweep, unwrap_phase, Extremum, FrequencyGrid,
    Observable, PhaseFeatures, PhaseJump, SpectralFeatures, Spectrum,
};
pub use timedomain::{
    integrate, steady_state_amplitude, Demod, IntegrationConfig, OraclePoint, OscState,
    Trajectory,
};

/// Double-precision mechanical parameter set.
pub type MechanicalParams64 = model::MechanicalParams<f64>;
/// Double-precision circuit parameter set.
pub type CircuitParams64 = model::CircuitParams<f64>;
/// Double-precision parameter set of either picture.
pub type Params64 = model::Params<f64>;
/// Double-precision frequency grid.
pub type FrequencyGrid64 = spectrum::FrequencyGrid<f64>;
/// Double-precision spectrum.
pub type Spectrum64 = spectrum::Spectrum<f64>;

/// Single-precision mechanical parameter set.
pub type MechanicalParams32 = model::MechanicalParams<f32>;
/// Single-precision circuit parameter set.
pub type CircuitParams32 = model::CircuitParams<f32>;
