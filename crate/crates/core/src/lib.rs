//! Numerical realization of the rotation-operator argument for the
//! spin-statistics connection.
//!
//! The crate builds spin-`s` generator matrices and rotation operators,
//! exchanges two identical quantum-number sets by a pair of π rotations about
//! the axis through their midpoint, and checks that the wave function picks
//! up exactly `(-1)^{2s}`. Around that core sit the tilted spin basis, the
//! Region-A ordering bookkeeping and the report layer used by the CLI.
//!
//! Spin is always carried as the integer `2s` ([`SpinValue`]) so that the
//! parity deciding the exchange sign is exact.

pub mod error;
pub mod exchange;
pub mod linalg;
pub mod orbital;
pub mod region;
pub mod report;
pub mod spin;
pub mod suites;
pub mod tilted;

pub use error::{Error, Result};
pub use exchange::{
    apply_exchange, apply_exchange_with, exchange_phase, exchange_phase_with, permanent_amplitude,
    slater_amplitude, state_distance, symmetrize, transpose_slots, verify_eq1, ExchangeReport,
    MultiParticleState, ParticleSet, Tags, Term,
};
pub use orbital::{
    build_midpoint_frame, orbital_shift_check, MidpointFrame, Point3, ShiftResidual,
};
pub use region::{canonicalize, generic_equal, radial_order, RegionSignature};
pub use spin::{
    exact_pi_z_rotation, generators, make_spin, rotation, SpinOperatorSet, SpinValue, UnitaryMatrix,
};
pub use tilted::{
    chi, theta_l, tilt_multi, tilted_gram, verify_tilt_transfer, TiltedGram, TiltedState,
};

pub use num_complex::Complex64 as C64;

/// Dense complex matrix used for every operator in the crate.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense complex column vector (spinors, tilted states).
pub type CVector = nalgebra::DVector<C64>;

/// Default pass/fail tolerance for phase and residual checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;
/// Two points closer than this (length units) cannot be exchanged.
pub const COINCIDENCE_TOLERANCE: f64 = 1e-9;
/// Position tolerance used when matching terms of two states.
pub const POSITION_TOLERANCE: f64 = 1e-9;
/// Terms whose coefficient magnitude falls below this are dropped.
pub const PRUNE_THRESHOLD: f64 = 1e-14;
