//! Multi-particle states, the pair-exchange operator and (anti)symmetrization.

mod amplitude;
mod engine;
mod state;
mod symmetrize;

pub use amplitude::{permanent_amplitude, slater_amplitude, MAX_PERMANENT_DIM};
pub use engine::{
    apply_exchange, apply_exchange_with, exchange_phase, exchange_phase_with, verify_eq1,
    ExchangeReport,
};
pub(crate) use state::best_ratio;
pub use state::{state_distance, transpose_slots, MultiParticleState, ParticleSet, Tags, Term};
pub use symmetrize::{symmetrize, MAX_SYMMETRIZE_PARTICLES};
