//! Time-bin collision model of the waveguide.
//!
//! The field at the qubit position depends only on `τ = t − x/v`, so slicing
//! τ into bins of width Δt turns the qubit–waveguide dynamics into a
//! sequence of unitary collisions between the qubit and fresh bin modes.
//! Everything here is computed from joint states and is independent of the
//! mean-value solvers it checks.

pub mod bins;
pub mod full_fock;
pub mod linalg;
pub mod single_excitation;
pub mod two_body;

pub use bins::{build_time_bins, TimeBins};
pub use full_fock::{simulate_full_fock, FieldInput, FullFockRun};
pub use single_excitation::{
    simulate_single_excitation_global, GlobalSingleExcitationState, SingleExcitationOracleRun,
};
pub use two_body::{
    collision_unitary, decompose_energy_flows, run_coherent_oracle, step_collision_coherent,
    CoherentOracleRun, CollisionStepState, FlowDecomposition,
};
