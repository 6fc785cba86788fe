//! Parent Hamiltonians for confined 1D many-body systems with Bijl-Jastrow
//! ground states, and the verification machinery that keeps them honest.
//!
//! Given a pair correlation function f and a confinement, the library builds
//! the interaction terms (two-body, three-body, long-range, one-body, and the
//! anharmonic cross term) for which the Jastrow product state is an exact
//! eigenstate, and then checks that claim four independent ways:
//!
//! * constant local energy over randomized configurations ([`verify_sweep`]),
//! * cusp conditions at particle contact ([`cusp_check`]),
//! * direct N=2 grid diagonalization ([`grid`]),
//! * zero-variance Metropolis sampling ([`sampler`]).
//!
//! Pair-correlation families are strategies behind the [`PairFunction`]
//! trait, registered by name in [`pair::registry`] and selected at runtime.

pub mod confinement;
pub mod error;
pub mod grid;
pub mod hamiltonian;
pub mod local_energy;
pub mod model;
pub mod pair;
pub mod sampler;
pub mod types;

pub use confinement::{Confinement, LogEnvelope, PolynomialEnvelope};
pub use error::Error;
pub use grid::{GridOracleResult, GridSpec};
pub use hamiltonian::{energy_catalog, expected_eigenvalue, EnergyCatalogEntry, PotentialBreakdown};
pub use local_energy::{
    cusp_check, local_energy, verify_sweep, CuspCheckReport, LocalEnergyReport, VerificationSweep,
};
pub use model::{Convention, ModelSpec, Sabotage, ValidatedModel};
pub use pair::{CuspDescriptor, LogValue, PairFunction};
pub use sampler::{SampleStats, SamplerConfig};
pub use types::{Configuration, PhysParams};

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
