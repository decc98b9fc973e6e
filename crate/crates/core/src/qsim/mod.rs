//! Exact classical simulation of the quantum side of the algorithm.
//!
//! - [`cyclotomic`]: amplitudes in Z[ω].
//! - [`state`]: Fourier-twisted coset states and the right-multiplication action.
//! - [`fourier`]: exact Fourier-sampling distributions and the abelian HSP loop.
//! - [`pipeline`]: appropriate triples, hiding states and the full solver.

pub mod cyclotomic;
pub mod fourier;
pub mod pipeline;
pub mod state;

pub use fourier::{abelian_hsp, fourier_sample_distribution, AbelianHspResult, Distribution};
pub use pipeline::{
    find_hidden_subgroup, hiding_state, is_appropriate, make_appropriate_triple, tensor_eq, tensor_inner, HidingFn,
    HidingTuple, HspConfig, HspOracle, HspOutcome,
};
pub use state::{all_vectors, coset_state_family, coset_state_family_from_coset, CosetSector, FactorState};
