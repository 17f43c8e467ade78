//! Exact construction and entanglement analysis of randomized hypergraph
//! quantum states.
//!
//! The crate models an n-qubit hypergraph state as a vector of `+-1` signs
//! (exact for every state built from multi-controlled phase flips), expands
//! gate-noise randomization into the exact mixture over spanning
//! subhypergraphs, and quantifies the entanglement that survives:
//!
//! - [`hypergraph`]: the combinatorial model, family generators, catalog
//!   parsing, and spanning-subhypergraph enumeration;
//! - [`state`]: sign-vector states, phase gates, stabilizing operators, and
//!   exact inner products;
//! - [`randomize`]: the probabilistic gate model as exact weighted branch
//!   ensembles, numerically and symbolically;
//! - [`entanglement`]: partial transposition, a Jacobi eigensolver, the
//!   negativity, and the PPT check;
//! - [`gmn`]: genuine-multipartite-entanglement quantification by
//!   semidefinite programming over fully decomposable witnesses;
//! - [`witness`]: exact overlap polynomials, projector-witness offsets, and
//!   critical noise thresholds for hypergraph families.

pub mod catalog;
pub mod density;
pub mod entanglement;
pub mod error;
pub mod gmn;
pub mod hypergraph;
pub mod matrix;
pub mod poly;
pub mod randomize;
pub mod state;
pub mod witness;

pub use catalog::{parse_catalog, parse_hypergraph};
pub use density::DensityMatrix;
pub use entanglement::{
    eigenvalues_hermitian, eigh, is_ppt, negativity, negativity_trace_norm, partial_transpose,
    Bipartition, Spectrum,
};
pub use error::{Error, Result};
pub use gmn::{gmn, solve_sdp, verify_witness, Normalization, SdpProblem, SdpSolution};
pub use hypergraph::{
    clover, complete_uniform, family, flower, single_edge, star, EdgeOrderProfile, Hypergraph,
};
pub use matrix::CMatrix;
pub use poly::{Monomial, RationalPolynomial};
pub use randomize::{
    ensemble_to_density, randomize, randomized_density, symbolic_randomize, Branch,
    BranchEnsemble, RandomizationParams,
};
pub use state::{build_state, stabilizer, stabilizer_projector, SignState, StabilizerOp};
pub use witness::{
    critical_probability, flower_overlap_closed_form, overlap_polynomial, robustness_threshold,
    witness_alpha, witness_expectation, WitnessSpec,
};
