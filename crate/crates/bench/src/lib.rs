//! Shared fixtures for the criterion benchmarks.

use hyperent_core::*;

/// The symmetric 3-uniform four-qubit state used throughout the benches.
pub fn four_qubit_symmetric() -> Hypergraph {
    complete_uniform(3, 4).expect("valid family")
}

/// Its half-noise randomized density matrix.
pub fn four_qubit_mixed() -> DensityMatrix {
    let params = RandomizationParams::uniform(0.5).expect("valid probability");
    randomized_density(&four_qubit_symmetric(), &params).expect("within caps")
}
