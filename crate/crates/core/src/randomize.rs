//! Gate-noise randomization: expands a hypergraph state into the exact
//! weighted mixture of its spanning-subhypergraph states.
//!
//! Each order-`k` edge survives independently with probability `p_k`, so the
//! branch that deletes edge subset `D` carries weight
//! `prod_k p_k^(kept_k) (1 - p_k)^(deleted_k)`. Order-1 loops are applied
//! deterministically in every branch.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::One;

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::matrix::CMatrix;
use crate::poly::{f64_to_rational, rational_to_f64, RationalPolynomial};
use crate::state::{build_state, SignState};

/// Success probability per edge order (`k -> p_k`). Orders not present in a
/// hypergraph are ignored by the operations below.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomizationParams {
    probs: BTreeMap<usize, f64>,
}

impl RandomizationParams {
    pub fn new(pairs: impl IntoIterator<Item = (usize, f64)>) -> Result<Self> {
        let mut probs = BTreeMap::new();
        for (order, p) in pairs {
            if order < 2 {
                return Err(Error::InvalidArgument(format!(
                    "randomization order must be >= 2, got {order}"
                )));
            }
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::ProbabilityRange { order, value: p });
            }
            probs.insert(order, p);
        }
        Ok(Self { probs })
    }

    /// The same probability for every order 2..=20.
    pub fn uniform(p: f64) -> Result<Self> {
        Self::new((2..=20).map(|k| (k, p)))
    }

    pub fn get(&self, order: usize) -> Option<f64> {
        self.probs.get(&order).copied()
    }

    pub fn probs(&self) -> &BTreeMap<usize, f64> {
        &self.probs
    }

    fn require(&self, order: usize) -> Result<f64> {
        self.get(order).ok_or(Error::MissingOrder { order })
    }
}

/// One branch of the randomized mixture.
#[derive(Debug, Clone)]
pub struct Branch {
    /// Probability weight in `[0, 1]`.
    pub weight: f64,
    /// The spanning subhypergraph this branch keeps.
    pub subhypergraph: Hypergraph,
    /// Its exact sign state.
    pub state: SignState,
}

/// The full expansion of a randomized hypergraph state, one branch per
/// spanning subhypergraph, in deleted-subset-mask order (index 0 keeps every
/// edge).
#[derive(Debug, Clone)]
pub struct BranchEnsemble {
    n: usize,
    branches: Vec<Branch>,
}

impl BranchEnsemble {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn len(&self) -> usize {
        self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }

    pub fn weight_sum(&self) -> f64 {
        self.branches.iter().map(|b| b.weight).sum()
    }
}

/// Expands `R_P(|H>)` into its exact branch ensemble.
///
/// Branch weights are evaluated in exact rational arithmetic (every `f64`
/// probability is a dyadic rational) and rounded once at the end, so weights
/// near 0 and 1 suffer no cancellation.
pub fn randomize(h: &Hypergraph, params: &RandomizationParams) -> Result<BranchEnsemble> {
    let rand_edges: Vec<u32> = h.randomizable_edges().collect();
    let m = rand_edges.len();
    // Exact p and 1-p per randomizable edge, aligned with subset bits.
    let mut keep: Vec<BigRational> = Vec::with_capacity(m);
    let mut drop: Vec<BigRational> = Vec::with_capacity(m);
    for &e in &rand_edges {
        let p = params.require(e.count_ones() as usize)?;
        let pr = f64_to_rational(p);
        keep.push(pr.clone());
        drop.push(BigRational::one() - pr);
    }
    let mut branches = Vec::with_capacity(1 << m);
    for (idx, sub) in h.spanning_subhypergraphs()?.enumerate() {
        let deleted = idx as u32;
        let mut w = BigRational::one();
        for j in 0..m {
            w *= if deleted & (1 << j) != 0 {
                &drop[j]
            } else {
                &keep[j]
            };
        }
        let state = build_state(&sub)?;
        branches.push(Branch {
            weight: rational_to_f64(&w),
            subhypergraph: sub,
            state,
        });
    }
    Ok(BranchEnsemble {
        n: h.n(),
        branches,
    })
}

/// Sums the weighted projectors of an ensemble into a density matrix.
pub fn ensemble_to_density(ens: &BranchEnsemble) -> Result<DensityMatrix> {
    if ens.n > 10 {
        return Err(Error::Capacity {
            what: "qubits (dense density matrix)",
            got: ens.n,
            limit: 10,
        });
    }
    let dim = 1usize << ens.n;
    let mut acc = CMatrix::zeros(dim);
    for b in &ens.branches {
        if b.weight == 0.0 {
            continue;
        }
        let scale = b.weight / dim as f64;
        let signs = b.state.signs();
        for r in 0..dim {
            let sr = signs[r] as f64 * scale;
            for c in 0..dim {
                acc[(r, c)].re += sr * signs[c] as f64;
            }
        }
    }
    DensityMatrix::new(ens.n, acc)
}

/// Convenience: `randomize` followed by `ensemble_to_density`.
pub fn randomized_density(h: &Hypergraph, params: &RandomizationParams) -> Result<DensityMatrix> {
    ensemble_to_density(&randomize(h, params)?)
}

/// The branch expansion with weights kept as polynomials in `p_2..p_n`.
/// Weights sum to the constant polynomial 1; substituting numbers reproduces
/// [`randomize`] exactly.
pub fn symbolic_randomize(h: &Hypergraph) -> Result<Vec<(RationalPolynomial, Hypergraph)>> {
    let rand_edges: Vec<u32> = h.randomizable_edges().collect();
    let m = rand_edges.len();
    let keep: Vec<RationalPolynomial> = rand_edges
        .iter()
        .map(|e| RationalPolynomial::var(e.count_ones() as usize))
        .collect();
    let drop: Vec<RationalPolynomial> = rand_edges
        .iter()
        .map(|e| RationalPolynomial::one_minus_var(e.count_ones() as usize))
        .collect();
    let mut out = Vec::with_capacity(1 << m);
    for (idx, sub) in h.spanning_subhypergraphs()?.enumerate() {
        let deleted = idx as u32;
        let mut w = RationalPolynomial::one();
        for j in 0..m {
            let f = if deleted & (1 << j) != 0 {
                &drop[j]
            } else {
                &keep[j]
            };
            w = &w * f;
        }
        out.push((w, sub));
    }
    Ok(out)
}
