//! Exact hypergraph-state construction and the stabilizer formalism.
//!
//! Every state reachable here is real and equally weighted: the amplitude of
//! basis string `x` is `signs[x] / sqrt(2^n)` with `signs[x]` in `{+1, -1}`.
//! Storing only the signs keeps all inner products exact dyadic rationals.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, MAX_QUBITS};
use crate::matrix::CMatrix;

/// A real equally-weighted n-qubit pure state: one sign per basis string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignState {
    n: usize,
    signs: Vec<i8>,
}

impl SignState {
    /// `|+>^{tensor n}`: all signs +1.
    pub fn plus(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::Capacity {
                what: "qubits",
                got: n,
                limit: MAX_QUBITS,
            });
        }
        Ok(Self {
            n,
            signs: vec![1; 1 << n],
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn sign(&self, basis: usize) -> i8 {
        self.signs[basis]
    }

    /// Applies the phase gate of hyperedge `e`: flips the sign of every basis
    /// string whose bits on `e` are all one. Involution.
    pub fn apply_ce(&self, edge: u32) -> Result<Self> {
        if edge == 0 {
            return Err(Error::InvalidArgument("empty hyperedge".into()));
        }
        if (edge as u64) >> self.n != 0 {
            let bad = 32 - edge.leading_zeros() as usize;
            return Err(Error::VertexOutOfRange {
                index: bad,
                n: self.n,
            });
        }
        let mut out = self.clone();
        let e = edge as usize;
        for (x, s) in out.signs.iter_mut().enumerate() {
            if x & e == e {
                *s = -*s;
            }
        }
        Ok(out)
    }

    /// Exact inner product `<self|other> = 2^-n sum_x s_x t_x`.
    pub fn inner_product(&self, other: &Self) -> Result<BigRational> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let sum: i64 = self
            .signs
            .iter()
            .zip(&other.signs)
            .map(|(&a, &b)| (a as i64) * (b as i64))
            .sum();
        Ok(BigRational::new(
            BigInt::from(sum),
            BigInt::from(1i64 << self.n),
        ))
    }

    /// Rank-1 projector `|s><s|` as a dense matrix.
    pub fn projector(&self) -> DensityMatrix {
        let dim = self.dim();
        let norm = 1.0 / dim as f64;
        let m = CMatrix::from_fn(dim, |r, c| {
            num_complex::Complex64::new((self.signs[r] * self.signs[c]) as f64 * norm, 0.0)
        });
        DensityMatrix::new_unchecked(self.n, m)
    }

    /// `<self| rho |self>`, exact in the state and floating in `rho`.
    pub fn expectation(&self, rho: &DensityMatrix) -> Result<f64> {
        if rho.n() != self.n {
            return Err(Error::DimensionMismatch {
                left: rho.dim(),
                right: self.dim(),
            });
        }
        let dim = self.dim();
        let mut acc = 0.0;
        for r in 0..dim {
            let sr = self.signs[r] as f64;
            for c in 0..dim {
                acc += sr * self.signs[c] as f64 * rho.matrix()[(r, c)].re;
            }
        }
        Ok(acc / dim as f64)
    }
}

/// Builds `|H>` by applying one phase gate per hyperedge to `|+>^n`:
/// `signs[x] = (-1)^(number of edges fully contained in x)`.
pub fn build_state(h: &Hypergraph) -> Result<SignState> {
    let mut s = SignState::plus(h.n())?;
    for &e in h.edges() {
        let em = e as usize;
        for (x, sign) in s.signs.iter_mut().enumerate() {
            if x & em == em {
                *sign = -*sign;
            }
        }
    }
    Ok(s)
}

/// A stabilizing operator `g_i`: the bit flip on qubit `i` composed with one
/// residual phase gate `C_{e \ {i}}` per edge containing `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerOp {
    n: usize,
    /// 0-indexed qubit the X acts on.
    qubit: usize,
    /// Masks `e \ {i}` for every edge `e` containing `i`; bit `qubit` is
    /// never set. A mask of 0 (from an order-1 loop) contributes a global
    /// minus sign.
    phase_masks: Vec<u32>,
}

impl StabilizerOp {
    pub fn qubit(&self) -> usize {
        self.qubit + 1
    }

    pub fn phase_masks(&self) -> &[u32] {
        &self.phase_masks
    }

    /// Applies `g_i` to a sign state:
    /// `out[y] = s[y ^ bit_i] * (-1)^(number of masks contained in y)`.
    pub fn apply(&self, s: &SignState) -> Result<SignState> {
        if s.n() != self.n {
            return Err(Error::DimensionMismatch {
                left: s.n(),
                right: self.n,
            });
        }
        let bit = 1usize << self.qubit;
        let mut out = s.clone();
        for (y, sign) in out.signs.iter_mut().enumerate() {
            let mut v = s.signs[y ^ bit];
            for &m in &self.phase_masks {
                let m = m as usize;
                if y & m == m {
                    v = -v;
                }
            }
            *sign = v;
        }
        Ok(out)
    }

    /// Image of a single basis state: `g_i |x> = phase |x ^ bit_i>`.
    pub fn apply_basis(&self, x: usize) -> (usize, i8) {
        let bit = 1usize << self.qubit;
        let mut phase = 1i8;
        for &m in &self.phase_masks {
            let m = m as usize;
            if x & m == m {
                phase = -phase;
            }
        }
        (x ^ bit, phase)
    }
}

/// The stabilizing operator `g_i` of `H` for the 1-indexed qubit `i`; the
/// phase part multiplies over all edges containing `i`, which is the unique
/// choice fixing `build_state(h)` for multi-edge hypergraphs.
pub fn stabilizer(h: &Hypergraph, i: usize) -> Result<StabilizerOp> {
    if i == 0 || i > h.n() {
        return Err(Error::VertexOutOfRange { index: i, n: h.n() });
    }
    let bit = 1u32 << (i - 1);
    let phase_masks = h
        .edges()
        .iter()
        .filter(|&&e| e & bit != 0)
        .map(|&e| e & !bit)
        .collect();
    Ok(StabilizerOp {
        n: h.n(),
        qubit: i - 1,
        phase_masks,
    })
}

/// Projector onto `|H>` assembled from the stabilizer group: the average of
/// all `2^n` products of the generators. Independent of `build_state`, so it
/// cross-checks the sign-vector construction.
pub fn stabilizer_projector(h: &Hypergraph) -> Result<DensityMatrix> {
    let n = h.n();
    if n > 10 {
        return Err(Error::Capacity {
            what: "qubits (dense projector)",
            got: n,
            limit: 10,
        });
    }
    let gens: Vec<StabilizerOp> = (1..=n).map(|i| stabilizer(h, i)).collect::<Result<_>>()?;
    let dim = 1usize << n;
    let mut acc = CMatrix::zeros(dim);
    let scale = 1.0 / dim as f64;
    for k in 0..dim {
        // S_k = product of the generators selected by k, applied per basis
        // column; each generator maps a basis state to a signed basis state.
        for x in 0..dim {
            let mut y = x;
            let mut phase = 1i8;
            for (idx, g) in gens.iter().enumerate() {
                if k & (1 << idx) != 0 {
                    let (ny, ph) = g.apply_basis(y);
                    y = ny;
                    phase *= ph;
                }
            }
            acc[(y, x)] += num_complex::Complex64::new(phase as f64 * scale, 0.0);
        }
    }
    DensityMatrix::new(n, acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{complete_uniform, family, single_edge};

    #[test]
    fn single_edge_four_qubits_flips_only_the_last_string() {
        let h = single_edge(4).unwrap();
        let s = build_state(&h).unwrap();
        for x in 0..16 {
            assert_eq!(s.sign(x), if x == 0b1111 { -1 } else { 1 }, "x = {x}");
        }
    }

    #[test]
    fn three_qubit_triple_flips_only_111() {
        let h = single_edge(3).unwrap();
        let s = build_state(&h).unwrap();
        for x in 0..8 {
            assert_eq!(s.sign(x), if x == 0b111 { -1 } else { 1 });
        }
    }

    #[test]
    fn edgeless_is_plus() {
        let h = family("edgeless", 5).unwrap();
        assert_eq!(build_state(&h).unwrap(), SignState::plus(5).unwrap());
    }

    #[test]
    fn apply_ce_is_involution_and_order_free() {
        let s = build_state(&complete_uniform(3, 4).unwrap()).unwrap();
        let e = 0b0110u32;
        let twice = s.apply_ce(e).unwrap().apply_ce(e).unwrap();
        assert_eq!(twice, s);

        let ab = s.apply_ce(0b0011).unwrap().apply_ce(0b1100).unwrap();
        let ba = s.apply_ce(0b1100).unwrap().apply_ce(0b0011).unwrap();
        assert_eq!(ab, ba);
    }

    #[test]
    fn apply_ce_on_loop_acts_as_z() {
        let s = SignState::plus(3).unwrap();
        let z1 = s.apply_ce(0b001).unwrap();
        for x in 0..8 {
            assert_eq!(z1.sign(x), if x & 1 != 0 { -1 } else { 1 });
        }
        assert!(s.apply_ce(0).is_err());
    }

    #[test]
    fn inner_products_exact() {
        use num_traits::One;
        let c3 = build_state(&crate::hypergraph::clover(3).unwrap()).unwrap();
        assert!(c3.inner_product(&c3).unwrap().is_one());

        let plus3 = SignState::plus(3).unwrap();
        let r = c3.inner_product(&plus3).unwrap();
        assert_eq!(r, BigRational::new(BigInt::from(3), BigInt::from(4)));

        let c4 = build_state(&crate::hypergraph::clover(4).unwrap()).unwrap();
        let plus4 = SignState::plus(4).unwrap();
        let r = c4.inner_product(&plus4).unwrap();
        assert_eq!(r, BigRational::new(BigInt::from(1), BigInt::from(2)));

        assert!(c3.inner_product(&plus4).is_err());
    }

    #[test]
    fn stabilizers_fix_the_state() {
        for h in [
            complete_uniform(3, 4).unwrap(),
            single_edge(4).unwrap(),
            crate::hypergraph::clover(5).unwrap(),
            crate::hypergraph::star(4).unwrap(),
            crate::hypergraph::family("edgeless", 3).unwrap(),
        ] {
            let s = build_state(&h).unwrap();
            for i in 1..=h.n() {
                let g = stabilizer(&h, i).unwrap();
                assert_eq!(g.apply(&s).unwrap(), s, "h = {h}, i = {i}");
                // involution
                let back = g.apply(&g.apply(&s).unwrap()).unwrap();
                assert_eq!(back, s);
            }
        }
    }

    #[test]
    fn stabilizer_of_edgeless_is_plain_x() {
        let h = family("edgeless", 2).unwrap();
        let g = stabilizer(&h, 1).unwrap();
        assert!(g.phase_masks().is_empty());
        let mut s = SignState::plus(2).unwrap();
        s.signs = vec![1, -1, 1, -1];
        let t = g.apply(&s).unwrap();
        assert_eq!(t.signs(), &[-1, 1, -1, 1]);
    }

    #[test]
    fn stabilizer_index_range() {
        let h = single_edge(3).unwrap();
        assert!(stabilizer(&h, 0).is_err());
        assert!(stabilizer(&h, 4).is_err());
    }

    #[test]
    fn projector_matches_outer_product() {
        for h in [
            family("edgeless", 1).unwrap(),
            single_edge(2).unwrap(),
            complete_uniform(3, 4).unwrap(),
        ] {
            let p = stabilizer_projector(&h).unwrap();
            let outer = build_state(&h).unwrap().projector();
            let diff = p.matrix().sub(outer.matrix()).max_abs();
            assert!(diff <= 1e-12, "h = {h}, diff = {diff}");
        }
    }

    #[test]
    fn projector_edgeless_single_qubit_is_all_half() {
        let p = stabilizer_projector(&family("edgeless", 1).unwrap()).unwrap();
        for r in 0..2 {
            for c in 0..2 {
                assert!((p.matrix()[(r, c)].re - 0.5).abs() < 1e-15);
                assert_eq!(p.matrix()[(r, c)].im, 0.0);
            }
        }
    }

    #[test]
    fn cz_graph_state_projector_by_hand() {
        // |CZ> = (|00> + |01> + |10> - |11>)/2; outer product entries are
        // s_r s_c / 4.
        let p = stabilizer_projector(&single_edge(2).unwrap()).unwrap();
        let signs = [1.0, 1.0, 1.0, -1.0];
        for r in 0..4 {
            for c in 0..4 {
                let expect = signs[r] * signs[c] / 4.0;
                assert!((p.matrix()[(r, c)].re - expect).abs() < 1e-14);
            }
        }
    }
}
