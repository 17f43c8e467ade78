//! Exact randomization-overlap polynomials, projector-witness offsets, and
//! critical noise thresholds.
//!
//! The overlap of a randomized state with its parent state is a polynomial
//! in the per-order success probabilities. Everything here is computed in
//! exact rational arithmetic; floating point only enters at the final
//! root-finding step.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, MAX_QUBITS};
use crate::poly::RationalPolynomial;

/// Bisection tolerance for critical probabilities.
const ROOT_TOL: f64 = 1e-9;

/// Projector witness data for a hypergraph: the biseparable-overlap offset
/// `alpha = (2^(kappa-1) - 1) / 2^(kappa-1)` at the maximum edge order
/// `kappa`.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessSpec {
    hypergraph: Hypergraph,
    kappa_max: usize,
    alpha: BigRational,
}

impl WitnessSpec {
    pub fn of(h: &Hypergraph) -> Result<Self> {
        let kappa_max = h.max_order();
        Ok(Self {
            hypergraph: h.clone(),
            kappa_max,
            alpha: witness_alpha(kappa_max)?,
        })
    }

    pub fn hypergraph(&self) -> &Hypergraph {
        &self.hypergraph
    }

    pub fn kappa_max(&self) -> usize {
        self.kappa_max
    }

    pub fn alpha(&self) -> &BigRational {
        &self.alpha
    }
}

/// `(2^(kappa-1) - 1) / 2^(kappa-1)` for `kappa >= 2`.
pub fn witness_alpha(kappa_max: usize) -> Result<BigRational> {
    if kappa_max < 2 {
        return Err(Error::InvalidArgument(format!(
            "witness offset needs maximum edge order >= 2, got {kappa_max}"
        )));
    }
    let denom = BigInt::one() << (kappa_max - 1);
    Ok(BigRational::new(&denom - BigInt::one(), denom))
}

/// White-noise robustness threshold `(2^(n - kappa) - 1) / 2^n` of the
/// projector witness on `n` qubits.
pub fn robustness_threshold(n: usize, kappa_max: usize) -> Result<BigRational> {
    if kappa_max < 2 || kappa_max > n {
        return Err(Error::InvalidArgument(format!(
            "robustness threshold needs 2 <= kappa <= n, got kappa = {kappa_max}, n = {n}"
        )));
    }
    let numer = (BigInt::one() << (n - kappa_max)) - BigInt::one();
    Ok(BigRational::new(numer, BigInt::one() << n))
}

/// The exact overlap `tr(|H><H| rho_H^P)` as a polynomial in the success
/// probabilities of the edge orders present in `H`.
///
/// For each deleted subset `D` of randomizable edges the squared inner
/// product is `((2^n - 2 c_D) / 2^n)^2`, where `c_D` counts basis strings
/// covering an odd number of edges in `D`; the subset walk is a Gray code so
/// each step flips one edge indicator.
pub fn overlap_polynomial(h: &Hypergraph) -> Result<RationalPolynomial> {
    let n = h.n();
    if n > MAX_QUBITS {
        return Err(Error::Capacity {
            what: "qubits",
            got: n,
            limit: MAX_QUBITS,
        });
    }
    let edges: Vec<u32> = h.randomizable_edges().collect();
    let m = edges.len();
    if m > crate::hypergraph::MAX_RANDOMIZABLE_EDGES {
        return Err(Error::Capacity {
            what: "randomizable edges",
            got: m,
            limit: crate::hypergraph::MAX_RANDOMIZABLE_EDGES,
        });
    }
    let orders: Vec<usize> = edges.iter().map(|e| e.count_ones() as usize).collect();
    let dim = 1usize << n;
    let words = dim.div_ceil(64);

    // Bitset over basis strings per edge: bit x set iff x covers the edge.
    let indicators: Vec<Vec<u64>> = edges
        .iter()
        .map(|&e| {
            let e = e as usize;
            let mut bits = vec![0u64; words];
            for x in 0..dim {
                if x & e == e {
                    bits[x / 64] |= 1 << (x % 64);
                }
            }
            bits
        })
        .collect();

    // Accumulate the exact sum of squared overlaps per deleted-order
    // profile; the weight polynomial only depends on that profile.
    let mut per_profile: BTreeMap<Vec<(usize, u32)>, BigRational> = BTreeMap::new();
    let order_counts: BTreeMap<usize, u32> = {
        let mut c = BTreeMap::new();
        for &k in &orders {
            *c.entry(k).or_insert(0u32) += 1;
        }
        c
    };

    let mut parity = vec![0u64; words];
    let mut deleted_per_order: BTreeMap<usize, u32> = BTreeMap::new();
    let denom_sq = BigRational::new(BigInt::one(), BigInt::one() << (2 * n));
    let record = |per_profile: &mut BTreeMap<Vec<(usize, u32)>, BigRational>,
                  deleted: &BTreeMap<usize, u32>,
                  odd: usize| {
        let numer = BigInt::from(dim as i64 - 2 * odd as i64);
        let sq = BigRational::from_integer(&numer * &numer) * &denom_sq;
        let key: Vec<(usize, u32)> = deleted.iter().map(|(&k, &d)| (k, d)).collect();
        *per_profile.entry(key).or_insert_with(BigRational::zero) += sq;
    };

    // D = empty set first.
    record(&mut per_profile, &deleted_per_order, 0);
    let mut gray = 0u32;
    for i in 1u64..(1u64 << m) {
        let flip = i.trailing_zeros() as usize;
        gray ^= 1 << flip;
        let entering = gray & (1 << flip) != 0;
        let k = orders[flip];
        let slot = deleted_per_order.entry(k).or_insert(0);
        if entering {
            *slot += 1;
        } else {
            *slot -= 1;
            if *slot == 0 {
                deleted_per_order.remove(&k);
            }
        }
        let mut odd = 0usize;
        for (w, iw) in parity.iter_mut().zip(&indicators[flip]) {
            *w ^= iw;
            odd += w.count_ones() as usize;
        }
        record(&mut per_profile, &deleted_per_order, odd);
    }

    // O = sum over profiles of prod_k p_k^(m_k - d_k) (1-p_k)^(d_k) times
    // the accumulated squared overlaps.
    let mut total = RationalPolynomial::zero();
    for (profile, coeff) in per_profile {
        let deleted: BTreeMap<usize, u32> = profile.into_iter().collect();
        let mut w = RationalPolynomial::constant(coeff);
        for (&k, &mk) in &order_counts {
            let dk = deleted.get(&k).copied().unwrap_or(0);
            let kept = mk - dk;
            if kept > 0 {
                w = &w * &RationalPolynomial::var(k).pow(kept);
            }
            if dk > 0 {
                w = &w * &RationalPolynomial::one_minus_var(k).pow(dk);
            }
        }
        total = &total + &w;
    }
    Ok(total)
}

/// Closed-form overlap polynomial for the flower family on odd `n`:
/// `2^-(n+1) sum_j C(m, j) (2^m + 2^j)^2 p^j (1-p)^(m-j)` with `m` petals.
/// Identical, coefficient by coefficient, to
/// `overlap_polynomial(flower(n))`.
pub fn flower_overlap_closed_form(n: usize) -> Result<RationalPolynomial> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidArgument(format!(
            "flower closed form requires odd n >= 3, got {n}"
        )));
    }
    let m = (n - 1) / 2;
    let denom = BigRational::new(BigInt::one(), BigInt::one() << (n + 1));
    let mut total = RationalPolynomial::zero();
    for j in 0..=m {
        let base = (BigInt::one() << m) + (BigInt::one() << j);
        let coeff = BigRational::from_integer(binomial(m, j) * &base * &base) * &denom;
        let term = RationalPolynomial::constant(coeff)
            * RationalPolynomial::var(3).pow(j as u32)
            * RationalPolynomial::one_minus_var(3).pow((m - j) as u32);
        total = &total + &term;
    }
    Ok(total)
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k.min(n - k) {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// The witness expectation `tr(W rho_H^P) = alpha - O(rho_H^P)` as an exact
/// polynomial.
pub fn witness_expectation(h: &Hypergraph) -> Result<RationalPolynomial> {
    let alpha = witness_alpha(h.max_order())?;
    let overlap = overlap_polynomial(h)?;
    Ok(RationalPolynomial::constant(alpha) - overlap)
}

/// Smallest `p` in `[0, 1]` at which the witness expectation turns negative.
///
/// Requires a single randomization variable (all randomizable edges of one
/// order). The overlap is checked for monotone growth on a 1e-2 grid using
/// its exact derivative; if that fails, roots are isolated by a 1e-4
/// sign-change scan and the smallest is returned.
pub fn critical_probability(h: &Hypergraph) -> Result<f64> {
    let orders = h.randomizable_orders();
    if orders.len() != 1 {
        return Err(Error::InvalidArgument(format!(
            "critical probability needs a single randomizable edge order, found {orders:?}; \
             bind a path between the variables first"
        )));
    }
    let g = witness_expectation(h)?;
    let o = overlap_polynomial(h)?;

    let deriv = o.derivative(orders[0]);
    let monotone = (0..=100).all(|j| {
        let p = BigRational::new(BigInt::from(j), BigInt::from(100));
        !deriv.eval_univariate_rational(&p).is_negative()
    });

    let gf = |p: f64| g.eval_univariate(p);
    if monotone {
        if gf(0.0) <= 0.0 {
            return Ok(0.0);
        }
        if gf(1.0) > 0.0 {
            return Err(Error::WitnessNeverFires);
        }
        Ok(bisect(&gf, 0.0, 1.0))
    } else {
        // Non-monotone overlap: scan for the first sign change.
        let steps = 10_000;
        if gf(0.0) <= 0.0 {
            return Ok(0.0);
        }
        for j in 1..=steps {
            let p = j as f64 / steps as f64;
            if gf(p) <= 0.0 {
                return Ok(bisect(&gf, (j - 1) as f64 / steps as f64, p));
            }
        }
        Err(Error::WitnessNeverFires)
    }
}

/// Bisection for `f(lo) > 0 >= f(hi)`.
fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
