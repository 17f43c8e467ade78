//! Partial transposition, a cyclic Jacobi eigensolver for Hermitian
//! matrices, negativity, and the PPT check.

use num_complex::Complex64;

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::matrix::CMatrix;

/// Input matrices must be Hermitian to this entrywise tolerance.
pub const HERMITIAN_INPUT_TOL: f64 = 1e-10;
/// Eigenvalues in `[-PSD_CLAMP, 0)` are treated as zero by `negativity`.
pub const PSD_CLAMP: f64 = 1e-10;
/// Jacobi stops once the off-diagonal Frobenius norm falls below this
/// fraction of the matrix norm.
const JACOBI_REL_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 60;

/// One side of a bipartition of `n` qubits, stored canonically as the side
/// with the numerically smaller qubit mask so `{A, complement}` is a single
/// value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bipartition {
    n: usize,
    mask: u32,
}

impl Bipartition {
    /// From a qubit mask (bit `i-1` selects qubit `i`). The side must be
    /// nonempty and proper.
    pub fn new(n: usize, mask: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "bipartitions need n >= 2 qubits, got {n}"
            )));
        }
        let full = (1u32 << n) - 1;
        if mask == 0 || mask & !full != 0 || mask == full {
            return Err(Error::InvalidArgument(format!(
                "mask {mask:#b} is not a proper nonempty subset of {n} qubits"
            )));
        }
        let comp = full & !mask;
        Ok(Self {
            n,
            mask: mask.min(comp),
        })
    }

    /// From 1-indexed qubit labels.
    pub fn from_qubits(n: usize, qubits: &[usize]) -> Result<Self> {
        let mut mask = 0u32;
        for &q in qubits {
            if q == 0 || q > n {
                return Err(Error::VertexOutOfRange { index: q, n });
            }
            mask |= 1 << (q - 1);
        }
        Self::new(n, mask)
    }

    /// All distinct bipartitions of `n` qubits (`2^(n-1) - 1` of them).
    pub fn all(n: usize) -> Result<Vec<Bipartition>> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "bipartitions need n >= 2 qubits, got {n}"
            )));
        }
        let full = (1u32 << n) - 1;
        let mut out = Vec::new();
        for mask in 1..full {
            let b = Bipartition::new(n, mask)?;
            if b.mask == mask {
                out.push(b);
            }
        }
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    /// 1-indexed qubits on the stored side.
    pub fn qubits(&self) -> Vec<usize> {
        (1..=self.n).filter(|q| self.mask & (1 << (q - 1)) != 0).collect()
    }

    /// `a,b|c,d` label with the stored side first.
    pub fn label(&self) -> String {
        let side: Vec<String> = self.qubits().iter().map(|q| q.to_string()).collect();
        let other: Vec<String> = (1..=self.n)
            .filter(|q| self.mask & (1 << (q - 1)) == 0)
            .map(|q| q.to_string())
            .collect();
        format!("{}|{}", side.join(","), other.join(","))
    }
}

/// Real eigenvalues in descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn min(&self) -> f64 {
        *self.values.last().expect("nonempty spectrum")
    }

    pub fn max(&self) -> f64 {
        self.values[0]
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Trace norm of the Hermitian matrix this spectrum came from.
    pub fn abs_sum(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum()
    }
}

/// Partial transpose over the qubits in `side.mask()`. Preserves trace and
/// Hermiticity; applying it twice returns the original matrix.
pub fn partial_transpose(rho: &DensityMatrix, side: &Bipartition) -> Result<CMatrix> {
    if side.n() != rho.n() {
        return Err(Error::DimensionMismatch {
            left: side.n(),
            right: rho.n(),
        });
    }
    partial_transpose_matrix(rho.matrix(), rho.n(), side)
}

/// Partial transpose of a raw `2^n x 2^n` matrix (witnesses, certificates).
pub fn partial_transpose_matrix(m: &CMatrix, n: usize, side: &Bipartition) -> Result<CMatrix> {
    let dim = 1usize << n;
    if m.dim() != dim || side.n() != n {
        return Err(Error::DimensionMismatch {
            left: m.dim(),
            right: dim,
        });
    }
    let b = side.mask() as usize;
    let keep = !b;
    let mut out = CMatrix::zeros(dim);
    for r in 0..dim {
        for c in 0..dim {
            let tr = (r & keep) | (c & b);
            let tc = (c & keep) | (r & b);
            out[(r, c)] = m[(tr, tc)];
        }
    }
    Ok(out)
}

/// Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations.
pub fn eigenvalues_hermitian(m: &CMatrix) -> Result<Spectrum> {
    let (vals, _) = jacobi_hermitian(m, false)?;
    Ok(vals)
}

/// Eigenvalues plus the unitary of eigenvectors (columns), for residual
/// checks and certificate verification.
pub fn eigh(m: &CMatrix) -> Result<(Spectrum, CMatrix)> {
    let (vals, vecs) = jacobi_hermitian(m, true)?;
    Ok((vals, vecs.expect("vectors requested")))
}

fn jacobi_hermitian(m: &CMatrix, want_vectors: bool) -> Result<(Spectrum, Option<CMatrix>)> {
    let dim = m.dim();
    if dim > 1024 {
        return Err(Error::Capacity {
            what: "matrix dimension",
            got: dim,
            limit: 1024,
        });
    }
    let defect = m.hermiticity_defect();
    if defect > HERMITIAN_INPUT_TOL {
        return Err(Error::NotHermitian { deviation: defect });
    }
    let mut a = m.clone();
    // Symmetrize so rounding in the input cannot bias rotations.
    for r in 0..dim {
        for c in r + 1..dim {
            let avg = (a[(r, c)] + a[(c, r)].conj()) * 0.5;
            a[(r, c)] = avg;
            a[(c, r)] = avg.conj();
        }
        a[(r, r)] = Complex64::new(a[(r, r)].re, 0.0);
    }
    let norm = a.frobenius_norm().max(f64::MIN_POSITIVE);
    let tol = JACOBI_REL_TOL * norm;
    let mut vecs = want_vectors.then(|| CMatrix::identity(dim));

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= tol {
            break;
        }
        if sweeps >= JACOBI_MAX_SWEEPS {
            return Err(Error::EigenNoConvergence {
                sweeps,
                offdiag: off,
            });
        }
        sweeps += 1;
        for p in 0..dim {
            for q in p + 1..dim {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= tol / (dim as f64) {
                    continue;
                }
                // Annihilate (p, q): phase e^{i phi} = apq / |apq| plus a
                // real rotation on [[app, r], [r, aqq]].
                let phase = apq / r;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * r);
                // Smaller-magnitude root of t^2 - 2 tau t - 1 = 0, which
                // annihilates (p, q) under this rotation convention.
                let t = if tau >= 0.0 {
                    -1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // Columns p, q of A <- A J with
                // J[p][p] = c, J[p][q] = -s*phase, J[q][p] = s*conj(phase),
                // J[q][q] = c; then rows via J^dagger A.
                for k in 0..dim {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c + akq * s * phase.conj();
                    a[(k, q)] = akq * c - akp * s * phase;
                }
                for k in 0..dim {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c + aqk * s * phase;
                    a[(q, k)] = aqk * c - apk * s * phase.conj();
                }
                a[(p, q)] = Complex64::ZERO;
                a[(q, p)] = Complex64::ZERO;
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
                if let Some(v) = vecs.as_mut() {
                    for k in 0..dim {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * c + vkq * s * phase.conj();
                        v[(k, q)] = vkq * c - vkp * s * phase;
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..dim).collect();
    let diag: Vec<f64> = (0..dim).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).expect("finite eigenvalues"));
    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let vectors = vecs.map(|v| {
        CMatrix::from_fn(dim, |r, c| v[(r, order[c])])
    });
    Ok((Spectrum { values }, vectors))
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let dim = a.dim();
    let mut acc = 0.0;
    for r in 0..dim {
        for c in 0..dim {
            if r != c {
                acc += a[(r, c)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Negativity across a bipartition: the absolute sum of the negative
/// eigenvalues of the partial transpose, with eigenvalues in
/// `[-PSD_CLAMP, 0)` clamped to zero.
pub fn negativity(rho: &DensityMatrix, side: &Bipartition) -> Result<f64> {
    let pt = partial_transpose(rho, side)?;
    let spec = eigenvalues_hermitian(&pt)?;
    Ok(negative_part(&spec))
}

fn negative_part(spec: &Spectrum) -> f64 {
    // + 0.0 turns the empty sum's negative zero into plain zero.
    spec.values()
        .iter()
        .filter(|&&v| v < -PSD_CLAMP)
        .map(|&v| -v)
        .sum::<f64>()
        + 0.0
}

/// Negativity via the trace-norm formula `(||rho^T_B||_1 - 1) / 2`; agrees
/// with [`negativity`] up to eigensolver accuracy.
pub fn negativity_trace_norm(rho: &DensityMatrix, side: &Bipartition) -> Result<f64> {
    let pt = partial_transpose(rho, side)?;
    let spec = eigenvalues_hermitian(&pt)?;
    Ok(((spec.abs_sum() - 1.0) / 2.0).max(0.0))
}

/// True when the partial transpose has no eigenvalue below `-PSD_CLAMP`.
pub fn is_ppt(rho: &DensityMatrix, side: &Bipartition) -> Result<bool> {
    let pt = partial_transpose(rho, side)?;
    let spec = eigenvalues_hermitian(&pt)?;
    Ok(spec.min() >= -PSD_CLAMP)
}
