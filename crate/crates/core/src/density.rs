//! Mixed-state density matrices.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::CMatrix;

/// Entrywise Hermiticity tolerance for accepted density matrices.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Trace deviation tolerance.
pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalues below this threshold count as genuinely negative.
pub const PSD_TOL: f64 = -1e-10;

/// A dense Hermitian unit-trace matrix on `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    data: CMatrix,
}

impl DensityMatrix {
    /// Wraps a matrix after checking Hermiticity and unit trace. Positive
    /// semidefiniteness is not verified here (it needs an eigensolve); use
    /// [`crate::entanglement::eigenvalues_hermitian`] where it matters.
    pub fn new(n: usize, data: CMatrix) -> Result<Self> {
        if data.dim() != 1 << n {
            return Err(Error::DimensionMismatch {
                left: data.dim(),
                right: 1 << n,
            });
        }
        let defect = data.hermiticity_defect();
        if defect > HERMITICITY_TOL {
            return Err(Error::NotHermitian { deviation: defect });
        }
        let tr = data.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidArgument(format!(
                "trace {} + {}i differs from 1",
                tr.re, tr.im
            )));
        }
        Ok(Self { n, data })
    }

    /// Internal constructor for matrices valid by construction.
    pub(crate) fn new_unchecked(n: usize, data: CMatrix) -> Self {
        debug_assert_eq!(data.dim(), 1 << n);
        Self { n, data }
    }

    /// The maximally mixed state `I / 2^n`.
    pub fn maximally_mixed(n: usize) -> Self {
        let dim = 1usize << n;
        let m = CMatrix::identity(dim).scale(Complex64::new(1.0 / dim as f64, 0.0));
        Self { n, data: m }
    }

    /// Convex combination `sum_i w_i rho_i`; weights must be nonnegative and
    /// sum to 1 within 1e-12.
    pub fn mix(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let n = parts
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty mixture".into()))?
            .1
            .n;
        let dim = 1usize << n;
        let mut acc = CMatrix::zeros(dim);
        let mut wsum = 0.0;
        for (w, rho) in parts {
            if rho.n != n {
                return Err(Error::DimensionMismatch {
                    left: rho.dim(),
                    right: dim,
                });
            }
            if *w < -1e-15 {
                return Err(Error::InvalidArgument(format!("negative weight {w}")));
            }
            wsum += w;
            acc = acc.add(&rho.data.scale(Complex64::new(*w, 0.0)));
        }
        if (wsum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "mixture weights sum to {wsum}"
            )));
        }
        Ok(Self { n, data: acc })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.data
    }

    pub fn trace(&self) -> f64 {
        self.data.trace().re
    }

    /// `tr(rho^2)`; 1 exactly for pure states.
    pub fn purity(&self) -> f64 {
        // tr(rho^2) = sum_ij |rho_ij|^2 for Hermitian rho.
        self.data.data().iter().map(|z| z.norm_sqr()).sum()
    }

    /// `tr(rho A)`.
    pub fn expectation(&self, observable: &CMatrix) -> Result<Complex64> {
        if observable.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: observable.dim(),
                right: self.dim(),
            });
        }
        let dim = self.dim();
        let mut acc = Complex64::ZERO;
        for r in 0..dim {
            for c in 0..dim {
                acc += self.data[(r, c)] * observable[(c, r)];
            }
        }
        Ok(acc)
    }

    /// True when every imaginary part is negligible.
    pub fn is_real(&self) -> bool {
        self.data.data().iter().all(|z| z.im.abs() <= 1e-13)
    }
}
