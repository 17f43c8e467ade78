//! Small dense real symmetric linear algebra for the interior-point solver:
//! matrices, Jacobi eigendecomposition, and Cholesky factorization.

use crate::error::{Error, Result};

/// Dense row-major square matrix; symmetric by usage convention.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    pub n: usize,
    pub a: Vec<f64>,
}

impl Dense {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            a: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.a[i * n + i] = 1.0;
        }
        m
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.a[r * self.n + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.a[r * self.n + c] = v;
    }

    #[inline]
    pub fn add_to(&mut self, r: usize, c: usize, v: f64) {
        self.a[r * self.n + c] += v;
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            n: self.n,
            a: self.a.iter().map(|x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (x, y) in out.a.iter_mut().zip(&other.a) {
            *x += y;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (x, y) in out.a.iter_mut().zip(&other.a) {
            *x -= y;
        }
        out
    }

    pub fn axpy(&mut self, alpha: f64, other: &Self) {
        for (x, y) in self.a.iter_mut().zip(&other.a) {
            *x += alpha * y;
        }
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.a.iter().zip(&other.a).map(|(x, y)| x * y).sum()
    }

    #[cfg(test)]
    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn frob(&self) -> f64 {
        self.a.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.a.iter().fold(0.0f64, |m, &x| m.max(x.abs()))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let v = self.get(r, k);
                if v == 0.0 {
                    continue;
                }
                let orow = &other.a[k * n..(k + 1) * n];
                let trow = &mut out.a[r * n..(r + 1) * n];
                for (t, &o) in trow.iter_mut().zip(orow) {
                    *t += v * o;
                }
            }
        }
        out
    }

    /// Forces exact symmetry by averaging with the transpose.
    pub fn symmetrize(&mut self) {
        let n = self.n;
        for r in 0..n {
            for c in r + 1..n {
                let v = 0.5 * (self.get(r, c) + self.get(c, r));
                self.set(r, c, v);
                self.set(c, r, v);
            }
        }
    }

    /// `V diag(f(lambda)) V^T` from an eigendecomposition.
    pub fn from_eigen(vals: &[f64], vecs: &Dense, f: impl Fn(f64) -> f64) -> Self {
        let n = vecs.n;
        let mut out = Self::zeros(n);
        for k in 0..n {
            let fk = f(vals[k]);
            if fk == 0.0 {
                continue;
            }
            for r in 0..n {
                let vr = vecs.get(r, k) * fk;
                if vr == 0.0 {
                    continue;
                }
                let trow = &mut out.a[r * n..(r + 1) * n];
                for (c, t) in trow.iter_mut().enumerate() {
                    *t += vr * vecs.get(c, k);
                }
            }
        }
        out
    }
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Returns
/// eigenvalues (descending) and the orthogonal matrix of eigenvectors as
/// columns.
pub fn eigh_sym(m: &Dense) -> Result<(Vec<f64>, Dense)> {
    let n = m.n;
    let mut a = m.clone();
    a.symmetrize();
    let norm = a.frob().max(f64::MIN_POSITIVE);
    let tol = 1e-14 * norm;
    let mut v = Dense::identity(n);

    let mut sweeps = 0usize;
    loop {
        let mut off = 0.0;
        for r in 0..n {
            for c in r + 1..n {
                off += a.get(r, c) * a.get(r, c);
            }
        }
        let off = (2.0 * off).sqrt();
        if off <= tol {
            break;
        }
        if sweeps >= 60 {
            return Err(Error::EigenNoConvergence {
                sweeps,
                offdiag: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.get(p, q);
                if apq.abs() <= tol / n as f64 {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Golub-Van-Loan convention: A <- J^T A J with J[p][q] = s.
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk - s * aqk);
                    a.set(q, k, s * apk + c * aqk);
                }
                a.set(p, q, 0.0);
                a.set(q, p, 0.0);
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).expect("finite eigenvalues"));
    let vals: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vecs = Dense::zeros(n);
    for (c, &src) in order.iter().enumerate() {
        for r in 0..n {
            vecs.set(r, c, v.get(r, src));
        }
    }
    Ok((vals, vecs))
}

/// In-place lower Cholesky factorization of a symmetric positive definite
/// matrix stored densely. Returns the factor `L` with `L L^T = A`.
pub fn cholesky(a: &Dense) -> Option<Dense> {
    let n = a.n;
    let mut l = vec![0.0f64; n * n];
    for j in 0..n {
        // Diagonal entry.
        let mut d = a.get(j, j);
        let (head, _) = l.split_at(j * n + j);
        let lj = &head[j * n..j * n + j];
        d -= lj.iter().map(|x| x * x).sum::<f64>();
        if d <= 0.0 || !d.is_finite() {
            return None;
        }
        let d = d.sqrt();
        l[j * n + j] = d;
        let inv = 1.0 / d;
        for i in j + 1..n {
            let mut v = a.get(i, j);
            let (li, ljrow) = {
                let li = &l[i * n..i * n + j];
                let ljr = &l[j * n..j * n + j];
                (li, ljr)
            };
            v -= li.iter().zip(ljrow).map(|(x, y)| x * y).sum::<f64>();
            l[i * n + j] = v * inv;
        }
    }
    Some(Dense { n, a: l })
}

/// Solves `L L^T x = b` given the Cholesky factor.
pub fn chol_solve(l: &Dense, b: &[f64]) -> Vec<f64> {
    let n = l.n;
    let mut x = b.to_vec();
    // Forward: L y = b.
    for i in 0..n {
        let row = &l.a[i * n..i * n + i];
        let dot: f64 = row.iter().zip(&x[..i]).map(|(a, b)| a * b).sum();
        x[i] = (x[i] - dot) / l.a[i * n + i];
    }
    // Backward: L^T x = y.
    for i in (0..n).rev() {
        let mut v = x[i];
        for k in i + 1..n {
            v -= l.a[k * n + i] * x[k];
        }
        x[i] = v / l.a[i * n + i];
    }
    x
}
