//! A dense primal-dual interior-point method for block-diagonal semidefinite
//! programs with sparse constraint matrices.
//!
//! Solves the standard-form pair
//!
//! ```text
//! (P) min <C, X>   s.t. <A_i, X> = b_i,  X >= 0 (block diagonal)
//! (D) max b'y      s.t. sum_i y_i A_i + S = C,  S >= 0
//! ```
//!
//! with Nesterov-Todd scaling and a Mehrotra predictor-corrector step. Every
//! constraint matrix is a short list of symmetric entry coefficients, so the
//! Schur complement assembles from closed-form `tr(B W B' W)` products.

use crate::error::{Error, Result};

use super::realsym::{chol_solve, cholesky, eigh_sym, Dense};

/// One symmetric-entry coefficient of a constraint matrix: the basis element
/// `E_rc + E_cr` (or `E_rr` on the diagonal) on `block`, scaled by `coeff`.
#[derive(Debug, Clone, Copy)]
pub struct ConEntry {
    pub block: usize,
    pub row: usize,
    pub col: usize,
    pub coeff: f64,
}

/// Block-diagonal SDP data.
#[derive(Debug, Clone)]
pub struct BlockProblem {
    pub block_dims: Vec<usize>,
    /// Objective, one symmetric matrix per block.
    pub c: Vec<Dense>,
    pub b: Vec<f64>,
    /// Constraint matrices as entry lists; `row <= col` in every entry.
    pub constraints: Vec<Vec<ConEntry>>,
}

/// Solver tolerances and limits.
#[derive(Debug, Clone)]
pub struct IpmSettings {
    pub gap_tol: f64,
    pub feas_tol: f64,
    pub max_iterations: usize,
}

impl Default for IpmSettings {
    fn default() -> Self {
        Self {
            gap_tol: 1e-9,
            feas_tol: 1e-9,
            max_iterations: 200,
        }
    }
}

/// Degenerate optimal faces floor the attainable residuals; a stalled
/// iterate within these bounds is still a valid optimum at the advertised
/// certificate tolerance (1e-7), so it is returned rather than ground into
/// the cone boundary.
const ACCEPT_GAP: f64 = 5e-8;
const ACCEPT_FEAS: f64 = 5e-8;
/// Iterations without halving the complementarity before declaring a stall.
const STALL_WINDOW: usize = 18;
/// Centering strength of recovery and feasibility-polish steps.
const CENTER_SIGMA: f64 = 0.7;
/// Centering triggers when min eig(XS) falls below this fraction of mu.
const NEIGHBORHOOD: f64 = 0.05;

/// Converged primal-dual point.
#[derive(Debug, Clone)]
pub struct IpmSolution {
    pub x: Vec<Dense>,
    pub primal_objective: f64,
    pub dual_objective: f64,
    /// Complementarity gap `<X, S>` at termination.
    pub gap: f64,
    pub iterations: usize,
}

struct State {
    x: Vec<Dense>,
    y: Vec<f64>,
    s: Vec<Dense>,
}

pub fn solve(prob: &BlockProblem, settings: &IpmSettings) -> Result<IpmSolution> {
    let m = prob.b.len();
    let nblocks = prob.block_dims.len();
    let total_dim: usize = prob.block_dims.iter().sum();
    assert_eq!(prob.c.len(), nblocks);
    assert_eq!(prob.constraints.len(), m);

    // Entry lists grouped by block for Schur assembly.
    let mut by_block: Vec<Vec<(usize, ConEntry)>> = vec![Vec::new(); nblocks];
    for (i, cons) in prob.constraints.iter().enumerate() {
        for e in cons {
            by_block[e.block].push((i, *e));
        }
    }

    // Initial point: scaled identities.
    let bnorm = prob.b.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    let cnorm = prob.c.iter().map(Dense::max_abs).fold(0.0, f64::max);
    let tau_p = 10.0 * (1.0 + bnorm);
    let tau_d = 10.0 * (1.0 + cnorm);
    let mut st = State {
        x: prob
            .block_dims
            .iter()
            .map(|&d| Dense::identity(d).scale(tau_p))
            .collect(),
        y: vec![0.0; m],
        s: prob
            .block_dims
            .iter()
            .map(|&d| Dense::identity(d).scale(tau_d))
            .collect(),
    };

    let bscale = 1.0 + prob.b.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    let cscale = 1.0 + prob.c.iter().map(Dense::max_abs).fold(0.0, f64::max);

    let mut gap = dot_blocks(&st.x, &st.s);
    let mut best_mu = f64::INFINITY;
    let mut best_mu_iter = 0usize;
    let mut recover_center = false;
    // Best iterate meeting the acceptance tier, kept as a fallback for
    // numerical breakdown after de-facto convergence.
    let mut acceptable_snapshot: Option<IpmSolution> = None;
    let mut fail: Option<Error> = None;
    'ipm: for iter in 0..settings.max_iterations {
        // Residuals.
        let rp: Vec<f64> = (0..m)
            .map(|i| prob.b[i] - apply_a(&prob.constraints[i], &st.x))
            .collect();
        let mut rd: Vec<Dense> = Vec::with_capacity(nblocks);
        for k in 0..nblocks {
            let mut r = prob.c[k].sub(&st.s[k]);
            r.axpy(-1.0, &adjoint_block(prob, &st.y, k));
            rd.push(r);
        }

        gap = dot_blocks(&st.x, &st.s);
        let mu = gap / total_dim as f64;
        let pobj = dot_blocks(&prob.c, &st.x);
        let dobj: f64 = prob.b.iter().zip(&st.y).map(|(b, y)| b * y).sum();
        let pinf = rp.iter().fold(0.0f64, |a, &v| a.max(v.abs())) / bscale;
        let dinf = rd.iter().map(Dense::max_abs).fold(0.0, f64::max) / cscale;
        let relgap = gap.abs() / (1.0 + pobj.abs() + dobj.abs());

        if mu < 0.5 * best_mu {
            best_mu = mu;
            best_mu_iter = iter;
        }

        if std::env::var_os("HYPERENT_SDP_TRACE").is_some() {
            let xmin = st
                .x
                .iter()
                .map(|b| eigh_sym(b).map(|(v, _)| *v.last().unwrap()).unwrap_or(f64::NAN))
                .fold(f64::INFINITY, f64::min);
            let smin = st
                .s
                .iter()
                .map(|b| eigh_sym(b).map(|(v, _)| *v.last().unwrap()).unwrap_or(f64::NAN))
                .fold(f64::INFINITY, f64::min);
            eprintln!(
                "iter {iter}: mu {mu:.3e} gap {gap:.3e} pinf {pinf:.3e} dinf {dinf:.3e} pobj {pobj:.6} dobj {dobj:.6} xmin {xmin:.3e} smin {smin:.3e}"
            );
        }
        let strict =
            pinf <= settings.feas_tol && dinf <= settings.feas_tol && relgap <= settings.gap_tol;
        let acceptable = pinf <= ACCEPT_FEAS && dinf <= ACCEPT_FEAS && relgap <= ACCEPT_GAP;
        if acceptable {
            let better = acceptable_snapshot
                .as_ref()
                .is_none_or(|s| gap.abs() < s.gap.abs());
            if better {
                acceptable_snapshot = Some(IpmSolution {
                    x: st.x.clone(),
                    primal_objective: pobj,
                    dual_objective: dobj,
                    gap,
                    iterations: iter,
                });
            }
        }
        let stalled = iter - best_mu_iter >= STALL_WINDOW;
        if strict || (acceptable && stalled) {
            return Ok(IpmSolution {
                x: st.x,
                primal_objective: pobj,
                dual_objective: dobj,
                gap,
                iterations: iter,
            });
        }
        if stalled {
            return match acceptable_snapshot {
                Some(snapshot) => Ok(snapshot),
                None => Err(Error::SdpNumerical {
                    iterations: iter,
                    gap,
                    msg: format!(
                        "progress stalled with residuals pinf {pinf:.2e}, dinf {dinf:.2e}, relgap {relgap:.2e}"
                    ),
                }),
            };
        }

        // Nesterov-Todd scaling per block: W S W = X. The eigenvalues of
        // S^{1/2} X S^{1/2} are those of X S, so the smallest one measures
        // distance to the central path for free.
        let mut w: Vec<Dense> = Vec::with_capacity(nblocks);
        let mut s_inv: Vec<Dense> = Vec::with_capacity(nblocks);
        let mut min_xs_eig = f64::INFINITY;
        for k in 0..nblocks {
            let (svals, svecs) = match eigh_sym(&st.s[k]) {
                Ok(v) => v,
                Err(e) => {
                    fail = Some(e);
                    break 'ipm;
                }
            };
            if svals.iter().any(|&v| v <= 0.0) {
                fail = Some(Error::SdpNumerical {
                    iterations: iter,
                    gap,
                    msg: "dual block left the cone".into(),
                });
                break 'ipm;
            }
            let s_half = Dense::from_eigen(&svals, &svecs, f64::sqrt);
            let s_inv_half = Dense::from_eigen(&svals, &svecs, |v| 1.0 / v.sqrt());
            s_inv.push(Dense::from_eigen(&svals, &svecs, |v| 1.0 / v));
            let inner = s_half.matmul(&st.x[k]).matmul(&s_half);
            let (bvals, bvecs) = match eigh_sym(&inner) {
                Ok(v) => v,
                Err(e) => {
                    fail = Some(e);
                    break 'ipm;
                }
            };
            if bvals.iter().any(|&v| v <= 0.0) {
                fail = Some(Error::SdpNumerical {
                    iterations: iter,
                    gap,
                    msg: "primal block left the cone".into(),
                });
                break 'ipm;
            }
            min_xs_eig = min_xs_eig.min(*bvals.last().unwrap());
            let b_half = Dense::from_eigen(&bvals, &bvecs, f64::sqrt);
            let mut wk = s_inv_half.matmul(&b_half).matmul(&s_inv_half);
            wk.symmetrize();
            w.push(wk);
        }

        // Schur complement H_ij = sum_k tr(A_i W_k A_j W_k).
        let mut h = Dense::zeros(m);
        for k in 0..nblocks {
            let wk = &w[k];
            let list = &by_block[k];
            for (ai, ea) in list {
                for (bi, eb) in list {
                    if bi < ai {
                        continue;
                    }
                    let v = ea.coeff * eb.coeff * basis_pair_form(wk, ea, eb);
                    h.add_to(*ai, *bi, v);
                    if ai != bi {
                        h.add_to(*bi, *ai, v);
                    }
                }
            }
        }
        let hl = match cholesky(&h) {
            Some(l) => l,
            None => {
                // One ridge retry: tiny diagonal lift.
                let ridge = 1e-13 * (1.0 + h.max_abs());
                let mut hr = h.clone();
                for i in 0..m {
                    hr.add_to(i, i, ridge);
                }
                match cholesky(&hr) {
                    Some(l) => l,
                    None => {
                        fail = Some(Error::SdpNumerical {
                            iterations: iter,
                            gap,
                            msg: "Schur complement not positive definite".into(),
                        });
                        break 'ipm;
                    }
                }
            }
        };

        // W Rd W per block, reused by both solves.
        let wrdw: Vec<Dense> = (0..nblocks)
            .map(|k| {
                let mut t = w[k].matmul(&rd[k]).matmul(&w[k]);
                t.symmetrize();
                t
            })
            .collect();

        // When feasibility lags behind the gap, a pure centering step
        // (sigma = 1) lifts the iterate off the cone boundary and lets the
        // full Newton step wipe the remaining infeasibility; the gap is left
        // to the Mehrotra iterations. The same centering recovers from
        // collapsed step lengths, which signal an iterate that drifted off
        // the central path.
        let worst_inf = pinf.max(dinf);
        let off_center = min_xs_eig < NEIGHBORHOOD * mu;
        let polish = recover_center
            || off_center
            || (worst_inf > settings.feas_tol && worst_inf > relgap);
        let r_cor: Vec<Dense> = if polish {
            // Damped centering: sigma < 1 keeps the complementarity moving
            // even when every recovery step lands here.
            (0..nblocks)
                .map(|k| {
                    let mut r = s_inv[k].scale(CENTER_SIGMA * mu);
                    r.axpy(-1.0, &st.x[k]);
                    r
                })
                .collect()
        } else {
            // Predictor: target sigma = 0, R = -X.
            let r_aff: Vec<Dense> = st.x.iter().map(|x| x.scale(-1.0)).collect();
            let (_dy_a, ds_a, dx_a) =
                solve_direction(prob, &by_block, &hl, &w, &rp, &rd, &wrdw, &r_aff);
            let (alpha_p_aff, alpha_d_aff) =
                match (max_step(&st.x, &dx_a), max_step(&st.s, &ds_a)) {
                    (Ok(p), Ok(d)) => (p.min(1.0), d.min(1.0)),
                    (Err(e), _) | (_, Err(e)) => {
                        fail = Some(e);
                        break 'ipm;
                    }
                };

            // Mehrotra centering parameter.
            let mut gap_aff = 0.0;
            for k in 0..nblocks {
                let xa = st.x[k].add(&dx_a[k].scale(alpha_p_aff));
                let sa = st.s[k].add(&ds_a[k].scale(alpha_d_aff));
                gap_aff += xa.dot(&sa);
            }
            let sigma = ((gap_aff / gap).powi(3)).clamp(1e-6, 0.999);

            // Corrector: R = sigma mu S^{-1} - X - sym(dXa dSa S^{-1}).
            (0..nblocks)
                .map(|k| {
                    let mut r = s_inv[k].scale(sigma * mu);
                    r.axpy(-1.0, &st.x[k]);
                    let cross = dx_a[k].matmul(&ds_a[k]).matmul(&s_inv[k]);
                    let mut sym_cross = cross.clone();
                    sym_cross.symmetrize();
                    r.axpy(-1.0, &sym_cross);
                    r
                })
                .collect()
        };
        let (dy, ds, dx) = solve_direction(prob, &by_block, &hl, &w, &rp, &rd, &wrdw, &r_cor);

        let (alpha_p, alpha_d) = match (max_step(&st.x, &dx), max_step(&st.s, &ds)) {
            (Ok(p), Ok(d)) => ((0.98 * p).min(1.0), (0.98 * d).min(1.0)),
            (Err(e), _) | (_, Err(e)) => {
                fail = Some(e);
                break 'ipm;
            }
        };
        recover_center = !polish && alpha_p.min(alpha_d) < 0.05;
        if std::env::var_os("HYPERENT_SDP_TRACE").is_some() {
            eprintln!("        polish {polish} alpha_p {alpha_p:.3e} alpha_d {alpha_d:.3e}");
        }

        for k in 0..nblocks {
            st.x[k].axpy(alpha_p, &dx[k]);
            st.x[k].symmetrize();
            st.s[k].axpy(alpha_d, &ds[k]);
            st.s[k].symmetrize();
        }
        for i in 0..m {
            st.y[i] += alpha_d * dy[i];
        }
    }

    // Numerical breakdown or exhausted iterations: fall back to the best
    // iterate that met the acceptance tier, if any.
    match acceptable_snapshot {
        Some(snapshot) => Ok(snapshot),
        None => Err(fail.unwrap_or(Error::SdpMaxIterations {
            iterations: settings.max_iterations,
            gap,
        })),
    }
}

/// Newton direction from precomputed scaling and Schur factor:
/// `H dy = rp - A(R) + A(W Rd W)`, `dS = Rd - A^T(dy)`,
/// `dX = R - W dS W`.
#[allow(clippy::too_many_arguments)]
fn solve_direction(
    prob: &BlockProblem,
    by_block: &[Vec<(usize, ConEntry)>],
    hl: &Dense,
    w: &[Dense],
    rp: &[f64],
    rd: &[Dense],
    wrdw: &[Dense],
    r: &[Dense],
) -> (Vec<f64>, Vec<Dense>, Vec<Dense>) {
    let m = prob.b.len();
    let nblocks = prob.block_dims.len();
    let mut rhs = vec![0.0; m];
    for i in 0..m {
        let mut v = rp[i];
        for e in &prob.constraints[i] {
            let combo = wrdw[e.block].sub(&r[e.block]);
            v += e.coeff * basis_inner(&combo, e.row, e.col);
        }
        rhs[i] = v;
    }
    let mut dy = chol_solve(hl, &rhs);
    // One round of iterative refinement against the exact Schur operator,
    // applied through the scaling (W A^T(dy) W then A of it).
    let resid = schur_residual(prob, by_block, w, &rhs, &dy);
    let corr = chol_solve(hl, &resid);
    for (d, c) in dy.iter_mut().zip(&corr) {
        *d += c;
    }

    let mut ds: Vec<Dense> = Vec::with_capacity(nblocks);
    for k in 0..nblocks {
        let mut d = rd[k].clone();
        d.axpy(-1.0, &adjoint_block_from(by_block, &dy, k, prob.block_dims[k]));
        ds.push(d);
    }
    let dx: Vec<Dense> = (0..nblocks)
        .map(|k| {
            let mut t = w[k].matmul(&ds[k]).matmul(&w[k]);
            t.symmetrize();
            let mut d = r[k].clone();
            d.axpy(-1.0, &t);
            d
        })
        .collect();
    (dy, ds, dx)
}

/// `rhs - H dy` computed through the exact scaled operator rather than the
/// assembled Schur matrix, so refinement corrects assembly rounding too.
fn schur_residual(
    prob: &BlockProblem,
    by_block: &[Vec<(usize, ConEntry)>],
    w: &[Dense],
    rhs: &[f64],
    dy: &[f64],
) -> Vec<f64> {
    let nblocks = prob.block_dims.len();
    let waw: Vec<Dense> = (0..nblocks)
        .map(|k| {
            let at = adjoint_block_from(by_block, dy, k, prob.block_dims[k]);
            let mut t = w[k].matmul(&at).matmul(&w[k]);
            t.symmetrize();
            t
        })
        .collect();
    (0..prob.b.len())
        .map(|i| rhs[i] - apply_a(&prob.constraints[i], &waw))
        .collect()
}

/// `<A_i, X>` for an entry-list constraint.
fn apply_a(entries: &[ConEntry], x: &[Dense]) -> f64 {
    entries
        .iter()
        .map(|e| e.coeff * basis_inner(&x[e.block], e.row, e.col))
        .sum()
}

/// `<B_rc, M>`: `M_rr` on the diagonal, `2 M_rc` off it.
#[inline]
fn basis_inner(m: &Dense, r: usize, c: usize) -> f64 {
    if r == c {
        m.get(r, r)
    } else {
        2.0 * m.get(r, c)
    }
}

/// `tr(B_a W B_b W)` for symmetric-entry basis elements.
#[inline]
pub(crate) fn basis_pair_form(w: &Dense, a: &ConEntry, b: &ConEntry) -> f64 {
    let (r, c) = (a.row, a.col);
    let (u, v) = (b.row, b.col);
    match (r == c, u == v) {
        (true, true) => {
            let x = w.get(r, u);
            x * x
        }
        (true, false) => 2.0 * w.get(r, u) * w.get(r, v),
        (false, true) => 2.0 * w.get(u, r) * w.get(u, c),
        (false, false) => {
            2.0 * (w.get(r, u) * w.get(c, v) + w.get(r, v) * w.get(c, u))
        }
    }
}

/// `sum_i y_i A_i` restricted to one block.
fn adjoint_block(prob: &BlockProblem, y: &[f64], block: usize) -> Dense {
    let d = prob.block_dims[block];
    let mut out = Dense::zeros(d);
    for (i, cons) in prob.constraints.iter().enumerate() {
        let yi = y[i];
        if yi == 0.0 {
            continue;
        }
        for e in cons {
            if e.block != block {
                continue;
            }
            out.add_to(e.row, e.col, yi * e.coeff);
            if e.row != e.col {
                out.add_to(e.col, e.row, yi * e.coeff);
            }
        }
    }
    out
}

fn adjoint_block_from(
    by_block: &[Vec<(usize, ConEntry)>],
    y: &[f64],
    block: usize,
    dim: usize,
) -> Dense {
    let mut out = Dense::zeros(dim);
    for (i, e) in &by_block[block] {
        let v = y[*i] * e.coeff;
        out.add_to(e.row, e.col, v);
        if e.row != e.col {
            out.add_to(e.col, e.row, v);
        }
    }
    out
}

fn dot_blocks(a: &[Dense], b: &[Dense]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.dot(y)).sum()
}

/// Largest alpha with `X + alpha D >= 0`, capped at a large constant.
fn max_step(x: &[Dense], d: &[Dense]) -> Result<f64> {
    let mut alpha = 1.0e6f64;
    for (xk, dk) in x.iter().zip(d) {
        let (vals, vecs) = eigh_sym(xk)?;
        if vals.iter().any(|&v| v <= 0.0) {
            return Err(Error::SdpNumerical {
                iterations: 0,
                gap: 0.0,
                msg: "iterate left the cone during line search".into(),
            });
        }
        let x_inv_half = Dense::from_eigen(&vals, &vecs, |v| 1.0 / v.sqrt());
        let mut scaled = x_inv_half.matmul(dk).matmul(&x_inv_half);
        scaled.symmetrize();
        let (dvals, _) = eigh_sym(&scaled)?;
        let min = dvals.last().copied().unwrap_or(0.0);
        if min < 0.0 {
            alpha = alpha.min(-1.0 / min);
        }
    }
    Ok(alpha)
}
