//! Genuine-multipartite-entanglement quantification through the
//! fully-decomposable-witness semidefinite program.
//!
//! A witness `W` is fully decomposable when for every bipartition `M` it
//! splits as `W = P_M + Q_M^{T_M}` with both parts positive semidefinite.
//! Minimizing `tr(W rho)` over such witnesses yields zero for every PPT
//! mixture; a negative optimum certifies genuine multipartite entanglement,
//! reported as `|min(0, tr(W rho))|`.
//!
//! Real-symmetric inputs (every hypergraph-derived state) are solved with
//! `d x d` real blocks; genuinely complex inputs go through the standard
//! `2d x 2d` real-symmetric embedding, whose doubled eigenvalue
//! multiplicities the certificate extraction folds back.

mod realsym;
mod solver;

use num_complex::Complex64;

use crate::density::DensityMatrix;
use crate::entanglement::{eigenvalues_hermitian, partial_transpose_matrix, Bipartition};
use crate::error::{Error, Result};
use crate::matrix::CMatrix;

use realsym::Dense;
use solver::{BlockProblem, ConEntry, IpmSettings};

/// Witness normalization of the minimization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// `tr(W) = 1`.
    TraceOne,
    /// `0 <= P_M <= 1` and `0 <= Q_M <= 1` per bipartition, no trace
    /// constraint; for a single bipartition the optimum equals minus the
    /// negativity.
    OperatorBounded,
}

impl Normalization {
    pub fn label(&self) -> &'static str {
        match self {
            Normalization::TraceOne => "trace-one",
            Normalization::OperatorBounded => "operator-bounded",
        }
    }
}

/// A fully-decomposable-witness minimization instance.
#[derive(Debug, Clone)]
pub struct SdpProblem {
    rho: DensityMatrix,
    bipartitions: Vec<Bipartition>,
    mode: Normalization,
    settings: IpmSolverSettings,
}

/// Tolerances forwarded to the interior-point method.
#[derive(Debug, Clone)]
pub struct IpmSolverSettings {
    pub gap_tol: f64,
    pub feas_tol: f64,
    pub max_iterations: usize,
}

impl Default for IpmSolverSettings {
    fn default() -> Self {
        Self {
            gap_tol: 1e-9,
            feas_tol: 1e-10,
            max_iterations: 200,
        }
    }
}

impl SdpProblem {
    /// Instance over an explicit bipartition list.
    pub fn new(
        rho: DensityMatrix,
        bipartitions: Vec<Bipartition>,
        mode: Normalization,
    ) -> Result<Self> {
        let n = rho.n();
        if n < 2 {
            return Err(Error::InvalidArgument(
                "a single qubit admits no bipartition".into(),
            ));
        }
        if n > 5 {
            return Err(Error::Capacity {
                what: "qubits (witness SDP)",
                got: n,
                limit: 5,
            });
        }
        if bipartitions.is_empty() {
            return Err(Error::InvalidArgument("empty bipartition list".into()));
        }
        for b in &bipartitions {
            if b.n() != n {
                return Err(Error::DimensionMismatch {
                    left: b.n(),
                    right: n,
                });
            }
        }
        Ok(Self {
            rho,
            bipartitions,
            mode,
            settings: IpmSolverSettings::default(),
        })
    }

    /// Instance over all `2^(n-1) - 1` bipartitions.
    pub fn full(rho: DensityMatrix, mode: Normalization) -> Result<Self> {
        let parts = Bipartition::all(rho.n())?;
        Self::new(rho, parts, mode)
    }

    pub fn with_settings(mut self, settings: IpmSolverSettings) -> Self {
        self.settings = settings;
        self
    }

    pub fn rho(&self) -> &DensityMatrix {
        &self.rho
    }

    pub fn bipartitions(&self) -> &[Bipartition] {
        &self.bipartitions
    }

    pub fn mode(&self) -> Normalization {
        self.mode
    }
}

/// Optimal witness with its per-bipartition decomposition certificates.
#[derive(Debug, Clone)]
pub struct SdpSolution {
    /// `tr(W rho)` at the optimum.
    pub objective: f64,
    /// The optimal fully decomposable witness.
    pub witness: CMatrix,
    /// `(bipartition, P_M, Q_M)` with `W = P_M + Q_M^{T_M}` per entry.
    pub certificates: Vec<(Bipartition, CMatrix, CMatrix)>,
    /// Complementarity gap reported by the solver.
    pub duality_gap: f64,
    pub iterations: usize,
    pub mode: Normalization,
}

/// Outcome of re-checking one bipartition's certificate.
#[derive(Debug, Clone)]
pub struct CertificateCheck {
    pub bipartition: Bipartition,
    pub p_min_eigenvalue: f64,
    pub q_min_eigenvalue: f64,
    /// Largest entry of `W - (P_M + Q_M^{T_M})`.
    pub split_residual: f64,
    pub ok: bool,
}

/// Independent verification report for a solution or an external witness.
#[derive(Debug, Clone)]
pub struct WitnessReport {
    pub checks: Vec<CertificateCheck>,
    /// Deviation from the normalization condition (trace-one mode only).
    pub normalization_error: f64,
    pub fully_decomposable: bool,
}

/// Certificate tolerance used by verification.
pub const CERT_TOL: f64 = 1e-7;

impl SdpSolution {
    /// Re-checks every certificate with the Hermitian eigensolver from
    /// [`crate::entanglement`], independent of the interior-point internals.
    pub fn verify(&self) -> Result<WitnessReport> {
        let n = (self.witness.dim().trailing_zeros()) as usize;
        let mut checks = Vec::new();
        let mut all_ok = true;
        for (bip, p, q) in &self.certificates {
            let p_min = eigenvalues_hermitian(p)?.min();
            let q_min = eigenvalues_hermitian(q)?.min();
            let qt = partial_transpose_matrix(q, n, bip)?;
            let resid = self.witness.sub(&p.add(&qt)).max_abs();
            let ok = p_min >= -CERT_TOL && q_min >= -CERT_TOL && resid <= CERT_TOL;
            all_ok &= ok;
            checks.push(CertificateCheck {
                bipartition: *bip,
                p_min_eigenvalue: p_min,
                q_min_eigenvalue: q_min,
                split_residual: resid,
                ok,
            });
        }
        let normalization_error = match self.mode {
            Normalization::TraceOne => (self.witness.trace().re - 1.0).abs(),
            Normalization::OperatorBounded => {
                // max over M of how far P_M or Q_M pokes above the identity.
                let mut worst = 0.0f64;
                for (_, p, q) in &self.certificates {
                    for part in [p, q] {
                        let max = eigenvalues_hermitian(part)?.max();
                        worst = worst.max((max - 1.0).max(0.0));
                    }
                }
                worst
            }
        };
        all_ok &= normalization_error <= CERT_TOL;
        Ok(WitnessReport {
            checks,
            normalization_error,
            fully_decomposable: all_ok,
        })
    }
}

/// How the complex Hermitian blocks map onto real symmetric solver blocks.
#[derive(Debug, Clone, Copy)]
enum Space {
    Real { d: usize },
    Realified { d: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Part {
    Re,
    Im,
}

/// One real degree of freedom of a Hermitian matrix.
#[derive(Debug, Clone, Copy)]
struct Dof {
    k: usize,
    l: usize,
    part: Part,
}

impl Space {
    fn for_density(rho: &DensityMatrix) -> Space {
        if rho.is_real() {
            Space::Real { d: rho.dim() }
        } else {
            Space::Realified { d: rho.dim() }
        }
    }

    fn for_matrix(m: &CMatrix) -> Space {
        if m.data().iter().all(|z| z.im.abs() <= 1e-13) {
            Space::Real { d: m.dim() }
        } else {
            Space::Realified { d: m.dim() }
        }
    }

    fn complex_dim(&self) -> usize {
        match self {
            Space::Real { d } | Space::Realified { d } => *d,
        }
    }

    fn block_dim(&self) -> usize {
        match self {
            Space::Real { d } => *d,
            Space::Realified { d } => 2 * d,
        }
    }

    fn dofs(&self) -> Vec<Dof> {
        let d = self.complex_dim();
        let mut out = Vec::new();
        for k in 0..d {
            for l in k..d {
                out.push(Dof {
                    k,
                    l,
                    part: Part::Re,
                });
                if matches!(self, Space::Realified { .. }) && k < l {
                    out.push(Dof {
                        k,
                        l,
                        part: Part::Im,
                    });
                }
            }
        }
        out
    }

    /// Entry positions (with signs) realizing the dof's linear functional on
    /// a solver block. In realified mode each functional pairs the two
    /// quadrant copies so it commutes with the embedding symmetry; anything
    /// less leaves unconstrained block directions that break the program.
    fn entries(&self, dof: Dof) -> Vec<((usize, usize), f64)> {
        match (self, dof.part) {
            (Space::Real { .. }, Part::Re) => vec![((dof.k, dof.l), 1.0)],
            (Space::Realified { d }, Part::Re) => vec![
                ((dof.k, dof.l), 1.0),
                ((dof.k + d, dof.l + d), 1.0),
            ],
            (Space::Realified { d }, Part::Im) => vec![
                ((dof.k, dof.l + d), 1.0),
                ((dof.l, dof.k + d), -1.0),
            ],
            (Space::Real { .. }, Part::Im) => unreachable!("no Im dof in real mode"),
        }
    }

    /// The dof functional evaluated on an embedded matrix.
    fn functional(&self, dof: Dof, emb: &Dense) -> f64 {
        self.entries(dof)
            .into_iter()
            .map(|(pos, sign)| sign * basis_value(emb, pos))
            .sum()
    }

    /// Image of a dof under partial transposition over `mask`, with the sign
    /// picked up when the transposed pair flips orientation.
    fn pt_dof(&self, dof: Dof, mask: usize) -> (Dof, f64) {
        let keep = !mask;
        let k2 = (dof.k & keep) | (dof.l & mask);
        let l2 = (dof.l & keep) | (dof.k & mask);
        if k2 <= l2 {
            (
                Dof {
                    k: k2,
                    l: l2,
                    part: dof.part,
                },
                1.0,
            )
        } else {
            let sign = match dof.part {
                Part::Re => 1.0,
                Part::Im => -1.0,
            };
            (
                Dof {
                    k: l2,
                    l: k2,
                    part: dof.part,
                },
                sign,
            )
        }
    }

    /// Embeds a complex Hermitian matrix into the real block representation.
    fn embed(&self, m: &CMatrix) -> Dense {
        let d = self.complex_dim();
        assert_eq!(m.dim(), d);
        match self {
            Space::Real { .. } => {
                let mut out = Dense::zeros(d);
                for r in 0..d {
                    for c in 0..d {
                        out.set(r, c, m[(r, c)].re);
                    }
                }
                out
            }
            Space::Realified { .. } => {
                let mut out = Dense::zeros(2 * d);
                for r in 0..d {
                    for c in 0..d {
                        let z = m[(r, c)];
                        out.set(r, c, z.re);
                        out.set(r + d, c + d, z.re);
                        out.set(r, c + d, -z.im);
                        out.set(r + d, c, z.im);
                    }
                }
                out
            }
        }
    }

    /// Recovers a complex Hermitian matrix from a solver block, averaging
    /// the realified embedding back onto its invariant subspace.
    fn extract(&self, block: &Dense) -> CMatrix {
        let d = self.complex_dim();
        match self {
            Space::Real { .. } => CMatrix::from_fn(d, |r, c| {
                Complex64::new(0.5 * (block.get(r, c) + block.get(c, r)), 0.0)
            }),
            Space::Realified { .. } => CMatrix::from_fn(d, |r, c| {
                let re = 0.5 * (block.get(r, c) + block.get(r + d, c + d));
                let im = 0.5 * (block.get(r + d, c) - block.get(r, c + d));
                Complex64::new(re, im)
            }),
        }
    }

    /// Objective scale: the embedded inner product counts everything twice.
    fn objective_scale(&self) -> f64 {
        match self {
            Space::Real { .. } => 1.0,
            Space::Realified { .. } => 2.0,
        }
    }
}

/// `<B_pos, M>` on a dense block: diagonal entry or twice the off-diagonal.
fn basis_value(m: &Dense, pos: (usize, usize)) -> f64 {
    if pos.0 == pos.1 {
        m.get(pos.0, pos.0)
    } else {
        2.0 * m.get(pos.0, pos.1)
    }
}

/// Solves the fully-decomposable-witness minimization.
pub fn solve_sdp(prob: &SdpProblem) -> Result<SdpSolution> {
    let space = Space::for_density(&prob.rho);
    let nb = prob.bipartitions.len();
    let bd = space.block_dim();
    let dofs = space.dofs();

    // Blocks: P_M, Q_M pairs; operator-bounded mode appends slack blocks
    // for P_M <= 1 and Q_M <= 1 (the bounds keep the feasible set compact,
    // which pure-state inputs need for a well-posed interior).
    let slack_base = 2 * nb;
    let nblocks = match prob.mode {
        Normalization::TraceOne => 2 * nb,
        Normalization::OperatorBounded => 4 * nb,
    };
    let block_dims = vec![bd; nblocks];

    // Objective: tr(W rho) = tr(P_1 rho) + tr(Q_1 rho^{T_1}).
    let rho_m = prob.rho.matrix();
    let rho_pt1 = partial_transpose_matrix(rho_m, prob.rho.n(), &prob.bipartitions[0])?;
    let mut c = vec![Dense::zeros(bd); nblocks];
    c[0] = space.embed(rho_m);
    c[1] = space.embed(&rho_pt1);

    let mask_of = |b: &Bipartition| b.mask() as usize;

    let mut constraints: Vec<Vec<ConEntry>> = Vec::new();
    let mut b_vec: Vec<f64> = Vec::new();

    // Pushes the dof functional of `block`, optionally seen through a
    // partial transpose, scaled by `scale`.
    let push_block = |entries: &mut Vec<ConEntry>,
                      block: usize,
                      dof: Dof,
                      pt_mask: Option<usize>,
                      scale: f64| {
        let (mapped, sign) = match pt_mask {
            Some(mask) => space.pt_dof(dof, mask),
            None => (dof, 1.0),
        };
        for (pos, entry_sign) in space.entries(mapped) {
            entries.push(ConEntry {
                block,
                row: pos.0,
                col: pos.1,
                coeff: scale * sign * entry_sign,
            });
        }
    };

    // Coupling: P_1 + Q_1^{T_1} = P_M + Q_M^{T_M} for M = 2..nb.
    for m_idx in 1..nb {
        let mask1 = mask_of(&prob.bipartitions[0]);
        let mask_m = mask_of(&prob.bipartitions[m_idx]);
        for &dof in &dofs {
            let mut entries = Vec::with_capacity(8);
            push_block(&mut entries, 0, dof, None, 1.0);
            push_block(&mut entries, 1, dof, Some(mask1), 1.0);
            push_block(&mut entries, 2 * m_idx, dof, None, -1.0);
            push_block(&mut entries, 2 * m_idx + 1, dof, Some(mask_m), -1.0);
            constraints.push(entries);
            b_vec.push(0.0);
        }
    }

    match prob.mode {
        Normalization::TraceOne => {
            // tr(P_1) + tr(Q_1) = 1 (doubled under the realified embedding).
            let mut entries = Vec::with_capacity(2 * bd);
            for blk in 0..2 {
                for i in 0..bd {
                    entries.push(ConEntry {
                        block: blk,
                        row: i,
                        col: i,
                        coeff: 1.0,
                    });
                }
            }
            constraints.push(entries);
            b_vec.push(space.objective_scale());
        }
        Normalization::OperatorBounded => {
            // P_M + slack = 1 and Q_M + slack = 1 per bipartition.
            let identity = space.embed(&CMatrix::identity(space.complex_dim()));
            for blk in 0..2 * nb {
                for &dof in &dofs {
                    let mut entries = Vec::with_capacity(4);
                    push_block(&mut entries, blk, dof, None, 1.0);
                    push_block(&mut entries, slack_base + blk, dof, None, 1.0);
                    constraints.push(entries);
                    b_vec.push(space.functional(dof, &identity));
                }
            }
        }
    }

    let block_prob = BlockProblem {
        block_dims,
        c,
        b: b_vec,
        constraints,
    };
    let settings = IpmSettings {
        gap_tol: prob.settings.gap_tol,
        feas_tol: prob.settings.feas_tol,
        max_iterations: prob.settings.max_iterations,
    };
    let sol = solver::solve(&block_prob, &settings)?;

    // Extract complex certificates.
    let mut certificates = Vec::with_capacity(nb);
    for (m_idx, bip) in prob.bipartitions.iter().enumerate() {
        let p = space.extract(&sol.x[2 * m_idx]);
        let q = space.extract(&sol.x[2 * m_idx + 1]);
        certificates.push((*bip, p, q));
    }
    let (bip1, p1, q1) = &certificates[0];
    let q1t = partial_transpose_matrix(q1, prob.rho.n(), bip1)?;
    let witness = p1.add(&q1t);
    let objective = {
        let dim = witness.dim();
        let mut acc = 0.0;
        for r in 0..dim {
            for k in 0..dim {
                acc += (witness[(r, k)] * rho_m[(k, r)]).re;
            }
        }
        acc
    };

    // Report the wider of the complementarity gap and the primal-dual
    // objective spread.
    let duality_gap = sol
        .gap
        .abs()
        .max((sol.primal_objective - sol.dual_objective).abs());

    Ok(SdpSolution {
        objective,
        witness,
        certificates,
        duality_gap,
        iterations: sol.iterations,
        mode: prob.mode,
    })
}

/// Optima within this margin of zero are reported as exactly zero.
pub const GMN_ZERO_CLAMP: f64 = 1e-9;

/// The PPT-mixer entanglement value `|min(0, min_W tr(W rho))|` over fully
/// decomposable witnesses across all bipartitions.
pub fn gmn(rho: &DensityMatrix, mode: Normalization) -> Result<f64> {
    let prob = SdpProblem::full(rho.clone(), mode)?;
    let sol = solve_sdp(&prob)?;
    if sol.objective >= -GMN_ZERO_CLAMP {
        Ok(0.0)
    } else {
        Ok(-sol.objective)
    }
}

/// Attempts the decomposition `W = P_M + Q_M^{T_M}` for every bipartition by
/// maximizing the smallest eigenvalue margin, itself a feasibility SDP.
pub fn verify_witness(w: &CMatrix, n: usize, bipartitions: &[Bipartition]) -> Result<WitnessReport> {
    if w.dim() != 1 << n {
        return Err(Error::DimensionMismatch {
            left: w.dim(),
            right: 1 << n,
        });
    }
    let defect = w.hermiticity_defect();
    if defect > 1e-10 {
        return Err(Error::NotHermitian { deviation: defect });
    }
    let space = Space::for_matrix(w);
    let bd = space.block_dim();
    let dofs = space.dofs();

    let mut checks = Vec::new();
    let mut all_ok = true;
    for bip in bipartitions {
        let mask = bip.mask() as usize;
        // Maximize the eigenvalue margin lambda of W = P + Q^{T_M} with
        // P, Q >= lambda I. Shift lambda' = lambda + 1 >= 0 so the variable
        // fits a one-dimensional PSD block without a free-variable split
        // (whose unbounded optimal ray wrecks the Schur conditioning):
        // P' + Q'^{T_M} + 2 lambda' I = W + 2I, maximize lambda'.
        let block_dims = vec![bd, bd, 1];
        let mut c = vec![Dense::zeros(bd), Dense::zeros(bd), Dense::zeros(1)];
        c[2].set(0, 0, -1.0);
        let identity = CMatrix::identity(space.complex_dim());
        let two_i = space.embed(&identity).scale(2.0);
        let shifted = w.add(&identity.scale(Complex64::new(2.0, 0.0)));
        let shifted_emb = space.embed(&shifted);
        let mut constraints = Vec::new();
        let mut b_vec = Vec::new();
        for &dof in &dofs {
            let mut entries = Vec::with_capacity(5);
            for (pos, sign) in space.entries(dof) {
                entries.push(ConEntry {
                    block: 0,
                    row: pos.0,
                    col: pos.1,
                    coeff: sign,
                });
            }
            let (dm, sm) = space.pt_dof(dof, mask);
            for (pos, sign) in space.entries(dm) {
                entries.push(ConEntry {
                    block: 1,
                    row: pos.0,
                    col: pos.1,
                    coeff: sm * sign,
                });
            }
            let lam_coeff = space.functional(dof, &two_i);
            if lam_coeff != 0.0 {
                entries.push(ConEntry {
                    block: 2,
                    row: 0,
                    col: 0,
                    coeff: lam_coeff,
                });
            }
            constraints.push(entries);
            b_vec.push(space.functional(dof, &shifted_emb));
        }
        let prob = BlockProblem {
            block_dims,
            c,
            b: b_vec,
            constraints,
        };
        let sol = solver::solve(&prob, &IpmSettings::default())?;
        let lambda = sol.x[2].get(0, 0) - 1.0;
        let p = {
            let pp = space.extract(&sol.x[0]);
            pp.add(&CMatrix::identity(space.complex_dim()).scale(Complex64::new(lambda, 0.0)))
        };
        let q = {
            let qq = space.extract(&sol.x[1]);
            qq.add(&CMatrix::identity(space.complex_dim()).scale(Complex64::new(lambda, 0.0)))
        };
        let p_min = eigenvalues_hermitian(&p)?.min();
        let q_min = eigenvalues_hermitian(&q)?.min();
        let qt = partial_transpose_matrix(&q, n, bip)?;
        let resid = w.sub(&p.add(&qt)).max_abs();
        let ok = lambda >= -CERT_TOL && resid <= CERT_TOL;
        all_ok &= ok;
        checks.push(CertificateCheck {
            bipartition: *bip,
            p_min_eigenvalue: p_min,
            q_min_eigenvalue: q_min,
            split_residual: resid,
            ok,
        });
    }
    Ok(WitnessReport {
        checks,
        normalization_error: 0.0,
        fully_decomposable: all_ok,
    })
}
