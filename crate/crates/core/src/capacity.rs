//! Capacity of a quiver datum via the Gaussian-extremizer fixed point.
//!
//! For a tuple `Σ = (Σ_1..Σ_k)` of SPD matrices on the sources the sink
//! aggregates are `M_j = Σ_i σ₊(v_i) Σ_a V(a) Σ_i V(a)ᵀ` and
//!
//! ```text
//! cap(V, σ; Σ) = Π_j det(M_j)^{σ₋(w_j)} / Π_i det(Σ_i)^{σ₊(v_i)}
//! ```
//!
//! `cap(V, σ)` is the infimum over all tuples. Stationary tuples satisfy
//! `Σ_i⁻¹ = Σ_j σ₋(w_j) Σ_a V(a)ᵀ M_j⁻¹ V(a)`, and iterating that map is an
//! alternating minimization (sink scaling, then source scaling), so
//! `cap(V, σ; Σ)` never increases along it.

use crate::error::{Error, Result};
use crate::linalg::{log_det, spd_inverse, spd_log, sym_exp, Matrix, SpdMatrix};
use crate::quiver::{from_ajn, AjnDatum, QuiverDatum};

/// A k-tuple of SPD matrices, one per source.
#[derive(Debug, Clone, PartialEq)]
pub struct SpdTuple(pub Vec<SpdMatrix>);

impl SpdTuple {
    pub fn identities(dims: &[usize]) -> Self {
        Self(dims.iter().map(|&d| SpdMatrix::identity(d)).collect())
    }

    /// Certifies every entry.
    pub fn from_matrices(ms: Vec<Matrix>) -> Result<Self> {
        Ok(Self(ms.into_iter().map(SpdMatrix::new).collect::<std::result::Result<_, _>>()?))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &SpdMatrix> {
        self.0.iter()
    }

    pub fn matrices(&self) -> Vec<Matrix> {
        self.0.iter().map(|s| s.as_matrix().clone()).collect()
    }

    pub fn scaled(&self, t: f64) -> Self {
        Self(self.0.iter().map(|s| s.scaled(t)).collect())
    }

    /// `Σ_i w_i log det Σ_i`.
    pub fn weighted_log_det(&self, weights: &[u32]) -> f64 {
        self.0.iter().zip(weights).map(|(s, &w)| w as f64 * s.log_det()).sum()
    }

    /// Rescales so that `Π det(Σ_i)^{σ₊(v_i)} = 1`.
    pub fn det_normalized(&self, datum: &QuiverDatum) -> Self {
        let n = datum.source_total() as f64;
        let t = (-self.weighted_log_det(&datum.sigma.plus) / n).exp();
        self.scaled(t)
    }
}

impl std::ops::Index<usize> for SpdTuple {
    type Output = SpdMatrix;

    fn index(&self, i: usize) -> &SpdMatrix {
        &self.0[i]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub cap_floor: f64,
    /// Log-space blend weight on the previous iterate, in `[0, 1)`.
    pub damping: f64,
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tol: 1e-8, max_iter: 10_000, cap_floor: 1e-12, damping: 0.0, seed: 0 }
    }
}

impl SolverOptions {
    fn check(&self) -> Result<()> {
        if self.tol.is_nan()
            || self.tol <= 0.0
            || self.cap_floor.is_nan()
            || self.cap_floor <= 0.0
            || !(0.0..1.0).contains(&self.damping)
        {
            return Err(Error::DimensionMismatch(format!(
                "invalid solver options: tol={}, cap_floor={}, damping={}",
                self.tol, self.cap_floor, self.damping
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Converged,
    Infeasible,
    MaxIterations,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Converged => "Converged",
            SolveStatus::Infeasible => "Infeasible",
            SolveStatus::MaxIterations => "MaxIterations",
        }
    }
}

/// Why a run was declared numerically infeasible.
#[derive(Debug, Clone, PartialEq)]
pub enum InfeasibleEvidence {
    /// `cap(V, σ; Σ)` dropped below the floor.
    CapBelowFloor { value: f64 },
    /// Some `M_j(Σ)` is singular, so every `cap(V, σ; Σ)` vanishes.
    SingularAggregate { sink: usize },
    /// All maps out of this source share a nonzero kernel.
    SingularUpdate { source: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityReport {
    pub status: SolveStatus,
    /// `0` when infeasible; an upper estimate when `MaxIterations`.
    pub cap: f64,
    /// `-½ log cap`, `+∞` when infeasible.
    pub ajn_constant: f64,
    /// Present exactly when converged; det-normalized.
    pub extremizer: Option<SpdTuple>,
    /// Number of fixed-point steps taken.
    pub iterations: usize,
    /// Stationarity residual at the last iterate, when it was computable.
    pub final_residual: Option<f64>,
    pub cap_trace: Vec<f64>,
    pub evidence: Option<InfeasibleEvidence>,
}

/// `M_j = Σ_i σ₊(v_i) Σ_{a: v_i→w_j} V(a) Σ_i V(a)ᵀ`, symmetrized.
pub fn sink_aggregates(datum: &QuiverDatum, sigma: &SpdTuple) -> Result<Vec<Matrix>> {
    check_tuple(datum, sigma)?;
    let mut out: Vec<Matrix> = datum.beta.minus.iter().map(|&b| Matrix::zeros(b, b)).collect();
    for (a, v) in datum.quiver.arrows.iter().zip(&datum.maps) {
        out[a.sink].add_scaled(&v.congruence(&sigma[a.source]), datum.sigma.plus[a.source] as f64);
    }
    Ok(out.iter().map(Matrix::symmetrized).collect())
}

fn check_tuple(datum: &QuiverDatum, sigma: &SpdTuple) -> Result<()> {
    if sigma.len() != datum.sources() {
        return Err(Error::DimensionMismatch(format!(
            "{} sources but tuple has {} entries",
            datum.sources(),
            sigma.len()
        )));
    }
    for (i, (s, &b)) in sigma.iter().zip(&datum.beta.plus).enumerate() {
        if s.dim() != b {
            return Err(Error::DimensionMismatch(format!(
                "tuple entry {} is {}x{}, expected {b}x{b}",
                i + 1,
                s.dim(),
                s.dim()
            )));
        }
    }
    Ok(())
}

fn log_cap_from(datum: &QuiverDatum, sigma: &SpdTuple, aggregates: &[Matrix]) -> Result<f64> {
    let mut acc = -sigma.weighted_log_det(&datum.sigma.plus);
    for (j, (m, &w)) in aggregates.iter().zip(&datum.sigma.minus).enumerate() {
        let ld = log_det(m).map_err(|_| Error::SingularAggregate { sink: j })?;
        acc += w as f64 * ld;
    }
    Ok(acc)
}

/// `log cap(V, σ; Σ)`.
pub fn log_cap_at(datum: &QuiverDatum, sigma: &SpdTuple) -> Result<f64> {
    let aggregates = sink_aggregates(datum, sigma)?;
    log_cap_from(datum, sigma, &aggregates)
}

/// `cap(V, σ; Σ)`, evaluated through log-determinants.
pub fn cap_at(datum: &QuiverDatum, sigma: &SpdTuple) -> Result<f64> {
    log_cap_at(datum, sigma).map(f64::exp)
}

/// `B_i = Σ_j σ₋(w_j) Σ_a V(a)ᵀ M_j⁻¹ V(a)` for every source.
fn source_brackets(datum: &QuiverDatum, aggregates: &[Matrix]) -> Result<Vec<Matrix>> {
    let inverses = aggregates
        .iter()
        .enumerate()
        .map(|(j, m)| spd_inverse(m).map_err(|_| Error::SingularAggregate { sink: j }))
        .collect::<Result<Vec<_>>>()?;
    let mut out: Vec<Matrix> = datum.beta.plus.iter().map(|&b| Matrix::zeros(b, b)).collect();
    for (a, v) in datum.quiver.arrows.iter().zip(&datum.maps) {
        out[a.source].add_scaled(&v.transpose_congruence(&inverses[a.sink]), datum.sigma.minus[a.sink] as f64);
    }
    Ok(out.iter().map(Matrix::symmetrized).collect())
}

fn residual_from(sigma: &SpdTuple, brackets: &[Matrix]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (s, b) in sigma.iter().zip(brackets) {
        let inv = spd_inverse(s)?;
        worst = worst.max(b.sub(&inv).frobenius_norm() / inv.frobenius_norm());
    }
    Ok(worst)
}

/// `max_i ‖B_i − Σ_i⁻¹‖_F / ‖Σ_i⁻¹‖_F`; zero exactly at extremizers.
pub fn residual(datum: &QuiverDatum, sigma: &SpdTuple) -> Result<f64> {
    let aggregates = sink_aggregates(datum, sigma)?;
    let brackets = source_brackets(datum, &aggregates)?;
    residual_from(sigma, &brackets)
}

fn update_from(datum: &QuiverDatum, brackets: &[Matrix]) -> Result<SpdTuple> {
    let next = brackets
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let inv = spd_inverse(b).map_err(|_| Error::SingularUpdate { vertex: i })?;
            SpdMatrix::from_symmetric_part(&inv).map_err(|_| Error::SingularUpdate { vertex: i })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpdTuple(next).det_normalized(datum))
}

/// One step `Σ_i ← B_i(Σ)⁻¹`, followed by det-product normalization.
pub fn fixed_point_step(datum: &QuiverDatum, sigma: &SpdTuple) -> Result<SpdTuple> {
    let aggregates = sink_aggregates(datum, sigma)?;
    let brackets = source_brackets(datum, &aggregates)?;
    update_from(datum, &brackets)
}

/// Log-Euclidean blend `exp((1−α) log next + α log prev)`, renormalized.
fn blend(datum: &QuiverDatum, prev: &SpdTuple, next: &SpdTuple, alpha: f64) -> Result<SpdTuple> {
    let mixed = prev
        .iter()
        .zip(next.iter())
        .map(|(p, n)| {
            let mut l = spd_log(n)?.scaled(1.0 - alpha);
            l.add_scaled(&spd_log(p)?, alpha);
            Ok(SpdMatrix::from_symmetric_part(&sym_exp(&l))?)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpdTuple(mixed).det_normalized(datum))
}

/// `−½ log cap`, with `+ 0.0` so a unit capacity reports `0` rather than `−0`.
fn best_constant(log_cap: f64) -> f64 {
    -0.5 * log_cap + 0.0
}

/// Solve from `Σ⁰ = identities`.
pub fn solve(datum: &QuiverDatum, opts: &SolverOptions) -> Result<CapacityReport> {
    let start = SpdTuple::identities(&datum.beta.plus);
    solve_from(datum, start, opts)
}

/// Fixed-point iteration from a caller-supplied starting tuple.
pub fn solve_from(datum: &QuiverDatum, start: SpdTuple, opts: &SolverOptions) -> Result<CapacityReport> {
    opts.check()?;
    datum.ensure_valid()?;
    if datum.is_zero_representation() {
        return Err(Error::ZeroRepresentation);
    }
    check_tuple(datum, &start)?;

    let mut sigma = start.det_normalized(datum);
    let mut trace = Vec::new();
    let mut last_residual = None;
    let infeasible = |iterations, trace, last_residual, evidence| CapacityReport {
        status: SolveStatus::Infeasible,
        cap: 0.0,
        ajn_constant: f64::INFINITY,
        extremizer: None,
        iterations,
        final_residual: last_residual,
        cap_trace: trace,
        evidence: Some(evidence),
    };

    let mut iter = 0;
    loop {
        let aggregates = sink_aggregates(datum, &sigma)?;
        let log_cap = match log_cap_from(datum, &sigma, &aggregates) {
            Ok(v) => v,
            Err(Error::SingularAggregate { sink }) => {
                trace.push(0.0);
                return Ok(infeasible(iter, trace, last_residual, InfeasibleEvidence::SingularAggregate { sink }));
            }
            Err(e) => return Err(e),
        };
        let cap = log_cap.exp();
        trace.push(cap);
        if cap < opts.cap_floor {
            return Ok(infeasible(iter, trace, last_residual, InfeasibleEvidence::CapBelowFloor { value: cap }));
        }
        let brackets = source_brackets(datum, &aggregates)?;
        let res = residual_from(&sigma, &brackets)?;
        last_residual = Some(res);
        if res <= opts.tol {
            return Ok(CapacityReport {
                status: SolveStatus::Converged,
                cap,
                ajn_constant: best_constant(log_cap),
                extremizer: Some(sigma),
                iterations: iter,
                final_residual: Some(res),
                cap_trace: trace,
                evidence: None,
            });
        }
        if iter >= opts.max_iter {
            return Ok(CapacityReport {
                status: SolveStatus::MaxIterations,
                cap,
                ajn_constant: best_constant(log_cap),
                extremizer: None,
                iterations: iter,
                final_residual: Some(res),
                cap_trace: trace,
                evidence: None,
            });
        }

        let mut next = match update_from(datum, &brackets) {
            Ok(n) => n,
            Err(Error::SingularUpdate { vertex: source }) => {
                return Ok(infeasible(iter, trace, last_residual, InfeasibleEvidence::SingularUpdate { source }));
            }
            Err(e) => return Err(e),
        };
        if opts.damping > 0.0 {
            next = blend(datum, &sigma, &next, opts.damping)?;
        }
        // Safeguard: one damped retry if the objective went up.
        if let Ok(next_log) = log_cap_at(datum, &next) {
            if next_log > log_cap + 1e-12 {
                let damped = blend(datum, &sigma, &next, 0.5)?;
                if log_cap_at(datum, &damped).is_ok_and(|d| d < next_log) {
                    next = damped;
                }
            }
        }
        sigma = next;
        iter += 1;
    }
}

/// Capacity of the quiver datum of an AJN datum; `ajn_constant` is then the
/// best constant `M(A, c, p)`.
pub fn ajn_solve(ajn: &AjnDatum, opts: &SolverOptions) -> Result<CapacityReport> {
    solve(&from_ajn(ajn)?, opts)
}
