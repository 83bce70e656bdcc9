//! Semi-stability inequality, violator search, endomorphism dimension and a
//! multi-start uniqueness probe for Gaussian extremizers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::capacity::{solve_from, SolveStatus, SolverOptions, SpdTuple};
use crate::error::{Error, Result};
use crate::linalg::{null_space, orthonormalize, rank, rank_scaled, sym_eigen, Matrix, RANK_TOL};
use crate::quiver::QuiverDatum;

/// One subspace per source, as orthonormal columns (possibly none).
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceTuple(pub Vec<Matrix>);

impl SubspaceTuple {
    pub fn zeros(beta_plus: &[usize]) -> Self {
        Self(beta_plus.iter().map(|&b| Matrix::zeros(b, 0)).collect())
    }

    pub fn full(beta_plus: &[usize]) -> Self {
        Self(beta_plus.iter().map(|&b| Matrix::identity(b)).collect())
    }

    /// Orthonormalizes the given spanning sets.
    pub fn from_spans(spans: &[Matrix]) -> Self {
        Self(spans.iter().map(|m| orthonormalize(m, RANK_TOL)).collect())
    }

    pub fn dims(&self) -> Vec<usize> {
        self.0.iter().map(|m| m.cols()).collect()
    }
}

/// `lhs = Σ σ₊ dim V′(v_i)`, `rhs = Σ σ₋ dim Σ_a V(a)V′(v_i)`; the tuple
/// violates semi-stability iff `slack > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ViolationReport {
    pub subspaces: SubspaceTuple,
    pub lhs: i64,
    pub rhs: i64,
    pub slack: i64,
}

impl ViolationReport {
    pub fn is_violation(&self) -> bool {
        self.slack > 0
    }
}

pub fn slack_of(datum: &QuiverDatum, s: &SubspaceTuple) -> Result<ViolationReport> {
    if s.0.len() != datum.sources() {
        return Err(Error::DimensionMismatch(format!("{} subspaces for {} sources", s.0.len(), datum.sources())));
    }
    for (i, (basis, &b)) in s.0.iter().zip(&datum.beta.plus).enumerate() {
        if basis.rows() != b || basis.cols() > b {
            return Err(Error::DimensionMismatch(format!(
                "subspace at v{} is {}x{} in a space of dimension {b}",
                i + 1,
                basis.rows(),
                basis.cols()
            )));
        }
    }
    let lhs: i64 = s.0.iter().zip(&datum.sigma.plus).map(|(m, &w)| w as i64 * rank(m, RANK_TOL) as i64).sum();
    let rhs: i64 = (0..datum.sinks())
        .map(|j| {
            let images: Vec<Matrix> = datum
                .quiver
                .arrows_into(j)
                .map(|id| datum.maps[id].matmul(&s.0[datum.quiver.arrows[id].source]))
                .collect();
            let stacked = Matrix::hstack(datum.beta.minus[j], &images);
            // measured against the maps themselves, so images of kernel
            // vectors count as zero even when they are all rounding noise
            let scale = datum.quiver.arrows_into(j).map(|id| datum.maps[id].frobenius_norm()).fold(0.0, f64::max);
            datum.sigma.minus[j] as i64 * rank_scaled(&stacked, RANK_TOL, scale) as i64
        })
        .sum();
    Ok(ViolationReport { subspaces: s.clone(), lhs, rhs, slack: lhs - rhs })
}

/// Largest number of coordinate-subspace tuples enumerated exhaustively.
pub const COORDINATE_ENUMERATION_LIMIT: u64 = 4096;

/// The evaluation budget ran out.
#[derive(Debug)]
struct Exhausted;

type Step = std::result::Result<Option<ViolationReport>, Exhausted>;

struct Search<'a> {
    datum: &'a QuiverDatum,
    remaining: usize,
}

impl Search<'_> {
    /// `Ok(Some)` on a violator, `Err(())` once the budget is spent.
    fn try_tuple(&mut self, s: SubspaceTuple) -> Step {
        if self.remaining == 0 {
            return Err(Exhausted);
        }
        self.remaining -= 1;
        match slack_of(self.datum, &s) {
            Ok(r) if r.is_violation() => Ok(Some(r)),
            _ => Ok(None),
        }
    }
}

/// Searches for a subspace tuple with positive slack, spending at most
/// `budget` slack evaluations. A returned report is an exact certificate;
/// `None` proves nothing.
pub fn find_violator(datum: &QuiverDatum, budget: usize, seed: u64) -> Option<ViolationReport> {
    if datum.validate().iter().any(|f| f.severity == crate::quiver::Severity::Error) {
        return None;
    }
    let mut search = Search { datum, remaining: budget };
    let phases: [&dyn Fn(&mut Search) -> Step; 3] =
        [&coordinate_phase, &preimage_phase, &|s: &mut Search| descent_phase(s, seed)];
    for phase in phases {
        match phase(&mut search) {
            Ok(Some(r)) => return Some(r),
            Ok(None) => {}
            Err(Exhausted) => return None,
        }
    }
    None
}

fn coordinate_phase(search: &mut Search) -> Step {
    let beta = &search.datum.beta.plus;
    let total = beta.iter().try_fold(1u64, |acc, &b| acc.checked_mul(1u64.checked_shl(b as u32)?));
    if total.is_none_or(|t| t > COORDINATE_ENUMERATION_LIMIT) {
        return Ok(None);
    }
    let total = total.unwrap();
    for code in 1..total {
        let mut rest = code;
        let spans: Vec<Matrix> = beta
            .iter()
            .map(|&b| {
                let mask = rest & ((1u64 << b) - 1);
                rest >>= b;
                let cols: Vec<Vec<f64>> = (0..b).filter(|k| mask >> k & 1 == 1).map(|k| unit(b, k)).collect();
                Matrix::from_columns(b, &cols)
            })
            .collect();
        if let Some(r) = search.try_tuple(SubspaceTuple(spans))? {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

fn unit(n: usize, k: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[k] = 1.0;
    v
}

/// Maximal `V′` whose images land in the given sink subspaces:
/// `V′(v_i) = ⋂_a ker(P_{W(w_j)⊥} V(a))`.
fn preimage(datum: &QuiverDatum, w: &[Matrix], tol: f64) -> SubspaceTuple {
    let complements: Vec<Matrix> = w
        .iter()
        .zip(&datum.beta.minus)
        .map(|(basis, &n)| Matrix::identity(n).sub(&basis.matmul(&basis.transpose())))
        .collect();
    let spans = (0..datum.sources())
        .map(|i| {
            let rows: Vec<Matrix> = datum
                .quiver
                .arrows_from(i)
                .map(|id| complements[datum.quiver.arrows[id].sink].matmul(&datum.maps[id]))
                .collect();
            let stacked = Matrix::vstack(datum.beta.plus[i], &rows);
            null_space(&stacked, tol)
        })
        .collect();
    SubspaceTuple(spans)
}

/// Kernels, then preimages of dominant singular subspaces of the stacked
/// sink maps.
fn preimage_phase(search: &mut Search) -> Step {
    let datum = search.datum;
    let zero_w: Vec<Matrix> = datum.beta.minus.iter().map(|&n| Matrix::zeros(n, 0)).collect();
    if let Some(r) = search.try_tuple(preimage(datum, &zero_w, RANK_TOL))? {
        return Ok(Some(r));
    }
    let dominant: Vec<Matrix> = (0..datum.sinks())
        .map(|j| {
            let maps: Vec<Matrix> = datum.quiver.arrows_into(j).map(|id| datum.maps[id].clone()).collect();
            let stacked = Matrix::hstack(datum.beta.minus[j], &maps);
            let svd = crate::linalg::singular_system(&stacked.transpose());
            // right vectors of Sᵀ are left vectors of S, ordered by value
            let mut order: Vec<usize> = (0..svd.values.len()).collect();
            order.sort_by(|&a, &b| svd.values[b].total_cmp(&svd.values[a]));
            let cols: Vec<Vec<f64>> = order.iter().map(|&k| svd.right.column(k)).collect();
            Matrix::from_columns(datum.beta.minus[j], &cols)
        })
        .collect();
    for (j, dom) in dominant.iter().enumerate() {
        for k in 0..datum.beta.minus[j] {
            let w: Vec<Matrix> = (0..datum.sinks())
                .map(|jj| {
                    if jj == j {
                        dom.block(0, 0, datum.beta.minus[j], k)
                    } else {
                        Matrix::identity(datum.beta.minus[jj])
                    }
                })
                .collect();
            if let Some(r) = search.try_tuple(preimage(datum, &w, RANK_TOL))? {
                return Ok(Some(r));
            }
        }
    }
    Ok(None)
}

const DESCENT_STEPS: usize = 200;

fn random_basis(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Matrix {
    let data: Vec<f64> = (0..n * k).map(|_| rng.sample(StandardNormal)).collect();
    orthonormalize(&Matrix::from_row_major(n, k, data).expect("sized buffer"), RANK_TOL)
}

/// Picks a random dimension profile `(k_i)` with a target `(r_j)` that
/// would violate the inequality, then alternates: `W_j` = top-`r_j` left
/// singular vectors of the images, `V′_i` = bottom-`k_i` eigenvectors of
/// `Σ σ₋ V(a)ᵀ P_{W⊥} V(a)`.
fn descent_phase(search: &mut Search, seed: u64) -> Step {
    let datum = search.datum;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let plus = &datum.beta.plus;
    let minus = &datum.beta.minus;
    loop {
        let k: Vec<usize> = plus.iter().map(|&b| rng.random_range(0..=b)).collect();
        let lhs: u64 = k.iter().zip(&datum.sigma.plus).map(|(&x, &w)| x as u64 * w as u64).sum();
        if lhs == 0 {
            search.try_tuple(SubspaceTuple::zeros(plus))?;
            continue;
        }
        let mut r: Vec<usize> = minus.iter().map(|&n| rng.random_range(0..=n)).collect();
        // shrink targets until the profile would be a violation
        while r.iter().zip(&datum.sigma.minus).map(|(&x, &w)| x as u64 * w as u64).sum::<u64>() >= lhs {
            let candidates: Vec<usize> = (0..r.len()).filter(|&j| r[j] > 0).collect();
            let j = candidates[rng.random_range(0..candidates.len())];
            r[j] -= 1;
        }
        let mut v: Vec<Matrix> = plus.iter().zip(&k).map(|(&b, &ki)| random_basis(&mut rng, b, ki)).collect();
        let mut w: Vec<Matrix> = Vec::new();
        let mut previous = f64::INFINITY;
        for _ in 0..DESCENT_STEPS {
            w = (0..datum.sinks())
                .map(|j| {
                    let images: Vec<Matrix> = datum
                        .quiver
                        .arrows_into(j)
                        .map(|id| datum.maps[id].matmul(&v[datum.quiver.arrows[id].source]))
                        .collect();
                    top_left_vectors(&Matrix::hstack(minus[j], &images), r[j])
                })
                .collect();
            let complements: Vec<Matrix> =
                w.iter().zip(minus).map(|(b, &n)| Matrix::identity(n).sub(&b.matmul(&b.transpose()))).collect();
            let mut energy = 0.0;
            let mut scale = 0.0;
            for i in 0..datum.sources() {
                let mut q = Matrix::zeros(plus[i], plus[i]);
                for id in datum.quiver.arrows_from(i) {
                    let j = datum.quiver.arrows[id].sink;
                    let m = &datum.maps[id];
                    q.add_scaled(&m.transpose_congruence(&complements[j]), datum.sigma.minus[j] as f64);
                    scale += m.frobenius_norm().powi(2);
                }
                let eig = sym_eigen(&q.symmetrized());
                let mut order: Vec<usize> = (0..plus[i]).collect();
                order.sort_by(|&a, &b| eig.values[a].total_cmp(&eig.values[b]));
                energy += order.iter().take(k[i]).map(|&o| eig.values[o].max(0.0)).sum::<f64>();
                let cols: Vec<Vec<f64>> = order.iter().take(k[i]).map(|&o| eig.vectors.column(o)).collect();
                v[i] = Matrix::from_columns(plus[i], &cols);
            }
            // stop at an exact fit or once progress stalls
            if energy <= 1e-28 * scale.max(f64::MIN_POSITIVE) || energy > 0.99 * previous {
                break;
            }
            previous = energy;
        }
        if let Some(rep) = search.try_tuple(SubspaceTuple(v))? {
            return Ok(Some(rep));
        }
        if let Some(rep) = search.try_tuple(preimage(datum, &w, 1e-8))? {
            return Ok(Some(rep));
        }
    }
}

fn top_left_vectors(m: &Matrix, r: usize) -> Matrix {
    let n = m.rows();
    if r == 0 {
        return Matrix::zeros(n, 0);
    }
    if m.cols() == 0 || m.is_zero() {
        return Matrix::identity(n).block(0, 0, n, r);
    }
    let gram = m.matmul(&m.transpose()).symmetrized();
    let eig = sym_eigen(&gram);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.values[b].total_cmp(&eig.values[a]));
    let cols: Vec<Vec<f64>> = order.iter().take(r).map(|&o| eig.vectors.column(o)).collect();
    Matrix::from_columns(n, &cols)
}

/// `dim End(V)`: nullity of `φ ↦ (φ(w_j)V(a) − V(a)φ(v_i))_a` over square
/// matrix tuples `φ`.
pub fn endomorphism_dimension(datum: &QuiverDatum) -> usize {
    let plus = &datum.beta.plus;
    let minus = &datum.beta.minus;
    let mut offsets = Vec::new();
    let mut unknowns = 0;
    for &b in plus.iter().chain(minus) {
        offsets.push(unknowns);
        unknowns += b * b;
    }
    let k = plus.len();
    let equations: usize = datum.quiver.arrows.iter().map(|a| minus[a.sink] * plus[a.source]).sum();
    let mut system = Matrix::zeros(equations, unknowns);
    let mut row = 0;
    for (a, v) in datum.quiver.arrows.iter().zip(&datum.maps) {
        let (n, d) = v.shape();
        let (ov, ow) = (offsets[a.source], offsets[k + a.sink]);
        for r in 0..n {
            for s in 0..d {
                for t in 0..n {
                    system[(row, ow + r * n + t)] += v[(t, s)];
                }
                for t in 0..d {
                    system[(row, ov + t * d + s)] -= v[(r, t)];
                }
                row += 1;
            }
        }
    }
    unknowns - rank(&system, RANK_TOL)
}

/// Relative agreement below which two normalized extremizers count as equal.
pub const AGREE_TOL: f64 = 1e-5;
/// Relative difference above which two normalized extremizers count as distinct.
pub const DIFFER_TOL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub first: SpdTuple,
    pub second: SpdTuple,
    pub first_residual: f64,
    pub second_residual: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProbeOutcome {
    Unique { max_deviation: f64 },
    NonUnique(Box<Witness>),
    Inconclusive { max_deviation: f64, failed_runs: usize },
}

impl ProbeOutcome {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProbeOutcome::Unique { .. } => "Unique",
            ProbeOutcome::NonUnique(_) => "NonUnique",
            ProbeOutcome::Inconclusive { .. } => "Inconclusive",
        }
    }
}

/// Largest blockwise `max|Δ| / max(max|A|, max|B|)`.
pub fn tuple_deviation(a: &SpdTuple, b: &SpdTuple) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| {
            let scale = x.max_abs().max(y.max_abs());
            if scale == 0.0 {
                0.0
            } else {
                x.sub(y).max_abs() / scale
            }
        })
        .fold(0.0, f64::max)
}

/// `W Wᵀ + 0.1 I` with a standard Gaussian `W`, one block per source.
pub fn random_start(beta_plus: &[usize], seed: u64) -> SpdTuple {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ms = beta_plus
        .iter()
        .map(|&b| {
            let data: Vec<f64> = (0..b * b).map(|_| rng.sample(StandardNormal)).collect();
            let w = Matrix::from_row_major(b, b, data).expect("sized buffer");
            w.matmul(&w.transpose()).add(&Matrix::identity(b).scaled(0.1)).symmetrized()
        })
        .collect();
    SpdTuple::from_matrices(ms).expect("W Wᵀ + 0.1 I is positive definite")
}

/// Normalized extremizer and final residual of one restart, `None` if it
/// did not converge.
type RunResult = Result<Option<(SpdTuple, f64)>>;

/// Restart `r` starts from `random_start(β₊, seed + r)`.
pub fn uniqueness_probe(
    datum: &QuiverDatum,
    restarts: usize,
    opts: &SolverOptions,
    threads: usize,
) -> Result<ProbeOutcome> {
    let threads = threads.clamp(1, restarts.max(1));
    let run = |r: usize| -> RunResult {
        let start = random_start(&datum.beta.plus, opts.seed.wrapping_add(r as u64));
        let report = solve_from(datum, start, opts)?;
        Ok(match (report.status, report.extremizer, report.final_residual) {
            (SolveStatus::Converged, Some(x), Some(res)) => Some((x.det_normalized(datum), res)),
            _ => None,
        })
    };
    let results: Vec<RunResult> = if threads == 1 {
        (0..restarts).map(run).collect()
    } else {
        let mut slots: Vec<Option<RunResult>> = (0..restarts).map(|_| None).collect();
        let chunk_len = restarts.div_ceil(threads);
        std::thread::scope(|scope| {
            for (c, chunk) in slots.chunks_mut(chunk_len).enumerate() {
                let run = &run;
                scope.spawn(move || {
                    for (offset, slot) in chunk.iter_mut().enumerate() {
                        *slot = Some(run(c * chunk_len + offset));
                    }
                });
            }
        });
        slots.into_iter().map(|r| r.expect("every restart ran")).collect()
    };
    let mut converged = Vec::new();
    let mut failed = 0;
    for r in results {
        match r? {
            Some(x) => converged.push(x),
            None => failed += 1,
        }
    }
    let mut max_deviation: f64 = 0.0;
    for a in 0..converged.len() {
        for b in (a + 1)..converged.len() {
            let dev = tuple_deviation(&converged[a].0, &converged[b].0);
            max_deviation = max_deviation.max(dev);
            if dev > DIFFER_TOL {
                return Ok(ProbeOutcome::NonUnique(Box::new(Witness {
                    first: converged[a].0.clone(),
                    second: converged[b].0.clone(),
                    first_residual: converged[a].1,
                    second_residual: converged[b].1,
                    deviation: dev,
                })));
            }
        }
    }
    if failed == 0 && !converged.is_empty() && max_deviation <= AGREE_TOL {
        Ok(ProbeOutcome::Unique { max_deviation })
    } else {
        Ok(ProbeOutcome::Inconclusive { max_deviation, failed_runs: failed })
    }
}
