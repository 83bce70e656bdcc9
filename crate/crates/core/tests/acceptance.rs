//! Acceptance criteria 1-10. Prints one line per criterion and exits
//! non-zero if any of them fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use quiver_capacity::capacity::{sink_aggregates, solve, CapacityReport, SolveStatus, SolverOptions, SpdTuple};
use quiver_capacity::entropy::ajn_gap;
use quiver_capacity::kraus::{apply_t, apply_t_star, build_kraus, source_block_diagonal};
use quiver_capacity::linalg::{orthonormalize, Matrix};
use quiver_capacity::quiver::{from_ajn, AjnDatum, DimensionVector, QuiverDatum};
use quiver_capacity::scaling::{
    act, extremizer_to_group, log_character, verify_character_formula, verify_decomposition, GroupElement,
};
use quiver_capacity::stability::{endomorphism_dimension, find_violator, slack_of, uniqueness_probe, ProbeOutcome};
use quiver_capacity::{kraus, presets};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn opts() -> SolverOptions {
    SolverOptions::default()
}

fn converged(datum: &QuiverDatum, label: &str) -> Result<CapacityReport, String> {
    let r = solve(datum, &opts()).map_err(|e| format!("{label}: {e}"))?;
    ensure(r.status == SolveStatus::Converged, || format!("{label}: status {:?}", r.status))?;
    Ok(r)
}

fn gaussian(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    let data = (0..rows * cols).map(|_| rng.sample(StandardNormal)).collect();
    Matrix::from_row_major(rows, cols, data).unwrap()
}

fn random_orthogonal(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    loop {
        let q = orthonormalize(&gaussian(rng, n, n), 1e-10);
        if q.cols() == n {
            return q;
        }
    }
}

fn random_spd(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let w = gaussian(rng, n, n);
    w.matmul(&w.transpose()).add(&Matrix::identity(n).scaled(0.1)).symmetrized()
}

/// Well-conditioned invertible matrix `Q₁ diag(e^u) Q₂` with `|u| ≤ 1`.
fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let q1 = random_orthogonal(rng, n);
    let q2 = random_orthogonal(rng, n);
    let d: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0f64..1.0).exp()).collect();
    q1.matmul(&Matrix::from_diag(&d)).matmul(&q2)
}

/// Sources take column blocks of an orthogonal `D×D` matrix: `Σ A_iA_iᵀ = I`
/// and `A_iᵀA_i = I`.
fn orthogonal_columns(rng: &mut ChaCha8Rng, d: &[usize]) -> AjnDatum {
    let total: usize = d.iter().sum();
    let q = random_orthogonal(rng, total);
    let mut offset = 0;
    let a = d
        .iter()
        .map(|&di| {
            let block = q.block(0, offset, total, di);
            offset += di;
            vec![block]
        })
        .collect();
    AjnDatum { d: d.to_vec(), n: vec![total], c: vec![1; d.len()], p: vec![1], a }
}

/// One source split over sinks by row blocks of an orthogonal matrix.
fn orthogonal_rows(rng: &mut ChaCha8Rng, n: &[usize]) -> AjnDatum {
    let total: usize = n.iter().sum();
    let q = random_orthogonal(rng, total);
    let mut offset = 0;
    let row = n
        .iter()
        .map(|&nj| {
            let block = q.block(offset, 0, nj, total);
            offset += nj;
            block
        })
        .collect();
    AjnDatum { d: vec![total], n: n.to_vec(), c: vec![1], p: vec![1; n.len()], a: vec![row] }
}

fn half_epi() -> AjnDatum {
    let mut epi = presets::epi();
    for row in &mut epi.a {
        row[0] = Matrix::scalar(0.5f64.sqrt());
    }
    epi
}

fn geometric_data() -> Vec<(String, AjnDatum)> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    vec![
        ("orthogonal example".into(), presets::orthogonal()),
        ("orthogonal columns d=(1,2)".into(), orthogonal_columns(&mut rng, &[1, 2])),
        ("orthogonal columns d=(2,1,1)".into(), orthogonal_columns(&mut rng, &[2, 1, 1])),
        ("orthogonal rows n=(1,3)".into(), orthogonal_rows(&mut rng, &[1, 3])),
        ("EPI with maps 1/sqrt2".into(), half_epi()),
    ]
}

/// All-scalar data with positive maps and balanced exponents in 1..=3.
fn scalar_data(count: usize) -> Vec<AjnDatum> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut out = Vec::new();
    while out.len() < count {
        let k = rng.random_range(1..=3);
        let m = rng.random_range(1..=3);
        let c: Vec<u32> = (0..k).map(|_| rng.random_range(1..=3)).collect();
        let p: Vec<u32> = (0..m).map(|_| rng.random_range(1..=3)).collect();
        if c.iter().sum::<u32>() != p.iter().sum::<u32>() || k + m < 3 {
            continue;
        }
        let a = (0..k).map(|_| (0..m).map(|_| Matrix::scalar(rng.random_range(0.2..2.0))).collect()).collect();
        out.push(AjnDatum { d: vec![1; k], n: vec![1; m], c, p, a });
    }
    out
}

/// `log cap_at` of a scalar AJN datum in log-variables `x_i = log s_i`.
fn scalar_objective(ajn: &AjnDatum, x: &[f64]) -> f64 {
    let sinks: f64 = (0..ajn.n.len())
        .map(|j| {
            let agg: f64 = (0..ajn.d.len()).map(|i| ajn.a[i][j][(0, 0)].powi(2) * x[i].exp()).sum();
            ajn.p[j] as f64 * agg.ln()
        })
        .sum();
    let sources: f64 = ajn.c.iter().zip(x).map(|(&c, &xi)| c as f64 * xi).sum();
    sinks - sources
}

/// Grid search with `x₁ = 0` (the objective is shift invariant), then cyclic
/// golden-section refinement. The objective is convex in `x`.
fn scalar_oracle(ajn: &AjnDatum) -> f64 {
    let k = ajn.d.len();
    let free = k - 1;
    let mut best = vec![0.0; k];
    if free > 0 {
        let steps: usize = 121;
        let grid = |s: usize| -12.0 + 24.0 * s as f64 / (steps - 1) as f64;
        let mut best_val = f64::INFINITY;
        let total = steps.pow(free as u32);
        for code in 0..total {
            let mut x = vec![0.0; k];
            let mut rest = code;
            for xi in x.iter_mut().skip(1) {
                *xi = grid(rest % steps);
                rest /= steps;
            }
            let v = scalar_objective(ajn, &x);
            if v < best_val {
                best_val = v;
                best = x;
            }
        }
        let ratio = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..200 {
            for i in 1..k {
                let (mut lo, mut hi) = (best[i] - 0.5, best[i] + 0.5);
                let f = |t: f64, base: &Vec<f64>| {
                    let mut y = base.clone();
                    y[i] = t;
                    scalar_objective(ajn, &y)
                };
                for _ in 0..80 {
                    let a = hi - ratio * (hi - lo);
                    let b = lo + ratio * (hi - lo);
                    if f(a, &best) < f(b, &best) {
                        hi = b;
                    } else {
                        lo = a;
                    }
                }
                best[i] = 0.5 * (lo + hi);
            }
        }
    }
    scalar_objective(ajn, &best).exp()
}

fn criterion_1() -> Outcome {
    let mut worst: f64 = 0.0;
    for (label, ajn) in geometric_data() {
        let d = from_ajn(&ajn).map_err(|e| format!("{label}: {e}"))?;
        ensure(kraus::ds_residual(&d).max() < 1e-12, || format!("{label}: construction is not geometric"))?;
        let r = converged(&d, &label)?;
        ensure((r.cap - 1.0).abs() <= 1e-6, || format!("{label}: cap {}", r.cap))?;
        ensure(r.ajn_constant.abs() <= 1e-6, || format!("{label}: constant {}", r.ajn_constant))?;
        worst = worst.max((r.cap - 1.0).abs());
    }
    Ok(format!("5 geometric data, max |cap - 1| = {worst:.1e}"))
}

fn criterion_2() -> Outcome {
    let mut worst: f64 = 0.0;
    for (n, ajn) in scalar_data(20).iter().enumerate() {
        let r = converged(&from_ajn(ajn).unwrap(), &format!("scalar datum {n}"))?;
        let oracle = scalar_oracle(ajn);
        let rel = (r.cap - oracle).abs() / oracle;
        ensure(rel <= 1e-4, || format!("scalar datum {n}: solver {} vs oracle {oracle}", r.cap))?;
        worst = worst.max(rel);
    }
    let epi = converged(&from_ajn(&presets::epi()).unwrap(), "EPI")?;
    ensure((epi.cap - 4.0).abs() <= 1e-6, || format!("EPI cap {}", epi.cap))?;
    ensure((epi.ajn_constant + 2f64.ln()).abs() <= 1e-6, || format!("EPI constant {}", epi.ajn_constant))?;
    Ok(format!("20 scalar data, max relative deviation from oracle {worst:.1e}; EPI cap {:.9}", epi.cap))
}

fn criterion_3() -> Outcome {
    let d = from_ajn(&presets::infeasible()).unwrap();
    let r = solve(&d, &opts()).map_err(|e| e.to_string())?;
    ensure(r.status == SolveStatus::Infeasible, || format!("infeasible example reported {:?}", r.status))?;
    let v = find_violator(&d, 10_000, 0).ok_or("no violator for the infeasible example")?;
    let recomputed = slack_of(&d, &v.subspaces).map_err(|e| e.to_string())?;
    ensure(v.slack == 1 && recomputed == v, || {
        format!("violator slack {} (recomputed {})", v.slack, recomputed.slack)
    })?;
    let mut data: Vec<(String, AjnDatum)> = geometric_data();
    data.extend(scalar_data(20).into_iter().enumerate().map(|(n, a)| (format!("scalar datum {n}"), a)));
    data.push(("EPI".into(), presets::epi()));
    for (label, ajn) in &data {
        let q = from_ajn(ajn).unwrap();
        converged(&q, label)?;
        if let Some(v) = find_violator(&q, 10_000, 0) {
            return Err(format!("{label}: converged but violator with slack {} found", v.slack));
        }
    }
    Ok(format!("infeasible example certified by slack-1 tuple; {} converged data have no violator", data.len()))
}

fn character_data() -> Vec<(String, QuiverDatum)> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut scalar = scalar_data(21);
    vec![
        ("EPI".into(), from_ajn(&presets::epi()).unwrap()),
        ("block triangular".into(), from_ajn(&presets::block_triangular(0.8, -1.7)).unwrap()),
        ("orthogonal columns".into(), from_ajn(&orthogonal_columns(&mut rng, &[2, 1])).unwrap()),
        ("scalar".into(), from_ajn(&scalar.pop().unwrap()).unwrap()),
        ("orthogonal example".into(), from_ajn(&presets::orthogonal()).unwrap()),
    ]
}

fn random_group_element(rng: &mut ChaCha8Rng, beta: &DimensionVector) -> GroupElement {
    GroupElement {
        gv: beta.plus.iter().map(|&b| random_invertible(rng, b)).collect(),
        gw: beta.minus.iter().map(|&b| random_invertible(rng, b)).collect(),
    }
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let mut worst: f64 = 0.0;
    for (label, d) in character_data() {
        for _ in 0..4 {
            let g = random_group_element(&mut rng, &d.beta);
            let c = verify_character_formula(&d, &g, &opts()).map_err(|e| format!("{label}: {e}"))?;
            ensure(c.relative_error <= 1e-5, || format!("{label}: relative error {:.2e}", c.relative_error))?;
            worst = worst.max(c.relative_error);
        }
    }
    Ok(format!("20 group elements on 5 data, max relative error {worst:.1e}"))
}

/// Every feasible datum solved anywhere in this suite.
fn all_feasible() -> Vec<(String, QuiverDatum)> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut out: Vec<(String, QuiverDatum)> =
        geometric_data().into_iter().map(|(l, a)| (l, from_ajn(&a).unwrap())).collect();
    out.extend(scalar_data(20).iter().enumerate().map(|(n, a)| (format!("scalar datum {n}"), from_ajn(a).unwrap())));
    out.push(("EPI".into(), from_ajn(&presets::epi()).unwrap()));
    out.extend(character_data());
    for n in 0..5 {
        let (x1, x2) = (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        out.push((format!("block triangular {n}"), from_ajn(&presets::block_triangular(x1, x2)).unwrap()));
    }
    out.extend(gap_data().into_iter().map(|(l, a)| (l, from_ajn(&a).unwrap())));
    out
}

fn criterion_5() -> Outcome {
    let data = all_feasible();
    let mut worst: f64 = 0.0;
    for (label, d) in &data {
        let r = converged(d, label)?;
        let g =
            extremizer_to_group(d, r.extremizer.as_ref().unwrap(), opts().tol).map_err(|e| format!("{label}: {e}"))?;
        let (_, log_chi) = log_character(&g, &d.sigma).map_err(|e| format!("{label}: {e}"))?;
        let err = (r.ajn_constant + log_chi).abs();
        ensure(err <= 1e-5, || format!("{label}: |M + log|chi|| = {err:.2e}"))?;
        worst = worst.max(err);
    }
    Ok(format!("{} converged solves, max |M + log|chi|| = {worst:.1e}", data.len()))
}

fn criterion_6() -> Outcome {
    let data = all_feasible();
    let tol = opts().tol;
    let mut worst: f64 = 0.0;
    for (label, d) in &data {
        let r = converged(d, label)?;
        let g = extremizer_to_group(d, r.extremizer.as_ref().unwrap(), tol).map_err(|e| format!("{label}: {e}"))?;
        let scaled = act(&g, d).map_err(|e| format!("{label}: {e}"))?;
        let res = kraus::ds_residual(&scaled).max();
        ensure(res <= 10.0 * tol, || format!("{label}: ds residual {res:.2e}"))?;
        worst = worst.max(res);
    }
    Ok(format!("{} scaled data, max ds residual {worst:.1e} (bound {:.0e})", data.len(), 10.0 * tol))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let split = DimensionVector { plus: vec![1, 1], minus: vec![1] };
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let (x1, x2) = (rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
        let d = from_ajn(&presets::block_triangular(x1, x2)).unwrap();
        let r = converged(&d, "block triangular")?;
        let m_err = (r.ajn_constant + 2.0 * 2f64.ln()).abs();
        ensure(m_err <= 1e-5, || format!("X=({x1:.3},{x2:.3}): M = {}", r.ajn_constant))?;
        let dec = verify_decomposition(&d, &split, &opts()).map_err(|e| e.to_string())?;
        ensure(dec.relative_error <= 1e-5, || {
            format!("X=({x1:.3},{x2:.3}): relative error {:.2e}", dec.relative_error)
        })?;
        worst = worst.max(dec.relative_error).max(m_err);
    }
    Ok(format!("5 off-diagonal choices, max error {worst:.1e}"))
}

fn gap_data() -> Vec<(String, AjnDatum)> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut scalar = scalar_data(22);
    vec![
        ("EPI".into(), presets::epi()),
        ("orthogonal example".into(), presets::orthogonal()),
        ("block triangular".into(), presets::block_triangular(1.2, 0.4)),
        ("orthogonal rows".into(), orthogonal_rows(&mut rng, &[2, 1])),
        ("scalar".into(), scalar.pop().unwrap()),
    ]
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    let mut identity_worst: f64 = 0.0;
    let mut excess_worst = f64::NEG_INFINITY;
    for (label, ajn) in gap_data() {
        let d = from_ajn(&ajn).unwrap();
        let r = converged(&d, &label)?;
        let m = r.ajn_constant;
        let at_extremizer = ajn_gap(&ajn, r.extremizer.as_ref().unwrap()).map_err(|e| e.to_string())?;
        ensure((at_extremizer - m).abs() <= 1e-6, || format!("{label}: gap at extremizer {at_extremizer} vs M {m}"))?;
        for _ in 0..2000 {
            let z = SpdTuple::from_matrices(ajn.d.iter().map(|&di| random_spd(&mut rng, di)).collect()).unwrap();
            let gap = ajn_gap(&ajn, &z).map_err(|e| e.to_string())?;
            let log_cap = quiver_capacity::log_cap_at(&d, &z).map_err(|e| e.to_string())?;
            let id = (gap + 0.5 * log_cap).abs();
            ensure(id <= 1e-10, || format!("{label}: |gap + log(cap_at)/2| = {id:.2e}"))?;
            ensure(gap <= m + 1e-9, || format!("{label}: gap {gap} exceeds M {m}"))?;
            identity_worst = identity_worst.max(id);
            excess_worst = excess_worst.max(gap - m);
        }
    }
    Ok(format!("10000 tuples, max identity error {identity_worst:.1e}, max gap - M {excess_worst:.1e}"))
}

fn criterion_9() -> Outcome {
    let epi = from_ajn(&presets::epi()).unwrap();
    let end = endomorphism_dimension(&epi);
    ensure(end == 1, || format!("EPI End dimension {end}"))?;
    let unique = match uniqueness_probe(&epi, 20, &opts(), 4).map_err(|e| e.to_string())? {
        ProbeOutcome::Unique { max_deviation } if max_deviation <= 1e-5 => max_deviation,
        other => return Err(format!("EPI probe: {other:?}")),
    };
    let sum = from_ajn(&presets::direct_sum()).unwrap();
    let witness = match uniqueness_probe(&sum, 20, &opts(), 4).map_err(|e| e.to_string())? {
        ProbeOutcome::NonUnique(w) => w,
        other => return Err(format!("direct-sum probe: {}", other.as_str())),
    };
    let r1 = quiver_capacity::residual(&sum, &witness.first).map_err(|e| e.to_string())?;
    let r2 = quiver_capacity::residual(&sum, &witness.second).map_err(|e| e.to_string())?;
    ensure(r1 <= 1e-8 && r2 <= 1e-8, || format!("witness residuals {r1:.2e}, {r2:.2e}"))?;
    Ok(format!(
        "EPI Unique (deviation {unique:.1e}, End dim 1); direct sum NonUnique (deviation {:.2}, residuals {r1:.1e}, {r2:.1e})",
        witness.deviation
    ))
}

/// Dense Kraus matrices assembled from the datum: for every arrow, sink copy
/// and source copy, `V(a)` placed at the corresponding block.
fn dense_kraus(d: &QuiverDatum) -> Vec<Matrix> {
    let offsets = |weights: &[u32], dims: &[usize]| -> Vec<Vec<usize>> {
        let mut row = 0;
        weights
            .iter()
            .zip(dims)
            .map(|(&w, &b)| {
                (0..w)
                    .map(|_| {
                        row += b;
                        row - b
                    })
                    .collect()
            })
            .collect()
    };
    let src = offsets(&d.sigma.plus, &d.beta.plus);
    let snk = offsets(&d.sigma.minus, &d.beta.minus);
    let n = d.source_total() as usize;
    let mut ops = Vec::new();
    for (a, v) in d.quiver.arrows.iter().zip(&d.maps) {
        for &qo in &snk[a.sink] {
            for &ro in &src[a.source] {
                let mut k = Matrix::zeros(n, n);
                k.set_block(qo, ro, v);
                ops.push(k);
            }
        }
    }
    ops
}

/// Determinant by Gaussian elimination with partial pivoting.
fn det(m: &Matrix) -> f64 {
    let n = m.rows();
    let mut a = m.to_rows();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs())).unwrap();
        if a[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        let pivot_row = a[col].clone();
        for row in a.iter_mut().skip(col + 1) {
            let f = row[col] / pivot_row[col];
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                *x -= f * p;
            }
        }
    }
    det
}

fn kraus_data() -> Vec<QuiverDatum> {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut out = vec![
        from_ajn(&presets::epi()).unwrap(),
        from_ajn(&presets::block_triangular(0.3, 1.1)).unwrap(),
        from_ajn(&orthogonal_columns(&mut rng, &[2, 1])).unwrap(),
    ];
    // d=(2,1), n=(1,2), c=(2,1), p=(1,2): N = 5 with repeated blocks on both sides
    let ajn = AjnDatum {
        d: vec![2, 1],
        n: vec![1, 2],
        c: vec![2, 1],
        p: vec![1, 2],
        a: vec![
            vec![gaussian(&mut rng, 1, 2), gaussian(&mut rng, 2, 2)],
            vec![gaussian(&mut rng, 1, 1), gaussian(&mut rng, 2, 1)],
        ],
    };
    out.push(from_ajn(&ajn).unwrap());
    // N = 8: d=(2,2), n=(4), c=(2,2), p=(2)
    let ajn = AjnDatum {
        d: vec![2, 2],
        n: vec![4],
        c: vec![2, 2],
        p: vec![2],
        a: vec![vec![gaussian(&mut rng, 4, 2)], vec![gaussian(&mut rng, 4, 2)]],
    };
    out.push(from_ajn(&ajn).unwrap());
    out
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let data = kraus_data();
    let mut apply_worst: f64 = 0.0;
    let mut det_worst: f64 = 0.0;
    let mut inputs = 0;
    for d in &data {
        let ks = build_kraus(d).map_err(|e| e.to_string())?;
        let n = ks.layout.n;
        ensure(n <= 8, || format!("N = {n} exceeds 8"))?;
        let dense = dense_kraus(d);
        for _ in 0..10 {
            let x = gaussian(&mut rng, n, n).symmetrized();
            let t_dense = dense.iter().fold(Matrix::zeros(n, n), |acc, k| acc.add(&k.transpose().matmul(&x).matmul(k)));
            let ts_dense =
                dense.iter().fold(Matrix::zeros(n, n), |acc, k| acc.add(&k.matmul(&x).matmul(&k.transpose())));
            let e1 = apply_t(&ks, &x).unwrap().sub(&t_dense).max_abs();
            let e2 = apply_t_star(&ks, &x).unwrap().sub(&ts_dense).max_abs();
            ensure(e1 <= 1e-12 && e2 <= 1e-12, || format!("sparse vs dense: {e1:.2e}, {e2:.2e}"))?;
            apply_worst = apply_worst.max(e1).max(e2);
            inputs += 1;

            let tuple: Vec<Matrix> = d.beta.plus.iter().map(|&b| random_spd(&mut rng, b)).collect();
            let x = source_block_diagonal(&ks.layout, &tuple);
            let lhs = det(&apply_t_star(&ks, &x).unwrap());
            let aggregates = sink_aggregates(d, &SpdTuple::from_matrices(tuple).unwrap()).map_err(|e| e.to_string())?;
            let rhs: f64 = aggregates.iter().zip(&d.sigma.minus).map(|(m, &w)| det(m).powi(w as i32)).product();
            let rel = (lhs - rhs).abs() / rhs.abs();
            ensure(rel <= 1e-9, || format!("det T*(X) = {lhs} vs product {rhs}"))?;
            det_worst = det_worst.max(rel);
        }
    }
    Ok(format!("{inputs} inputs, max apply error {apply_worst:.1e}, max det relative error {det_worst:.1e}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("geometric capacity", criterion_1),
        ("scalar oracle equivalence", criterion_2),
        ("feasibility dichotomy", criterion_3),
        ("character covariance", criterion_4),
        ("character formula at the limit", criterion_5),
        ("Kempf-Ness scaling", criterion_6),
        ("decomposition", criterion_7),
        ("gap identity", criterion_8),
        ("uniqueness", criterion_9),
        ("Kraus consistency", criterion_10),
    ];
    let mut failures = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {:>2} {name}: {detail} ({secs:.2}s)", n + 1),
            Err(detail) => {
                failures += 1;
                println!("[FAIL] {:>2} {name}: {detail} ({secs:.2}s)", n + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
