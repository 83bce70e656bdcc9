//! WebAssembly bindings for the browser demo in `www/`. Every export takes
//! and returns JSON text, so the same functions are exercised by native tests.

use quiver_capacity::capacity::{log_cap_at, solve, SolverOptions, SpdTuple};
use quiver_capacity::format::{parse_datum, tuple_to_rows};
use quiver_capacity::linalg::Matrix;
use quiver_capacity::quiver::QuiverDatum;
use quiver_capacity::scaling::is_geometric;
use quiver_capacity::stability::{endomorphism_dimension, find_violator};
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

const MAX_GRID: usize = 200;

fn load(text: &str) -> Result<QuiverDatum, String> {
    let datum = parse_datum(text)?.to_quiver().map_err(|e| e.to_string())?;
    datum.ensure_valid().map_err(|e| e.to_string())?;
    Ok(datum)
}

fn respond(result: Result<Value, String>) -> String {
    match result {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

/// Runs the solver and returns status, capacity, best constant, the
/// capacity trace and the extremizer.
#[wasm_bindgen]
pub fn solve_json(datum: &str, tol: f64, max_iter: u32) -> String {
    respond((|| {
        let d = load(datum)?;
        let opts = SolverOptions { tol, max_iter: max_iter as usize, ..Default::default() };
        let r = solve(&d, &opts).map_err(|e| e.to_string())?;
        Ok(json!({
            "status": r.status.as_str(),
            "cap": r.cap,
            "ajn_constant": finite_or_null(r.ajn_constant),
            "iterations": r.iterations,
            "residual": r.final_residual,
            "trace": r.cap_trace,
            "extremizer": r.extremizer.as_ref().map(tuple_to_rows),
        }))
    })())
}

/// `log cap(V, σ; Σ)` on a `grid × grid` lattice where source `axis_x` has
/// `Σ = e^x I`, source `axis_y` has `Σ = e^y I`, all other sources `I`, and
/// `x, y ∈ [−span, span]`. Values are row-major with `y` increasing by row;
/// singular points are `null`.
#[wasm_bindgen]
pub fn landscape(datum: &str, axis_x: u32, axis_y: u32, span: f64, grid: u32) -> String {
    respond((|| {
        let d = load(datum)?;
        let (ax, ay, n) = (axis_x as usize, axis_y as usize, grid as usize);
        if ax >= d.sources() || ay >= d.sources() {
            return Err(format!("axes must be below the number of sources ({})", d.sources()));
        }
        if !(2..=MAX_GRID).contains(&n) || !(span.is_finite() && span > 0.0) {
            return Err(format!("need 2 <= grid <= {MAX_GRID} and a positive span"));
        }
        let coord = |k: usize| -span + 2.0 * span * k as f64 / (n - 1) as f64;
        let mut values = Vec::with_capacity(n * n);
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for row in 0..n {
            for col in 0..n {
                let mut scales = vec![0.0; d.sources()];
                scales[ax] += coord(col);
                scales[ay] += coord(row);
                let tuple = SpdTuple::from_matrices(
                    d.beta.plus.iter().zip(&scales).map(|(&b, &s)| Matrix::identity(b).scaled(s.exp())).collect(),
                )
                .map_err(|e| e.to_string())?;
                match log_cap_at(&d, &tuple) {
                    Ok(v) if v.is_finite() => {
                        lo = lo.min(v);
                        hi = hi.max(v);
                        values.push(json!(v));
                    }
                    _ => values.push(Value::Null),
                }
            }
        }
        Ok(json!({ "grid": n, "span": span, "min": finite_or_null(lo), "max": finite_or_null(hi), "values": values }))
    })())
}

/// Violator search, endomorphism dimension and the geometric test.
#[wasm_bindgen]
pub fn check_json(datum: &str, budget: u32, seed: u32) -> String {
    respond((|| {
        let d = load(datum)?;
        let violator = find_violator(&d, budget as usize, seed as u64).map(|v| {
            json!({
                "lhs": v.lhs,
                "rhs": v.rhs,
                "slack": v.slack,
                "subspaces": v.subspaces.0.iter().map(|m| m.to_rows()).collect::<Vec<_>>(),
            })
        });
        let geometric = is_geometric(&d, 1e-10);
        Ok(json!({
            "violator": violator,
            "end_dimension": endomorphism_dimension(&d),
            "geometric": geometric.geometric,
            "ds_residual": geometric.residuals.max(),
        }))
    })())
}
