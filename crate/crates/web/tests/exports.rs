use quiver_capacity::format::DatumFile;
use quiver_capacity::presets;
use quiver_capacity_web::{check_json, landscape, solve_json};
use serde_json::Value;

fn text(ajn: &quiver_capacity::AjnDatum) -> String {
    serde_json::to_string(&DatumFile::from_ajn(ajn)).unwrap()
}

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn solve_returns_trace() {
    let v = parse(solve_json(&text(&presets::block_triangular(2.0, -1.0)), 1e-10, 1000));
    assert_eq!(v["status"], "Converged");
    assert!((v["cap"].as_f64().unwrap() - 16.0).abs() < 1e-8);
    let trace: Vec<f64> = v["trace"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert!(trace.len() >= 2);
    assert!(trace.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)));
}

#[test]
fn solve_infeasible_has_null_constant() {
    let v = parse(solve_json(&text(&presets::infeasible()), 1e-8, 1000));
    assert_eq!(v["status"], "Infeasible");
    assert!(v["ajn_constant"].is_null());
}

#[test]
fn errors_are_reported_as_json() {
    let v = parse(solve_json("{", 1e-8, 10));
    assert!(v["error"].as_str().unwrap().contains("line"));
    let v = parse(landscape(&text(&presets::epi()), 0, 5, 1.0, 10));
    assert!(v["error"].is_string());
    let v = parse(landscape(&text(&presets::epi()), 0, 1, 1.0, 1));
    assert!(v["error"].is_string());
}

#[test]
fn landscape_minimum_on_the_diagonal() {
    // log cap_at for EPI is 2 log(e^x + e^y) − x − y, minimized on x = y at 2 log 2
    let n = 21;
    let v = parse(landscape(&text(&presets::epi()), 0, 1, 2.0, n));
    let values: Vec<f64> = v["values"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(values.len(), (n * n) as usize);
    let min = v["min"].as_f64().unwrap();
    assert!((min - 2.0 * 2f64.ln()).abs() < 1e-12);
    for k in 0..n as usize {
        assert!((values[k * n as usize + k] - min).abs() < 1e-12);
    }
    let corner = values[n as usize - 1];
    let x: f64 = 2.0;
    assert!((corner - (2.0 * ((x).exp() + (-x).exp()).ln())).abs() < 1e-12);
}

#[test]
fn check_reports_violator_and_end_dimension() {
    let v = parse(check_json(&text(&presets::infeasible()), 10_000, 0));
    assert_eq!(v["violator"]["slack"], 1);
    let v = parse(check_json(&text(&presets::direct_sum()), 10_000, 0));
    assert!(v["violator"].is_null());
    assert_eq!(v["end_dimension"], 4);
    let v = parse(check_json(&text(&presets::orthogonal()), 100, 0));
    assert_eq!(v["geometric"], true);
}
