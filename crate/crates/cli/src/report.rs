use std::fmt::Write;

use quiver_capacity::capacity::{CapacityReport, InfeasibleEvidence, SolveStatus};
use quiver_capacity::format::{matrix_to_rows, tuple_to_rows, GroupElementFile, ReportFile, ViolatorFile, WitnessFile};
use quiver_capacity::scaling::GroupElement;
use quiver_capacity::stability::{ViolationReport, Witness};

pub fn base_report(r: &CapacityReport) -> ReportFile {
    let evidence = r.evidence.as_ref().map(|e| match e {
        InfeasibleEvidence::CapBelowFloor { value } => format!("capacity estimate {value:e} fell below the floor"),
        InfeasibleEvidence::SingularAggregate { sink } => format!("sink aggregate at w{} became singular", sink + 1),
        InfeasibleEvidence::SingularUpdate { source } => {
            format!("update at v{} is singular: the maps out of it share a kernel", source + 1)
        }
    });
    ReportFile {
        status: r.status.as_str().into(),
        cap: Some(r.cap),
        ajn_constant: Some(r.ajn_constant),
        iterations: Some(r.iterations),
        residual: r.final_residual,
        extremizer: r.extremizer.as_ref().map(tuple_to_rows),
        evidence,
        ..Default::default()
    }
}

pub fn violator_file(v: &ViolationReport) -> ViolatorFile {
    ViolatorFile {
        subspaces: v.subspaces.0.iter().map(matrix_to_rows).collect(),
        lhs: v.lhs,
        rhs: v.rhs,
        slack: v.slack,
    }
}

pub fn group_file(g: &GroupElement) -> GroupElementFile {
    GroupElementFile { gv: g.gv.iter().map(matrix_to_rows).collect(), gw: g.gw.iter().map(matrix_to_rows).collect() }
}

pub fn witness_file(w: &Witness) -> WitnessFile {
    WitnessFile {
        first: tuple_to_rows(&w.first),
        second: tuple_to_rows(&w.second),
        first_residual: w.first_residual,
        second_residual: w.second_residual,
        deviation: w.deviation,
    }
}

fn matrices(out: &mut String, label: &str, ms: &[Vec<Vec<f64>>]) {
    for (n, m) in ms.iter().enumerate() {
        let _ = writeln!(out, "{label}[{}]:", n + 1);
        for row in m {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:>12.6}")).collect();
            let _ = writeln!(out, "  {}", cells.join(" "));
        }
    }
}

/// Plain-text rendering of the fields that are present.
pub fn render_text(r: &ReportFile) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "status: {}", r.status);
    if let Some(x) = r.cap {
        let _ = writeln!(out, "capacity: {x:.12}");
    }
    if let Some(x) = r.ajn_constant {
        if x.is_finite() {
            let _ = writeln!(out, "best constant M: {x:.12}");
        } else {
            let _ = writeln!(out, "best constant M: inf");
        }
    }
    if let Some(n) = r.iterations {
        let _ = writeln!(out, "iterations: {n}");
    }
    if let Some(x) = r.residual {
        let _ = writeln!(out, "residual: {x:.3e}");
    }
    if let Some(e) = &r.evidence {
        let _ = writeln!(out, "evidence: {e}");
    }
    if let Some(f) = r.feasible {
        let _ = writeln!(out, "feasible: {f}");
    }
    if let Some(g) = r.geometric {
        let _ = writeln!(out, "geometric: {g}");
    }
    if let Some(v) = &r.violator {
        let _ = writeln!(out, "violator: lhs {} > rhs {} (slack {})", v.lhs, v.rhs, v.slack);
        matrices(&mut out, "  V'", &v.subspaces);
    }
    if let Some(x) = &r.extremizer {
        matrices(&mut out, "Sigma", x);
    }
    if let Some(g) = &r.group_element {
        matrices(&mut out, "g(v)", &g.gv);
        matrices(&mut out, "g(w)", &g.gw);
    }
    if let Some(c) = r.character {
        let _ = writeln!(out, "character: {c:.12}");
    }
    if let Some(d) = &r.ds_residuals {
        let worst = d.source.iter().chain(&d.sink).copied().fold(0.0, f64::max);
        let _ = writeln!(out, "scaled datum ds residual: {worst:.3e}");
    }
    if let Some(x) = r.gap {
        let _ = writeln!(out, "gap: {x:.12}");
    }
    if let Some(x) = r.cap_at {
        let _ = writeln!(out, "cap at sigma: {x:.12}");
    }
    if let Some(x) = r.identity_residual {
        let _ = writeln!(out, "|gap + log(cap)/2|: {x:.3e}");
    }
    if let Some(u) = &r.uniqueness {
        let _ = writeln!(out, "uniqueness: {u}");
    }
    if let Some(w) = &r.witness {
        let _ = writeln!(out, "witness deviation: {:.6}", w.deviation);
    }
    if let Some(e) = r.end_dimension {
        let _ = writeln!(out, "End dimension: {e}");
    }
    if r.status == SolveStatus::MaxIterations.as_str() {
        let _ = writeln!(out, "note: capacity is an upper estimate");
    }
    out.trim_end().to_string()
}
