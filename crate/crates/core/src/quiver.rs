//! Bipartite quivers, weights, representations and AJN data.
//!
//! Indices are 0-based in code. Sources are `v_0..v_{k-1}`, sinks
//! `w_0..w_{m-1}`; every arrow points from a source to a sink.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{rank, Matrix, RANK_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arrow {
    pub source: usize,
    pub sink: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteQuiver {
    pub sources: usize,
    pub sinks: usize,
    /// Arrow ids are positions in this list. Parallel arrows are allowed.
    pub arrows: Vec<Arrow>,
}

impl BipartiteQuiver {
    /// Complete bipartite quiver with one arrow per pair, ordered `(i, j)`
    /// lexicographically.
    pub fn complete(sources: usize, sinks: usize) -> Self {
        let arrows = (0..sources).flat_map(|i| (0..sinks).map(move |j| Arrow { source: i, sink: j })).collect();
        Self { sources, sinks, arrows }
    }

    pub fn arrows_between(&self, source: usize, sink: usize) -> impl Iterator<Item = usize> + '_ {
        self.arrows.iter().enumerate().filter(move |(_, a)| a.source == source && a.sink == sink).map(|(id, _)| id)
    }

    pub fn arrows_from(&self, source: usize) -> impl Iterator<Item = usize> + '_ {
        self.arrows.iter().enumerate().filter(move |(_, a)| a.source == source).map(|(id, _)| id)
    }

    pub fn arrows_into(&self, sink: usize) -> impl Iterator<Item = usize> + '_ {
        self.arrows.iter().enumerate().filter(move |(_, a)| a.sink == sink).map(|(id, _)| id)
    }

    /// Connectivity of the underlying undirected graph.
    pub fn is_connected(&self) -> bool {
        let n = self.sources + self.sinks;
        if n == 0 {
            return false;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for a in &self.arrows {
            if a.source >= self.sources || a.sink >= self.sinks {
                continue;
            }
            let (x, y) = (find(&mut parent, a.source), find(&mut parent, self.sources + a.sink));
            parent[x] = y;
        }
        let root = find(&mut parent, 0);
        (0..n).all(|v| find(&mut parent, v) == root)
    }
}

/// Stability weight: `σ(v_i) = plus[i] > 0`, `σ(w_j) = -minus[j] < 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Weight {
    pub plus: Vec<u32>,
    pub minus: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionVector {
    pub plus: Vec<usize>,
    pub minus: Vec<usize>,
}

/// Quiver datum `(V, σ)` with `V ∈ rep(Q, β)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuiverDatum {
    pub quiver: BipartiteQuiver,
    pub beta: DimensionVector,
    pub sigma: Weight,
    /// `maps[a]` has shape `β(w_j) × β(v_i)` for arrow `a: v_i → w_j`.
    pub maps: Vec<Matrix>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FindingKind {
    CountMismatch(String),
    ArrowOutOfRange { arrow: usize },
    ShapeMismatch { arrow: usize, expected: (usize, usize), found: (usize, usize) },
    NonFinite { arrow: usize },
    ZeroDimension(String),
    NonPositiveWeight(String),
    Imbalance { sources: u64, sinks: u64 },
    Disconnected,
    ZeroRepresentation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Finding {
    pub severity: Severity,
    pub kind: FindingKind,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        match &self.kind {
            FindingKind::CountMismatch(s) => write!(f, "{tag}: {s}"),
            FindingKind::ArrowOutOfRange { arrow } => {
                write!(f, "{tag}: arrow {} references a missing vertex", arrow + 1)
            }
            FindingKind::ShapeMismatch { arrow, expected, found } => write!(
                f,
                "{tag}: arrow {} has shape {}x{}, expected {}x{}",
                arrow + 1,
                found.0,
                found.1,
                expected.0,
                expected.1
            ),
            FindingKind::NonFinite { arrow } => write!(f, "{tag}: arrow {} has non-finite entries", arrow + 1),
            FindingKind::ZeroDimension(s) => write!(f, "{tag}: zero dimension at {s}"),
            FindingKind::NonPositiveWeight(s) => write!(f, "{tag}: non-positive weight at {s}"),
            FindingKind::Imbalance { sources, sinks } => {
                write!(f, "{tag}: weight unbalanced ({sources} on sources vs {sinks} on sinks)")
            }
            FindingKind::Disconnected => write!(f, "{tag}: quiver is not connected"),
            FindingKind::ZeroRepresentation => write!(f, "{tag}: representation is zero"),
        }
    }
}

impl QuiverDatum {
    pub fn sources(&self) -> usize {
        self.quiver.sources
    }

    pub fn sinks(&self) -> usize {
        self.quiver.sinks
    }

    /// `N = Σ σ₊(v_i) β(v_i)`.
    pub fn source_total(&self) -> u64 {
        self.sigma.plus.iter().zip(&self.beta.plus).map(|(&s, &b)| s as u64 * b as u64).sum()
    }

    /// `Σ σ₋(w_j) β(w_j)`.
    pub fn sink_total(&self) -> u64 {
        self.sigma.minus.iter().zip(&self.beta.minus).map(|(&s, &b)| s as u64 * b as u64).sum()
    }

    pub fn is_zero_representation(&self) -> bool {
        self.maps.iter().all(Matrix::is_zero)
    }

    /// All violated invariants; an empty list means the datum is usable.
    pub fn validate(&self) -> Vec<Finding> {
        let mut out = Vec::new();
        let err = |kind| Finding { severity: Severity::Error, kind };
        let (k, m) = (self.quiver.sources, self.quiver.sinks);
        if self.beta.plus.len() != k || self.sigma.plus.len() != k {
            out.push(err(FindingKind::CountMismatch(format!(
                "{k} sources but {} source dimensions and {} source weights",
                self.beta.plus.len(),
                self.sigma.plus.len()
            ))));
        }
        if self.beta.minus.len() != m || self.sigma.minus.len() != m {
            out.push(err(FindingKind::CountMismatch(format!(
                "{m} sinks but {} sink dimensions and {} sink weights",
                self.beta.minus.len(),
                self.sigma.minus.len()
            ))));
        }
        if self.maps.len() != self.quiver.arrows.len() {
            out.push(err(FindingKind::CountMismatch(format!(
                "{} arrows but {} matrices",
                self.quiver.arrows.len(),
                self.maps.len()
            ))));
        }
        if !out.is_empty() {
            return out;
        }
        for (i, &b) in self.beta.plus.iter().enumerate() {
            if b == 0 {
                out.push(err(FindingKind::ZeroDimension(format!("source {}", i + 1))));
            }
        }
        for (j, &b) in self.beta.minus.iter().enumerate() {
            if b == 0 {
                out.push(err(FindingKind::ZeroDimension(format!("sink {}", j + 1))));
            }
        }
        for (i, &s) in self.sigma.plus.iter().enumerate() {
            if s == 0 {
                out.push(err(FindingKind::NonPositiveWeight(format!("source {}", i + 1))));
            }
        }
        for (j, &s) in self.sigma.minus.iter().enumerate() {
            if s == 0 {
                out.push(err(FindingKind::NonPositiveWeight(format!("sink {}", j + 1))));
            }
        }
        for (id, (arrow, map)) in self.quiver.arrows.iter().zip(&self.maps).enumerate() {
            if arrow.source >= k || arrow.sink >= m {
                out.push(err(FindingKind::ArrowOutOfRange { arrow: id }));
                continue;
            }
            let expected = (self.beta.minus[arrow.sink], self.beta.plus[arrow.source]);
            if map.shape() != expected {
                out.push(err(FindingKind::ShapeMismatch { arrow: id, expected, found: map.shape() }));
            }
            if !map.is_finite() {
                out.push(err(FindingKind::NonFinite { arrow: id }));
            }
        }
        let (sources, sinks) = (self.source_total(), self.sink_total());
        if sources != sinks {
            out.push(err(FindingKind::Imbalance { sources, sinks }));
        }
        if !self.quiver.is_connected() {
            out.push(err(FindingKind::Disconnected));
        }
        if self.is_zero_representation() {
            out.push(Finding { severity: Severity::Warning, kind: FindingKind::ZeroRepresentation });
        }
        out
    }

    /// Fails on any error-severity finding; warnings pass.
    pub fn ensure_valid(&self) -> Result<()> {
        let errors: Vec<Finding> = self.validate().into_iter().filter(|f| f.severity == Severity::Error).collect();
        if errors.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidDatum(errors))
        }
    }

    /// Same quiver, dimensions and weight with new arrow matrices.
    pub fn with_maps(&self, maps: Vec<Matrix>) -> QuiverDatum {
        QuiverDatum { quiver: self.quiver.clone(), beta: self.beta.clone(), sigma: self.sigma.clone(), maps }
    }
}

/// `(A, c, p)` with `A[i][j]: R^{d_i} → R^{n_j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct AjnDatum {
    pub d: Vec<usize>,
    pub n: Vec<usize>,
    pub c: Vec<u32>,
    pub p: Vec<u32>,
    pub a: Vec<Vec<Matrix>>,
}

impl AjnDatum {
    pub fn sources(&self) -> usize {
        self.d.len()
    }

    pub fn sinks(&self) -> usize {
        self.n.len()
    }

    /// Stacked map `A_j = [A_{1j} … A_{kj}]`.
    pub fn stacked(&self, j: usize) -> Matrix {
        let parts: Vec<Matrix> = self.a.iter().map(|row| row[j].clone()).collect();
        Matrix::hstack(self.n[j], &parts)
    }

    fn check_shapes(&self) -> Result<()> {
        let (k, m) = (self.d.len(), self.n.len());
        if k == 0 || m == 0 {
            return Err(Error::InvalidAjn("need at least one source and one sink".into()));
        }
        if self.c.len() != k || self.p.len() != m {
            return Err(Error::InvalidAjn(format!(
                "exponent lengths ({}, {}) do not match dimensions ({k}, {m})",
                self.c.len(),
                self.p.len()
            )));
        }
        if self.d.contains(&0) || self.n.contains(&0) {
            return Err(Error::InvalidAjn("dimensions must be positive".into()));
        }
        if self.c.contains(&0) || self.p.contains(&0) {
            return Err(Error::InvalidAjn("exponents must be positive integers".into()));
        }
        if self.a.len() != k || self.a.iter().any(|row| row.len() != m) {
            return Err(Error::InvalidAjn(format!("A must be a {k}x{m} array of matrices")));
        }
        for (i, row) in self.a.iter().enumerate() {
            for (j, aij) in row.iter().enumerate() {
                if aij.shape() != (self.n[j], self.d[i]) {
                    return Err(Error::InvalidAjn(format!(
                        "A[{}][{}] is {}x{}, expected {}x{}",
                        i + 1,
                        j + 1,
                        aij.rows(),
                        aij.cols(),
                        self.n[j],
                        self.d[i]
                    )));
                }
                if !aij.is_finite() {
                    return Err(Error::InvalidAjn(format!("A[{}][{}] has non-finite entries", i + 1, j + 1)));
                }
            }
        }
        Ok(())
    }

    /// `Σ c_i d_i` and `Σ p_j n_j`.
    pub fn balance(&self) -> (u64, u64) {
        let lhs = self.c.iter().zip(&self.d).map(|(&c, &d)| c as u64 * d as u64).sum();
        let rhs = self.p.iter().zip(&self.n).map(|(&p, &n)| p as u64 * n as u64).sum();
        (lhs, rhs)
    }

    /// Shape, balance and surjectivity checks.
    pub fn validate(&self) -> Result<()> {
        self.check_shapes()?;
        let (lhs, rhs) = self.balance();
        if lhs != rhs {
            return Err(Error::InvalidAjn(format!("unbalanced: sum c_i d_i = {lhs} but sum p_j n_j = {rhs}")));
        }
        if let Some(j) = check_surjective(self).iter().position(|&ok| !ok) {
            return Err(Error::InvalidAjn(format!("stacked map A_{} is not surjective", j + 1)));
        }
        Ok(())
    }
}

/// Per sink `j`, whether `[A_{1j} … A_{kj}]` has full row rank `n_j`.
pub fn check_surjective(ajn: &AjnDatum) -> Vec<bool> {
    (0..ajn.sinks()).map(|j| rank(&ajn.stacked(j), RANK_TOL) == ajn.n[j]).collect()
}

/// Quiver datum of an AJN datum: complete bipartite quiver, `β = (d, n)`,
/// `σ = (c, -p)`, and arrow maps `A_ij / √c_i`.
pub fn from_ajn(ajn: &AjnDatum) -> Result<QuiverDatum> {
    ajn.validate()?;
    let (k, m) = (ajn.sources(), ajn.sinks());
    let quiver = BipartiteQuiver::complete(k, m);
    let maps =
        quiver.arrows.iter().map(|a| ajn.a[a.source][a.sink].scaled(1.0 / (ajn.c[a.source] as f64).sqrt())).collect();
    Ok(QuiverDatum {
        quiver,
        beta: DimensionVector { plus: ajn.d.clone(), minus: ajn.n.clone() },
        sigma: Weight { plus: ajn.c.clone(), minus: ajn.p.clone() },
        maps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar_ajn(c: Vec<u32>, p: Vec<u32>, a: Vec<Vec<f64>>) -> AjnDatum {
        AjnDatum {
            d: vec![1; c.len()],
            n: vec![1; p.len()],
            c,
            p,
            a: a.into_iter().map(|row| row.into_iter().map(Matrix::scalar).collect()).collect(),
        }
    }

    fn single_arrow(beta_plus: usize, beta_minus: usize, sp: u32, sm: u32, map: Matrix) -> QuiverDatum {
        QuiverDatum {
            quiver: BipartiteQuiver::complete(1, 1),
            beta: DimensionVector { plus: vec![beta_plus], minus: vec![beta_minus] },
            sigma: Weight { plus: vec![sp], minus: vec![sm] },
            maps: vec![map],
        }
    }

    #[test]
    fn validate_accepts_balanced_identity() {
        let datum = single_arrow(2, 2, 1, 1, Matrix::identity(2));
        assert!(datum.validate().is_empty());
    }

    #[test]
    fn validate_reports_imbalance() {
        let datum = single_arrow(2, 1, 1, 1, Matrix::zeros(1, 2));
        let findings = datum.validate();
        assert!(findings.iter().any(|f| f.kind == FindingKind::Imbalance { sources: 2, sinks: 1 }));
        assert!(datum.ensure_valid().is_err());
    }

    #[test]
    fn validate_reports_shape_and_zero_warning() {
        let datum = single_arrow(2, 2, 1, 1, Matrix::zeros(2, 3));
        let findings = datum.validate();
        assert!(findings.iter().any(|f| matches!(f.kind, FindingKind::ShapeMismatch { arrow: 0, .. })));
        let zero = single_arrow(2, 2, 1, 1, Matrix::zeros(2, 2));
        let findings = zero.validate();
        assert_eq!(findings.len(), 1);
        assert_eq!(findings[0].severity, Severity::Warning);
        assert!(zero.ensure_valid().is_ok());
    }

    #[test]
    fn validate_rejects_zero_weight_and_disconnected() {
        let mut datum = single_arrow(1, 1, 1, 1, Matrix::scalar(1.0));
        datum.sigma.plus[0] = 0;
        datum.sigma.minus[0] = 0;
        assert!(datum.validate().iter().any(|f| matches!(f.kind, FindingKind::NonPositiveWeight(_))));
        let disconnected = QuiverDatum {
            quiver: BipartiteQuiver {
                sources: 2,
                sinks: 2,
                arrows: vec![Arrow { source: 0, sink: 0 }, Arrow { source: 1, sink: 1 }],
            },
            beta: DimensionVector { plus: vec![1, 1], minus: vec![1, 1] },
            sigma: Weight { plus: vec![1, 1], minus: vec![1, 1] },
            maps: vec![Matrix::scalar(1.0), Matrix::scalar(1.0)],
        };
        assert!(disconnected.validate().iter().any(|f| f.kind == FindingKind::Disconnected));
    }

    #[test]
    fn from_ajn_identity() {
        let ajn = AjnDatum { d: vec![2], n: vec![2], c: vec![1], p: vec![1], a: vec![vec![Matrix::identity(2)]] };
        let q = from_ajn(&ajn).unwrap();
        assert_eq!(q.maps, vec![Matrix::identity(2)]);
        assert_eq!(q.sigma, Weight { plus: vec![1], minus: vec![1] });
        assert!(q.validate().is_empty());
    }

    #[test]
    fn from_ajn_epi() {
        let q = from_ajn(&scalar_ajn(vec![1, 1], vec![2], vec![vec![1.0], vec![1.0]])).unwrap();
        assert_eq!(q.maps, vec![Matrix::scalar(1.0), Matrix::scalar(1.0)]);
        assert_eq!(q.sigma, Weight { plus: vec![1, 1], minus: vec![2] });
        assert_eq!(q.source_total(), 2);
    }

    #[test]
    fn from_ajn_scales_by_root_exponent() {
        assert!(matches!(from_ajn(&scalar_ajn(vec![4], vec![1], vec![vec![2.0]])), Err(Error::InvalidAjn(_))));
        let q = from_ajn(&scalar_ajn(vec![4], vec![4], vec![vec![2.0]])).unwrap();
        assert_eq!(q.maps[0], Matrix::scalar(1.0));
    }

    #[test]
    fn from_ajn_round_trip_recovers_maps() {
        let ajn = AjnDatum {
            d: vec![1, 2],
            n: vec![2],
            c: vec![2, 1],
            p: vec![2],
            a: vec![
                vec![Matrix::from_rows(&[[0.3], [1.7]]).unwrap()],
                vec![Matrix::from_rows(&[[1.0, -0.5], [0.25, 2.0]]).unwrap()],
            ],
        };
        let q = from_ajn(&ajn).unwrap();
        for (id, arrow) in q.quiver.arrows.iter().enumerate() {
            let back = q.maps[id].scaled((ajn.c[arrow.source] as f64).sqrt());
            assert!(back.sub(&ajn.a[arrow.source][arrow.sink]).max_abs() < 1e-15);
        }
    }

    #[test]
    fn surjectivity() {
        let ajn = AjnDatum { d: vec![2], n: vec![2], c: vec![1], p: vec![1], a: vec![vec![Matrix::identity(2)]] };
        assert_eq!(check_surjective(&ajn), vec![true]);
        let row = AjnDatum {
            d: vec![2],
            n: vec![1],
            c: vec![1],
            p: vec![2],
            a: vec![vec![Matrix::from_rows(&[[1.0, 0.0]]).unwrap()]],
        };
        assert_eq!(check_surjective(&row), vec![true]);
        let zero = AjnDatum { d: vec![1], n: vec![2], c: vec![2], p: vec![1], a: vec![vec![Matrix::zeros(2, 1)]] };
        assert_eq!(check_surjective(&zero), vec![false]);
        assert!(matches!(from_ajn(&zero), Err(Error::InvalidAjn(_))));
    }
}
