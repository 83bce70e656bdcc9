//! Base-change group action, the character `χ_σ`, and scaling of polystable
//! data to geometric form.

use crate::capacity::{residual, sink_aggregates, solve, SolveStatus, SolverOptions, SpdTuple};
use crate::error::{Error, Result};
use crate::kraus::{ds_residual, DsResiduals};
use crate::linalg::{inv_sqrt, inverse, sign_log_det, Matrix, SpdMatrix};
use crate::quiver::{DimensionVector, QuiverDatum, Weight};

/// `g = (g(v_i), g(w_j)) ∈ GL(β)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    pub gv: Vec<Matrix>,
    pub gw: Vec<Matrix>,
}

impl GroupElement {
    pub fn identity(beta: &DimensionVector) -> Self {
        Self {
            gv: beta.plus.iter().map(|&b| Matrix::identity(b)).collect(),
            gw: beta.minus.iter().map(|&b| Matrix::identity(b)).collect(),
        }
    }

    /// Blockwise product `self · other`.
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        GroupElement {
            gv: self.gv.iter().zip(&other.gv).map(|(a, b)| a.matmul(b)).collect(),
            gw: self.gw.iter().zip(&other.gw).map(|(a, b)| a.matmul(b)).collect(),
        }
    }

    fn inverse_sources(&self) -> Result<Vec<Matrix>> {
        self.gv
            .iter()
            .enumerate()
            .map(|(i, g)| inverse(g).map_err(|_| Error::SingularBlock { vertex: format!("v{}", i + 1) }))
            .collect()
    }

    fn check_shapes(&self, beta: &DimensionVector) -> Result<()> {
        let ok = self.gv.len() == beta.plus.len()
            && self.gw.len() == beta.minus.len()
            && self.gv.iter().zip(&beta.plus).all(|(g, &b)| g.shape() == (b, b))
            && self.gw.iter().zip(&beta.minus).all(|(g, &b)| g.shape() == (b, b));
        if ok {
            Ok(())
        } else {
            Err(Error::DimensionMismatch("group element blocks do not match the dimension vector".into()))
        }
    }
}

/// `(g·V)(a) = g(w_j) V(a) g(v_i)⁻¹`.
pub fn act(g: &GroupElement, datum: &QuiverDatum) -> Result<QuiverDatum> {
    g.check_shapes(&datum.beta)?;
    let inv = g.inverse_sources()?;
    for (j, w) in g.gw.iter().enumerate() {
        inverse(w).map_err(|_| Error::SingularBlock { vertex: format!("w{}", j + 1) })?;
    }
    let maps = datum
        .quiver
        .arrows
        .iter()
        .zip(&datum.maps)
        .map(|(a, v)| g.gw[a.sink].matmul(v).matmul(&inv[a.source]))
        .collect();
    Ok(datum.with_maps(maps))
}

/// `(sign, log|χ_σ(g)|)` with `χ_σ(g) = Π det g(v_i)^{σ₊} · Π det g(w_j)^{−σ₋}`.
pub fn log_character(g: &GroupElement, sigma: &Weight) -> Result<(f64, f64)> {
    let mut sign = 1.0;
    let mut log_abs = 0.0;
    for (i, (m, &w)) in g.gv.iter().zip(&sigma.plus).enumerate() {
        let (s, l) = sign_log_det(m).map_err(|_| Error::SingularBlock { vertex: format!("v{}", i + 1) })?;
        sign *= s.powi(w as i32);
        log_abs += w as f64 * l;
    }
    for (j, (m, &w)) in g.gw.iter().zip(&sigma.minus).enumerate() {
        let (s, l) = sign_log_det(m).map_err(|_| Error::SingularBlock { vertex: format!("w{}", j + 1) })?;
        sign *= s.powi(w as i32);
        log_abs -= w as f64 * l;
    }
    Ok((sign, log_abs))
}

pub fn character(g: &GroupElement, sigma: &Weight) -> Result<f64> {
    let (sign, log_abs) = log_character(g, sigma)?;
    Ok(sign * log_abs.exp())
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeometricCheck {
    pub geometric: bool,
    pub residuals: DsResiduals,
}

/// Whether both doubly-stochastic equations hold within `tol`.
pub fn is_geometric(datum: &QuiverDatum, tol: f64) -> GeometricCheck {
    let residuals = ds_residual(datum);
    let geometric = !datum.is_zero_representation() && residuals.max() <= tol;
    GeometricCheck { geometric, residuals }
}

/// `g(v_i) = Σ_i^{-1/2}`, `g(w_j) = M_j^{-1/2}`. Valid only at a stationary
/// tuple, where `g·V` is geometric.
pub fn extremizer_to_group(datum: &QuiverDatum, sigma: &SpdTuple, tol: f64) -> Result<GroupElement> {
    let r = residual(datum, sigma)?;
    if r > tol {
        return Err(Error::NotExtremal { residual: r, tol });
    }
    let aggregates = sink_aggregates(datum, sigma)?;
    let gv = sigma.iter().map(|s| inv_sqrt(s)).collect::<std::result::Result<Vec<_>, _>>()?;
    let gw = aggregates
        .iter()
        .enumerate()
        .map(|(j, m)| inv_sqrt(m).map_err(|_| Error::SingularAggregate { sink: j }))
        .collect::<Result<Vec<_>>>()?;
    Ok(GroupElement { gv, gw })
}

/// The tuple `(g(v_i)⁻¹ g(v_i)⁻ᵀ)_i`.
pub fn gaussian_extremizers_from_group(g: &GroupElement) -> Result<SpdTuple> {
    let inv = g.inverse_sources()?;
    let entries = inv
        .iter()
        .enumerate()
        .map(|(i, h)| {
            SpdMatrix::from_symmetric_part(&h.matmul(&h.transpose()))
                .map_err(|_| Error::SingularBlock { vertex: format!("v{}", i + 1) })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpdTuple(entries))
}

/// `cap(V) = χ_σ(g)² · cap(g·V)` measured with two solves.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacterCheck {
    pub cap: f64,
    pub cap_transformed: f64,
    pub character: f64,
    pub relative_error: f64,
}

fn converged_cap(datum: &QuiverDatum, opts: &SolverOptions) -> Result<f64> {
    let r = solve(datum, opts)?;
    match r.status {
        SolveStatus::Converged => Ok(r.cap),
        other => Err(Error::NotConverged(other.as_str().into())),
    }
}

pub fn verify_character_formula(datum: &QuiverDatum, g: &GroupElement, opts: &SolverOptions) -> Result<CharacterCheck> {
    let moved = act(g, datum)?;
    let cap = converged_cap(datum, opts)?;
    let cap_transformed = converged_cap(&moved, opts)?;
    let (sign, log_chi) = log_character(g, &datum.sigma)?;
    let predicted = (2.0 * log_chi).exp() * cap_transformed;
    Ok(CharacterCheck {
        cap,
        cap_transformed,
        character: sign * log_chi.exp(),
        relative_error: (cap - predicted).abs() / cap,
    })
}

/// Result of splitting an upper block-triangular datum into its diagonal parts.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionCheck {
    pub cap: f64,
    pub cap_sub: f64,
    pub cap_quotient: f64,
    pub relative_error: f64,
    pub sub: QuiverDatum,
    pub quotient: QuiverDatum,
}

/// Extracts `V₁` (top-left blocks, dimensions `split`) and `V₂` (bottom-right
/// blocks), checks that every lower-left block is exactly zero and that
/// `σ·dim V₁ = 0`, then compares `cap(V)` with `cap(V₁)·cap(V₂)`.
pub fn verify_decomposition(
    datum: &QuiverDatum,
    split: &DimensionVector,
    opts: &SolverOptions,
) -> Result<DecompositionCheck> {
    datum.ensure_valid()?;
    let (sub, quotient) = split_datum(datum, split)?;
    let balance = sub.source_total() as i64 - sub.sink_total() as i64;
    if balance != 0 {
        return Err(Error::SplitImbalance(balance));
    }
    let cap = converged_cap(datum, opts)?;
    let cap_sub = converged_cap(&sub, opts)?;
    let cap_quotient = converged_cap(&quotient, opts)?;
    Ok(DecompositionCheck {
        cap,
        cap_sub,
        cap_quotient,
        relative_error: (cap - cap_sub * cap_quotient).abs() / cap,
        sub,
        quotient,
    })
}

fn split_datum(datum: &QuiverDatum, split: &DimensionVector) -> Result<(QuiverDatum, QuiverDatum)> {
    if split.plus.len() != datum.sources() || split.minus.len() != datum.sinks() {
        return Err(Error::InvalidSplit("split has the wrong number of vertices".into()));
    }
    let rest = DimensionVector {
        plus: datum.beta.plus.iter().zip(&split.plus).map(|(b, s)| b.wrapping_sub(*s)).collect(),
        minus: datum.beta.minus.iter().zip(&split.minus).map(|(b, s)| b.wrapping_sub(*s)).collect(),
    };
    let positive = |v: &DimensionVector, full: &DimensionVector| {
        v.plus.iter().zip(&full.plus).chain(v.minus.iter().zip(&full.minus)).all(|(&x, &b)| x > 0 && x <= b)
    };
    if !positive(split, &datum.beta) || !positive(&rest, &datum.beta) {
        return Err(Error::InvalidSplit("both parts need positive dimension at every vertex".into()));
    }
    let mut top = Vec::new();
    let mut bottom = Vec::new();
    for (id, (a, v)) in datum.quiver.arrows.iter().zip(&datum.maps).enumerate() {
        let (r1, c1) = (split.minus[a.sink], split.plus[a.source]);
        let (r2, c2) = (rest.minus[a.sink], rest.plus[a.source]);
        if !v.block(r1, 0, r2, c1).is_zero() {
            return Err(Error::NotTriangular { arrow: id });
        }
        top.push(v.block(0, 0, r1, c1));
        bottom.push(v.block(r1, c1, r2, c2));
    }
    let make = |beta: DimensionVector, maps| QuiverDatum {
        quiver: datum.quiver.clone(),
        beta,
        sigma: datum.sigma.clone(),
        maps,
    };
    Ok((make(split.clone(), top), make(rest, bottom)))
}
