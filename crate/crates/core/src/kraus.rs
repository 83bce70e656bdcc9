//! The Brascamp-Lieb completely positive operator of a quiver datum.
//!
//! Kraus operators are `N×N` matrices with a single nonzero block, so they
//! are kept as block descriptors. Rows of a Kraus operator follow the sink
//! layout (`M` blocks, block `q ∈ I⁻_j` of size `β(w_j)`), columns the
//! source layout (`M′` blocks, block `r ∈ I⁺_i` of size `β(v_i)`).

use std::ops::Range;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::quiver::QuiverDatum;

#[derive(Debug, Clone, PartialEq)]
pub struct IndexLayout {
    /// `N = Σ σ₊(v_i) β(v_i) = Σ σ₋(w_j) β(w_j)`.
    pub n: usize,
    /// `I⁺_i` as 0-based block ranges; lengths `σ₊(v_i)`.
    pub source_blocks: Vec<Range<usize>>,
    /// `I⁻_j` as 0-based block ranges; lengths `σ₋(w_j)`.
    pub sink_blocks: Vec<Range<usize>>,
    /// Row offset and size of every source-layout block `r`.
    pub source_offsets: Vec<(usize, usize)>,
    /// Row offset and size of every sink-layout block `q`.
    pub sink_offsets: Vec<(usize, usize)>,
}

impl IndexLayout {
    /// `M = Σ σ₋(w_j)`.
    pub fn sink_block_count(&self) -> usize {
        self.sink_offsets.len()
    }

    /// `M′ = Σ σ₊(v_i)`.
    pub fn source_block_count(&self) -> usize {
        self.source_offsets.len()
    }
}

fn intervals(weights: &[u32], dims: &[usize]) -> (Vec<Range<usize>>, Vec<(usize, usize)>) {
    let mut ranges = Vec::with_capacity(weights.len());
    let mut offsets = Vec::new();
    let (mut start, mut row) = (0usize, 0usize);
    for (&w, &d) in weights.iter().zip(dims) {
        let end = start + w as usize;
        ranges.push(start..end);
        for _ in start..end {
            offsets.push((row, d));
            row += d;
        }
        start = end;
    }
    (ranges, offsets)
}

pub fn build_layout(datum: &QuiverDatum) -> Result<IndexLayout> {
    let (sources, sinks) = (datum.source_total(), datum.sink_total());
    if sources != sinks {
        return Err(Error::Imbalance { sources, sinks });
    }
    let (source_blocks, source_offsets) = intervals(&datum.sigma.plus, &datum.beta.plus);
    let (sink_blocks, sink_offsets) = intervals(&datum.sigma.minus, &datum.beta.minus);
    Ok(IndexLayout { n: sources as usize, source_blocks, sink_blocks, source_offsets, sink_offsets })
}

/// One Kraus operator `V^{i,j,a}_{q,r}`: the block `V(a)` at block position
/// `(q, r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausBlock {
    pub source: usize,
    pub sink: usize,
    pub arrow: usize,
    pub q: usize,
    pub r: usize,
    pub block: Matrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KrausSystem {
    pub layout: IndexLayout,
    pub ops: Vec<KrausBlock>,
}

pub fn build_kraus(datum: &QuiverDatum) -> Result<KrausSystem> {
    datum.ensure_valid()?;
    let layout = build_layout(datum)?;
    let mut ops = Vec::new();
    for (arrow, a) in datum.quiver.arrows.iter().enumerate() {
        for q in layout.sink_blocks[a.sink].clone() {
            for r in layout.source_blocks[a.source].clone() {
                ops.push(KrausBlock { source: a.source, sink: a.sink, arrow, q, r, block: datum.maps[arrow].clone() });
            }
        }
    }
    Ok(KrausSystem { layout, ops })
}

fn check_square(ks: &KrausSystem, x: &Matrix) -> Result<()> {
    let n = ks.layout.n;
    if x.shape() != (n, n) {
        return Err(Error::DimensionMismatch(format!("expected {n}x{n} input, found {}x{}", x.rows(), x.cols())));
    }
    Ok(())
}

/// `T(X) = Σ Kᵀ X K`; the term for `(q, r)` adds `V(a)ᵀ X_qq V(a)` to the
/// `(r, r)` block of the output.
pub fn apply_t(ks: &KrausSystem, x: &Matrix) -> Result<Matrix> {
    check_square(ks, x)?;
    let n = ks.layout.n;
    let mut out = Matrix::zeros(n, n);
    for op in &ks.ops {
        let (qo, qd) = ks.layout.sink_offsets[op.q];
        let (ro, _) = ks.layout.source_offsets[op.r];
        let xqq = x.block(qo, qo, qd, qd);
        out.add_block(ro, ro, &op.block.transpose_congruence(&xqq));
    }
    Ok(out)
}

/// `T*(X) = Σ K X Kᵀ`; block-diagonal in the sink layout with `(q, q)` block
/// `Σ_i Σ_a V(a) (Σ_{r ∈ I⁺_i} X_rr) V(a)ᵀ`.
pub fn apply_t_star(ks: &KrausSystem, x: &Matrix) -> Result<Matrix> {
    check_square(ks, x)?;
    let n = ks.layout.n;
    let mut out = Matrix::zeros(n, n);
    for op in &ks.ops {
        let (qo, _) = ks.layout.sink_offsets[op.q];
        let (ro, rd) = ks.layout.source_offsets[op.r];
        let xrr = x.block(ro, ro, rd, rd);
        out.add_block(qo, qo, &op.block.congruence(&xrr));
    }
    Ok(out)
}

/// Block-diagonal `N×N` matrix in the source layout whose blocks in `I⁺_i`
/// are all `tuple[i]`.
pub fn source_block_diagonal(layout: &IndexLayout, tuple: &[Matrix]) -> Matrix {
    let blocks: Vec<Matrix> =
        layout.source_blocks.iter().zip(tuple).flat_map(|(range, s)| range.clone().map(move |_| s.clone())).collect();
    Matrix::block_diag(&blocks)
}

/// Frobenius residuals of the two doubly-stochastic equations.
#[derive(Debug, Clone, PartialEq)]
pub struct DsResiduals {
    /// `‖Σ_j σ₋(w_j) Σ_a V(a)ᵀV(a) − I‖_F` per source.
    pub source: Vec<f64>,
    /// `‖Σ_i σ₊(v_i) Σ_a V(a)V(a)ᵀ − I‖_F` per sink.
    pub sink: Vec<f64>,
}

impl DsResiduals {
    pub fn max(&self) -> f64 {
        self.source.iter().chain(&self.sink).copied().fold(0.0, f64::max)
    }
}

pub fn ds_residual(datum: &QuiverDatum) -> DsResiduals {
    let mut src: Vec<Matrix> = datum.beta.plus.iter().map(|&b| Matrix::identity(b).scaled(-1.0)).collect();
    let mut snk: Vec<Matrix> = datum.beta.minus.iter().map(|&b| Matrix::identity(b).scaled(-1.0)).collect();
    for (a, v) in datum.quiver.arrows.iter().zip(&datum.maps) {
        src[a.source].add_scaled(&v.transpose().matmul(v), datum.sigma.minus[a.sink] as f64);
        snk[a.sink].add_scaled(&v.matmul(&v.transpose()), datum.sigma.plus[a.source] as f64);
    }
    DsResiduals {
        source: src.iter().map(Matrix::frobenius_norm).collect(),
        sink: snk.iter().map(Matrix::frobenius_norm).collect(),
    }
}
