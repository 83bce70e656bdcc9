//! Differential entropy of centered Gaussians and the entropic gap of an AJN
//! datum over independent Gaussian inputs. Natural logarithms throughout.

use std::f64::consts::{E, PI};

use crate::capacity::SpdTuple;
use crate::error::{Error, Result};
use crate::linalg::{log_det, Matrix, SpdMatrix};
use crate::quiver::AjnDatum;

/// Covariances of mutually independent centered Gaussians `Z_1..Z_k`.
pub type GaussianTuple = SpdTuple;

/// `h(Z) = ½ (d log(2πe) + log det Σ)`.
pub fn gaussian_entropy(sigma: &SpdMatrix) -> f64 {
    0.5 * (sigma.dim() as f64 * (2.0 * PI * E).ln() + sigma.log_det())
}

/// Entropy from a raw covariance, checking positive definiteness.
pub fn gaussian_entropy_of(sigma: &Matrix) -> Result<f64> {
    Ok(gaussian_entropy(&SpdMatrix::new(sigma.clone())?))
}

/// `Σ_i c_i h(Z_i) − Σ_j p_j h(A_j Z)` with `cov(A_j Z) = Σ_i A_ij Σ_i A_ijᵀ`.
pub fn ajn_gap(ajn: &AjnDatum, z: &GaussianTuple) -> Result<f64> {
    if z.len() != ajn.sources() || z.iter().zip(&ajn.d).any(|(s, &d)| s.dim() != d) {
        return Err(Error::DimensionMismatch("Gaussian tuple sizes do not match d".into()));
    }
    let log_2pie = (2.0 * PI * E).ln();
    let mut gap: f64 = z.iter().zip(&ajn.c).map(|(s, &c)| c as f64 * gaussian_entropy(s)).sum();
    for j in 0..ajn.sinks() {
        let mut cov = Matrix::zeros(ajn.n[j], ajn.n[j]);
        for (i, s) in z.iter().enumerate() {
            cov = cov.add(&ajn.a[i][j].congruence(s));
        }
        let ld = log_det(&cov.symmetrized()).map_err(|_| Error::SingularAggregate { sink: j })?;
        gap -= ajn.p[j] as f64 * 0.5 * (ajn.n[j] as f64 * log_2pie + ld);
    }
    Ok(gap)
}
