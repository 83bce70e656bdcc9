//! Capacity of bipartite quiver data and Gaussian extremizers.
//!
//! A datum assigns a real vector space to every source and sink of a
//! bipartite quiver, a linear map to every arrow, and positive integer
//! weights to the vertices. Its capacity is the infimum of a determinant
//! ratio over positive definite tuples on the sources; it is positive exactly
//! when the datum is semi-stable, and then `−½ log cap` is the best constant
//! of the associated entropy inequality.
//!
//! ```
//! use quiver_capacity::{ajn_solve, presets, SolverOptions};
//!
//! let report = ajn_solve(&presets::epi(), &SolverOptions::default()).unwrap();
//! assert!((report.cap - 4.0).abs() < 1e-8);
//! assert!((report.ajn_constant + 2f64.ln()).abs() < 1e-8);
//! ```

pub mod capacity;
pub mod entropy;
pub mod error;
pub mod format;
pub mod kraus;
pub mod linalg;
pub mod presets;
pub mod quiver;
pub mod scaling;
pub mod stability;

pub use capacity::{
    ajn_solve, cap_at, log_cap_at, residual, solve, solve_from, CapacityReport, InfeasibleEvidence, SolveStatus,
    SolverOptions, SpdTuple,
};
pub use entropy::{ajn_gap, gaussian_entropy, GaussianTuple};
pub use error::{Error, Result};
pub use linalg::{Matrix, SpdMatrix};
pub use quiver::{from_ajn, AjnDatum, BipartiteQuiver, DimensionVector, QuiverDatum, Weight};
pub use scaling::{act, character, extremizer_to_group, GroupElement};
pub use stability::{endomorphism_dimension, find_violator, slack_of, uniqueness_probe, ProbeOutcome, SubspaceTuple};
