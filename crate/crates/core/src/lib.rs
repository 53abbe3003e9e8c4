//! Complex volumes of knot complements from cluster-algebra R-operators.
//!
//! A braid word drives a sequence of cluster mutations (one `R_i^{±1}` per
//! crossing). Periodic initial cluster variables give the shapes of an
//! octahedral decomposition, and the complex volume is the signed sum of
//! extended Rogers dilogarithms over its tetrahedra.

pub mod braid;
pub mod cluster;
pub mod dilog;
pub mod error;
pub mod geometry;
pub mod json;
pub mod rop;
pub mod scalar;
pub mod verify;

#[cfg(feature = "cli")]
pub mod cli;
#[cfg(feature = "solver")]
pub mod solver;

pub use braid::{parse_braid, BraidWord, Letter};
pub use cluster::{build_exchange_matrix, mutate, mutate_y, permute, y_from_x, ClusterSeed, ExchangeMatrix, YVector};
pub use error::{Error, Result};
pub use rop::{apply_r_closed, apply_r_comp, apply_r_y, residual, run_pattern, ClusterTrajectory};
