//! Periodicity solver: leading-order Newton at fixed δ, δ-limit tracking,
//! random-restart branch enumeration.
//!
//! With the degeneration `x2/x1, x3/x4 → 0` built into the embedding, the
//! periodicity equations only hold as δ → 0. Newton therefore solves the
//! components of `x[m+1] − x[1]` on the coordinates that stay O(1); the full
//! residual is recorded per sample and checked to vanish like O(δ).

mod branch;
mod newton;
mod problem;
mod richardson;

pub use branch::{delta_limit, enumerate_solutions, random_starts, Sample, Schedule, SolutionBranch, SolverConfig};
pub use newton::{newton_solve, NewtonConfig, NewtonOutcome};
pub use problem::{Embedding, PeriodicityProblem};
pub use richardson::{detect_order, richardson, Extrapolation};
