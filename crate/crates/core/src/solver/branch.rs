//! δ-schedules, branch tracking and random-restart enumeration.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::newton::{newton_solve, NewtonConfig};
use super::problem::PeriodicityProblem;
use super::richardson::{richardson, Extrapolation};
use crate::geometry::{complex_volume_with, VolumeResult, FLATTENING_TOL};
use crate::rop::run_pattern;
use crate::scalar::{dd, dd_to_exact, inf_norm, Dd, Scalar, QI};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Schedule {
    pub delta0: f64,
    pub ratio: f64,
    pub steps: usize,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule { delta0: 1e-2, ratio: 0.5, steps: 12 }
    }
}

impl Schedule {
    pub fn deltas(&self) -> Vec<f64> {
        (0..self.steps).map(|k| self.delta0 * self.ratio.powi(k as i32)).collect()
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.delta0 > 0.0) || !(self.ratio > 0.0 && self.ratio < 1.0) || self.steps == 0 {
            return Err(format!("bad δ-schedule: δ0={}, ratio={}, steps={}", self.delta0, self.ratio, self.steps));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub newton: NewtonConfig,
    pub schedule: Schedule,
    /// Asymptotic periodicity: `‖x[m+1] − x[1]‖∞ ≤ slope·δ` at each sample.
    pub slope: f64,
    pub flattening_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            newton: NewtonConfig::default(),
            schedule: Schedule::default(),
            slope: 1e3,
            flattening_tol: FLATTENING_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub delta: f64,
    /// Newton solution θ*(δ).
    pub theta: Vec<Complex64>,
    /// Evaluation point `x[1]` (at θ* + δη).
    pub x0: Vec<Complex64>,
    pub newton_residual: f64,
    pub newton_iterations: usize,
    /// `‖x[m+1] − x[1]‖∞` at the evaluation point.
    pub residual: f64,
    pub asymptotic_ok: bool,
    /// Evaluated in exact arithmetic after the double-double pass was
    /// judged too inaccurate.
    pub exact: bool,
    pub volume: VolumeResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionBranch {
    pub start: Vec<Complex64>,
    pub samples: Vec<Sample>,
    pub extrapolation: Option<Extrapolation>,
    /// δ and message if the branch was lost mid-schedule.
    pub failure: Option<(f64, String)>,
}

impl SolutionBranch {
    pub fn total(&self) -> Option<Complex64> {
        self.extrapolation.as_ref().map(|e| e.value)
    }

    pub fn vol(&self) -> Option<f64> {
        self.total().map(|t| t.im)
    }

    pub fn cs(&self) -> Option<f64> {
        self.total().map(|t| -t.re)
    }

    pub fn max_flattening_residual(&self) -> f64 {
        self.samples.iter().map(|s| s.volume.max_residual()).fold(0.0, f64::max)
    }

    pub fn asymptotically_periodic(&self) -> bool {
        self.samples.iter().all(|s| s.asymptotic_ok)
    }

    /// Complete schedule, periodic in the limit, with an extrapolated total.
    pub fn converged(&self) -> bool {
        self.failure.is_none() && self.extrapolation.is_some() && self.asymptotically_periodic()
    }
}

/// Flattening residual above which a double-double sample is recomputed
/// in exact arithmetic.
const ESCALATE_RESIDUAL: f64 = 1e-9;

fn volume_at<S: Scalar>(problem: &PeriodicityProblem, x: &[S], cfg: &SolverConfig) -> Result<(f64, VolumeResult), String> {
    let traj = run_pattern(&problem.braid, x).map_err(|e| e.to_string())?;
    let res: Vec<S> = traj.last().iter().zip(traj.first()).map(|(a, b)| a.clone() - b.clone()).collect();
    let vol = complex_volume_with(&traj, cfg.flattening_tol.max(1.0)).map_err(|e| e.to_string())?;
    Ok((inf_norm(&res), vol))
}

fn evaluate(problem: &PeriodicityProblem, theta: &[Complex64], cfg: &SolverConfig) -> Result<(Vec<Complex64>, f64, VolumeResult, bool), String> {
    let delta = problem.delta;
    let eta = problem.embedding.approach(problem.braid.n);
    let at: Vec<Dd> = theta.iter().zip(&eta).map(|(t, e)| dd(*t) + dd(e * delta)).collect();
    let x: Vec<Dd> = problem.point(&at, &dd(Complex64::new(delta, 0.0)));
    let x64 = x.iter().map(Scalar::to_c64).collect();
    let fast = volume_at(problem, &x, cfg);
    let (res, vol, exact) = match fast {
        Ok((res, vol)) if vol.max_residual() <= ESCALATE_RESIDUAL => (res, vol, false),
        _ => {
            // Cancellation near a removable singularity: redo exactly.
            let xq: Vec<QI> = x.iter().map(dd_to_exact).collect();
            let (res, vol) = volume_at(problem, &xq, cfg)?;
            (res, vol, true)
        }
    };
    if vol.max_residual() > cfg.flattening_tol {
        return Err(format!("non-integral flattening: residual {:.3e}", vol.max_residual()));
    }
    Ok((x64, res, vol, exact))
}

/// Track one branch along the δ-schedule, warm-starting each Newton solve
/// from the previous δ, and extrapolate the complex-volume total to δ = 0.
pub fn delta_limit(problem: &PeriodicityProblem, start: &[Complex64], cfg: &SolverConfig) -> SolutionBranch {
    let mut branch = SolutionBranch { start: start.to_vec(), samples: Vec::new(), extrapolation: None, failure: None };
    if let Err(e) = cfg.schedule.validate() {
        branch.failure = Some((cfg.schedule.delta0, e));
        return branch;
    }
    let mut theta = start.to_vec();
    for delta in cfg.schedule.deltas() {
        let p = problem.with_delta(delta);
        let out = match newton_solve(&p, &theta, &cfg.newton) {
            Ok(o) => o,
            Err(e) => {
                branch.failure = Some((delta, e.to_string()));
                break;
            }
        };
        theta = out.theta.clone();
        match evaluate(&p, &theta, cfg) {
            Ok((x0, residual, volume, exact)) => branch.samples.push(Sample {
                exact,
                delta,
                theta: out.theta,
                x0,
                newton_residual: out.residual,
                newton_iterations: out.iterations,
                residual,
                asymptotic_ok: residual <= cfg.slope * delta,
                volume,
            }),
            Err(e) => {
                branch.failure = Some((delta, e));
                break;
            }
        }
    }
    if branch.failure.is_none() {
        let totals: Vec<Complex64> = branch.samples.iter().map(|s| s.volume.total).collect();
        branch.extrapolation = richardson(&totals, cfg.schedule.ratio);
    }
    branch
}

/// Uniform random start in the box `[-2, 2]²` per complex coordinate.
pub fn random_starts(dim: usize, count: usize, seed: u64) -> Vec<Vec<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..dim).map(|_| Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))).collect())
        .collect()
}

fn par_map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Distinct branches from `n_starts` random starts, sorted by extrapolated
/// volume (largest first). Deterministic given `seed`.
pub fn enumerate_solutions(problem: &PeriodicityProblem, n_starts: usize, seed: u64, cfg: &SolverConfig) -> Vec<SolutionBranch> {
    let p0 = problem.with_delta(cfg.schedule.delta0);
    let starts = random_starts(problem.theta_dim(), n_starts, seed);
    let solved = par_map(&starts, |s| newton_solve(&p0, s, &cfg.newton).ok());
    let mut distinct: Vec<Vec<Complex64>> = Vec::new();
    for th in solved.into_iter().flatten().map(|o| o.theta) {
        let dup = distinct
            .iter()
            .any(|d| d.iter().zip(&th).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) < 1e-6);
        if !dup {
            distinct.push(th);
        }
    }
    let mut branches = par_map(&distinct, |th| delta_limit(problem, th, cfg));
    let key = |b: &SolutionBranch| match (b.converged(), b.vol()) {
        (true, Some(v)) if v.is_finite() => v,
        _ => f64::NEG_INFINITY,
    };
    branches.sort_by(|a, b| key(b).total_cmp(&key(a)));
    branches
}
