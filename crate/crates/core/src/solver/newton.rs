//! Damped Gauss–Newton on the leading periodicity residual.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use twofloat::TwoFloat;

use super::problem::PeriodicityProblem;
use crate::error::{Error, Result};
use crate::scalar::{dd, dd_to_exact, exact_to_dd, inf_norm, Dd, Scalar, QI};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonConfig {
    /// Relative tolerance on `‖ρ‖∞ / ‖x‖∞`.
    pub tol: f64,
    pub max_iter: usize,
    /// Relative central-difference step.
    pub fd_step: f64,
    pub max_halvings: usize,
    /// Exact rational re-evaluation when double-double stalls.
    pub polish: bool,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        NewtonConfig { tol: 1e-10, max_iter: 200, fd_step: 1e-7, max_halvings: 30, polish: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonOutcome {
    pub theta: Vec<Complex64>,
    /// Full initial vector `x[1]` at the solution.
    pub x0: Vec<Complex64>,
    pub iterations: usize,
    pub residual: f64,
    pub polished: bool,
}

struct Eval<'a> {
    problem: &'a PeriodicityProblem,
    delta: Dd,
}

impl Eval<'_> {
    fn residual(&self, theta: &[Dd]) -> Result<Vec<Dd>> {
        self.problem.leading_residual(theta, &self.delta)
    }

    fn rel(&self, theta: &[Dd], r: &[Dd]) -> f64 {
        let x = self.problem.point(theta, &self.delta);
        inf_norm(r) / inf_norm(&x).max(f64::MIN_POSITIVE)
    }

    fn jacobian(&self, theta: &[Dd], step: f64) -> Result<DMatrix<Complex64>> {
        let m = self.problem.leading_components().len();
        let d = theta.len();
        let mut j = DMatrix::zeros(m, d);
        for k in 0..d {
            // Holomorphic in θ_k, so a real step suffices.
            let h = step * theta[k].to_c64().norm().max(1.0);
            let hd = dd(Complex64::new(h, 0.0));
            let mut tp = theta.to_vec();
            let mut tm = theta.to_vec();
            tp[k] = tp[k] + hd;
            tm[k] = tm[k] - hd;
            let (rp, rm) = (self.residual(&tp)?, self.residual(&tm)?);
            let two_h = Dd::new(TwoFloat::from(2.0 * h), TwoFloat::from(0.0));
            for i in 0..m {
                j[(i, k)] = ((rp[i] - rm[i]) / two_h).to_c64();
            }
        }
        Ok(j)
    }
}

fn sq(r: &[Dd]) -> f64 {
    r.iter().map(|c| c.to_c64().norm_sqr()).sum()
}

/// Minimum-norm least-squares step `-J⁺ r`.
fn gn_step(j: &DMatrix<Complex64>, r: &[Complex64]) -> Result<Vec<Complex64>> {
    let svd = j.clone().svd(true, true);
    let smax = svd.singular_values.max();
    if !(smax > 0.0) || !smax.is_finite() {
        return Err(Error::SingularJacobian { cond: f64::INFINITY });
    }
    let rhs = DVector::from_iterator(r.len(), r.iter().map(|c| -c));
    let x = svd.solve(&rhs, 1e-12 * smax).map_err(|e| Error::Newton(e.to_string()))?;
    Ok(x.iter().copied().collect())
}

pub fn newton_solve(problem: &PeriodicityProblem, start: &[Complex64], cfg: &NewtonConfig) -> Result<NewtonOutcome> {
    if start.len() != problem.theta_dim() {
        return Err(Error::LengthMismatch { expected: problem.theta_dim(), got: start.len() });
    }
    let ev = Eval { problem, delta: dd(Complex64::new(problem.delta, 0.0)) };
    let mut theta: Vec<Dd> = start.iter().map(|&c| dd(c)).collect();
    let mut r = ev.residual(&theta).map_err(|e| Error::Newton(format!("start point: {e}")))?;
    let mut it = 0;
    // A warm start may already be a root hidden under evaluation noise (which
    // reaches 1e-2 near a = ω for the figure-eight): confirm exactly first.
    let start_rel = ev.rel(&theta, &r);
    if cfg.polish && start_rel >= cfg.tol && start_rel < 0.1 {
        if let Some(res) = exact_rel(problem, &theta) {
            if res < cfg.tol {
                return Ok(NewtonOutcome {
                    theta: theta.iter().map(Scalar::to_c64).collect(),
                    x0: problem.point(&theta, &ev.delta).iter().map(Scalar::to_c64).collect(),
                    iterations: 0,
                    residual: res,
                    polished: true,
                });
            }
        }
    }
    let done = |theta: &[Dd], r: &[Dd], it: usize, polished: bool, res: f64| NewtonOutcome {
        theta: theta.iter().map(Scalar::to_c64).collect(),
        x0: problem.point(theta, &ev.delta).iter().map(Scalar::to_c64).collect(),
        iterations: it,
        residual: if polished { res } else { ev.rel(theta, r) },
        polished,
    };
    while it < cfg.max_iter {
        if ev.rel(&theta, &r) < cfg.tol {
            if it > 0 {
                refine(&ev, &mut theta, &mut r, cfg);
            }
            return Ok(done(&theta, &r, it, false, 0.0));
        }
        it += 1;
        let j = ev.jacobian(&theta, cfg.fd_step)?;
        let step = gn_step(&j, &r.iter().map(Scalar::to_c64).collect::<Vec<_>>())?;
        let f0 = sq(&r);
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..=cfg.max_halvings {
            let trial: Vec<Dd> = theta.iter().zip(&step).map(|(a, s)| *a + dd(s * t)).collect();
            if let Ok(rt) = ev.residual(&trial) {
                let ft = sq(&rt);
                if ft.is_finite() && ft <= (1.0 - 1e-4 * t) * f0 {
                    theta = trial;
                    r = rt;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    let rel = ev.rel(&theta, &r);
    if rel < cfg.tol {
        return Ok(done(&theta, &r, it, false, 0.0));
    }
    if cfg.polish && rel < 1e-4 {
        if let Some((th, res)) = polish_exact(problem, &theta, cfg) {
            return Ok(done(&th, &r, it, true, res));
        }
    }
    Err(Error::Newton(format!("no convergence: relative residual {rel:.3e} after {it} iterations")))
}

/// Up to three further full steps after reaching `tol`, each kept only if it
/// lowers the residual; pushes θ* down to the evaluation noise floor.
fn refine(ev: &Eval<'_>, theta: &mut Vec<Dd>, r: &mut Vec<Dd>, cfg: &NewtonConfig) {
    for _ in 0..3 {
        let Ok(j) = ev.jacobian(theta, cfg.fd_step) else { return };
        let Ok(step) = gn_step(&j, &r.iter().map(Scalar::to_c64).collect::<Vec<_>>()) else { return };
        let trial: Vec<Dd> = theta.iter().zip(&step).map(|(a, s)| *a + dd(*s)).collect();
        match ev.residual(&trial) {
            Ok(rt) if sq(&rt) < sq(r) => {
                *theta = trial;
                *r = rt;
            }
            _ => return,
        }
    }
}

fn exact_rel(problem: &PeriodicityProblem, theta: &[Dd]) -> Option<f64> {
    let delta_q = dd_to_exact(&dd(Complex64::new(problem.delta, 0.0)));
    // θ rounded to double precision: well inside tol, and half the bits.
    let tq: Vec<QI> = theta.iter().map(|t| dd_to_exact(&dd(t.to_c64()))).collect();
    let r = problem.leading_residual(&tq, &delta_q).ok()?;
    Some(inf_norm(&r) / inf_norm(&problem.point(&tq, &delta_q)))
}

/// A few Newton steps with the residual evaluated exactly in Gaussian
/// rationals, removing the evaluation noise near removable singularities.
fn polish_exact(problem: &PeriodicityProblem, theta: &[Dd], cfg: &NewtonConfig) -> Option<(Vec<Dd>, f64)> {
    let delta_dd = dd(Complex64::new(problem.delta, 0.0));
    let delta_q = dd_to_exact(&delta_dd);
    let ev = Eval { problem, delta: delta_dd };
    let j = ev.jacobian(theta, cfg.fd_step).ok()?;
    let mut th = theta.to_vec();
    for _ in 0..8 {
        let tq: Vec<QI> = th.iter().map(dd_to_exact).collect();
        let r: Vec<Complex64> = problem.leading_residual(&tq, &delta_q).ok()?.iter().map(Scalar::to_c64).collect();
        let x = problem.point(&tq, &delta_q);
        let rel = inf_norm(&r) / inf_norm(&x);
        if rel < cfg.tol {
            let th: Vec<Dd> = tq.iter().map(exact_to_dd).collect();
            return Some((th, rel));
        }
        let step = gn_step(&j, &r).ok()?;
        th = th.iter().zip(&step).map(|(a, s)| *a + dd(*s)).collect();
    }
    None
}
