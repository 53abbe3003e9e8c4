//! Browser bindings for the `www/` demo page.
//!
//! Every export returns plain numbers or a JSON string so the same functions
//! run (and are tested) natively.

use clustervol::braid::parse_braid_opts;
use clustervol::dilog::bloch_wigner;
use clustervol::json;
use clustervol::scalar::{dd, inf_norm, Dd, Scalar};
use clustervol::solver::{delta_limit, PeriodicityProblem, Schedule, SolverConfig};
use clustervol::{parse_braid, run_pattern};
use num_complex::Complex64;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn error(msg: impl std::fmt::Display) -> String {
    json!({ "error": msg.to_string() }).to_string()
}

/// Track one solution branch of `braid` from the start `a = re + i·im` down
/// the δ-schedule. Returns per-δ volumes and the extrapolated limit.
#[wasm_bindgen]
pub fn volume_curve(braid: &str, re: f64, im: f64, delta0: f64, ratio: f64, steps: usize) -> String {
    let word = match parse_braid(braid) {
        Ok(w) => w,
        Err(e) => return error(e),
    };
    let problem = match PeriodicityProblem::for_braid(word, delta0) {
        Ok(p) => p,
        Err(e) => return error(e),
    };
    if problem.theta_dim() != 1 {
        return error(format!("no one-parameter fixture for '{braid}'; try \"1 -2 1 -2\" or \"1 1 1\""));
    }
    let cfg = SolverConfig { schedule: Schedule { delta0, ratio, steps }, ..SolverConfig::default() };
    let b = delta_limit(&problem, &[Complex64::new(re, im)], &cfg);
    let samples: Vec<Value> = b
        .samples
        .iter()
        .map(|s| json!({ "delta": s.delta, "vol": s.volume.vol, "cs": s.volume.cs, "a": json::complex(s.theta[0]) }))
        .collect();
    json!({
        "fixture": problem.embedding.name(),
        "samples": samples,
        "limit": b.extrapolation.as_ref().map(json::extrapolation),
        "converged": b.converged(),
        "failure": b.failure.map(|(d, m)| format!("δ = {d:e}: {m}")),
    })
    .to_string()
}

#[wasm_bindgen]
pub fn bloch_wigner_at(re: f64, im: f64) -> f64 {
    bloch_wigner(Complex64::new(re, im)).unwrap_or(0.0)
}

/// Row-major `ny × nx` samples of D on the box, top row at `im_max`.
#[wasm_bindgen]
pub fn bloch_wigner_grid(re_min: f64, re_max: f64, im_min: f64, im_max: f64, nx: usize, ny: usize) -> Vec<f64> {
    let step = |lo: f64, hi: f64, n: usize, k: usize| if n > 1 { lo + (hi - lo) * k as f64 / (n - 1) as f64 } else { lo };
    let mut out = Vec::with_capacity(nx * ny);
    for r in 0..ny {
        let im = step(im_max, im_min, ny, r);
        for c in 0..nx {
            out.push(bloch_wigner_at(step(re_min, re_max, nx, c), im));
        }
    }
    out
}

/// Cluster pattern of `x0` (JSON array of numbers or `[re, im]` pairs)
/// along any braid word, evaluated in double-double precision.
#[wasm_bindgen]
pub fn trace(braid: &str, x0: &str) -> String {
    let word = match parse_braid_opts(braid, None, false) {
        Ok(w) => w,
        Err(e) => return error(e),
    };
    let parsed: Value = match serde_json::from_str(x0) {
        Ok(v) => v,
        Err(e) => return error(format!("bad vector: {e}")),
    };
    let entry = |v: &Value| match v {
        Value::Number(n) => n.as_f64().map(|r| Complex64::new(r, 0.0)),
        Value::Array(p) if p.len() == 2 => Some(Complex64::new(p[0].as_f64()?, p[1].as_f64()?)),
        _ => None,
    };
    let Some(x) = parsed.as_array().and_then(|a| a.iter().map(entry).collect::<Option<Vec<_>>>()) else {
        return error("vector must be an array of numbers or [re, im] pairs");
    };
    let xd: Vec<Dd> = x.into_iter().map(dd).collect();
    match run_pattern(&word, &xd) {
        Ok(t) => {
            let res: Vec<Dd> = t.last().iter().zip(t.first()).map(|(a, b)| *a - *b).collect();
            let mut v = json::trajectory(&t.map(Scalar::to_c64));
            v["residual"] = json!(inf_norm(&res));
            v.to_string()
        }
        Err(e) => error(e),
    }
}
