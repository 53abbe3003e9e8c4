//! JSON views of results. Complex numbers are `[re, im]` pairs.

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::geometry::{CrossingOctahedron, IdealTetrahedron, VolumeResult};
use crate::rop::ClusterTrajectory;
use crate::scalar::Scalar;

pub fn complex(c: Complex64) -> Value {
    json!([c.re, c.im])
}

pub fn complex_vec(v: &[Complex64]) -> Value {
    Value::Array(v.iter().map(|&c| complex(c)).collect())
}

pub fn tetrahedron(t: &IdealTetrahedron) -> Value {
    json!({
        "label": t.label.as_char().to_string(),
        "sign": t.sign,
        "z": complex(t.z),
        "p": t.p,
        "q": t.q,
        "L": complex(t.l),
        "residual": t.residual,
    })
}

pub fn crossing(c: &CrossingOctahedron) -> Value {
    json!({
        "j": c.j,
        "i": c.i,
        "eps": c.eps,
        "xc": complex(c.x_c),
        "tetrahedra": c.tetrahedra.iter().map(tetrahedron).collect::<Vec<_>>(),
    })
}

pub fn volume(v: &VolumeResult) -> Value {
    json!({
        "vol": v.vol,
        "cs": v.cs,
        "cs_reduced": v.cs_reduced,
        "total": complex(v.total),
        "bloch_wigner": v.bloch_wigner_sum(),
        "max_residual": v.max_residual(),
        "crossings": v.crossings.iter().map(crossing).collect::<Vec<_>>(),
    })
}

pub fn trajectory<S: Scalar>(t: &ClusterTrajectory<S>) -> Value {
    let seeds: Vec<Value> = t.seeds.iter().map(|s| complex_vec(&s.iter().map(Scalar::to_c64).collect::<Vec<_>>())).collect();
    json!({
        "braid": t.braid.to_string(),
        "seeds": seeds,
        "xc": complex_vec(&t.xc.iter().map(Scalar::to_c64).collect::<Vec<_>>()),
    })
}

#[cfg(feature = "solver")]
pub use solver_views::*;

#[cfg(feature = "solver")]
mod solver_views {
    use super::*;
    use crate::solver::{Extrapolation, Sample, SolutionBranch, SolverConfig};

    pub fn config(cfg: &SolverConfig) -> Value {
        json!({
            "tol": cfg.newton.tol,
            "maxIter": cfg.newton.max_iter,
            "maxHalvings": cfg.newton.max_halvings,
            "delta0": cfg.schedule.delta0,
            "ratio": cfg.schedule.ratio,
            "steps": cfg.schedule.steps,
            "slope": cfg.slope,
            "flatteningTol": cfg.flattening_tol,
        })
    }

    pub fn sample(s: &Sample) -> Value {
        json!({
            "delta": s.delta,
            "theta": complex_vec(&s.theta),
            "x0": complex_vec(&s.x0),
            "newtonResidual": s.newton_residual,
            "newtonIterations": s.newton_iterations,
            "residual": s.residual,
            "asymptoticOk": s.asymptotic_ok,
            "exact": s.exact,
            "volume": volume(&s.volume),
        })
    }

    pub fn extrapolation(e: &Extrapolation) -> Value {
        json!({
            "total": complex(e.value),
            "vol": e.value.im,
            "cs": -e.value.re,
            "cs_reduced": crate::geometry::reduce_cs(-e.value.re),
            "error": e.error,
            "order": e.order,
            "converging": e.converging,
        })
    }

    pub fn branch(b: &SolutionBranch) -> Value {
        json!({
            "start": complex_vec(&b.start),
            "converged": b.converged(),
            "extrapolation": b.extrapolation.as_ref().map(extrapolation),
            "failure": b.failure.as_ref().map(|(d, m)| json!({"delta": d, "message": m})),
            "maxFlatteningResidual": b.max_flattening_residual(),
            "samples": b.samples.iter().map(sample).collect::<Vec<_>>(),
        })
    }
}
