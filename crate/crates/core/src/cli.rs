//! `clustervol` command line: compute, verify, trace.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 no converged solution,
//! 3 numeric failure (including failed identity checks).

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::braid::{parse_braid_opts, parse_braid_with, BraidWord};
use crate::cluster::{y_from_x, ClusterSeed};
use crate::json;
use crate::rop::run_pattern;
use crate::scalar::{dd, dd_to_exact, inf_norm, Dd, Scalar, QI};
use crate::solver::{enumerate_solutions, Embedding, NewtonConfig, PeriodicityProblem, Schedule, SolverConfig};
use crate::verify::{check_identity, check_identity_corrupted, find_case, IdentityCase, CASES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NO_SOLUTION: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "clustervol", version, about = "Complex volumes of knots from cluster-algebra braid representations")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Solve the periodicity system and extrapolate the complex volume.
    Compute(ComputeArgs),
    /// Run the exact identity suite.
    Verify(VerifyArgs),
    /// Print the cluster pattern of one initial vector.
    Trace(TraceArgs),
}

#[derive(Args, Debug)]
struct ComputeArgs {
    /// Signed generator indices, e.g. "1 -2 1 -2".
    #[arg(long, allow_hyphen_values = true)]
    braid: String,
    #[arg(long)]
    strands: Option<usize>,
    /// fig8-ansatz, trefoil-ansatz or generic (default: matching fixture, else generic).
    #[arg(long)]
    fixture: Option<String>,
    /// Alias for --delta0.
    #[arg(long, conflicts_with = "delta0")]
    delta: Option<f64>,
    #[arg(long)]
    delta0: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    ratio: f64,
    #[arg(long, default_value_t = 12)]
    steps: usize,
    #[arg(long, default_value_t = 16)]
    starts: usize,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 200)]
    max_iter: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Significant digits in the text summary.
    #[arg(long, default_value_t = 10)]
    digits: usize,
    /// Write the JSON report here and print a summary instead.
    #[arg(long)]
    json_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Run a single case (default: all).
    #[arg(long)]
    case: Option<String>,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    json_out: Option<PathBuf>,
    /// Test hook: check a deliberately wrong closed form.
    #[arg(long, hide = true)]
    corrupt: bool,
}

#[derive(Args, Debug)]
struct TraceArgs {
    #[arg(long, allow_hyphen_values = true)]
    braid: String,
    #[arg(long)]
    strands: Option<usize>,
    /// Named initial vector: fig8-ansatz or trefoil-ansatz.
    #[arg(long, conflicts_with = "x")]
    fixture: Option<String>,
    /// Free parameters of the fixture as JSON (default: its nominal point).
    #[arg(long, requires = "fixture")]
    theta: Option<String>,
    #[arg(long, default_value_t = 1e-3)]
    delta: f64,
    /// Initial vector as JSON: numbers or [re, im] pairs (default: all ones).
    #[arg(long)]
    x: Option<String>,
    #[arg(long)]
    json_out: Option<PathBuf>,
}

struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

fn numeric(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_NUMERIC, message: message.into() }
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let result = match cli.cmd {
        Cmd::Compute(a) => compute(&a, out),
        Cmd::Verify(a) => verify(&a, out),
        Cmd::Trace(a) => trace(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn emit(value: &Value, path: Option<&PathBuf>, out: &mut dyn Write) -> Result<(), Failure> {
    let text = serde_json::to_string(value).expect("JSON values serialize");
    match path {
        Some(p) => std::fs::write(p, text + "\n").map_err(|e| usage(format!("cannot write {}: {e}", p.display()))),
        None => writeln!(out, "{text}").map_err(|e| usage(e.to_string())),
    }
}

fn embedding_for(name: Option<&str>, braid: &BraidWord) -> Result<Embedding, Failure> {
    match name {
        None => Ok(Embedding::fixture_for(braid).unwrap_or(Embedding::Generic)),
        Some(n) => Embedding::from_name(n).ok_or_else(|| usage(format!("unknown fixture '{n}'"))),
    }
}

fn compute(a: &ComputeArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let braid = parse_braid_with(&a.braid, a.strands).map_err(|e| usage(e.to_string()))?;
    let embedding = embedding_for(a.fixture.as_deref(), &braid)?;
    let schedule = Schedule { delta0: a.delta0.or(a.delta).unwrap_or(1e-2), ratio: a.ratio, steps: a.steps };
    schedule.validate().map_err(usage)?;
    if !(a.tol > 0.0) {
        return Err(usage("--tol must be positive"));
    }
    let cfg = SolverConfig {
        newton: NewtonConfig { tol: a.tol, max_iter: a.max_iter, ..NewtonConfig::default() },
        schedule,
        ..SolverConfig::default()
    };
    let problem = PeriodicityProblem::new(braid.clone(), embedding, schedule.delta0).map_err(|e| usage(e.to_string()))?;
    let branches = enumerate_solutions(&problem, a.starts, a.seed, &cfg);
    let converged = branches.iter().filter(|b| b.converged()).count();
    let report = json!({
        "rngSeed": a.seed,
        "braid": braid.to_string(),
        "strands": braid.n,
        "fixture": embedding.name(),
        "embedding": embedding.describe(),
        "nStarts": a.starts,
        "config": json::config(&cfg),
        "converged": converged,
        "branches": branches.iter().map(json::branch).collect::<Vec<_>>(),
    });
    if let Some(path) = &a.json_out {
        emit(&report, Some(path), out)?;
        let p = a.digits.max(1);
        let _ = writeln!(out, "braid {}  fixture {}  rngSeed {}", braid, embedding.name(), a.seed);
        for (k, b) in branches.iter().enumerate() {
            match b.extrapolation.as_ref() {
                Some(e) => {
                    let _ = writeln!(
                        out,
                        "branch {k}: vol {:.p$e}  cs {:.p$e}  err {:.2e}{}",
                        e.value.im,
                        -e.value.re,
                        e.error,
                        if b.converged() { "" } else { "  (not converged)" }
                    );
                }
                None => {
                    let _ = writeln!(out, "branch {k}: lost ({})", b.failure.as_ref().map(|f| f.1.as_str()).unwrap_or("?"));
                }
            }
        }
    } else {
        emit(&report, None, out)?;
    }
    Ok(if converged > 0 { EXIT_OK } else { EXIT_NO_SOLUTION })
}

fn verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let cases: Vec<IdentityCase> = match &a.case {
        Some(name) => vec![find_case(name).ok_or_else(|| usage(format!("unknown case '{name}'")))?],
        None => CASES.to_vec(),
    };
    if a.trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }
    let reports: Vec<_> = cases
        .iter()
        .map(|c| if a.corrupt { check_identity_corrupted(c, a.trials, a.seed) } else { check_identity(c, a.trials, a.seed) })
        .collect();
    let pass = reports.iter().all(|r| r.pass);
    let report = json!({
        "rngSeed": a.seed,
        "trials": a.trials,
        "pass": pass,
        "cases": reports,
    });
    emit(&report, a.json_out.as_ref(), out)?;
    Ok(if pass { EXIT_OK } else { EXIT_NUMERIC })
}

fn parse_vector(text: &str) -> Result<Vec<Complex64>, Failure> {
    let v: Value = serde_json::from_str(text).map_err(|e| usage(format!("bad vector JSON: {e}")))?;
    let items = v.as_array().ok_or_else(|| usage("vector must be a JSON array"))?;
    items
        .iter()
        .map(|it| match it {
            Value::Number(n) => n.as_f64().map(|re| Complex64::new(re, 0.0)),
            Value::Array(p) if p.len() == 2 => Some(Complex64::new(p[0].as_f64()?, p[1].as_f64()?)),
            _ => None,
        })
        .map(|c| c.ok_or_else(|| usage("entries must be numbers or [re, im] pairs")))
        .collect()
}

/// The point a fixture is built around: `a = e^{2πi/3}` for the figure-eight
/// and `a = −(1+i)/2` for the trefoil.
fn nominal_theta(e: Embedding) -> Option<Vec<Complex64>> {
    match e {
        Embedding::Fig8Ansatz => Some(vec![Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0)]),
        Embedding::TrefoilAnsatz => Some(vec![Complex64::new(-0.5, -0.5)]),
        Embedding::Generic => None,
    }
}

fn trace(a: &TraceArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let braid = parse_braid_opts(&a.braid, a.strands, false).map_err(|e| usage(e.to_string()))?;
    let x0: Vec<Dd> = match (&a.fixture, &a.x) {
        (Some(name), _) => {
            let e = Embedding::from_name(name)
                .filter(|e| *e != Embedding::Generic)
                .ok_or_else(|| usage(format!("unknown fixture '{name}'")))?;
            if e.strands() != Some(braid.n) {
                return Err(usage(format!("fixture {name} needs {} strands, braid has {}", e.strands().unwrap_or(0), braid.n)));
            }
            if !(a.delta > 0.0) {
                return Err(usage("--delta must be positive"));
            }
            let theta = match &a.theta {
                Some(t) => parse_vector(t)?,
                None => nominal_theta(e).expect("named fixtures have a nominal point"),
            };
            if theta.len() != e.theta_dim(braid.n) {
                return Err(usage(format!("--theta needs {} entries", e.theta_dim(braid.n))));
            }
            let th: Vec<Dd> = theta.iter().map(|&c| dd(c)).collect();
            e.embed(braid.n, &th, &dd(Complex64::new(a.delta, 0.0)))
        }
        (None, Some(x)) => parse_vector(x)?.into_iter().map(dd).collect(),
        (None, None) => vec![dd(Complex64::new(1.0, 0.0)); 3 * braid.n + 1],
    };
    if x0.len() != 3 * braid.n + 1 {
        return Err(usage(format!("initial vector needs {} entries, got {}", 3 * braid.n + 1, x0.len())));
    }
    // Exact evaluation: double-double cancels badly near the fixtures'
    // removable singularities.
    let xq: Vec<QI> = x0.iter().map(dd_to_exact).collect();
    let traj = run_pattern(&braid, &xq).map_err(|e| numeric(e.to_string()))?;
    let ys: Vec<Value> = traj
        .seeds
        .iter()
        .map(|s| {
            ClusterSeed::new(s.clone(), traj.b.clone())
                .and_then(|seed| y_from_x(&seed))
                .map(|y| json::complex_vec(&y.0.iter().map(Scalar::to_c64).collect::<Vec<_>>()))
        })
        .collect::<crate::Result<_>>()
        .map_err(|e| numeric(e.to_string()))?;
    let res: Vec<QI> = traj.last().iter().zip(traj.first()).map(|(p, q)| p - q).collect();
    let mut report = json::trajectory(&traj.map(Scalar::to_c64));
    report["fixture"] = json!(a.fixture);
    report["delta"] = json!(a.fixture.as_ref().map(|_| a.delta));
    report["y"] = Value::Array(ys);
    report["residual"] = json!(inf_norm(&res));
    emit(&report, a.json_out.as_ref(), out)?;
    Ok(EXIT_OK)
}
