//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Runs under `cargo test` (harness = false).

use std::process::Command;
use std::time::{Duration, Instant};

use clustervol::build_exchange_matrix;
use clustervol::dilog::{bloch_wigner, dilog, extended_rogers};
use clustervol::verify::{braid_relation_expected, check_identity, find_case, random_point};
use clustervol::apply_r_closed;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Set in the nested no-solver run so it does not recurse.
const NESTED: &str = "CLUSTERVOL_ACCEPTANCE_NESTED";

type Outcome = Result<String, String>;

struct Suite {
    failed: Vec<u32>,
}

impl Suite {
    fn run(&mut self, id: u32, title: &str, limit: Duration, f: impl FnOnce() -> Outcome) {
        let t0 = Instant::now();
        let out = f();
        let dt = t0.elapsed();
        let (ok, detail) = match out {
            Ok(d) if dt <= limit => (true, d),
            Ok(d) => (false, format!("{d}; too slow")),
            Err(d) => (false, d),
        };
        if !ok {
            self.failed.push(id);
        }
        let limit = if limit == Duration::MAX { String::new() } else { format!(", limit {} s", limit.as_secs_f64()) };
        println!("{} [{id}] {title} ({:.3} s{limit}): {detail}", if ok { "PASS" } else { "FAIL" }, dt.as_secs_f64());
    }

    fn skip(&self, id: u32, title: &str, why: &str) {
        println!("SKIP [{id}] {title}: {why}");
    }
}

fn secs(s: f64) -> Duration {
    Duration::from_secs_f64(s)
}

fn exchange_matrix() -> Outcome {
    let golden: [[i32; 7]; 7] = [
        [0, 1, -1, 0, 0, 0, 0],
        [-1, 0, 0, 1, 0, 0, 0],
        [1, 0, 0, -1, 0, 0, 0],
        [0, -1, 1, 0, 1, -1, 0],
        [0, 0, 0, -1, 0, 0, 1],
        [0, 0, 0, 1, 0, 0, -1],
        [0, 0, 0, 0, -1, 1, 0],
    ];
    let b = build_exchange_matrix(2).map_err(|e| e.to_string())?;
    for i in 1..=7 {
        for j in 1..=7 {
            if b.get(i, j) != golden[i - 1][j - 1] {
                return Err(format!("b[{i}][{j}] = {}, expected {}", b.get(i, j), golden[i - 1][j - 1]));
            }
        }
    }
    Ok("49 entries match".into())
}

fn identities(names: &[&str], trials: usize) -> Outcome {
    let mut done = Vec::new();
    for name in names {
        let case = find_case(name).ok_or(format!("missing case {name}"))?;
        let rep = check_identity(&case, trials, 20_240_601);
        if !rep.pass {
            return Err(format!("{name} failed: {:?}", rep.witness));
        }
        done.push(format!("{name} {}/{}", rep.trials, rep.trials));
    }
    Ok(done.join(", "))
}

fn braid_relation() -> Outcome {
    let summary = identities(&["braid-relation", "far-commutativity"], 100)?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let x = random_point(&mut rng, 10);
    let r = |v: &[_], i| apply_r_closed(v, i, 1).map_err(|e| e.to_string());
    let lhs = r(&r(&r(&x, 1)?, 2)?, 1)?;
    let rhs = r(&r(&r(&x, 2)?, 1)?, 2)?;
    let expected = braid_relation_expected(&x);
    for k in 0..10 {
        if lhs[k] != expected[k] || rhs[k] != expected[k] {
            return Err(format!("audited point differs in component {}", k + 1));
        }
    }
    Ok(format!("{summary}; audited 10-tuple matches"))
}

fn dilog_layer() -> Outcome {
    use std::f64::consts::PI;
    let ln2 = 2f64.ln();
    let d = (dilog(Complex64::new(0.5, 0.0)) - (PI * PI / 12.0 - ln2 * ln2 / 2.0)).norm();
    if d > 1e-12 {
        return Err(format!("Li2(1/2) off by {d:e}"));
    }
    let l = extended_rogers(Complex64::new(0.5, 0.0), 0, 0).map_err(|e| e.to_string())?;
    let d = (l - Complex64::new(-PI * PI / 12.0, 0.0)).norm();
    if d > 1e-12 {
        return Err(format!("L(1/2; 0, 0) off by {d:e}"));
    }
    let dv = bloch_wigner(Complex64::from_polar(1.0, PI / 3.0)).map_err(|e| e.to_string())?;
    if (dv - 1.01494).abs() > 1e-5 {
        return Err(format!("D(e^(iπ/3)) = {dv}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let z = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let one = Complex64::new(1.0, 0.0);
        let d0 = bloch_wigner(z).map_err(|e| e.to_string())?;
        let d1 = bloch_wigner(one - one / z).map_err(|e| e.to_string())?;
        let d2 = bloch_wigner(one / (one - z)).map_err(|e| e.to_string())?;
        let dc = bloch_wigner(z.conj()).map_err(|e| e.to_string())?;
        worst = worst.max((d0 - d1).abs()).max((d0 - d2).abs()).max((d0 + dc).abs());
    }
    if worst > 1e-11 {
        return Err(format!("symmetry defect {worst:e}"));
    }
    Ok(format!("D(e^(iπ/3)) = {dv:.8}; worst symmetry defect {worst:.1e} over 1000 points"))
}

#[cfg(feature = "cli")]
mod end_to_end {
    use super::Outcome;
    use clustervol::dilog::bloch_wigner;
    use clustervol::solver::richardson;
    use num_complex::Complex64;
    use serde_json::Value;

    pub fn compute(braid: &str) -> Result<Value, String> {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = clustervol::cli::run(["clustervol", "compute", "--braid", braid], &mut out, &mut err);
        if code != 0 {
            return Err(format!("exit {code}: {}", String::from_utf8_lossy(&err)));
        }
        serde_json::from_slice(&out).map_err(|e| e.to_string())
    }

    pub fn c(v: &Value) -> Complex64 {
        Complex64::new(v[0].as_f64().unwrap_or(f64::NAN), v[1].as_f64().unwrap_or(f64::NAN))
    }

    fn tetrahedra(sample: &Value) -> impl Iterator<Item = &Value> {
        sample["volume"]["crossings"].as_array().into_iter().flatten().flat_map(|x| x["tetrahedra"].as_array().into_iter().flatten())
    }

    pub fn branches(report: &Value) -> Vec<&Value> {
        report["branches"].as_array().map(|b| b.iter().filter(|b| b["converged"] == true).collect()).unwrap_or_default()
    }

    pub fn figure_eight(report: &Value) -> Outcome {
        let hit = branches(report).into_iter().find(|b| {
            let t = c(&b["extrapolation"]["total"]);
            (t.im - 2.02988).abs() < 1e-4 && t.re.abs() < 1e-4
        });
        let b = hit.ok_or("no branch with vol ≈ 2.02988 and cs ≈ 0")?;
        let samples = b["samples"].as_array().ok_or("no samples")?;
        let mut worst: f64 = 0.0;
        for s in samples {
            let res: Vec<f64> = tetrahedra(s).map(|t| t["residual"].as_f64().unwrap_or(f64::INFINITY)).collect();
            if res.len() != 16 {
                return Err(format!("{} tetrahedra at δ = {}", res.len(), s["delta"]));
            }
            worst = res.into_iter().fold(worst, f64::max);
        }
        if worst >= 1e-6 {
            return Err(format!("flattening residual {worst:e}"));
        }
        let t = c(&b["extrapolation"]["total"]);
        Ok(format!("vol {:.10}, cs {:.1e}; {} δ-samples, worst flattening residual {worst:.1e}", t.im, -t.re, samples.len()))
    }

    pub fn trefoil(report: &Value) -> Outcome {
        let target = -5.0 * std::f64::consts::PI.powi(2) / 6.0;
        let want_x1 = Complex64::new(-0.5, -0.5);
        let hit = branches(report).into_iter().find(|b| {
            let t = c(&b["extrapolation"]["total"]);
            let last = b["samples"].as_array().and_then(|s| s.last()).map(|s| c(&s["x0"][0]));
            (t.re - target).abs() < 1e-3 && t.im.abs() < 1e-3 && last.is_some_and(|x| (x - want_x1).norm() < 1e-4)
        });
        let b = hit.ok_or("no branch with total ≈ −5π²/6 and x1 ≈ −(1+i)/2")?;
        let t = c(&b["extrapolation"]["total"]);
        Ok(format!("total {:.12} {:+.1e}i (−5π²/6 = {target:.12})", t.re, t.im))
    }

    /// `Im Σ sign·L − Σ sign·D(z)` per δ-sample of the matching branch, and
    /// its extrapolation to δ = 0.
    pub fn neumann(report: &Value, pick: impl Fn(&Value) -> bool) -> Result<(Vec<f64>, f64), String> {
        let b = branches(report).into_iter().find(|b| pick(b)).ok_or("branch missing")?;
        let mut defects = Vec::new();
        for s in b["samples"].as_array().ok_or("no samples")? {
            let (mut im_l, mut d) = (0.0, 0.0);
            for t in tetrahedra(s) {
                let sign = t["sign"].as_f64().ok_or("sign")?;
                im_l += sign * c(&t["L"]).im;
                d += sign * bloch_wigner(c(&t["z"])).map_err(|e| e.to_string())?;
            }
            defects.push(im_l - d);
        }
        let ratio = report["config"]["ratio"].as_f64().ok_or("ratio")?;
        let seq: Vec<Complex64> = defects.iter().map(|&d| Complex64::new(d, 0.0)).collect();
        let limit = richardson(&seq, ratio).ok_or("no samples")?.value.re;
        Ok((defects, limit))
    }
}

fn nested_core_only() -> Outcome {
    let cargo = std::env::var("CARGO").unwrap_or_else(|_| "cargo".into());
    let manifest = concat!(env!("CARGO_MANIFEST_DIR"), "/Cargo.toml");
    let target = concat!(env!("CARGO_MANIFEST_DIR"), "/../../target/core-only");
    let out = Command::new(cargo)
        .args(["test", "--quiet", "--manifest-path", manifest, "--no-default-features", "--test", "acceptance"])
        .env("CARGO_TARGET_DIR", target)
        .env(NESTED, "1")
        .output()
        .map_err(|e| format!("cannot spawn cargo: {e}"))?;
    let stdout = String::from_utf8_lossy(&out.stdout);
    let passed: Vec<u32> = (1..=5).filter(|k| stdout.lines().any(|l| l.starts_with(&format!("PASS [{k}]")))).collect();
    if !out.status.success() || passed.len() != 5 {
        return Err(format!(
            "core-only run: status {}, passed {passed:?}\n{stdout}{}",
            out.status,
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok("criteria 1–5 pass in a build without the solver feature".into())
}

fn main() {
    let mut suite = Suite { failed: Vec::new() };
    suite.run(1, "exchange matrix golden test", secs(1e-3), exchange_matrix);
    suite.run(2, "closed form ≡ composition of mutations", secs(5.0), || {
        identities(&["closed-vs-comp-n2", "closed-vs-comp-n3"], 100)
    });
    suite.run(3, "braid relation and far commutativity", secs(10.0), braid_relation);
    suite.run(4, "identity suite", secs(20.0), || {
        identities(
            &[
                "r-jones",
                "half-periodicity-35",
                "half-periodicity-26",
                "b-invariance",
                "axis-invariance",
                "completeness",
                "xy-commuting-square",
            ],
            100,
        )
    });
    suite.run(5, "dilogarithm layer", secs(2.0), dilog_layer);

    #[cfg(feature = "cli")]
    {
        use end_to_end::*;
        let mut fig8 = None;
        suite.run(6, "figure-eight end to end", secs(30.0), || {
            let r = compute("1 -2 1 -2")?;
            let out = figure_eight(&r);
            fig8 = Some(r);
            out
        });
        let mut tref = None;
        suite.run(7, "trefoil end to end", secs(20.0), || {
            let r = compute("1 1 1")?;
            let out = trefoil(&r);
            tref = Some(r);
            out
        });
        suite.run(8, "Bloch–Wigner cross-check at solved points", Duration::MAX, || {
            let f8 = fig8.as_ref().ok_or("no figure-eight report")?;
            let tr = tref.as_ref().ok_or("no trefoil report")?;
            let (fa, a) = neumann(f8, |b| (c(&b["extrapolation"]["total"]).im - 2.02988).abs() < 1e-4)?;
            let target = -5.0 * std::f64::consts::PI.powi(2) / 6.0;
            let (fb, b) = neumann(tr, |b| (c(&b["extrapolation"]["total"]).re - target).abs() < 1e-3)?;
            // The figure-eight ansatz is periodic only as δ → 0, so the
            // identity is checked at the extrapolated solution.
            let last = |v: &[f64]| v.last().copied().unwrap_or(f64::NAN).abs();
            let detail = format!(
                "δ→0 defect {:.1e} (4_1), {:.1e} (3_1); at smallest δ {:.1e}, {:.1e}",
                a.abs(),
                b.abs(),
                last(&fa),
                last(&fb)
            );
            if a.abs().max(b.abs()) > 1e-6 {
                return Err(detail);
            }
            Ok(detail)
        });
    }
    #[cfg(not(feature = "cli"))]
    for (id, title) in [(6, "figure-eight end to end"), (7, "trefoil end to end"), (8, "Bloch–Wigner cross-check")] {
        suite.skip(id, title, "built without the solver and CLI");
    }

    if std::env::var_os(NESTED).is_some() {
        suite.skip(9, "core-only property suite", "this is the core-only run");
    } else if cfg!(feature = "cli") {
        suite.run(9, "core-only property suite", Duration::MAX, nested_core_only);
    } else {
        suite.skip(9, "core-only property suite", "already without the solver; criteria 1–5 above");
    }

    if suite.failed.is_empty() {
        println!("acceptance: all criteria passed");
    } else {
        println!("acceptance: failed {:?}", suite.failed);
        std::process::exit(1);
    }
}
