//! Flattened ideal tetrahedra, one octahedron per crossing, and the complex
//! volume sum.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::dilog::{bloch_wigner, extended_rogers, plog};
use crate::error::{Error, Result};
use crate::rop::ClusterTrajectory;
use crate::scalar::Scalar;

/// Flattening residual above which (p, q) is rejected.
pub const FLATTENING_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label {
    N,
    S,
    W,
    E,
}

impl Label {
    pub fn as_char(self) -> char {
        match self {
            Label::N => 'N',
            Label::S => 'S',
            Label::W => 'W',
            Label::E => 'E',
        }
    }
}

/// Where a ledger factor comes from (window-local, 1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    In(usize),
    Out(usize),
    Xc,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Factor {
    pub source: Source,
    pub value: Complex64,
    /// +1 numerator, -1 denominator.
    pub power: i8,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ledger {
    pub sign: i8,
    pub factors: Vec<Factor>,
}

impl Ledger {
    pub fn value(&self) -> Complex64 {
        self.factors.iter().fold(Complex64::new(self.sign as f64, 0.0), |acc, f| {
            if f.power > 0 {
                acc * f.value
            } else {
                acc / f.value
            }
        })
    }

    /// `Σ ± log(factor)`; the overall sign is not a factor.
    pub fn log_sum(&self) -> Complex64 {
        self.factors.iter().map(|f| plog(f.value) * f.power as f64).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdealTetrahedron {
    pub label: Label,
    pub sign: i8,
    pub z: Complex64,
    pub p: i64,
    pub q: i64,
    /// Factors whose product is the modulus `z` (sign included).
    pub z_ledger: Ledger,
    /// Factors whose product is `1/(1-z)`.
    pub w_ledger: Ledger,
    /// Distance of the unrounded (p, q) from the integers.
    pub residual: f64,
    /// `L([z; p, q])`, unsigned.
    pub l: Complex64,
}

impl IdealTetrahedron {
    pub fn z_prime(&self) -> Complex64 {
        1.0 - 1.0 / self.z
    }

    pub fn z_dprime(&self) -> Complex64 {
        1.0 / (1.0 - self.z)
    }

    pub fn signed_l(&self) -> Complex64 {
        self.l * self.sign as f64
    }

    pub fn signed_d(&self) -> f64 {
        self.sign as f64 * bloch_wigner(self.z).unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossingOctahedron {
    /// 1-based crossing index along the braid (0 when built standalone).
    pub j: usize,
    pub i: usize,
    pub eps: i8,
    pub x_in: [Complex64; 7],
    pub x_out: [Complex64; 7],
    pub x_c: Complex64,
    pub tetrahedra: [IdealTetrahedron; 4],
}

impl CrossingOctahedron {
    pub fn max_residual(&self) -> f64 {
        self.tetrahedra.iter().map(|t| t.residual).fold(0.0, f64::max)
    }
}

type Row = (Label, i8, i8, [Source; 2], [Source; 2], i8, [Source; 2], [Source; 2]);

fn table(eps: i8) -> [Row; 4] {
    use Source::{In as X, Out as T, Xc};
    if eps > 0 {
        [
            (Label::N, -1, -1, [X(2), X(6)], [X(3), X(5)], 1, [X(3), X(5)], [X(4), Xc]),
            (Label::S, -1, -1, [T(3), T(5)], [X(3), X(5)], 1, [X(3), X(5)], [T(4), Xc]),
            (Label::W, 1, 1, [X(2), T(3)], [X(3), X(5)], -1, [X(3), X(5)], [X(1), Xc]),
            (Label::E, 1, 1, [T(5), X(6)], [X(3), X(5)], -1, [X(3), X(5)], [Xc, X(7)]),
        ]
    } else {
        [
            (Label::N, 1, -1, [X(3), X(5)], [X(2), X(6)], 1, [X(2), X(6)], [X(4), Xc]),
            (Label::S, 1, -1, [T(2), T(6)], [X(2), X(6)], 1, [X(2), X(6)], [Xc, T(4)]),
            (Label::W, -1, 1, [T(2), X(3)], [X(2), X(6)], -1, [X(2), X(6)], [X(1), Xc]),
            (Label::E, -1, 1, [X(5), T(6)], [X(2), X(6)], -1, [X(2), X(6)], [Xc, X(7)]),
        ]
    }
}

/// Build the four tetrahedra of one crossing with the default flattening
/// tolerance.
pub fn build_octahedron<S: Scalar>(x_in: &[S], x_out: &[S], x_c: &S, eps: i8) -> Result<CrossingOctahedron> {
    build_octahedron_with(x_in, x_out, x_c, eps, FLATTENING_TOL)
}

pub fn build_octahedron_with<S: Scalar>(
    x_in: &[S],
    x_out: &[S],
    x_c: &S,
    eps: i8,
    flat_tol: f64,
) -> Result<CrossingOctahedron> {
    for w in [x_in, x_out] {
        if w.len() != 7 {
            return Err(Error::LengthMismatch { expected: 7, got: w.len() });
        }
    }
    let get = |s: Source| -> &S {
        match s {
            Source::In(k) => &x_in[k - 1],
            Source::Out(k) => &x_out[k - 1],
            Source::Xc => x_c,
        }
    };
    let mut tets = Vec::with_capacity(4);
    for (label, sign, zs, zn, zd, ws, wn, wd) in table(eps) {
        let degenerate = Error::DegenerateModulus { label: label.as_char() };
        if zn.iter().chain(&zd).chain(&wn).chain(&wd).any(|&s| get(s).is_zero()) {
            return Err(degenerate);
        }
        // Modulus and 1-z in the working precision before rounding to f64.
        let z_s = S::from_int(zs as i64) * get(zn[0]).clone() * get(zn[1]).clone()
            / (get(zd[0]).clone() * get(zd[1]).clone());
        let one_minus = S::one() - z_s.clone();
        if one_minus.is_zero() {
            return Err(degenerate);
        }
        let z = z_s.to_c64();
        let ledger = |sign: i8, num: [Source; 2], den: [Source; 2]| Ledger {
            sign,
            factors: num
                .iter()
                .map(|&s| (s, 1))
                .chain(den.iter().map(|&s| (s, -1)))
                .map(|(s, power)| Factor { source: s, value: get(s).to_c64(), power })
                .collect(),
        };
        let z_ledger = ledger(zs, zn, zd);
        let w_ledger = ledger(ws, wn, wd);
        let ipi = Complex64::new(0.0, PI);
        let p_raw = (z_ledger.log_sum() - plog(z)) / ipi;
        let q_raw = (w_ledger.log_sum() + plog(one_minus.to_c64())) / ipi;
        let (p, q) = (p_raw.re.round(), q_raw.re.round());
        let residual = (p_raw - p).norm().max((q_raw - q).norm());
        if !residual.is_finite() || residual > flat_tol {
            return Err(Error::Flattening { label: label.as_char(), residual });
        }
        let (p, q) = (p as i64, q as i64);
        let l = extended_rogers(z, p, q).map_err(|_| degenerate.clone())?;
        tets.push(IdealTetrahedron { label, sign, z, p, q, z_ledger, w_ledger, residual, l });
    }
    let arr = |w: &[S]| std::array::from_fn(|k| w[k].to_c64());
    Ok(CrossingOctahedron {
        j: 0,
        i: 0,
        eps,
        x_in: arr(x_in),
        x_out: arr(x_out),
        x_c: x_c.to_c64(),
        tetrahedra: tets.try_into().expect("four rows"),
    })
}

/// `Σ sign(△) L([z; p, q])` over the four tetrahedra.
pub fn crossing_dilog(oct: &CrossingOctahedron) -> Complex64 {
    oct.tetrahedra.iter().map(IdealTetrahedron::signed_l).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct VolumeResult {
    pub total: Complex64,
    pub vol: f64,
    /// Raw `-Re(total)`.
    pub cs: f64,
    /// `cs` reduced into `(-π²/2, π²/2]`.
    pub cs_reduced: f64,
    pub crossings: Vec<CrossingOctahedron>,
}

impl VolumeResult {
    pub fn from_crossings(crossings: Vec<CrossingOctahedron>) -> Self {
        // Fixed left-to-right order keeps the sum reproducible.
        let total: Complex64 = crossings.iter().map(crossing_dilog).fold(Complex64::new(0.0, 0.0), |a, b| a + b);
        let cs = -total.re;
        VolumeResult { total, vol: total.im, cs, cs_reduced: reduce_cs(cs), crossings }
    }

    /// `Σ sign·D(z)` over every tetrahedron.
    pub fn bloch_wigner_sum(&self) -> f64 {
        self.crossings.iter().flat_map(|c| c.tetrahedra.iter()).map(IdealTetrahedron::signed_d).sum()
    }

    pub fn max_residual(&self) -> f64 {
        self.crossings.iter().map(CrossingOctahedron::max_residual).fold(0.0, f64::max)
    }

    pub fn tetrahedra(&self) -> impl Iterator<Item = &IdealTetrahedron> {
        self.crossings.iter().flat_map(|c| c.tetrahedra.iter())
    }
}

/// Representative of `cs` modulo π² in `(-π²/2, π²/2]`.
pub fn reduce_cs(cs: f64) -> f64 {
    let p2 = PI * PI;
    let mut r = cs - p2 * (cs / p2).round();
    if r <= -p2 / 2.0 {
        r += p2;
    } else if r > p2 / 2.0 {
        r -= p2;
    }
    r
}

pub fn complex_volume<S: Scalar>(traj: &ClusterTrajectory<S>) -> Result<VolumeResult> {
    complex_volume_with(traj, FLATTENING_TOL)
}

pub fn complex_volume_with<S: Scalar>(traj: &ClusterTrajectory<S>, flat_tol: f64) -> Result<VolumeResult> {
    let mut crossings = Vec::with_capacity(traj.braid.len());
    for (j, l) in traj.braid.letters.iter().enumerate() {
        let (w_in, w_out) = traj.windows(j);
        let mut oct = build_octahedron_with(w_in, w_out, &traj.xc[j], l.eps, flat_tol)
            .map_err(|e| Error::Crossing { crossing: j + 1, source: Box::new(e) })?;
        oct.j = j + 1;
        oct.i = l.i;
        crossings.push(oct);
    }
    Ok(VolumeResult::from_crossings(crossings))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rop::{apply_r_closed, central_edge};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn window() -> Vec<Complex64> {
        vec![c(1.1, 0.3), c(0.7, -0.4), c(1.3, 0.9), c(0.9, 0.2), c(-0.6, 1.1), c(1.2, -0.8), c(0.8, 0.5)]
    }

    #[test]
    fn table_moduli_plus() {
        let x = window();
        let t = apply_r_closed(&x, 1, 1).unwrap();
        let xc = central_edge(&x, 1).unwrap();
        let oct = build_octahedron_with(&x, &t, &xc, 1, 1.0).unwrap();
        let [n, s, w, e] = &oct.tetrahedra;
        let tol = 1e-12;
        assert!((n.z + x[1] * x[5] / (x[2] * x[4])).norm() < tol);
        assert!((s.z + t[2] * t[4] / (x[2] * x[4])).norm() < tol);
        assert!((w.z - x[1] * t[2] / (x[2] * x[4])).norm() < tol);
        assert!((e.z - t[4] * x[5] / (x[2] * x[4])).norm() < tol);
        assert_eq!([n.sign, s.sign, w.sign, e.sign], [-1, -1, 1, 1]);
        for tet in &oct.tetrahedra {
            // The second ledger is 1/(1-z) on any window (Ptolemy relation).
            assert!((tet.w_ledger.value() - tet.z_dprime()).norm() < 1e-10 * tet.z_dprime().norm());
            assert!((tet.z * tet.z_prime() * tet.z_dprime() + 1.0).norm() < 1e-12);
            assert!((tet.z_ledger.value() - tet.z).norm() < 1e-14);
        }
    }

    #[test]
    fn table_moduli_minus() {
        let x = window();
        let t = apply_r_closed(&x, 1, -1).unwrap();
        let xc = central_edge(&x, 1).unwrap();
        let oct = build_octahedron_with(&x, &t, &xc, -1, 1.0).unwrap();
        let [n, s, w, e] = &oct.tetrahedra;
        assert!((n.z + x[2] * x[4] / (x[1] * x[5])).norm() < 1e-12);
        assert!((s.z + t[1] * t[5] / (x[1] * x[5])).norm() < 1e-12);
        assert!((w.z - t[1] * x[2] / (x[1] * x[5])).norm() < 1e-12);
        assert!((e.z - x[4] * t[5] / (x[1] * x[5])).norm() < 1e-12);
        assert_eq!([n.sign, s.sign, w.sign, e.sign], [1, 1, -1, -1]);
        for tet in &oct.tetrahedra {
            assert!((tet.w_ledger.value() - tet.z_dprime()).norm() < 1e-10 * tet.z_dprime().norm());
        }
    }

    #[test]
    fn degenerate_central_edge() {
        // x2 x6 + x3 x5 = 0 gives x_c = 0 and z_N = 1.
        let x = vec![c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0), c(-0.5, 0.0), c(1.0, 0.0), c(1.0, 0.0)];
        let xc = central_edge(&x, 1).unwrap();
        assert_eq!(xc, c(0.0, 0.0));
        let err = build_octahedron(&x, &x, &xc, 1).unwrap_err();
        assert_eq!(err, Error::DegenerateModulus { label: 'N' });
    }

    #[test]
    fn reversing_signs_negates() {
        let x = window();
        let t = apply_r_closed(&x, 1, 1).unwrap();
        let xc = central_edge(&x, 1).unwrap();
        let mut oct = build_octahedron_with(&x, &t, &xc, 1, 1.0).unwrap();
        let v = crossing_dilog(&oct);
        for tet in oct.tetrahedra.iter_mut() {
            tet.sign = -tet.sign;
        }
        assert!((crossing_dilog(&oct) + v).norm() < 1e-14);
    }

    #[test]
    fn cs_reduction() {
        let p2 = PI * PI;
        assert!((reduce_cs(2.0 * p2 + 0.1) - 0.1).abs() < 1e-12);
        assert!((reduce_cs(-5.0 * p2 / 6.0) - p2 / 6.0).abs() < 1e-12);
        assert_eq!(reduce_cs(-p2 / 2.0), p2 / 2.0);
    }
}
