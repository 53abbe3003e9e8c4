//! Principal-branch dilogarithm and the volume functions built on it.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const PI2_6: f64 = PI * PI / 6.0;

/// `B_{2k}` for k = 1..15.
const BERNOULLI: [(f64, f64); 15] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174611.0, 330.0),
    (854513.0, 138.0),
    (-236364091.0, 2730.0),
    (8553103.0, 6.0),
    (-23749461029.0, 870.0),
    (8615841276005.0, 14322.0),
];

/// Principal logarithm with `arg ∈ (-π, π]`: a negative zero imaginary part
/// is treated as `+0`.
pub fn plog(z: Complex64) -> Complex64 {
    let z = if z.im == 0.0 { Complex64::new(z.re, 0.0) } else { z };
    z.ln()
}

/// `Σ B_n u^{n+1}/(n+1)!`, i.e. Li2(1 - e^{-u}).
fn bernoulli_series(u: Complex64) -> Complex64 {
    let u2 = u * u;
    let mut term = u; // u^{2k+1}/(2k+1)! built incrementally
    let mut sum = u - u2 / 4.0;
    for (k, (num, den)) in BERNOULLI.iter().enumerate() {
        let n = 2 * k + 2;
        term = term * u2 / ((n * (n + 1)) as f64);
        let t = term * (num / den);
        sum += t;
        if t.norm() < 1e-18 * sum.norm() {
            break;
        }
    }
    sum
}

fn li2_unit(z: Complex64) -> Complex64 {
    // |z| <= 1 here.
    if z.re <= 0.5 {
        bernoulli_series(-plog(Complex64::new(1.0, 0.0) - z))
    } else {
        let u = -plog(z);
        -bernoulli_series(u) + PI2_6 + u * plog(Complex64::new(1.0, 0.0) - z)
    }
}

/// Principal-branch Li₂. On the cut `(1, ∞)` the value is the limit from
/// below (`Im z → 0⁻`).
pub fn dilog(z: Complex64) -> Complex64 {
    if z == Complex64::new(0.0, 0.0) {
        return Complex64::new(0.0, 0.0);
    }
    if z == Complex64::new(1.0, 0.0) {
        return Complex64::new(PI2_6, 0.0);
    }
    if z.im == 0.0 && z.re > 1.0 {
        // The real part is branch-independent; pick the lower side for Im.
        return Complex64::new(li2_off_cut(z).re, -PI * z.re.ln());
    }
    li2_off_cut(z)
}

fn li2_off_cut(z: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    if z.norm_sqr() <= 1.0 {
        li2_unit(z)
    } else if z.re > 0.5 && (z - one).norm_sqr() <= 1.0 {
        let u = -plog(z);
        -bernoulli_series(u) + PI2_6 + u * plog(one - z)
    } else {
        let l = plog(-z);
        -li2_unit(one / z) - PI2_6 - 0.5 * l * l
    }
}

/// Bloch–Wigner function `D(z) = Im Li₂(z) + arg(1-z) log|z|`.
pub fn bloch_wigner(z: Complex64) -> Result<f64> {
    if z == Complex64::new(0.0, 0.0) || z == Complex64::new(1.0, 0.0) {
        return Err(Error::DegenerateModulus { label: '-' });
    }
    Ok(dilog(z).im + plog(Complex64::new(1.0, 0.0) - z).im * z.norm().ln())
}

/// Extended Rogers dilogarithm
/// `L([z;p,q]) = Li₂(z) + ½ log z log(1-z) + (πi/2)(q log z + p log(1-z)) - π²/6`.
pub fn extended_rogers(z: Complex64, p: i64, q: i64) -> Result<Complex64> {
    if z == Complex64::new(0.0, 0.0) || z == Complex64::new(1.0, 0.0) {
        return Err(Error::DegenerateModulus { label: '-' });
    }
    let lz = plog(z);
    let l1 = plog(Complex64::new(1.0, 0.0) - z);
    let ipi2 = Complex64::new(0.0, PI / 2.0);
    Ok(dilog(z) + 0.5 * lz * l1 + ipi2 * (q as f64 * lz + p as f64 * l1) - PI2_6)
}
