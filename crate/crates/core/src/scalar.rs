//! Field abstraction shared by the numeric and exact code paths.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive, Zero};
use twofloat::TwoFloat;

/// Double-double complex numbers (~106 bits of mantissa).
pub type Dd = Complex<TwoFloat>;
/// Exact Gaussian rationals.
pub type QI = Complex<BigRational>;

pub trait Scalar: Num + Neg<Output = Self> + Clone + Debug + Send + Sync {
    fn from_int(v: i64) -> Self;
    fn to_c64(&self) -> Complex64;

    fn powi(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Scalar for Complex64 {
    fn from_int(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
}

impl Scalar for Dd {
    fn from_int(v: i64) -> Self {
        Complex::new(TwoFloat::from(v as f64), TwoFloat::zero())
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(f64::from(self.re), f64::from(self.im))
    }
}

impl Scalar for BigRational {
    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }
}

impl Scalar for QI {
    fn from_int(v: i64) -> Self {
        Complex::new(BigRational::from_int(v), BigRational::zero())
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

pub fn dd(c: Complex64) -> Dd {
    Complex::new(TwoFloat::from(c.re), TwoFloat::from(c.im))
}

/// Exact rational image of a double-double value.
pub fn dd_to_exact(c: &Dd) -> QI {
    let part = |t: TwoFloat| {
        BigRational::from_float(t.hi()).unwrap_or_default()
            + BigRational::from_float(t.lo()).unwrap_or_default()
    };
    Complex::new(part(c.re), part(c.im))
}

pub fn exact_to_dd(q: &QI) -> Dd {
    let part = |r: &BigRational| {
        let hi = r.to_f64().unwrap_or(f64::NAN);
        let rest = r - BigRational::from_float(hi).unwrap_or_default();
        TwoFloat::new_add(hi, rest.to_f64().unwrap_or(0.0))
    };
    Complex::new(part(&q.re), part(&q.im))
}

/// Closeness test for the floating instances: `|a-b| <= max(abs, rel*max(|a|,|b|))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rel: 1e-9, abs: 1e-12 }
    }
}

impl Tolerance {
    pub fn close<S: Scalar>(&self, a: &S, b: &S) -> bool {
        let (a, b) = (a.to_c64(), b.to_c64());
        (a - b).norm() <= self.abs.max(self.rel * a.norm().max(b.norm()))
    }

    pub fn close_vec<S: Scalar>(&self, a: &[S], b: &[S]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(u, v)| self.close(u, v))
    }
}

pub fn inf_norm<S: Scalar>(v: &[S]) -> f64 {
    v.iter().map(|c| c.to_c64().norm()).fold(0.0, f64::max)
}
