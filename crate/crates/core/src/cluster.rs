//! Seeds, exchange matrices, x/y mutation and the index transpositions `s_{i,j}`.
//!
//! Indices are 1-based at the API boundary.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExchangeMatrix {
    size: usize,
    b: Vec<i32>,
}

impl ExchangeMatrix {
    pub fn zeros(size: usize) -> Self {
        ExchangeMatrix { size, b: vec![0; size * size] }
    }

    pub fn from_rows(rows: &[Vec<i32>]) -> Result<Self> {
        let size = rows.len();
        let mut m = Self::zeros(size);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != size {
                return Err(Error::LengthMismatch { expected: size, got: row.len() });
            }
            for (j, &v) in row.iter().enumerate() {
                m.b[i * size + j] = v;
            }
        }
        for i in 1..=size {
            for j in i..=size {
                if m.get(i, j) != -m.get(j, i) {
                    return Err(Error::NotSkew { i, j });
                }
            }
        }
        Ok(m)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i32 {
        self.b[(i - 1) * self.size + (j - 1)]
    }

    fn set_skew(&mut self, i: usize, j: usize, v: i32) {
        let n = self.size;
        self.b[(i - 1) * n + (j - 1)] = v;
        self.b[(j - 1) * n + (i - 1)] = -v;
    }

    pub fn rows(&self) -> Vec<Vec<i32>> {
        self.b.chunks(self.size).map(|r| r.to_vec()).collect()
    }

    pub fn is_skew_symmetric(&self) -> bool {
        (1..=self.size).all(|i| (1..=self.size).all(|j| self.get(i, j) == -self.get(j, i)))
    }

    fn check(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.size {
            Err(Error::IndexOutOfRange { index: k, size: self.size })
        } else {
            Ok(())
        }
    }

    /// Matrix mutation: negate row/column k, otherwise
    /// `b_ij + (|b_ik| b_kj + b_ik |b_kj|) / 2`.
    pub fn mutate(&self, k: usize) -> Result<Self> {
        self.check(k)?;
        let n = self.size;
        let mut out = self.clone();
        for i in 1..=n {
            for j in 1..=n {
                let v = if i == k || j == k {
                    -self.get(i, j)
                } else {
                    let (bik, bkj) = (self.get(i, k), self.get(k, j));
                    self.get(i, j) + (bik.abs() * bkj + bik * bkj.abs()) / 2
                };
                out.b[(i - 1) * n + (j - 1)] = v;
            }
        }
        Ok(out)
    }

    pub fn permute(&self, i: usize, j: usize) -> Result<Self> {
        self.check(i)?;
        self.check(j)?;
        let n = self.size;
        let sw = |r: usize| if r == i { j } else if r == j { i } else { r };
        let mut out = self.clone();
        for r in 1..=n {
            for c in 1..=n {
                out.b[(r - 1) * n + (c - 1)] = self.get(sw(r), sw(c));
            }
        }
        Ok(out)
    }
}

/// Quiver of the triangulated disk with `n` strands: `3n+1` nodes, one
/// four-arrow block per strand.
pub fn build_exchange_matrix(n: usize) -> Result<ExchangeMatrix> {
    if n < 2 {
        return Err(Error::InvalidStrandCount(n));
    }
    let mut m = ExchangeMatrix::zeros(3 * n + 1);
    for j in 1..=n {
        m.set_skew(3 * j - 2, 3 * j - 1, 1);
        m.set_skew(3 * j - 2, 3 * j, -1);
        m.set_skew(3 * j - 1, 3 * j + 1, 1);
        m.set_skew(3 * j, 3 * j + 1, -1);
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterSeed<S> {
    pub x: Vec<S>,
    pub b: ExchangeMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct YVector<S>(pub Vec<S>);

impl<S: Scalar> ClusterSeed<S> {
    pub fn new(x: Vec<S>, b: ExchangeMatrix) -> Result<Self> {
        if x.len() != b.size() {
            return Err(Error::LengthMismatch { expected: b.size(), got: x.len() });
        }
        Ok(ClusterSeed { x, b })
    }

    /// 1-based accessor.
    pub fn at(&self, i: usize) -> &S {
        &self.x[i - 1]
    }
}

pub fn mutate<S: Scalar>(seed: &ClusterSeed<S>, k: usize) -> Result<ClusterSeed<S>> {
    let b = &seed.b;
    b.check(k)?;
    let xk = &seed.x[k - 1];
    if xk.is_zero() {
        return Err(Error::DivisionByZero { index: k });
    }
    let mut plus = S::one();
    let mut minus = S::one();
    for j in 1..=b.size() {
        let e = b.get(j, k);
        if e > 0 {
            plus = plus * seed.x[j - 1].powi(e as u32);
        } else if e < 0 {
            minus = minus * seed.x[j - 1].powi((-e) as u32);
        }
    }
    let mut x = seed.x.clone();
    x[k - 1] = (plus + minus) / xk.clone();
    Ok(ClusterSeed { x, b: b.mutate(k)? })
}

/// `y_j = prod_k x_k^{b_kj}`.
pub fn y_from_x<S: Scalar>(seed: &ClusterSeed<S>) -> Result<YVector<S>> {
    let b = &seed.b;
    if let Some(k) = seed.x.iter().position(|v| v.is_zero()) {
        return Err(Error::DivisionByZero { index: k + 1 });
    }
    let n = b.size();
    let y = (1..=n)
        .map(|j| {
            let (mut num, mut den) = (S::one(), S::one());
            for k in 1..=n {
                let e = b.get(k, j);
                if e > 0 {
                    num = num * seed.x[k - 1].powi(e as u32);
                } else if e < 0 {
                    den = den * seed.x[k - 1].powi((-e) as u32);
                }
            }
            num / den
        })
        .collect();
    Ok(YVector(y))
}

pub fn mutate_y<S: Scalar>(
    y: &YVector<S>,
    b: &ExchangeMatrix,
    k: usize,
) -> Result<(YVector<S>, ExchangeMatrix)> {
    b.check(k)?;
    if y.0.len() != b.size() {
        return Err(Error::LengthMismatch { expected: b.size(), got: y.0.len() });
    }
    let yk = y.0[k - 1].clone();
    let one_plus = S::one() + yk.clone();
    if yk.is_zero() || one_plus.is_zero() {
        return Err(Error::SingularY { index: k });
    }
    let one_plus_inv = S::one() + S::one() / yk.clone();
    let out = (1..=b.size())
        .map(|i| {
            let yi = y.0[i - 1].clone();
            if i == k {
                return S::one() / yk.clone();
            }
            let bki = b.get(k, i);
            if bki > 0 {
                yi / one_plus_inv.powi(bki as u32)
            } else if bki < 0 {
                yi * one_plus.powi((-bki) as u32)
            } else {
                yi
            }
        })
        .collect();
    Ok((YVector(out), b.mutate(k)?))
}

pub trait Permute: Sized {
    fn permute(&self, i: usize, j: usize) -> Result<Self>;
}

fn swap_checked<T: Clone>(v: &[T], i: usize, j: usize) -> Result<Vec<T>> {
    for &k in &[i, j] {
        if k == 0 || k > v.len() {
            return Err(Error::IndexOutOfRange { index: k, size: v.len() });
        }
    }
    let mut out = v.to_vec();
    out.swap(i - 1, j - 1);
    Ok(out)
}

impl<S: Scalar> Permute for ClusterSeed<S> {
    fn permute(&self, i: usize, j: usize) -> Result<Self> {
        Ok(ClusterSeed { x: swap_checked(&self.x, i, j)?, b: self.b.permute(i, j)? })
    }
}

impl<S: Scalar> Permute for YVector<S> {
    fn permute(&self, i: usize, j: usize) -> Result<Self> {
        Ok(YVector(swap_checked(&self.0, i, j)?))
    }
}

impl<S: Scalar> Permute for (YVector<S>, ExchangeMatrix) {
    fn permute(&self, i: usize, j: usize) -> Result<Self> {
        Ok((self.0.permute(i, j)?, self.1.permute(i, j)?))
    }
}

impl Permute for ExchangeMatrix {
    fn permute(&self, i: usize, j: usize) -> Result<Self> {
        ExchangeMatrix::permute(self, i, j)
    }
}

/// `s_{i,j}`: swap labels i and j (variables together with rows/columns of B).
pub fn permute<T: Permute>(v: &T, i: usize, j: usize) -> Result<T> {
    v.permute(i, j)
}
