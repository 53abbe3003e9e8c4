//! R-operators on seeds (mutation words and closed forms), operator words,
//! and cluster patterns along a braid.

use crate::braid::BraidWord;
use crate::cluster::{build_exchange_matrix, mutate, permute, ClusterSeed, ExchangeMatrix, YVector};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A letter of an operator word. Words are written as operator products and
/// act right-to-left.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Mu(usize),
    S(usize, usize),
    R(usize, i8),
}

pub fn apply_word<S: Scalar>(seed: &ClusterSeed<S>, word: &[Op]) -> Result<ClusterSeed<S>> {
    let mut s = seed.clone();
    for op in word.iter().rev() {
        s = match *op {
            Op::Mu(k) => mutate(&s, k)?,
            Op::S(i, j) => permute(&s, i, j)?,
            Op::R(i, e) => apply_r_comp(&s, i, e)?,
        };
    }
    Ok(s)
}

/// The seven-letter mutation word of `R_i^eps`.
pub fn r_word(i: usize, eps: i8) -> [Op; 7] {
    let k = 3 * i;
    if eps > 0 {
        [Op::S(k, k + 2), Op::S(k - 1, k + 2), Op::S(k, k + 3), Op::Mu(k + 1), Op::Mu(k - 1), Op::Mu(k + 3), Op::Mu(k + 1)]
    } else {
        [Op::S(k, k + 3), Op::S(k - 1, k + 2), Op::S(k, k + 2), Op::Mu(k + 1), Op::Mu(k + 2), Op::Mu(k), Op::Mu(k + 1)]
    }
}

fn check_generator(len: usize, i: usize) -> Result<()> {
    if i == 0 || 3 * i + 4 > len {
        return Err(Error::IndexOutOfRange { index: i, size: len.saturating_sub(4) / 3 });
    }
    Ok(())
}

/// Compositional R. Returns the new seed and x_c, the output of the first
/// `μ_{3i+1}`.
pub fn apply_r_comp_traced<S: Scalar>(seed: &ClusterSeed<S>, i: usize, eps: i8) -> Result<(ClusterSeed<S>, S)> {
    check_generator(seed.x.len(), i)?;
    let word = r_word(i, eps);
    let first = mutate(seed, 3 * i + 1)?;
    let xc = first.x[3 * i].clone();
    let out = apply_word(&first, &word[..6])?;
    if out.b != seed.b {
        return Err(Error::Invalid(format!("exchange matrix not invariant under R_{i}^{eps}")));
    }
    Ok((out, xc))
}

pub fn apply_r_comp<S: Scalar>(seed: &ClusterSeed<S>, i: usize, eps: i8) -> Result<ClusterSeed<S>> {
    apply_r_comp_traced(seed, i, eps).map(|r| r.0)
}

fn nonzero<S: Scalar>(x: &[S], off: usize, locals: &[usize]) -> Result<()> {
    for &l in locals {
        if x[off + l - 1].is_zero() {
            return Err(Error::DivisionByZero { index: off + l });
        }
    }
    Ok(())
}

fn window_r<S: Scalar>(w: &[S], eps: i8, corrupt: bool) -> [S; 7] {
    let [x1, x2, x3, x4, x5, x6, x7] = [0, 1, 2, 3, 4, 5, 6].map(|k| w[k].clone());
    let m = |v: &[&S]| v.iter().fold(S::one(), |acc, t| acc * (*t).clone());
    if eps > 0 {
        let a = m(&[&x1, &x3, &x5]) + m(&[&x3, &x4, &x5]);
        let a = if corrupt { a - m(&[&x1, &x2, &x6]) } else { a + m(&[&x1, &x2, &x6]) };
        let y3 = a / m(&[&x2, &x4]);
        let y4 = (m(&[&x1, &x3, &x4, &x5]) + m(&[&x3, &x4, &x4, &x5]) + m(&[&x1, &x3, &x5, &x7])
            + m(&[&x3, &x4, &x5, &x7]) + m(&[&x1, &x2, &x6, &x7]))
            / m(&[&x2, &x4, &x6]);
        let y5 = (m(&[&x3, &x4, &x5]) + m(&[&x3, &x5, &x7]) + m(&[&x2, &x6, &x7])) / m(&[&x4, &x6]);
        [x1, x5, y3, y4, y5, x3, x7]
    } else {
        let y2 = (m(&[&x1, &x3, &x5]) + m(&[&x1, &x2, &x6]) + m(&[&x2, &x4, &x6])) / m(&[&x3, &x4]);
        let y4 = (m(&[&x1, &x2, &x4, &x6]) + m(&[&x2, &x4, &x4, &x6]) + m(&[&x1, &x3, &x5, &x7])
            + m(&[&x1, &x2, &x6, &x7]) + m(&[&x2, &x4, &x6, &x7]))
            / m(&[&x3, &x4, &x5]);
        let y6 = (m(&[&x2, &x4, &x6]) + m(&[&x3, &x5, &x7]) + m(&[&x2, &x6, &x7])) / m(&[&x4, &x5]);
        [x1, y2, x6, y4, x2, y6, x7]
    }
}

fn closed_impl<S: Scalar>(x: &[S], i: usize, eps: i8, corrupt: bool) -> Result<Vec<S>> {
    check_generator(x.len(), i)?;
    let off = 3 * i - 3;
    nonzero(x, off, if eps > 0 { &[2, 4, 6] } else { &[3, 4, 5] })?;
    let w = window_r(&x[off..off + 7], eps, corrupt);
    let mut out = x.to_vec();
    out[off..off + 7].clone_from_slice(&w);
    Ok(out)
}

/// Closed-form action of `R_i^eps` on the variable vector; entries outside
/// the window `3i-2..3i+4` pass through.
pub fn apply_r_closed<S: Scalar>(x: &[S], i: usize, eps: i8) -> Result<Vec<S>> {
    closed_impl(x, i, eps, false)
}

/// `apply_r_closed` with one sign flipped in the `R` numerator; used to
/// check that the identity checker actually detects wrong maps.
pub fn apply_r_closed_corrupted<S: Scalar>(x: &[S], i: usize, eps: i8) -> Result<Vec<S>> {
    closed_impl(x, i, eps, true)
}

/// `x_c = (x2 x6 + x3 x5) / x4` in window coordinates.
pub fn central_edge<S: Scalar>(x: &[S], i: usize) -> Result<S> {
    check_generator(x.len(), i)?;
    let off = 3 * i - 3;
    nonzero(x, off, &[4])?;
    let w = |k: usize| x[off + k - 1].clone();
    Ok((w(2) * w(6) + w(3) * w(5)) / w(4))
}

/// Closed-form action on y-variables.
pub fn apply_r_y<S: Scalar>(y: &YVector<S>, b: &ExchangeMatrix, i: usize, eps: i8) -> Result<YVector<S>> {
    let y = &y.0;
    if y.len() != b.size() {
        return Err(Error::LengthMismatch { expected: b.size(), got: y.len() });
    }
    check_generator(y.len(), i)?;
    let off = 3 * i - 3;
    let w = |k: usize| y[off + k - 1].clone();
    let (y1, y2, y3, y4, y5, y6, y7) = (w(1), w(2), w(3), w(4), w(5), w(6), w(7));
    let one = S::one();
    let guard = |v: &S, local: usize| {
        if v.is_zero() {
            Err(Error::SingularY { index: off + local })
        } else {
            Ok(())
        }
    };
    let new = if eps > 0 {
        let a = one.clone() + y2.clone() + y2.clone() * y4.clone();
        let c = one.clone() + y6.clone() + y4.clone() * y6.clone();
        let p = one + y2.clone() + y6.clone() + y2.clone() * y6.clone() + y2.clone() * y4.clone() * y6.clone();
        guard(&y2, 2)?;
        guard(&y4, 4)?;
        guard(&y6, 6)?;
        guard(&a, 2)?;
        guard(&c, 6)?;
        guard(&p, 4)?;
        [
            y1 * a.clone(),
            y2.clone() * y4.clone() * y5 * y6.clone() / p.clone(),
            p.clone() / (y2.clone() * y4.clone()),
            y4.clone() / (a * c.clone()),
            p.clone() / (y4.clone() * y6.clone()),
            y2 * y3 * y4 * y6 / p,
            c * y7,
        ]
    } else {
        let a = one.clone() + y4.clone() + y3.clone() * y4.clone();
        let c = one.clone() + y4.clone() + y4.clone() * y5.clone();
        let q = one + y4.clone() + y3.clone() * y4.clone() + y4.clone() * y5.clone() + y3.clone() * y4.clone() * y5.clone();
        guard(&y3, 3)?;
        guard(&y4, 4)?;
        guard(&y5, 5)?;
        guard(&a, 3)?;
        guard(&c, 5)?;
        guard(&q, 4)?;
        [
            y1 * y3.clone() * y4.clone() / a.clone(),
            y5.clone() / q.clone(),
            q.clone() * y6,
            a * c.clone() / (y3.clone() * y4.clone() * y5.clone()),
            y2 * q.clone(),
            y3 / q,
            y4 * y5 * y7 / c,
        ]
    };
    let mut out = y.clone();
    out[off..off + 7].clone_from_slice(&new);
    Ok(YVector(out))
}

/// Cluster pattern `x[1], ..., x[m+1]` along a braid word.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterTrajectory<S> {
    pub braid: BraidWord,
    pub b: ExchangeMatrix,
    pub seeds: Vec<Vec<S>>,
    /// Central edge parameter of crossing j, window of `x[j]`.
    pub xc: Vec<S>,
}

impl<S: Scalar> ClusterTrajectory<S> {
    pub fn first(&self) -> &[S] {
        &self.seeds[0]
    }

    pub fn last(&self) -> &[S] {
        self.seeds.last().expect("trajectory is never empty")
    }

    /// Input and output 7-windows of crossing `j` (0-based).
    pub fn windows(&self, j: usize) -> (&[S], &[S]) {
        let off = 3 * self.braid.letters[j].i - 3;
        (&self.seeds[j][off..off + 7], &self.seeds[j + 1][off..off + 7])
    }

    pub fn map<T>(&self, f: impl Fn(&S) -> T) -> ClusterTrajectory<T> {
        ClusterTrajectory {
            braid: self.braid.clone(),
            b: self.b.clone(),
            seeds: self.seeds.iter().map(|s| s.iter().map(&f).collect()).collect(),
            xc: self.xc.iter().map(&f).collect(),
        }
    }
}

pub fn run_pattern<S: Scalar>(braid: &BraidWord, x0: &[S]) -> Result<ClusterTrajectory<S>> {
    let b = build_exchange_matrix(braid.n)?;
    if x0.len() != b.size() {
        return Err(Error::LengthMismatch { expected: b.size(), got: x0.len() });
    }
    let mut seeds = Vec::with_capacity(braid.len() + 1);
    let mut xc = Vec::with_capacity(braid.len());
    seeds.push(x0.to_vec());
    for (j, l) in braid.letters.iter().enumerate() {
        let cur = &seeds[j];
        let c = central_edge(cur, l.i).map_err(|e| e.at_step(j + 1))?;
        let next = apply_r_closed(cur, l.i, l.eps).map_err(|e| e.at_step(j + 1))?;
        xc.push(c);
        seeds.push(next);
    }
    Ok(ClusterTrajectory { braid: braid.clone(), b, seeds, xc })
}

/// Periodicity residual `x[m+1] - x[1]`.
pub fn residual<S: Scalar>(x0: &[S], braid: &BraidWord) -> Result<Vec<S>> {
    let t = run_pattern(braid, x0)?;
    Ok(t.last().iter().zip(x0).map(|(a, b)| a.clone() - b.clone()).collect())
}
