use num_complex::Complex64;

use crate::braid::BraidWord;
use crate::error::{Error, Result};
use crate::rop::residual;
use crate::scalar::Scalar;

/// How the free parameters θ and the degeneration parameter δ fill in the
/// initial cluster variables `x[1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Embedding {
    /// `(a, δ, δ, 1, aδ, a²δ, a, −δ, −δ, 1)` on three strands, θ = (a).
    Fig8Ansatz,
    /// `(a, δ, δ, 1, aδ, a²δ, 1)` on two strands, θ = (a).
    TrefoilAnsatz,
    /// Every coordinate free except `x2 = δ·x1`, `x3 = δ·x4`, `x_N = 1`.
    Generic,
}

impl Embedding {
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "fig8-ansatz" => Some(Embedding::Fig8Ansatz),
            "trefoil-ansatz" => Some(Embedding::TrefoilAnsatz),
            "generic" => Some(Embedding::Generic),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Embedding::Fig8Ansatz => "fig8-ansatz",
            Embedding::TrefoilAnsatz => "trefoil-ansatz",
            Embedding::Generic => "generic",
        }
    }

    /// The shipped fixture whose braid word is exactly `braid`, if any.
    pub fn fixture_for(braid: &BraidWord) -> Option<Self> {
        let word: Vec<i64> = braid.letters.iter().map(|l| l.eps as i64 * l.i as i64).collect();
        match (braid.n, word.as_slice()) {
            (3, [1, -2, 1, -2]) => Some(Embedding::Fig8Ansatz),
            (2, [1, 1, 1]) => Some(Embedding::TrefoilAnsatz),
            _ => None,
        }
    }

    pub fn strands(self) -> Option<usize> {
        match self {
            Embedding::Fig8Ansatz => Some(3),
            Embedding::TrefoilAnsatz => Some(2),
            Embedding::Generic => None,
        }
    }

    pub fn theta_dim(self, n: usize) -> usize {
        match self {
            Embedding::Generic => 3 * n + 1 - 3,
            _ => 1,
        }
    }

    pub fn embed<S: Scalar>(self, n: usize, theta: &[S], delta: &S) -> Vec<S> {
        let one = S::one();
        let d = delta.clone();
        match self {
            Embedding::Fig8Ansatz | Embedding::TrefoilAnsatz => {
                let a = theta[0].clone();
                let mut x = vec![
                    a.clone(),
                    d.clone(),
                    d.clone(),
                    one.clone(),
                    a.clone() * d.clone(),
                    a.clone() * a.clone() * d.clone(),
                ];
                if self == Embedding::Fig8Ansatz {
                    x.extend([a, -d.clone(), -d, one]);
                } else {
                    x.push(one);
                }
                x
            }
            Embedding::Generic => {
                let size = 3 * n + 1;
                let mut x = vec![one.clone(); size];
                x[0] = theta[0].clone();
                for k in 4..size {
                    x[k - 1] = theta[k - 3].clone();
                }
                x[1] = d.clone() * x[0].clone();
                x[2] = d * x[3].clone();
                x
            }
        }
    }

    /// 1-based coordinates that stay O(1) as δ → 0.
    pub fn large(self, n: usize) -> Vec<usize> {
        match self {
            Embedding::Fig8Ansatz => vec![1, 4, 7, 10],
            Embedding::TrefoilAnsatz => vec![1, 4, 7],
            Embedding::Generic => (1..=3 * n + 1).filter(|&k| k != 2 && k != 3).collect(),
        }
    }

    /// Direction η of the approach offset: volumes are evaluated at θ* + δη.
    pub fn approach(self, n: usize) -> Vec<Complex64> {
        let one = Complex64::new(1.0, 0.0);
        match self {
            Embedding::Fig8Ansatz => vec![one],
            _ => vec![Complex64::new(0.0, 0.0); self.theta_dim(n)],
        }
    }

    pub fn describe(self) -> Vec<String> {
        match self {
            Embedding::Fig8Ansatz => vec![
                "x = (a, δ, δ, 1, aδ, a²δ, a, −δ, −δ, 1)".into(),
                "free: a = x1".into(),
            ],
            Embedding::TrefoilAnsatz => vec!["x = (a, δ, δ, 1, aδ, a²δ, 1)".into(), "free: a = x1".into()],
            Embedding::Generic => vec!["x2 = δ·x1".into(), "x3 = δ·x4".into(), "x_N = 1".into()],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicityProblem {
    pub braid: BraidWord,
    pub embedding: Embedding,
    pub delta: f64,
}

impl PeriodicityProblem {
    pub fn new(braid: BraidWord, embedding: Embedding, delta: f64) -> Result<Self> {
        if let Some(n) = embedding.strands() {
            if braid.n != n {
                return Err(Error::Invalid(format!(
                    "{} needs {} strands, braid has {}",
                    embedding.name(),
                    n,
                    braid.n
                )));
            }
        }
        if !(delta > 0.0) {
            return Err(Error::Invalid(format!("delta must be positive, got {delta}")));
        }
        Ok(PeriodicityProblem { braid, embedding, delta })
    }

    /// Problem for `braid` using its fixture if it has one.
    pub fn for_braid(braid: BraidWord, delta: f64) -> Result<Self> {
        let e = Embedding::fixture_for(&braid).unwrap_or(Embedding::Generic);
        Self::new(braid, e, delta)
    }

    pub fn with_delta(&self, delta: f64) -> Self {
        PeriodicityProblem { delta, ..self.clone() }
    }

    pub fn theta_dim(&self) -> usize {
        self.embedding.theta_dim(self.braid.n)
    }

    pub fn point<S: Scalar>(&self, theta: &[S], delta: &S) -> Vec<S> {
        self.embedding.embed(self.braid.n, theta, delta)
    }

    /// Residual components on the large coordinates; the two end coordinates
    /// are left out because no R-operator touches them.
    pub fn leading_components(&self) -> Vec<usize> {
        let last = self.braid.arity();
        self.embedding.large(self.braid.n).into_iter().filter(|&k| k != 1 && k != last).collect()
    }

    pub fn leading_residual<S: Scalar>(&self, theta: &[S], delta: &S) -> Result<Vec<S>> {
        let x = self.point(theta, delta);
        let r = residual(&x, &self.braid)?;
        Ok(self.leading_components().iter().map(|&k| r[k - 1].clone()).collect())
    }
}
