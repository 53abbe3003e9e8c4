use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Letter {
    /// Generator index, 1..n-1.
    pub i: usize,
    /// +1 or -1.
    pub eps: i8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BraidWord {
    pub n: usize,
    pub letters: Vec<Letter>,
}

impl BraidWord {
    pub fn new(n: usize, letters: Vec<Letter>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidStrandCount(n));
        }
        if let Some(p) = letters.iter().position(|l| l.i == 0 || l.i >= n || l.eps.abs() != 1) {
            return Err(Error::Parse {
                position: p + 1,
                message: format!("generator {} outside 1..{}", letters[p].i, n - 1),
            });
        }
        Ok(BraidWord { n, letters })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Number of variables of the associated seed.
    pub fn arity(&self) -> usize {
        3 * self.n + 1
    }

    /// Underlying permutation of strands (0-based images).
    pub fn permutation(&self) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..self.n).collect();
        for l in &self.letters {
            perm.swap(l.i - 1, l.i);
        }
        perm
    }

    pub fn closure_components(&self) -> usize {
        let perm = self.permutation();
        let mut seen = vec![false; self.n];
        let mut cycles = 0;
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            cycles += 1;
            let mut c = s;
            while !seen[c] {
                seen[c] = true;
                c = perm[c];
            }
        }
        cycles
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let toks: Vec<String> = self.letters.iter().map(|l| (l.eps as i64 * l.i as i64).to_string()).collect();
        write!(f, "n={}; {}", self.n, toks.join(" "))
    }
}

/// Parse `"[n=<int>;] t1 t2 ..."` where each token is a nonzero signed
/// generator index. Token positions in errors are 1-based.
pub fn parse_braid(text: &str) -> Result<BraidWord> {
    parse_braid_with(text, None)
}

/// As [`parse_braid`], with an explicit strand count overriding both the
/// default and any `n=` prefix.
pub fn parse_braid_with(text: &str, strands: Option<usize>) -> Result<BraidWord> {
    parse_braid_opts(text, strands, true)
}

/// Parser entry point; `require_knot = false` admits link closures (and the
/// empty word), which trajectory inspection tolerates.
pub fn parse_braid_opts(text: &str, strands: Option<usize>, require_knot: bool) -> Result<BraidWord> {
    let (prefix_n, body) = match text.split_once(';') {
        Some((head, rest)) => {
            let head = head.trim();
            let v = head.strip_prefix("n=").ok_or_else(|| Error::Parse {
                position: 0,
                message: format!("expected n=<int> before ';', found {head:?}"),
            })?;
            let n = v.trim().parse::<usize>().map_err(|_| Error::Parse {
                position: 0,
                message: format!("bad strand count {v:?}"),
            })?;
            (Some(n), rest)
        }
        None => (None, text),
    };
    let mut raw = Vec::new();
    for (pos, tok) in body.split_whitespace().enumerate() {
        let t: i64 = tok.parse().map_err(|_| Error::Parse {
            position: pos + 1,
            message: format!("not an integer: {tok:?}"),
        })?;
        if t == 0 {
            return Err(Error::Parse { position: pos + 1, message: "zero is not a generator".into() });
        }
        raw.push(t);
    }
    let max = raw.iter().map(|t| t.unsigned_abs() as usize).max().unwrap_or(1);
    let n = strands.or(prefix_n).unwrap_or(max + 1);
    if n < 2 {
        return Err(Error::InvalidStrandCount(n));
    }
    if let Some(p) = raw.iter().position(|t| t.unsigned_abs() as usize >= n) {
        return Err(Error::Parse {
            position: p + 1,
            message: format!("|{}| >= n = {}", raw[p], n),
        });
    }
    let letters = raw
        .iter()
        .map(|&t| Letter { i: t.unsigned_abs() as usize, eps: if t > 0 { 1 } else { -1 } })
        .collect();
    let w = BraidWord::new(n, letters)?;
    let c = w.closure_components();
    if require_knot && c > 1 {
        return Err(Error::MultiComponent { components: c });
    }
    Ok(w)
}
