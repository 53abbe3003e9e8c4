//! Richardson extrapolation of a geometric δ-schedule to δ = 0.

use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct Extrapolation {
    pub value: Complex64,
    /// |last extrapolant − previous extrapolant|.
    pub error: f64,
    /// Detected leading order (0 for a constant sequence).
    pub order: u32,
    /// Whether the error estimate shrank on the last step, or already sits
    /// at the evaluation noise floor (`NOISE_FLOOR`·scale).
    pub converging: bool,
}

const MAX_COLUMNS: usize = 4;
/// Relative size below which successive extrapolants are indistinguishable
/// from sample noise.
const NOISE_FLOOR: f64 = 1e-9;

/// Leading power p in `T(δ) = T0 + c δ^p + …`, from successive difference
/// ratios `|d_k| / |d_{k+1}| ≈ r^{-p}`.
pub fn detect_order(values: &[Complex64], ratio: f64) -> Option<u32> {
    let d: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    let mut orders: Vec<f64> = d
        .windows(2)
        .filter(|w| w[0] > 0.0 && w[1] > 0.0)
        .map(|w| (w[0] / w[1]).ln() / (1.0 / ratio).ln())
        .collect();
    if orders.is_empty() {
        return None;
    }
    // The tail is closest to asymptotic; use the median of the last three.
    let tail = orders.len().saturating_sub(3);
    let mut last: Vec<f64> = orders.split_off(tail);
    last.sort_by(|a, b| a.total_cmp(b));
    let p = last[last.len() / 2].round();
    Some(p.clamp(1.0, 6.0) as u32)
}

pub fn richardson(values: &[Complex64], ratio: f64) -> Option<Extrapolation> {
    let last = *values.last()?;
    let scale = values.iter().map(|v| v.norm()).fold(1.0, f64::max);
    if values.windows(2).all(|w| (w[1] - w[0]).norm() <= 1e-14 * scale) {
        return Some(Extrapolation { value: last, error: 0.0, order: 0, converging: true });
    }
    if values.len() < 3 {
        return Some(Extrapolation { value: last, error: f64::INFINITY, order: 0, converging: false });
    }
    let p = detect_order(values, ratio).unwrap_or(1);
    let mut rows: Vec<Vec<Complex64>> = Vec::with_capacity(values.len());
    for (k, &t) in values.iter().enumerate() {
        let mut row = vec![t];
        for j in 1..=k.min(MAX_COLUMNS) {
            let f = ratio.powi(-((p as i32) + j as i32 - 1));
            let prev = rows[k - 1][j - 1];
            let cur = row[j - 1];
            row.push(cur + (cur - prev) / (f - 1.0));
        }
        rows.push(row);
    }
    let ext: Vec<Complex64> = rows.iter().map(|r| *r.last().expect("nonempty")).collect();
    let n = ext.len();
    let err = (ext[n - 1] - ext[n - 2]).norm();
    let prev_err = (ext[n - 2] - ext[n - 3]).norm();
    let converging = err <= prev_err || err <= NOISE_FLOOR * scale;
    Some(Extrapolation { value: ext[n - 1], error: err, order: p, converging })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_is_exact() {
        let c = Complex64::new(-8.224670334241132, 0.0);
        let e = richardson(&[c; 6], 0.5).unwrap();
        assert_eq!(e.value, c);
        assert_eq!(e.error, 0.0);
    }

    #[test]
    fn recovers_polynomial_limit() {
        let limit = Complex64::new(0.3, 2.0);
        for p in [1u32, 2] {
            let vals: Vec<Complex64> = (0..10)
                .map(|k| {
                    let d = 1e-2 * 0.5f64.powi(k);
                    limit + Complex64::new(3.0, -1.0) * d.powi(p as i32) + 5.0 * d.powi(p as i32 + 1)
                })
                .collect();
            let e = richardson(&vals, 0.5).unwrap();
            assert_eq!(e.order, p);
            assert!((e.value - limit).norm() < 1e-13, "{p}: {:?}", e);
            assert!(e.converging);
        }
    }

    #[test]
    fn empty_and_short() {
        assert!(richardson(&[], 0.5).is_none());
        let one = richardson(&[Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)], 0.5).unwrap();
        assert!(!one.converging);
    }
}
