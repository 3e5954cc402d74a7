use serde::{Deserialize, Serialize};

use super::scan::ScanRecord;
use crate::error::{Error, Result};

/// Differences at or below this count as ties.
pub const MONOTONE_TIE_TOL: f64 = 1e-10;

/// How a pair of quantities is compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MonotoneMode {
    /// Sort the records by `x` and require `y` to be ordered along it, i.e. `y`
    /// is a monotone function of `x` across the whole grid.
    ByValue,
    /// Walk the grid in parameter order and require every step to move `x`
    /// and `y` in the same (or every step in the opposite) direction.
    AlongParameter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// A pair of neighbouring records that breaks the ordering.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub first: usize,
    pub second: usize,
    pub dx: f64,
    pub dy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityVerdict {
    pub pair: (String, String),
    pub mode: MonotoneMode,
    pub rank_correlation: f64,
    pub direction: Direction,
    pub monotone: bool,
    /// Indices refer to the input slice.
    pub violations: Vec<Violation>,
}

fn sign(v: f64, tol: f64) -> i8 {
    if v > tol {
        1
    } else if v < -tol {
        -1
    } else {
        0
    }
}

/// Average ranks, with values within `tol` of their sorted neighbour sharing
/// a rank.
fn ranks(values: &[f64], tol: f64) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut out = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] - values[order[end - 1]] <= tol {
            end += 1;
        }
        let avg = (start + end - 1) as f64 / 2.0;
        for &i in &order[start..end] {
            out[i] = avg;
        }
        start = end;
    }
    out
}

/// Spearman rank correlation; zero when either side is constant.
pub fn spearman(x: &[f64], y: &[f64], tol: f64) -> f64 {
    let (rx, ry) = (ranks(x, tol), ranks(y, tol));
    let n = rx.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    if sxx == 0.0 || syy == 0.0 {
        0.0
    } else {
        (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0)
    }
}

/// Checks whether `y` is monotonically related to `x` over the records.
pub fn check_monotonic(records: &[ScanRecord], x: &str, y: &str, mode: MonotoneMode) -> Result<MonotonicityVerdict> {
    if records.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "monotonicity needs at least 3 records, got {}",
            records.len()
        )));
    }
    let xs: Vec<f64> = records.iter().map(|r| r.get(x)).collect::<Result<_>>()?;
    let ys: Vec<f64> = records.iter().map(|r| r.get(y)).collect::<Result<_>>()?;
    let (lo, hi) = xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
    if hi - lo <= MONOTONE_TIE_TOL {
        return Err(Error::InvalidInput(format!("{x} is constant over the records")));
    }
    let tol = MONOTONE_TIE_TOL;
    let rank_correlation = spearman(&xs, &ys, tol);
    let direction = if rank_correlation < 0.0 {
        Direction::Decreasing
    } else {
        Direction::Increasing
    };
    let want: i8 = if direction == Direction::Increasing { 1 } else { -1 };

    let order: Vec<usize> = match mode {
        MonotoneMode::ByValue => {
            let mut idx: Vec<usize> = (0..records.len()).collect();
            idx.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
            idx
        }
        MonotoneMode::AlongParameter => {
            let mut idx: Vec<usize> = (0..records.len()).collect();
            idx.sort_by(|&a, &b| records[a].param.total_cmp(&records[b].param));
            idx
        }
    };

    let mut violations = Vec::new();
    for w in order.windows(2) {
        let (i, j) = (w[0], w[1]);
        let (dx, dy) = (xs[j] - xs[i], ys[j] - ys[i]);
        let (sx, sy) = (sign(dx, tol), sign(dy, tol));
        let broken = match mode {
            // Sorted by x, so sx ≥ 0. A tie in x with a strict move in y is
            // not a function; otherwise y must step in the chosen direction.
            MonotoneMode::ByValue => (sx == 0 && sy != 0) || (sx > 0 && sy == -want),
            MonotoneMode::AlongParameter => sx * sy == -want || (sx == 0) != (sy == 0),
        };
        if broken {
            violations.push(Violation { first: i, second: j, dx, dy });
        }
    }

    Ok(MonotonicityVerdict {
        pair: (x.to_owned(), y.to_owned()),
        mode,
        rank_correlation,
        direction,
        monotone: violations.is_empty(),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn records(pairs: &[(f64, f64)]) -> Vec<ScanRecord> {
        pairs
            .iter()
            .enumerate()
            .map(|(k, &(x, y))| {
                let mut r = ScanRecord::new("t", k as f64);
                r.insert("x", x).unwrap();
                r.insert("y", y).unwrap();
                r
            })
            .collect()
    }

    #[test]
    fn increasing_pair() {
        let recs = records(&[(0.0, 1.0), (1.0, 2.0), (2.0, 5.0), (3.0, 9.0)]);
        for mode in [MonotoneMode::ByValue, MonotoneMode::AlongParameter] {
            let v = check_monotonic(&recs, "x", "y", mode).unwrap();
            assert!(v.monotone);
            assert_eq!(v.direction, Direction::Increasing);
            assert!((v.rank_correlation - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn decreasing_pair() {
        let recs = records(&[(0.0, 3.0), (1.0, 2.0), (2.0, 1.0)]);
        let v = check_monotonic(&recs, "x", "y", MonotoneMode::ByValue).unwrap();
        assert!(v.monotone);
        assert_eq!(v.direction, Direction::Decreasing);
    }

    #[test]
    fn hump_is_not_monotone() {
        let recs = records(&[(0.0, 0.0), (1.0, 1.0), (2.0, 2.0), (3.0, 1.0), (4.0, 0.0)]);
        let v = check_monotonic(&recs, "x", "y", MonotoneMode::ByValue).unwrap();
        assert!(!v.monotone);
        assert!(!v.violations.is_empty());
    }

    #[test]
    fn shared_peak_passes_only_along_parameter() {
        // Both rise then fall together, so y is not a function of x.
        let recs = records(&[(0.0, 0.0), (1.0, 2.0), (2.0, 3.0), (1.5, 1.0), (0.5, 0.5)]);
        assert!(check_monotonic(&recs, "x", "y", MonotoneMode::AlongParameter).unwrap().monotone);
        assert!(!check_monotonic(&recs, "x", "y", MonotoneMode::ByValue).unwrap().monotone);
    }

    #[test]
    fn errors() {
        let recs = records(&[(1.0, 0.0), (1.0, 1.0), (1.0, 2.0)]);
        assert!(check_monotonic(&recs, "x", "y", MonotoneMode::ByValue).is_err());
        assert!(check_monotonic(&recs[..2], "x", "y", MonotoneMode::ByValue).is_err());
        let recs = records(&[(0.0, 0.0), (1.0, 1.0), (2.0, 2.0)]);
        assert!(check_monotonic(&recs, "x", "nope", MonotoneMode::ByValue).is_err());
    }

    #[test]
    fn spearman_ties() {
        let x = [1.0, 2.0, 2.0, 3.0];
        let y = [1.0, 2.0, 2.0, 3.0];
        assert!((spearman(&x, &y, 1e-10) - 1.0).abs() < 1e-15);
        assert_eq!(spearman(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0], 1e-10), 0.0);
    }
}
