use crate::error::{Error, Result};
use crate::trace::FixedTargetTable;

/// Moving-average width used when none is given.
pub const DEFAULT_GRADIENT_WINDOW: usize = 25;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrossingMode {
    FirstHit,
    Gradient,
}

/// Targets with a defined average, as `(target, avg_evals)`. Range filling
/// makes these a contiguous run of targets.
fn defined(table: &FixedTargetTable) -> Vec<(usize, f64)> {
    table
        .rows
        .iter()
        .filter_map(|r| r.avg_evals.map(|e| (r.target, e)))
        .collect()
}

/// Smoothed derivative of the average first-hit curve, in evaluations per
/// fitness unit.
///
/// Central differences on interior targets (one-sided at both ends), then a
/// centered moving average of width `window`, truncated at the ends.
pub fn ft_gradient(table: &FixedTargetTable, window: usize) -> Result<Vec<(usize, f64)>> {
    if window == 0 {
        return Err(Error::Domain("gradient window must be >= 1".into()));
    }
    let points = defined(table);
    if points.len() < 2 {
        return Err(Error::Insufficient(format!(
            "need at least two targets for a gradient, have {}",
            points.len()
        )));
    }
    if points.windows(2).any(|w| w[1].0 != w[0].0 + 1) {
        return Err(Error::Domain("target range is not contiguous".into()));
    }
    let m = points.len();
    let raw: Vec<f64> = (0..m)
        .map(|i| {
            let (lo, hi) = (i.saturating_sub(1), (i + 1).min(m - 1));
            (points[hi].1 - points[lo].1) / (hi - lo) as f64
        })
        .collect();

    let left = (window - 1) / 2;
    let right = window - 1 - left;
    let mut prefix = vec![0.0; m + 1];
    for (i, g) in raw.iter().enumerate() {
        prefix[i + 1] = prefix[i] + g;
    }
    Ok((0..m)
        .map(|i| {
            let lo = i.saturating_sub(left);
            let hi = (i + right).min(m - 1);
            let avg = (prefix[hi + 1] - prefix[lo]) / (hi + 1 - lo) as f64;
            (points[i].0, avg)
        })
        .collect())
}

/// Smallest target from which on `a` is never worse than `b`: in average
/// first-hit time (`FirstHit`) or in smoothed gradient (`Gradient`). Only
/// targets defined in both tables are compared. `None` if `a` is worse at
/// the last shared target.
pub fn ft_crossing(
    a: &FixedTargetTable,
    b: &FixedTargetTable,
    mode: CrossingMode,
    window: usize,
) -> Result<Option<usize>> {
    let (ca, cb) = match mode {
        CrossingMode::FirstHit => (defined(a), defined(b)),
        CrossingMode::Gradient => (ft_gradient(a, window)?, ft_gradient(b, window)?),
    };
    let lookup: std::collections::HashMap<usize, f64> = cb.into_iter().collect();
    let shared: Vec<(usize, f64, f64)> = ca
        .into_iter()
        .filter_map(|(v, x)| lookup.get(&v).map(|&y| (v, x, y)))
        .collect();
    let mut crossing = None;
    for &(v, x, y) in shared.iter().rev() {
        if x <= y {
            crossing = Some(v);
        } else {
            break;
        }
    }
    Ok(crossing)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::TargetRow;

    fn table(values: &[f64]) -> FixedTargetTable {
        FixedTargetTable {
            n: values.len() - 1,
            runs: 1,
            rows: values
                .iter()
                .enumerate()
                .map(|(v, &e)| TargetRow {
                    target: v,
                    avg_evals: Some(e),
                    hit_count: 1,
                    avg_lambda1: Some(1.0),
                })
                .collect(),
        }
    }

    #[test]
    fn linear_curve_has_constant_gradient() {
        let t = table(&(0..60).map(|v| 3.0 * v as f64).collect::<Vec<_>>());
        for window in [1, 4, 25] {
            for (_, g) in ft_gradient(&t, window).unwrap() {
                assert!((g - 3.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn constant_curve_has_zero_gradient() {
        let t = table(&[7.0; 40]);
        assert!(ft_gradient(&t, 25).unwrap().iter().all(|&(_, g)| g == 0.0));
    }

    #[test]
    fn gradient_needs_two_targets() {
        assert!(ft_gradient(&table(&[1.0]), 3).is_err());
        assert!(ft_gradient(&table(&[1.0, 2.0]), 0).is_err());
    }

    #[test]
    fn crossing_is_reflexive() {
        let t = table(&[1.0, 1.0, 4.0, 9.0, 20.0, 22.0]);
        for mode in [CrossingMode::FirstHit, CrossingMode::Gradient] {
            assert_eq!(ft_crossing(&t, &t, mode, 3).unwrap(), Some(0));
        }
    }

    #[test]
    fn crossing_none_when_always_above() {
        let a = table(&[2.0, 3.0, 5.0, 8.0]);
        let b = table(&[1.0, 2.0, 4.0, 7.0]);
        assert_eq!(
            ft_crossing(&a, &b, CrossingMode::FirstHit, 1).unwrap(),
            None
        );
    }

    #[test]
    fn crossing_finds_tail_advantage() {
        // a is slower early, faster late: a <= b from target 3 on.
        let a = table(&[1.0, 5.0, 9.0, 10.0, 11.0, 12.0]);
        let b = table(&[1.0, 2.0, 4.0, 10.0, 15.0, 30.0]);
        assert_eq!(
            ft_crossing(&a, &b, CrossingMode::FirstHit, 1).unwrap(),
            Some(3)
        );
        // Raw gradients: a = [4,4,2.5,1,1,1], b = [1,1.5,4,5.5,10,15].
        assert_eq!(
            ft_crossing(&a, &b, CrossingMode::Gradient, 1).unwrap(),
            Some(2)
        );
    }
}
