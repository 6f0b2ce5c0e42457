//! Fixed-target instrumentation: first hitting times per OneMax target and
//! the `λ1` in effect when each target was first reached.

use crate::error::{Error, Result};
use crate::genome::Fitness;

/// Per-run first-hit record over the dense target range `0..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceSink {
    first_hit: Vec<Option<u64>>,
    lambda_at_hit: Vec<Option<usize>>,
    reached: Option<Fitness>,
}

impl TraceSink {
    pub fn new(n: usize) -> Self {
        Self {
            first_hit: vec![None; n + 1],
            lambda_at_hit: vec![None; n + 1],
            reached: None,
        }
    }

    pub fn n(&self) -> usize {
        self.first_hit.len() - 1
    }

    /// Records that quality `fitness` was first sampled at `evaluations`.
    /// Every target in `(previous best, fitness]` gets the same entry;
    /// already recorded targets are left alone.
    pub fn record_hit(&mut self, fitness: Fitness, evaluations: u64, lambda1: usize) {
        let fitness = fitness.min(self.n());
        let start = match self.reached {
            Some(prev) if fitness <= prev => return,
            Some(prev) => prev + 1,
            None => 0,
        };
        for v in start..=fitness {
            self.first_hit[v] = Some(evaluations);
            self.lambda_at_hit[v] = Some(lambda1);
        }
        self.reached = Some(fitness);
    }

    pub fn first_hit(&self, target: Fitness) -> Option<u64> {
        self.first_hit.get(target).copied().flatten()
    }

    pub fn lambda_at_hit(&self, target: Fitness) -> Option<usize> {
        self.lambda_at_hit.get(target).copied().flatten()
    }

    /// Highest target reached so far.
    pub fn reached(&self) -> Option<Fitness> {
        self.reached
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TargetRow {
    pub target: Fitness,
    /// Mean first-hit evaluations over runs that hit the target; `None` if
    /// no run did.
    pub avg_evals: Option<f64>,
    pub hit_count: usize,
    pub avg_lambda1: Option<f64>,
}

/// Per-target averages over a set of runs.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedTargetTable {
    pub n: usize,
    pub runs: usize,
    pub rows: Vec<TargetRow>,
}

impl FixedTargetTable {
    pub fn row(&self, target: Fitness) -> Option<&TargetRow> {
        self.rows.get(target)
    }

    pub fn avg_evals(&self, target: Fitness) -> Option<f64> {
        self.row(target).and_then(|r| r.avg_evals)
    }

    /// Targets reached by every run.
    pub fn fully_hit(&self) -> impl Iterator<Item = &TargetRow> {
        self.rows.iter().filter(move |r| r.hit_count == self.runs)
    }
}

pub fn aggregate_fixed_target(traces: &[TraceSink], n: usize) -> Result<FixedTargetTable> {
    if traces.is_empty() {
        return Err(Error::Insufficient("no traces to aggregate".into()));
    }
    if let Some(t) = traces.iter().find(|t| t.n() != n) {
        return Err(Error::Dimension {
            left: t.n(),
            right: n,
        });
    }
    let rows = (0..=n)
        .map(|v| {
            let mut hits = 0usize;
            let mut evals = 0.0;
            let mut lambda = 0.0;
            for t in traces {
                if let (Some(e), Some(l)) = (t.first_hit(v), t.lambda_at_hit(v)) {
                    hits += 1;
                    evals += e as f64;
                    lambda += l as f64;
                }
            }
            let h = hits as f64;
            TargetRow {
                target: v,
                avg_evals: (hits > 0).then(|| evals / h),
                hit_count: hits,
                avg_lambda1: (hits > 0).then(|| lambda / h),
            }
        })
        .collect();
    Ok(FixedTargetTable {
        n,
        runs: traces.len(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_fill_and_first_hit_only() {
        let mut t = TraceSink::new(10);
        t.record_hit(4, 1, 1);
        for v in 0..=4 {
            assert_eq!(t.first_hit(v), Some(1));
        }
        assert_eq!(t.first_hit(5), None);

        t.record_hit(7, 120, 3);
        for v in 5..=7 {
            assert_eq!(t.first_hit(v), Some(120));
            assert_eq!(t.lambda_at_hit(v), Some(3));
        }
        assert_eq!(t.first_hit(4), Some(1));

        let before = t.clone();
        t.record_hit(7, 500, 9);
        t.record_hit(6, 600, 9);
        assert_eq!(t, before);
        assert_eq!(t.first_hit(8), None);
    }

    #[test]
    fn single_trace_table_equals_trace() {
        let mut t = TraceSink::new(6);
        t.record_hit(2, 1, 1);
        t.record_hit(5, 9, 2);
        let table = aggregate_fixed_target(std::slice::from_ref(&t), 6).unwrap();
        for v in 0..=6 {
            assert_eq!(table.avg_evals(v), t.first_hit(v).map(|e| e as f64));
            assert_eq!(
                table.rows[v].avg_lambda1,
                t.lambda_at_hit(v).map(|l| l as f64)
            );
        }
        assert_eq!(table.rows[6].hit_count, 0);
    }

    #[test]
    fn two_traces_average() {
        let mut a = TraceSink::new(3);
        a.record_hit(3, 10, 1);
        let mut b = TraceSink::new(3);
        b.record_hit(1, 1, 1);
        b.record_hit(3, 20, 5);
        let table = aggregate_fixed_target(&[a, b], 3).unwrap();
        assert_eq!(table.avg_evals(3), Some(15.0));
        assert_eq!(table.rows[3].hit_count, 2);
        assert_eq!(table.rows[3].avg_lambda1, Some(3.0));
        assert_eq!(table.avg_evals(1), Some(5.5));
    }

    #[test]
    fn aggregate_errors() {
        assert!(aggregate_fixed_target(&[], 3).is_err());
        assert!(aggregate_fixed_target(&[TraceSink::new(4)], 3).is_err());
    }
}
