use rayon::prelude::*;

use crate::algorithms::{run_dyn, DynConfig, TraceOptions};
use crate::analysis::success_rate;
use crate::error::{config, Result};
use crate::experiment::DEFAULT_BUDGET;
use crate::rng::{derive_seed, RandomSource};

/// `count` equally spaced values from `min` to `max` inclusive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridAxis {
    pub count: usize,
    pub min: f64,
    pub max: f64,
}

impl GridAxis {
    pub fn new(count: usize, min: f64, max: f64) -> Self {
        Self { count, min, max }
    }

    pub fn values(&self) -> Vec<f64> {
        linspace(self.min, self.max, self.count)
    }
}

pub fn linspace(min: f64, max: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![min],
        _ => {
            let step = (max - min) / (count - 1) as f64;
            (0..count).map(|i| min + step * i as f64).collect()
        }
    }
}

/// Grid over the update strengths `A` (increase) and `b` (decrease).
#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub increase: GridAxis,
    pub decrease: GridAxis,
    pub runs: u64,
    pub n: usize,
    pub budget: u64,
    /// Upper bound applied by [`SweepCell::display_mean`] when plotting.
    pub display_cap: Option<f64>,
}

impl Default for SweepSpec {
    /// 50 × 50 values, `A ∈ [1.02, 2]`, `b ∈ [0.4, 0.988]`, 100 runs per
    /// cell at `n = 1000`.
    fn default() -> Self {
        Self {
            increase: GridAxis::new(50, 1.02, 2.0),
            decrease: GridAxis::new(50, 0.4, 0.988),
            runs: 100,
            n: 1000,
            budget: DEFAULT_BUDGET,
            display_cap: Some(7500.0),
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.increase.count == 0 || self.decrease.count == 0 {
            return Err(config("grid axes need at least one value"));
        }
        if self.runs == 0 {
            return Err(config("runs per cell must be >= 1"));
        }
        if self.budget == 0 {
            return Err(config("budget must be >= 1"));
        }
        if self.n < 2 {
            return Err(config(format!("n must be >= 2, got {}", self.n)));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepCell {
    pub increase: f64,
    pub decrease: f64,
    pub success_rate: f64,
    /// Mean evaluations of the successful runs; the budget if none succeeded.
    pub mean_successful: f64,
    pub success_count: u64,
    pub runs: u64,
}

impl SweepCell {
    pub fn display_mean(&self, cap: Option<f64>) -> f64 {
        cap.map_or(self.mean_successful, |c| self.mean_successful.min(c))
    }
}

/// Runs every `(A, b)` cell of the grid with the template's `α, β, γ`.
/// Run `i` of every cell uses `derive_seed(master_seed, i)`, so cells are
/// compared on common seeds. Cells come out with `A` as the outer loop.
pub fn grid_sweep(
    spec: &SweepSpec,
    template: &DynConfig,
    master_seed: u64,
) -> Result<Vec<SweepCell>> {
    spec.validate()?;
    let mut configs = Vec::new();
    for &a in &spec.increase.values() {
        for &b in &spec.decrease.values() {
            configs.push(DynConfig::new(
                template.alpha,
                template.beta,
                template.gamma,
                a,
                b,
            )?);
        }
    }
    let runs = spec.runs;
    let outcomes: Vec<(u64, bool)> = (0..configs.len() as u64 * runs)
        .into_par_iter()
        .map(|job| {
            let cfg = &configs[(job / runs) as usize];
            let mut rng = RandomSource::new(derive_seed(master_seed, job % runs));
            let r =
                run_dyn(cfg, spec.n, spec.budget, &mut rng, TraceOptions::NONE).expect("validated");
            (r.evaluations, r.success)
        })
        .collect();

    configs
        .iter()
        .zip(outcomes.chunks(runs as usize))
        .map(|(cfg, cell)| {
            let ok: Vec<u64> = cell.iter().filter(|(_, s)| *s).map(|(e, _)| *e).collect();
            let mean = if ok.is_empty() {
                spec.budget as f64
            } else {
                ok.iter().sum::<u64>() as f64 / ok.len() as f64
            };
            Ok(SweepCell {
                increase: cfg.increase,
                decrease: cfg.decrease,
                success_rate: success_rate(cfg.increase, cfg.decrease)?,
                mean_successful: mean,
                success_count: ok.len() as u64,
                runs,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::Algorithm;
    use crate::experiment::{mean_successful, run_batch};

    #[test]
    fn linspace_endpoints() {
        let v = linspace(1.02, 2.0, 50);
        assert_eq!(v.len(), 50);
        assert!((v[1] - 1.04).abs() < 1e-12);
        assert!((v[49] - 2.0).abs() < 1e-12);
        let b = linspace(0.4, 0.988, 50);
        assert!((b[1] - 0.412).abs() < 1e-12);
        assert_eq!(linspace(3.0, 9.0, 1), vec![3.0]);
    }

    #[test]
    fn single_cell_matches_direct_runs() {
        let cfg = DynConfig::new(1.0, 1.0, 1.0, 1.3, 0.7).unwrap();
        let spec = SweepSpec {
            increase: GridAxis::new(1, 1.3, 1.3),
            decrease: GridAxis::new(1, 0.7, 0.7),
            runs: 12,
            n: 120,
            budget: 150_000,
            display_cap: None,
        };
        let cells = grid_sweep(&spec, &DynConfig::default_rule(), 5).unwrap();
        assert_eq!(cells.len(), 1);
        let direct = run_batch(
            &Algorithm::Dyn(cfg),
            120,
            150_000,
            12,
            5,
            TraceOptions::NONE,
        )
        .unwrap();
        assert_eq!(Some(cells[0].mean_successful), mean_successful(&direct));
        assert_eq!(cells[0].success_count, 12);
    }

    #[test]
    fn failing_cells_report_the_budget() {
        let spec = SweepSpec {
            increase: GridAxis::new(2, 1.5, 2.0),
            decrease: GridAxis::new(3, 0.4, 0.6),
            runs: 3,
            n: 200,
            budget: 10,
            display_cap: None,
        };
        let cells = grid_sweep(&spec, &DynConfig::default_rule(), 1).unwrap();
        assert_eq!(cells.len(), 6);
        for c in &cells {
            assert_eq!(c.success_count, 0);
            assert_eq!(c.mean_successful, 10.0);
            assert_eq!(c.display_mean(Some(5.0)), 5.0);
        }
        assert_eq!((cells[3].increase, cells[3].decrease), (2.0, 0.4));
    }

    #[test]
    fn invalid_specs() {
        let spec = SweepSpec {
            runs: 0,
            ..SweepSpec::default()
        };
        assert!(grid_sweep(&spec, &DynConfig::default_rule(), 0).is_err());
        let spec = SweepSpec {
            increase: GridAxis::new(2, 0.9, 1.1),
            ..SweepSpec::default()
        };
        assert!(grid_sweep(&spec, &DynConfig::default_rule(), 0).is_err());
    }
}
