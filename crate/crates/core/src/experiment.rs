//! Batches of independent seeded runs.

use rayon::prelude::*;

use crate::algorithms::{Algorithm, RunResult, TraceOptions};
use crate::error::Result;
use crate::rng::{derive_seed, RandomSource};

/// Budget used unless stated otherwise.
pub const DEFAULT_BUDGET: u64 = 150_000;

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome {
    pub index: u64,
    pub seed: u64,
    pub result: RunResult,
}

/// Runs `runs` independent copies of `algo`; run `i` uses
/// `derive_seed(master_seed, i)`. Runs execute on the current rayon pool;
/// output order is by run index.
pub fn run_batch(
    algo: &Algorithm,
    n: usize,
    budget: u64,
    runs: u64,
    master_seed: u64,
    opts: TraceOptions,
) -> Result<Vec<RunOutcome>> {
    algo.validate(n)?;
    (0..runs)
        .into_par_iter()
        .map(|index| {
            run_seeded(algo, n, budget, derive_seed(master_seed, index), opts).map(|result| {
                RunOutcome {
                    index,
                    seed: derive_seed(master_seed, index),
                    result,
                }
            })
        })
        .collect()
}

/// One run with an explicit seed.
pub fn run_seeded(
    algo: &Algorithm,
    n: usize,
    budget: u64,
    seed: u64,
    opts: TraceOptions,
) -> Result<RunResult> {
    algo.run(n, budget, &mut RandomSource::new(seed), opts)
}

/// Evaluation counts of a batch as floats.
pub fn evaluations(outcomes: &[RunOutcome]) -> Vec<f64> {
    outcomes
        .iter()
        .map(|o| o.result.evaluations as f64)
        .collect()
}

/// Mean evaluations over successful runs, `None` if there were none.
pub fn mean_successful(outcomes: &[RunOutcome]) -> Option<f64> {
    let ok: Vec<f64> = outcomes
        .iter()
        .filter(|o| o.result.success)
        .map(|o| o.result.evaluations as f64)
        .collect();
    (!ok.is_empty()).then(|| ok.iter().sum::<f64>() / ok.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::DynConfig;

    #[test]
    fn batch_is_deterministic_and_ordered() {
        let algo = Algorithm::Dyn(DynConfig::default_rule());
        let a = run_batch(&algo, 100, DEFAULT_BUDGET, 16, 9, TraceOptions::NONE).unwrap();
        let b = run_batch(&algo, 100, DEFAULT_BUDGET, 16, 9, TraceOptions::NONE).unwrap();
        assert_eq!(a, b);
        for (i, o) in a.iter().enumerate() {
            assert_eq!(o.index, i as u64);
            assert_eq!(o.seed, derive_seed(9, i as u64));
            assert_eq!(
                o.result,
                run_seeded(&algo, 100, DEFAULT_BUDGET, o.seed, TraceOptions::NONE).unwrap()
            );
        }
    }

    #[test]
    fn batch_rejects_invalid_dimension() {
        assert!(run_batch(&Algorithm::Rls, 1, 10, 1, 0, TraceOptions::NONE).is_err());
    }
}
