use rand::Rng;

use super::{check_run_args, Flow, Ledger, Parent, RunResult, TraceOptions};
use crate::error::Result;
use crate::genome::Fitness;

/// Randomized local search: flip one uniform bit, keep the result if it is
/// not worse.
pub fn run_rls<R: Rng + ?Sized>(
    n: usize,
    budget: u64,
    rng: &mut R,
    opts: TraceOptions,
) -> Result<RunResult> {
    check_run_args(n, budget)?;
    let mut ledger = Ledger::new(n, budget, opts);
    let (mut parent, flow) = Parent::initial(n, rng, &mut ledger, 1);
    if flow == Flow::Continue {
        rls_phase(&mut parent, n, &mut ledger, rng, n);
    }
    Ok(ledger.finish())
}

/// Runs RLS steps until the parent reaches `until` or the ledger stops.
/// Returns `false` if the run is over.
pub(crate) fn rls_phase<R: Rng + ?Sized>(
    parent: &mut Parent,
    n: usize,
    ledger: &mut Ledger,
    rng: &mut R,
    until: Fitness,
) -> bool {
    while parent.fx < until {
        let i = rng.random_range(0..n);
        let f = parent.fitness_after(&[i]);
        let flow = ledger.charge(f, 1);
        if f >= parent.fx {
            parent.apply(&[i], f);
        }
        ledger.iteration_done(parent.fx, 1.0, 1, 0);
        if flow == Flow::Stop {
            return false;
        }
    }
    true
}
